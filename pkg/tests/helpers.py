"""
Small constructors used across tests
"""
from backend.models.geometry import EnuPosition
from backend.models.measurement import GroundTruthSample, Measurement, Modality


def radar(t: float, x: float, y: float, z: float, track_id: int = 1) -> Measurement:
    return Measurement(timestamp=t, modality=Modality.RADAR_3D, position=(x, y, z), track_id=track_id)


def rf(t: float, x: float, y: float) -> Measurement:
    return Measurement(timestamp=t, modality=Modality.RF_2D, position=(x, y))


def truth(t: float, x: float, y: float, z: float) -> GroundTruthSample:
    return GroundTruthSample(timestamp=t, position=EnuPosition(east_m=x, north_m=y, up_m=z))
