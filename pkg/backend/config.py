"""
Configuration settings for the UAV fusion tracker service
"""
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings.

    Only service plumbing lives here. Parameters that define a run
    (FusionConfig, SensorScenario) are loaded from config files and are
    never taken from the environment.
    """

    model_config = SettingsConfigDict(env_file=".env", env_prefix="TRACKER_", extra="ignore")

    # Application
    APP_NAME: str = "UAV Radar/RF Fusion Tracker"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "INFO"

    # Paths
    BASE_DIR: Path = Path(__file__).parent.parent
    CONFIG_DIR: Path = BASE_DIR / "configs"
    OUTPUT_DIR: Path = BASE_DIR / "runs"

    # Evaluation
    DEFAULT_COVERAGE_BIN_S: float = 4.0

    # Monte Carlo
    MONTE_CARLO_WORKERS: int = 4

    @property
    def default_scenario_path(self) -> Path:
        return self.CONFIG_DIR / "default_scenario.json"

    @property
    def default_fusion_config_path(self) -> Path:
        return self.CONFIG_DIR / "default_fusion.json"


settings = Settings()
