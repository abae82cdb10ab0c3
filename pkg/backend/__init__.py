"""UAV radar/RF fusion tracker"""
__version__ = "1.0.0"
