"""Extract platform, device, app version and system version from user-support tweets."""

__version__ = "0.1.0"
