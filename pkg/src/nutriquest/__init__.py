"""nutriquest: gamified geospatial nutrition surveillance at desk scale."""

__version__ = "0.1.0"
