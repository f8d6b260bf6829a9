"""Measurement-device-independent QKD with uncharacterized qubit sources."""

__version__ = "0.1.0"
