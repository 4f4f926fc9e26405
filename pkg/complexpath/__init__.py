"""Time integration along complex-valued step paths."""

__version__ = "0.1.0"
