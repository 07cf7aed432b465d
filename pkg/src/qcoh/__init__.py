"""Gamma-integral structures, mirror series and tt* data of toric orbifolds."""

__version__ = "0.1.0"
