"""Exact motivic cell inventories for flag varieties, spherical varieties,
subspace-arrangement complements and two-orbit completions."""

__version__ = "0.1.0"
