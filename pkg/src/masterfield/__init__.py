"""Master field of planar Yang-Mills theory and Brauer-algebra moment systems."""

__version__ = "0.1.0"
