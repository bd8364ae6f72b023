"""smoothrace: a desk-scale autonomous-racing RL lab with action-smoothness
regularization, an adaptive regularization weight, and FFT-based smoothness
metrics on top of a 2D image-observation racing simulator."""

__version__ = "0.1.0"
