"""Generative adversarial neural operators on the periodic unit square."""

__version__ = "0.1.0"
