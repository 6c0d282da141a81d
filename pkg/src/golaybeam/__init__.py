"""Broad-beam excitation design for dual-polarized arrays via complementary pairs."""

__version__ = "0.1.0"
