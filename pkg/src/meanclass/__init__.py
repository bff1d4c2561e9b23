"""Numerical mean-class calculus for almost-periodic and ergodic signals."""

__version__ = "0.1.0"
