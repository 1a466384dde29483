"""Exact arithmetic for the prime-discriminant Weil representation dictionary
and Borcherds products on Hilbert modular surfaces."""

from .kernels import BACKEND

__version__ = "0.1.0"
