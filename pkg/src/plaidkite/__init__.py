"""Exact-arithmetic toolkit for the plaid model and the arithmetic
graph of outer billiards on kites at even rational parameters."""

__version__ = "0.1.0"

from .params import EvenRationalParam, make_param, even_rationals

__all__ = ["EvenRationalParam", "make_param", "even_rationals",
           "__version__"]
