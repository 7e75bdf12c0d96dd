"""redukt: parse, check, apply, translate, and refute cookbook reductions."""

__version__ = "0.1.0"
