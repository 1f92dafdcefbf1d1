"""Exact finite laboratory for commutativity of the natural distribution monad."""
__version__ = "0.1.0"
