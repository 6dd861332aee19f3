"""Exact and numerical checks of Frobenius and second-adjoint adjunctions
for operator modules, Schwartz-level models and the even part of SL(2, R)."""

__version__ = "0.1.0"
