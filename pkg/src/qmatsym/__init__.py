"""Exact construction of the quantum matrix space, its differential calculus
and the U_q sl_{m+n} module-algebra action hidden in it."""

from .scalars import ONE, Q, ZERO, PoleError, QRat, qnum, specialize

__all__ = ["ONE", "Q", "ZERO", "PoleError", "QRat", "qnum", "specialize"]
