"""Exact arithmetic in the rational function field Q(q).

Elements are stored as a reduced fraction of integer polynomials in ``q``.
A polynomial is a tuple of Python ints, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.

Almost every constant the rest of the package meets is a Laurent
polynomial, i.e. the denominator is a power of ``q``.  Those values take a
fast path that never calls the polynomial gcd.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd


class PoleError(ZeroDivisionError):
    """Raised when a value is evaluated at a root of its denominator."""


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

def _trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _psub(a, b):
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pshift(a, k):
    """Multiply by q**k (k >= 0)."""
    if not a or not k:
        return a
    return (0,) * k + a


def _content(a):
    g = 0
    for c in a:
        g = _igcd(g, c)
        if g == 1:
            break
    return g


def _pdiv_int(a, c):
    return tuple(x // c for x in a)


def _prem(a, b):
    """Pseudo-remainder of a by b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [lb * x for x in a]
        for i, y in enumerate(b):
            a[i + shift] -= la * y
        a = list(_trim(a))
    return tuple(a)


def _primitive(a):
    if not a:
        return a
    c = _content(a)
    if a[-1] < 0:
        c = -c
    return a if c == 1 else _pdiv_int(a, c)


def pgcd(a, b):
    """Gcd of two integer polynomials, positive leading coefficient."""
    if not a:
        return _primitive(b) if b else ()
    if not b:
        return _primitive(a)
    c = _igcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return tuple(c * x for x in a)


def pexquo(a, b):
    """Exact quotient a / b in Z[q]; raises if b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(b) == 1:
        c = b[0]
        if any(x % c for x in a):
            raise ArithmeticError("inexact polynomial division")
        return tuple(x // c for x in a)
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    quo = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        la = a[-1]
        if la % lb:
            raise ArithmeticError("inexact polynomial division")
        f = la // lb
        shift = len(a) - 1 - db
        quo[shift] = f
        for i, y in enumerate(b):
            a[i + shift] -= f * y
        a = list(_trim(a))
    if a:
        raise ArithmeticError("inexact polynomial division")
    return _trim(quo)


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _low_zeros(a):
    k = 0
    for c in a:
        if c:
            return k
        k += 1
    return k


def _qpow_of(den):
    """Return k if den == q**k, else -1."""
    if den[-1] != 1:
        return -1
    for c in den[:-1]:
        if c:
            return -1
    return len(den) - 1


# ---------------------------------------------------------------------------
# QRat
# ---------------------------------------------------------------------------

_ONE = (1,)


class QRat:
    """An element of Q(q) in canonical form ``num/den``.

    ``den`` has positive leading coefficient and ``gcd(num, den) == 1`` in
    Z[q]; zero is ``0/1``.  Equality is therefore tuple equality.
    """

    __slots__ = ("num", "den", "_k")

    def __init__(self, num=(), den=_ONE):
        if isinstance(num, int):
            num = (num,)
        if isinstance(den, int):
            den = (den,)
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("QRat with zero denominator")
        self._set(*_canon(num, den))

    def _set(self, num, den):
        self.num = num
        self.den = den
        self._k = _qpow_of(den)

    @classmethod
    def _raw(cls, num, den, k):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._k = k
        return obj

    @classmethod
    def _laurent(cls, num, k):
        """num / q**k with k >= 0, stripping common powers of q."""
        if not num:
            return ZERO
        if k:
            z = _low_zeros(num)
            if z:
                s = min(z, k)
                num = num[s:]
                k -= s
        return cls._raw(num, (0,) * k + _ONE, k)

    # constructors --------------------------------------------------------

    @classmethod
    def q(cls):
        return cls._raw((0, 1), _ONE, 0)

    @classmethod
    def from_int(cls, n):
        return cls._raw((n,) if n else (), _ONE, 0)

    @classmethod
    def from_fraction(cls, f):
        f = Fraction(f)
        return cls((f.numerator,), (f.denominator,))

    @classmethod
    def qpow(cls, k):
        """q**k for any integer k."""
        if k >= 0:
            return cls._raw((0,) * k + _ONE, _ONE, 0)
        return cls._raw(_ONE, (0,) * (-k) + _ONE, -k)

    @classmethod
    def laurent(cls, coeffs):
        """Build from a mapping {exponent: int coefficient}."""
        coeffs = {e: c for e, c in coeffs.items() if c}
        if not coeffs:
            return ZERO
        lo = min(coeffs)
        hi = max(coeffs)
        num = [0] * (hi - lo + 1)
        for e, c in coeffs.items():
            num[e - lo] = c
        if lo >= 0:
            return cls._raw(_pshift(tuple(num), lo), _ONE, 0)
        return cls._laurent(tuple(num), -lo)

    # predicates ----------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self):
        return self._k >= 0

    def is_one(self):
        return self.num == _ONE and self.den == _ONE

    def laurent_terms(self):
        """{exponent: coeff} if this is a Laurent polynomial, else None."""
        if self._k < 0:
            return None
        return {i - self._k: c for i, c in enumerate(self.num) if c}

    # arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QRat):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if not other.num:
            return self
        if not self.num:
            return other
        ka, kb = self._k, other._k
        if ka >= 0 and kb >= 0:
            if ka == kb:
                return QRat._laurent(_padd(self.num, other.num), ka)
            if ka < kb:
                return QRat._laurent(_padd(_pshift(self.num, kb - ka), other.num), kb)
            return QRat._laurent(_padd(self.num, _pshift(other.num, ka - kb)), ka)
        if self.den == other.den:
            return _make(_padd(self.num, other.num), self.den)
        return _make(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return QRat._raw(_pneg(self.num), self.den, self._k)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, QRat):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QRat):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if not self.num or not other.num:
            return ZERO
        ka, kb = self._k, other._k
        if ka >= 0 and kb >= 0:
            return QRat._laurent(_pmul(self.num, other.num), ka + kb)
        g1 = pgcd(self.num, other.den)
        g2 = pgcd(other.num, self.den)
        num = _pmul(pexquo(self.num, g1), pexquo(other.num, g2))
        den = _pmul(pexquo(self.den, g2), pexquo(other.den, g1))
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return QRat._raw(num, den, _qpow_of(den))

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        num, den = self.den, self.num
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return QRat._raw(num, den, _qpow_of(den))

    def __truediv__(self, other):
        if not isinstance(other, QRat):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison / hashing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QRat):
            return self.num == other.num and self.den == other.den
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == _ONE and len(self.num) <= 1:
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    # evaluation / display ------------------------------------------------

    def specialize(self, q0):
        return specialize(self, q0)

    def __repr__(self):
        return f"QRat({self})"

    def __str__(self):
        return format_qrat(self)


def _canon(num, den):
    if not num:
        return (), _ONE
    g = pgcd(num, den)
    if g != _ONE:
        num, den = pexquo(num, g), pexquo(den, g)
    if den[-1] < 0:
        num, den = _pneg(num), _pneg(den)
    return num, den


def _make(num, den):
    num, den = _canon(num, den)
    return QRat._raw(num, den, _qpow_of(den))


def _coerce(x):
    if isinstance(x, int):
        return QRat.from_int(x)
    if isinstance(x, Fraction):
        return QRat.from_fraction(x)
    return NotImplemented


ZERO = QRat._raw((), _ONE, 0)
ONE = QRat._raw(_ONE, _ONE, 0)
Q = QRat.q()


def canon(a: QRat) -> QRat:
    """Re-canonicalize; a no-op on values built through the public API."""
    return QRat(a.num, a.den)


def qnum(n: int) -> QRat:
    """The q-number (q**n - q**-n) / (q - q**-1)."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    n = abs(n)
    return QRat.laurent({e: sign for e in range(-(n - 1), n, 2)})


def specialize(a: QRat, q0) -> Fraction:
    """Evaluate at a nonzero rational q0."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise PoleError("cannot specialize at q0 = 0")
    if not isinstance(a, QRat):
        return Fraction(a)
    d = peval(a.den, q0)
    if d == 0:
        raise PoleError(
            f"denominator {format_poly(a.den)} vanishes at q0 = {q0}"
        )
    return peval(a.num, q0) / d


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _format_terms(terms):
    """terms: list of (exponent, coeff) in display order."""
    parts = []
    for e, c in terms:
        if e == 0:
            mono = str(abs(c))
        else:
            mono = "q" if e == 1 else f"q^{e}"
            if abs(c) != 1:
                mono = f"{abs(c)}*{mono}"
        if not parts:
            parts.append(mono if c > 0 else f"-{mono}")
        else:
            parts.append(("+ " if c > 0 else "- ") + mono)
    return " ".join(parts) if parts else "0"


def format_poly(p) -> str:
    return _format_terms([(i, c) for i, c in reversed(list(enumerate(p))) if c])


def format_qrat(a: QRat) -> str:
    lt = a.laurent_terms()
    if lt is not None:
        return _format_terms(sorted(lt.items(), key=lambda t: -t[0]))
    num, den = format_poly(a.num), format_poly(a.den)
    if len([c for c in a.num if c]) > 1:
        num = f"({num})"
    return f"{num}/({den})"
