"""Exact complex-rational arithmetic for closed-form weights.

Closed forms in this package only ever need sums, differences, products and
absolute squares of the two weights, so Gaussian rationals (pairs of
``Fraction``) are enough to keep every closed-form identity exact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational


class QComplex:
    """Complex number with ``Fraction`` real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "QComplex":
        if isinstance(value, QComplex):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        if isinstance(value, float):
            return cls(Fraction(value), 0)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot convert {type(value).__name__} to QComplex")

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return QComplex(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QComplex.coerce(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("QComplex division by zero")
        n = self * o.conjugate()
        return QComplex(n.re / d, n.im / d)

    def __eq__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QComplex({self.re}, {self.im})"

    def __str__(self):
        return format_complex(self)


def abs2(z):
    """``|z|**2``, exact for ``QComplex``/``Fraction``/``int`` input."""
    if isinstance(z, QComplex):
        return z.abs2()
    if isinstance(z, (int, Rational)):
        return Fraction(z) * Fraction(z)
    return abs(z) ** 2


_REAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(
    rf"(?P<re>[+-]?{_REAL})?(?:(?P<isign>[+-])?(?P<im>{_REAL})?(?P<unit>[ij]))?"
)


def parse_complex(text: str) -> QComplex:
    """Parse ``a+bi`` with decimal or ``p/q`` components into an exact value.

    Accepts ``1``, ``-0.5``, ``1/3``, ``2i``, ``-i``, ``0.25-1.5i``,
    ``1/2+3/4i``. Decimal strings are converted exactly (``0.1`` is 1/10).
    """
    s = text.strip().replace(" ", "")
    m = _COMPLEX_RE.fullmatch(s)
    if not s or m is None:
        raise ValueError(f"not a complex literal: {text!r}")
    re_txt, isign, im_txt, unit = m.group("re", "isign", "im", "unit")
    if unit is None:
        if re_txt is None:
            raise ValueError(f"not a complex literal: {text!r}")
        return QComplex(Fraction(re_txt), 0)
    if re_txt is not None and isign is None:
        # "2i" was captured as re="2" with no imaginary sign
        if im_txt is not None:
            raise ValueError(f"not a complex literal: {text!r}")
        re_txt, im_txt, isign = None, re_txt.lstrip("+-"), re_txt[0] if re_txt[0] in "+-" else "+"
    mag = Fraction(im_txt) if im_txt else Fraction(1)
    im = -mag if isign == "-" else mag
    return QComplex(Fraction(re_txt) if re_txt else 0, im)


def format_complex(z) -> str:
    """Inverse of :func:`parse_complex` (exact for ``QComplex``)."""
    if isinstance(z, QComplex):
        re_s, im = str(z.re), z.im
        if im == 0:
            return re_s
        sign = "-" if im < 0 else "+"
        return f"{re_s}{sign}{abs(im)}i"
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


# cos(2*pi*x) for the rational x at which it is itself rational
_RATIONAL_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2),
    Fraction(1, 2): Fraction(-1),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(3, 4): Fraction(0),
    Fraction(5, 6): Fraction(1, 2),
}


def cos2pi(x):
    """``cos(2*pi*x)``; exact ``Fraction`` when ``x`` is a rational with a
    rational cosine, float otherwise."""
    if isinstance(x, (int, Rational)):
        r = Fraction(x) % 1
        if r in _RATIONAL_COS:
            return _RATIONAL_COS[r]
        x = float(r)
    return math.cos(2.0 * math.pi * x)


def unit_root(p: int, q: int):
    """``exp(-2*pi*i*p/q)`` exactly as ``QComplex`` when ``q`` divides 4."""
    if 4 % q:
        raise ValueError(f"exp(-2 pi i p/{q}) is not Gaussian-rational")
    quarter = (p * (4 // q)) % 4
    return (QComplex(1), QComplex(0, -1), QComplex(-1), QComplex(0, 1))[quarter]
