"""Exact coefficients: Gaussian rationals and polynomials in the coupling beta.

A :class:`GaussianRational` is stored as ``(a + b i) / d`` with integers
``a, b`` and ``d > 0`` reduced so that ``gcd(a, b, d) == 1``.  This keeps
every operation on plain Python ints, which matters in the closure sweeps.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


def _reduce(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d < 0:
        a, b, d = -a, -b, -d
    if a == 0 and b == 0:
        return 0, 0, 1
    g = gcd(gcd(a, b), d)
    if g != 1:
        a, b, d = a // g, b // g, d // g
    return a, b, d


class GaussianRational:
    """An element of Q(i)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0) -> None:
        re = Fraction(re)
        im = Fraction(im)
        den = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self.a, self.b, self.d = _reduce(
            re.numerator * (den // re.denominator),
            im.numerator * (den // im.denominator),
            den,
        )

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.a, obj.b, obj.d = _reduce(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        if isinstance(value, float):
            raise TypeError("floating point values are not exact")
        return cls(value)

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __add__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        if self.d == o.d:
            return GaussianRational._raw(self.a + o.a, self.b + o.b, self.d)
        return GaussianRational._raw(
            self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d
        )

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj.a, obj.b, obj.d = -self.a, -self.b, self.d
        return obj

    def __sub__(self, other) -> "GaussianRational":
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other) -> "GaussianRational":
        if isinstance(other, int):
            return GaussianRational._raw(self.a * other, self.b * other, self.d)
        o = GaussianRational.coerce(other)
        return GaussianRational._raw(
            self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj.a, obj.b, obj.d = self.a, -self.b, self.d
        return obj

    def inverse(self) -> "GaussianRational":
        norm = self.a * self.a + self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._raw(self.d * self.a, -self.d * self.b, norm)

    def __truediv__(self, other) -> "GaussianRational":
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return _imag_str(im)
        s = _imag_str(im)
        return f"{re}{'' if s.startswith('-') else '+'}{s}"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data: dict) -> "GaussianRational":
        return cls(Fraction(data["re"]), Fraction(data["im"]))


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}*i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def i_power(k: int) -> GaussianRational:
    """Return i**k for any integer k."""
    return (ONE, I, -ONE, -I)[k % 4]


class BetaPoly:
    """Dense polynomial in the formal coupling beta with Q(i) coefficients.

    Beta is real, so :meth:`conjugate` only conjugates the coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()) -> None:
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[GaussianRational, ...] = tuple(cs)

    @classmethod
    def const(cls, value) -> "BetaPoly":
        return cls((value,))

    @classmethod
    def beta(cls) -> "BetaPoly":
        return cls((0, 1))

    @classmethod
    def coerce(cls, value) -> "BetaPoly":
        if isinstance(value, BetaPoly):
            return value
        return cls.const(value)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            other = BetaPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "BetaPoly":
        o = BetaPoly.coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return BetaPoly(
            (self.coeffs[k] if k < len(self.coeffs) else ZERO)
            + (o.coeffs[k] if k < len(o.coeffs) else ZERO)
            for k in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "BetaPoly":
        return BetaPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "BetaPoly":
        return self + (-BetaPoly.coerce(other))

    def __rsub__(self, other) -> "BetaPoly":
        return BetaPoly.coerce(other) - self

    def __mul__(self, other) -> "BetaPoly":
        o = BetaPoly.coerce(other)
        if not self.coeffs or not o.coeffs:
            return BetaPoly()
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for p, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            for q, e in enumerate(o.coeffs):
                out[p + q] = out[p + q] + c * e
        return BetaPoly(out)

    __rmul__ = __mul__

    def conjugate(self) -> "BetaPoly":
        return BetaPoly(c.conjugate() for c in self.coeffs)

    def eval(self, value: RationalLike) -> GaussianRational:
        """Horner evaluation at a rational beta."""
        value = Fraction(value)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * GaussianRational(value) + c
        return acc

    def __repr__(self) -> str:
        return f"BetaPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            if c.b != 0 and c.a != 0:
                cs = f"({cs})"
            if k == 0:
                parts.append(cs)
            else:
                mono = "beta" if k == 1 else f"beta^{k}"
                parts.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "BetaPoly":
        return cls(GaussianRational.from_json(c) for c in data)


def scalar_arith(a, b, op: str) -> BetaPoly:
    """Dispatch ``add``, ``mul`` or ``neg`` on two coefficients."""
    a = BetaPoly.coerce(a)
    if op == "add":
        return a + BetaPoly.coerce(b)
    if op == "mul":
        return a * BetaPoly.coerce(b)
    if op == "neg":
        return -a
    raise ValueError(f"unknown scalar operation {op!r}")


def conjugate(a) -> BetaPoly:
    return BetaPoly.coerce(a).conjugate()


def eval_beta(a, value: RationalLike) -> GaussianRational:
    return BetaPoly.coerce(a).eval(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; floats are refused."""
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"expected an exact rational like 3/2, got {text!r}")
    return Fraction(text)
