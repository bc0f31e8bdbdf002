"""Exact scalars of the form a + b*s with s^2 = lam, over the rationals.

The symbol s stands for the square root of a spectral eigenvalue.  Keeping
it formal lets identities whose two sides carry matching powers of
lam^(1/2) be compared with zero tolerance: in composite operators the odd
powers cancel back to rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class MixedRootError(ValueError):
    """Raised when scalars adjoin square roots of different eigenvalues."""


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


@dataclass(frozen=True)
class QuadExtScalar:
    """a + b*s with s^2 = lam; lam is a nonnegative rational."""

    a: Fraction
    b: Fraction
    lam: Fraction

    def __post_init__(self):
        a = _as_fraction(self.a)
        b = _as_fraction(self.b)
        lam = _as_fraction(self.lam)
        if lam < 0:
            raise ValueError("the adjoined square must be nonnegative")
        if lam == 0:
            # sqrt(0) is 0, not a nilpotent.
            a, b = a, Fraction(0)
        if b == 0:
            lam = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lam", lam)

    @staticmethod
    def of(v) -> "QuadExtScalar":
        if isinstance(v, QuadExtScalar):
            return v
        return QuadExtScalar(_as_fraction(v), Fraction(0), Fraction(0))

    @staticmethod
    def sqrt(lam) -> "QuadExtScalar":
        """The formal square root s of lam."""
        return QuadExtScalar(Fraction(0), Fraction(1), _as_fraction(lam))

    def _join(self, other: "QuadExtScalar") -> Fraction:
        if self.lam == 0:
            return other.lam
        if other.lam == 0:
            return self.lam
        if self.lam != other.lam:
            raise MixedRootError(f"cannot combine roots of {self.lam} and {other.lam}")
        return self.lam

    def __add__(self, other):
        o = QuadExtScalar.of(other)
        return QuadExtScalar(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.a, -self.b, self.lam)

    def __sub__(self, other):
        return self + (-QuadExtScalar.of(other))

    def __rsub__(self, other):
        return QuadExtScalar.of(other) + (-self)

    def __mul__(self, other):
        o = QuadExtScalar.of(other)
        lam = self._join(o)
        return QuadExtScalar(
            self.a * o.a + self.b * o.b * lam,
            self.a * o.b + self.b * o.a,
            lam,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadExtScalar":
        norm = self.a * self.a - self.b * self.b * self.lam
        if norm == 0:
            if self.b == 0:
                raise ZeroDivisionError("inverse of zero")
            # Pure multiple of s: 1/(b s) = s / (b lam).
            return QuadExtScalar(Fraction(0), 1 / (self.b * self.lam), self.lam)
        return QuadExtScalar(self.a / norm, -self.b / norm, self.lam)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadExtScalar.of(other)
        if not isinstance(other, QuadExtScalar):
            return NotImplemented
        if self.a != other.a or self.b != other.b:
            return False
        return self.b == 0 or self.lam == other.lam

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __hash__(self):
        return hash((self.a, self.b, self.lam if self.b else Fraction(0)))

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.lam}))"
