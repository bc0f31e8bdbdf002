"""Exact polynomial algebra with per-coordinate factors Phi_i = sqrt(1 - x_i^2).

Elements are finite sums  c * x^e * Phi^s  with exact coefficients
(rationals, or quadratic extensions of them), exponent vectors e in N^d and
Phi-masks s in {0,1}^d.  The square Phi_i^2 is always rewritten as
1 - x_i^2, which keeps the representation canonical and makes the singular
coefficients of the adjoint derivative cancellable -- and detectably
non-cancellable when an operator leaves the algebra.

Intermediate results of the differential operators live in
WeightedQuotient: an algebra element divided by a monomial in the weights
(1 - x_i^2).  Final results must divide out exactly; a nonzero remainder
raises NotRepresentableError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import QuadExtScalar


class NotRepresentableError(ArithmeticError):
    """The requested operation leads outside the Phi-weighted algebra."""


def _fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not float(v).is_integer() and Fraction(v).limit_denominator(10**6) != Fraction(v):
            raise TypeError("exact algebra requires rational inputs")
        return Fraction(v)
    raise TypeError(f"expected a rational, got {type(v).__name__}")


@dataclass(frozen=True)
class RationalParamVector:
    """Exact-rational mirror of the per-coordinate type parameters."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(_fraction(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(_fraction(b) for b in self.beta))
        if len(self.alpha) != len(self.beta) or not self.alpha:
            raise ValueError("alpha and beta must be nonempty and equally long")
        for v in self.alpha + self.beta:
            if v <= -1:
                raise ValueError("type parameters must exceed -1")

    @property
    def d(self) -> int:
        return len(self.alpha)

    def pair(self, i: int) -> tuple[Fraction, Fraction]:
        """Coordinate i's (alpha, beta); i is 1-based."""
        return self.alpha[i - 1], self.beta[i - 1]

    def shifted(self, i: int) -> "RationalParamVector":
        a = list(self.alpha)
        b = list(self.beta)
        a[i - 1] += 1
        b[i - 1] += 1
        return RationalParamVector(tuple(a), tuple(b))

    def eigenvalue_1d(self, i: int, k: int) -> Fraction:
        a, b = self.pair(i)
        return k * (k + a + b + 1)

    def eigenvalue(self, k: tuple[int, ...]) -> Fraction:
        return sum(
            (self.eigenvalue_1d(i + 1, ki) for i, ki in enumerate(k)),
            Fraction(0),
        )


def uniform_rational_params(d: int, alpha, beta) -> RationalParamVector:
    return RationalParamVector((_fraction(alpha),) * d, (_fraction(beta),) * d)


class PhiPoly:
    """Canonical element of the Phi-weighted algebra."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms=None):
        self.d = d
        clean = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    clean[key] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(d: int) -> "PhiPoly":
        return PhiPoly(d)

    @staticmethod
    def constant(d: int, c) -> "PhiPoly":
        c = c if isinstance(c, QuadExtScalar) else _fraction(c)
        return PhiPoly(d, {((0,) * d, (0,) * d): c})

    @staticmethod
    def one(d: int) -> "PhiPoly":
        return PhiPoly.constant(d, 1)

    @staticmethod
    def coordinate(d: int, i: int) -> "PhiPoly":
        """The monomial x_i; i is 1-based."""
        e = [0] * d
        e[i - 1] = 1
        return PhiPoly(d, {(tuple(e), (0,) * d): Fraction(1)})

    @staticmethod
    def phi_factor(d: int, i: int) -> "PhiPoly":
        """The factor Phi_i; i is 1-based."""
        s = [0] * d
        s[i - 1] = 1
        return PhiPoly(d, {((0,) * d, tuple(s)): Fraction(1)})

    @staticmethod
    def weight(d: int, i: int) -> "PhiPoly":
        """1 - x_i^2, the square of Phi_i."""
        e = [0] * d
        e[i - 1] = 2
        return PhiPoly(
            d,
            {((0,) * d, (0,) * d): Fraction(1), (tuple(e), (0,) * d): Fraction(-1)},
        )

    # -- ring operations ----------------------------------------------

    def _add_term(self, acc: dict, key, coeff):
        cur = acc.get(key)
        new = coeff if cur is None else cur + coeff
        if new:
            acc[key] = new
        elif cur is not None:
            del acc[key]

    def __add__(self, other: "PhiPoly") -> "PhiPoly":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        acc = dict(self.terms)
        for key, coeff in other.terms.items():
            self._add_term(acc, key, coeff)
        return PhiPoly(self.d, acc)

    def __neg__(self) -> "PhiPoly":
        return PhiPoly(self.d, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PhiPoly") -> "PhiPoly":
        return self + (-other)

    def scale(self, c) -> "PhiPoly":
        if not c:
            return PhiPoly.zero(self.d)
        return PhiPoly(self.d, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PhiPoly):
            return self.scale(other)
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        acc: dict = {}
        for (e1, s1), c1 in self.terms.items():
            for (e2, s2), c2 in other.terms.items():
                mask = tuple(a ^ b for a, b in zip(s1, s2))
                carries = [i for i in range(self.d) if s1[i] & s2[i]]
                pieces = [(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)]
                for i in carries:
                    # Phi_i^2 -> 1 - x_i^2
                    nxt = []
                    for e, c in pieces:
                        nxt.append((e, c))
                        bumped = list(e)
                        bumped[i] += 2
                        nxt.append((tuple(bumped), -c))
                    pieces = nxt
                for e, c in pieces:
                    self._add_term(acc, (e, mask), c)
        return PhiPoly(self.d, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PhiPoly):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def map_coefficients(self, fn) -> "PhiPoly":
        return PhiPoly(self.d, {k: fn(c) for k, c in self.terms.items()})

    def carries_phi_everywhere(self, i: int) -> bool:
        """True when every term contains the factor Phi_i (1-based i)."""
        return all(key[1][i - 1] == 1 for key in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) + sum(s) for e, s in self.terms)

    def evaluate(self, x) -> float:
        """Float evaluation at a point x with |x_i| <= 1."""
        total = 0.0
        for (e, s), coeff in sorted(self.terms.items()):
            val = _coeff_float(coeff)
            for xi, ei, si in zip(x, e, s):
                val *= float(xi) ** ei
                if si:
                    val *= (1.0 - float(xi) ** 2) ** 0.5
            total += val
        return total

    def evaluate_exact(self, x: tuple) -> Fraction:
        """Exact rational evaluation; requires rational x and no Phi factors.

        High-degree polynomials cancel catastrophically in float monomial
        form, so oracle comparisons must go through this path."""
        total = Fraction(0)
        for (e, s), coeff in self.terms.items():
            if any(s):
                raise NotRepresentableError("exact evaluation requires mask-free terms")
            val = coeff if isinstance(coeff, Fraction) else _fraction(coeff)
            for xi, ei in zip(x, e):
                val *= _fraction(xi) ** ei
            total += val
        return total

    def __repr__(self):
        if not self.terms:
            return "PhiPoly(0)"
        parts = []
        for (e, s), coeff in sorted(self.terms.items()):
            factors = [f"{coeff}"]
            for i, (ei, si) in enumerate(zip(e, s)):
                if ei:
                    factors.append(f"x{i + 1}^{ei}" if ei > 1 else f"x{i + 1}")
                if si:
                    factors.append(f"Phi{i + 1}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def _coeff_float(coeff) -> float:
    if isinstance(coeff, QuadExtScalar):
        return float(coeff.a) + float(coeff.b) * float(coeff.lam) ** 0.5
    return float(coeff)


def divide_by_weight(poly: PhiPoly, i: int, power: int = 1) -> PhiPoly:
    """Exact division by (1 - x_i^2)^power; i is 1-based.

    Raises NotRepresentableError when the division leaves a remainder.
    """
    result = poly
    for _ in range(power):
        acc: dict = {}
        groups: dict = {}
        for (e, s), coeff in result.terms.items():
            rest = (e[: i - 1] + (0,) + e[i:], s)
            groups.setdefault(rest, {})[e[i - 1]] = coeff
        for (e_rest, s), by_deg in groups.items():
            # Divide sum_c by_deg[c] x^c by (1 - x^2): long division against
            # (x^2 - 1) followed by a sign flip.
            work = dict(by_deg)
            quotient: dict = {}
            for deg in range(max(work), 1, -1):
                c = work.get(deg)
                if not c:
                    continue
                quotient[deg - 2] = quotient.get(deg - 2, 0) + c
                work[deg - 2] = work.get(deg - 2, 0) + c
                work[deg] = 0
            for deg in (0, 1):
                if work.get(deg):
                    raise NotRepresentableError(
                        f"not divisible by (1 - x_{i}^2): remainder at degree {deg}"
                    )
            for deg, c in quotient.items():
                if c:
                    e = list(e_rest)
                    e[i - 1] = deg
                    acc[(tuple(e), s)] = -c
        result = PhiPoly(poly.d, acc)
    return result


class WeightedQuotient:
    """A PhiPoly divided by prod_i (1 - x_i^2)^{den_i}; operator workspace."""

    __slots__ = ("num", "den")

    def __init__(self, num: PhiPoly, den: tuple[int, ...] | None = None):
        self.num = num
        self.den = den if den is not None else (0,) * num.d

    @staticmethod
    def of(poly: PhiPoly) -> "WeightedQuotient":
        return WeightedQuotient(poly)

    def _lift(self, target: tuple[int, ...]) -> PhiPoly:
        num = self.num
        for i, (have, want) in enumerate(zip(self.den, target)):
            for _ in range(want - have):
                num = num * PhiPoly.weight(num.d, i + 1)
        return num

    def __add__(self, other: "WeightedQuotient") -> "WeightedQuotient":
        target = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return WeightedQuotient(self._lift(target) + other._lift(target), target)

    def __neg__(self) -> "WeightedQuotient":
        return WeightedQuotient(-self.num, self.den)

    def __sub__(self, other: "WeightedQuotient") -> "WeightedQuotient":
        return self + (-other)

    def times_poly(self, poly: PhiPoly) -> "WeightedQuotient":
        return WeightedQuotient(self.num * poly, self.den)

    def scale(self, c) -> "WeightedQuotient":
        return WeightedQuotient(self.num.scale(c), self.den)

    def over_weight(self, i: int, power: int = 1) -> "WeightedQuotient":
        den = list(self.den)
        den[i - 1] += power
        return WeightedQuotient(self.num, tuple(den))

    def to_phipoly(self) -> PhiPoly:
        result = self.num
        for i, power in enumerate(self.den):
            if power:
                result = divide_by_weight(result, i + 1, power)
        return result
