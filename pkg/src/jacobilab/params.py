"""Type parameters (alpha, beta) of a Jacobi expansion, per coordinate."""

from __future__ import annotations

from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised when expansion type parameters are out of range."""


@dataclass(frozen=True)
class ParamPair:
    """One coordinate's type parameters. Both must exceed -1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise ParameterError(
                f"type parameters must exceed -1, got ({self.alpha}, {self.beta})"
            )

    @property
    def in_half_range(self) -> bool:
        """True when alpha >= -1/2 and beta >= -1/2.

        Kernel comparison and the contraction property of the modified
        semigroups are only guaranteed in this regime.
        """
        return self.alpha >= -0.5 and self.beta >= -0.5

    def shifted(self) -> "ParamPair":
        """Parameters raised by one in both slots."""
        return ParamPair(self.alpha + 1.0, self.beta + 1.0)


@dataclass(frozen=True)
class ParamVector:
    """Per-coordinate type parameters of a d-dimensional expansion."""

    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if len(self.alpha) != len(self.beta):
            raise ParameterError("alpha and beta must have the same length")
        if not self.alpha:
            raise ParameterError("dimension must be positive")
        for a, b in zip(self.alpha, self.beta):
            ParamPair(a, b)

    @property
    def d(self) -> int:
        return len(self.alpha)

    @property
    def in_half_range(self) -> bool:
        return all(self.pair(i).in_half_range for i in range(1, self.d + 1))

    def pair(self, i: int) -> ParamPair:
        """Coordinate i's parameters; i is 1-based."""
        if not 1 <= i <= self.d:
            raise ParameterError(f"coordinate index {i} outside 1..{self.d}")
        return ParamPair(self.alpha[i - 1], self.beta[i - 1])

    def shifted(self, i: int) -> "ParamVector":
        """Raise the parameters of coordinate i (1-based) by one."""
        if not 1 <= i <= self.d:
            raise ParameterError(f"coordinate index {i} outside 1..{self.d}")
        a = list(self.alpha)
        b = list(self.beta)
        a[i - 1] += 1.0
        b[i - 1] += 1.0
        return ParamVector(tuple(a), tuple(b))


def uniform_params(d: int, alpha: float, beta: float) -> ParamVector:
    """Parameter vector with the same (alpha, beta) in every coordinate."""
    return ParamVector((alpha,) * d, (beta,) * d)
