"""Request and response models of the compute service."""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, Field

from ..params import ParamVector
from ..spectral import Expansion


class ShiftedBasis(BaseModel):
    shifted: int = Field(ge=1)


class CoeffEntry(BaseModel):
    k: list[int]
    v: float


class ExpansionModel(BaseModel):
    alpha: list[float]
    beta: list[float]
    basis: Union[Literal["standard"], ShiftedBasis] = "standard"
    N: int = Field(ge=0)
    coeffs: list[CoeffEntry]

    @staticmethod
    def from_expansion(f: Expansion) -> "ExpansionModel":
        basis = "standard" if f.shift is None else ShiftedBasis(shifted=f.shift)
        return ExpansionModel(
            alpha=list(f.params.alpha),
            beta=list(f.params.beta),
            basis=basis,
            N=f.N,
            coeffs=[CoeffEntry(k=list(k), v=v) for k, v in sorted(f.coeffs.items())],
        )

    def to_expansion(self) -> Expansion:
        shift = None if self.basis == "standard" else self.basis.shifted
        return Expansion(
            params=ParamVector(tuple(self.alpha), tuple(self.beta)),
            N=self.N,
            coeffs={tuple(entry.k): entry.v for entry in self.coeffs},
            shift=shift,
        )


class ExpandRequest(BaseModel):
    spec: str
    alpha: list[float] = Field(default_factory=lambda: [0.0])
    beta: list[float] = Field(default_factory=lambda: [0.0])
    degree: int = 6
    grid: int | None = None
    expansion: ExpansionModel | None = None  # for spec == "file"


class ExpandResponse(BaseModel):
    config: dict
    expansion: ExpansionModel


class ApplyRequest(BaseModel):
    operator: str
    t: float | None = None
    expansion: ExpansionModel


class ApplyResponse(BaseModel):
    config: dict
    expansion: ExpansionModel


class VerifyRequest(BaseModel):
    suite: Literal["exact", "numeric", "kernels", "energy", "domination"]
    alpha: list[float] | None = None
    beta: list[float] | None = None
    degree: int | None = None
    dims: list[int] | None = None
    t: list[float] | None = None
    grid: int | None = None
    seed: int | None = None
    samples: int | None = None
    expect_violation: bool = False


class VerifyResponse(BaseModel):
    config: dict
    passed: bool
    report: dict


class KernelsRequest(BaseModel):
    variant: str = "heat"  # heat | poisson | modified-<i>
    alpha: list[float] = Field(default_factory=lambda: [0.0])
    beta: list[float] = Field(default_factory=lambda: [0.0])
    t: float = 0.5
    grid: int = 51
    degree: int = 200


class KernelsResponse(BaseModel):
    config: dict
    table: dict
    csv: str


class GFunRequest(BaseModel):
    expansion: ExpansionModel
    variant: str = "full"  # full | vertical | tilde
    grid: int = 21


class GFunResponse(BaseModel):
    config: dict
    points: list[list[float]]
    values: list[float]
    cross_residual: float
    csv: str


class NormProbeRequest(BaseModel):
    op: str = "riesz-1"
    p: list[float] = Field(default_factory=lambda: [1.5, 4.0])
    d: list[int] = Field(default_factory=lambda: [1, 2, 3, 4])
    degree: int = 6
    samples: int = 200
    seed: int = 42
    t: float = 1.0
    alpha0: float = 0.0
    beta0: float = 0.0


class NormProbeResponse(BaseModel):
    config: dict
    rows: list[dict]
    csv: str
