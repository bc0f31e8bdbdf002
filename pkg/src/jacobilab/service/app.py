"""FastAPI service wrapping the core package.

Every endpoint echoes its parsed request back under "config" so output
files written by clients are self-describing.
"""

from __future__ import annotations

import json
import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import conjugacy as conj
from .. import reporting
from .. import spectral as sp
from .. import squarefn as sq
from ..params import ParamVector, ParameterError
from ..quadrature import (
    InsufficientGridError,
    default_node_count,
    fourier_coefficients,
    make_grid,
)
from ..spectral import BasisMismatchError, Expansion, UnderResolvedError
from ..suites import (
    run_domination_suite,
    run_energy_suite,
    run_exact_suite,
    run_kernel_suite,
    run_numeric_suite,
)
from .models import (
    ApplyRequest,
    ApplyResponse,
    ExpandRequest,
    ExpandResponse,
    ExpansionModel,
    GFunRequest,
    GFunResponse,
    KernelsRequest,
    KernelsResponse,
    NormProbeRequest,
    NormProbeResponse,
    VerifyRequest,
    VerifyResponse,
)

_USER_ERRORS = (
    ValueError,
    ParameterError,
    BasisMismatchError,
    InsufficientGridError,
    conj.UnsupportedBasisError,
    KeyError,
    json.JSONDecodeError,
)


def _bad_request(exc: Exception):
    raise HTTPException(status_code=400, detail=str(exc))


def _build_from_spec(req: ExpandRequest) -> Expansion:
    params = ParamVector(tuple(req.alpha), tuple(req.beta))
    d = params.d
    spec = req.spec
    if spec == "file":
        if req.expansion is None:
            raise ValueError("spec 'file' needs an expansion payload")
        return req.expansion.to_expansion()
    if spec.startswith("mode:"):
        k = tuple(int(v) for v in spec[len("mode:"):].split(","))
        if len(k) != d:
            raise ValueError(f"mode has {len(k)} entries for dimension {d}")
        return Expansion.single_mode(params, k, N=max(req.degree, max(k)))
    n_nodes = req.grid or default_node_count(req.degree)
    grid = make_grid(params, n_nodes)
    if spec.startswith("poly:"):
        payload = json.loads(spec[len("poly:"):])
        terms = [(tuple(int(e) for e in t["e"]), float(t["c"])) for t in payload["terms"]]
        for e, _ in terms:
            if len(e) != d:
                raise ValueError("monomial exponent length must match dimension")

        def fn(pts):
            out = np.zeros(pts.shape[0])
            for e, c in terms:
                term = np.full(pts.shape[0], c)
                for axis, ei in enumerate(e):
                    term = term * pts[:, axis] ** ei
                out += term
            return out

        return fourier_coefficients(fn, params, req.degree, grid)
    if spec.startswith("bump:"):
        center, width = (float(v) for v in spec[len("bump:"):].split(","))
        if width <= 0:
            raise ValueError("bump width must be positive")

        def fn(pts):
            out = np.ones(pts.shape[0])
            for axis in range(d):
                u = pts[:, axis] - center
                inside = np.abs(u) < width
                vals = np.zeros(pts.shape[0])
                vals[inside] = np.exp(1.0 - width**2 / (width**2 - u[inside] ** 2))
                out = out * vals
            return out

        return fourier_coefficients(fn, params, req.degree, grid)
    raise ValueError(
        f"unknown function spec {spec!r}; expected mode:..., poly:..., bump:..., or file"
    )


def _apply_operator(op: str, t: float | None, f: Expansion) -> Expansion:
    def need_t() -> float:
        if t is None:
            raise ValueError(f"operator {op!r} needs a time parameter")
        return float(t)

    if op == "heat":
        return sp.apply_heat(need_t(), f)
    if op == "poisson":
        return sp.apply_poisson(need_t(), f)
    if op == "pi0":
        return sp.project_pi0(f)
    for prefix, fn in (
        ("modified-heat-", lambda i: sp.apply_modified(i, "heat", need_t(), f)),
        ("modified-poisson-", lambda i: sp.apply_modified(i, "poisson", need_t(), f)),
        ("riesz-adjoint-", lambda i: conj.riesz_adjoint(i, f)),
        ("riesz-", lambda i: conj.riesz(i, f)),
        ("conjugate-poisson-adjoint-", lambda i: conj.conjugate_poisson_adjoint(i, need_t(), f)),
        ("conjugate-poisson-", lambda i: conj.conjugate_poisson(i, need_t(), f)),
        ("delta-star-", lambda i: conj.delta_apply(i, f)),
        ("delta-", lambda i: conj.delta_apply(i, f)),
    ):
        if op.startswith(prefix):
            suffix = op[len(prefix):]
            if suffix.isdigit():
                return fn(int(suffix))
    raise ValueError(f"unknown operator {op!r}")


def _interior_lattice(d: int, n: int) -> np.ndarray:
    j = np.arange(n)
    axis = -1.0 + 2.0 * (j + 0.5) / n
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def create_app() -> FastAPI:
    app = FastAPI(
        title="jacobilab",
        description="Spectral operators and verification suites for "
        "multi-dimensional Jacobi expansions.",
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/expand", response_model=ExpandResponse)
    def expand(req: ExpandRequest):
        try:
            f = _build_from_spec(req)
        except _USER_ERRORS as exc:
            _bad_request(exc)
        return ExpandResponse(
            config=req.model_dump(exclude={"expansion"}),
            expansion=ExpansionModel.from_expansion(f),
        )

    @app.post("/apply", response_model=ApplyResponse)
    def apply(req: ApplyRequest):
        try:
            out = _apply_operator(req.operator, req.t, req.expansion.to_expansion())
        except _USER_ERRORS as exc:
            _bad_request(exc)
        return ApplyResponse(
            config={"operator": req.operator, "t": req.t},
            expansion=ExpansionModel.from_expansion(out),
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        try:
            if req.suite == "exact":
                result = run_exact_suite(
                    cap=req.degree or 4,
                    dims=tuple(req.dims) if req.dims else (1, 2, 3),
                )
            elif req.suite == "numeric":
                result = run_numeric_suite(
                    seed=req.seed if req.seed is not None else 2024,
                    dims=tuple(req.dims) if req.dims else (1, 2),
                    t_values=tuple(req.t) if req.t else (0.25, 1.0),
                    samples=req.samples or 25,
                )
            elif req.suite == "kernels":
                kwargs = {
                    "t_values": tuple(req.t) if req.t else (0.1, 0.5, 1.0, 2.0),
                    "n_grid": req.grid or 51,
                    "expect_violation": req.expect_violation,
                }
                if req.alpha:
                    kwargs["alpha"] = req.alpha[0]
                    kwargs["beta"] = req.beta[0] if req.beta else req.alpha[0]
                result = run_kernel_suite(**kwargs)
            elif req.suite == "energy":
                result = run_energy_suite(
                    seed=req.seed if req.seed is not None else 2025,
                    dims=tuple(req.dims) if req.dims else (1, 2),
                    samples=req.samples or 10,
                )
            else:
                result = run_domination_suite(
                    seed=req.seed if req.seed is not None else 2026,
                    dims=tuple(req.dims) if req.dims else (1, 2, 3),
                    samples=req.samples or 8,
                )
        except _USER_ERRORS as exc:
            _bad_request(exc)
        return VerifyResponse(
            config=req.model_dump(), passed=result.passed, report=result.to_dict()
        )

    @app.post("/kernels", response_model=KernelsResponse)
    def kernels(req: KernelsRequest):
        try:
            params = ParamVector(tuple(req.alpha), tuple(req.beta))
            pts = _interior_lattice(params.d, req.grid)
            if req.variant == "heat":
                table = sp.heat_kernel_table(req.t, params, pts, pts, req.degree)
            elif req.variant == "poisson":
                table = sp.poisson_kernel_table(req.t, params, pts, pts, max(req.degree, 400))
            elif req.variant.startswith("modified-"):
                i = int(req.variant[len("modified-"):])
                table = sp.modified_kernel_table(i, req.t, params, pts, pts, req.degree)
            else:
                raise ValueError(f"unknown kernel variant {req.variant!r}")
        except _USER_ERRORS as exc:
            _bad_request(exc)
        return KernelsResponse(
            config=req.model_dump(),
            table=reporting.kernel_table_json(table),
            csv=reporting.kernel_table_csv(table),
        )

    @app.post("/gfun", response_model=GFunResponse)
    def gfun(req: GFunRequest):
        try:
            f = req.expansion.to_expansion()
            pts = _interior_lattice(f.d, req.grid)
            if req.variant in ("full", "vertical"):
                values = sq.g_function(f, pts, req.variant)
                quad = sq.g_function_quadrature(f, pts, req.variant)
            elif req.variant == "tilde":
                if f.shift is None:
                    raise ValueError("tilde variant needs a shifted expansion")
                values = sq.g_tilde(f.shift, f, pts)
                quad = sq.g_tilde_quadrature(f.shift, f, pts)
            else:
                raise ValueError(f"unknown variant {req.variant!r}")
        except _USER_ERRORS as exc:
            _bad_request(exc)
        cross = float(np.max(np.abs(values - quad))) if np.size(values) else 0.0
        return GFunResponse(
            config=req.model_dump(exclude={"expansion"}),
            points=[[float(c) for c in p] for p in pts],
            values=[float(v) for v in values],
            cross_residual=cross,
            csv=reporting.gfunction_csv(pts, values, cross),
        )

    @app.post("/normprobe", response_model=NormProbeResponse)
    def normprobe(req: NormProbeRequest):
        try:
            if any(p < 1 or math.isinf(p) for p in req.p):
                raise ValueError("exponents must be finite and at least 1")
            reports = sq.probe_operator_sweep(
                req.op,
                req.p,
                req.d,
                req.degree,
                req.samples,
                req.seed,
                alpha0=req.alpha0,
                beta0=req.beta0,
                t=req.t,
            )
        except _USER_ERRORS as exc:
            _bad_request(exc)
        except UnderResolvedError as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return NormProbeResponse(
            config=req.model_dump(),
            rows=[r.to_dict() for r in reports],
            csv=reporting.normprobe_csv(reports),
        )

    return app
