"""Serialization: expansion files, kernel and probe tables, atomic writes.

CSV cells carry 17 significant digits so files are diffable and reload
losslessly; JSON floats use Python's shortest round-trip representation.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .params import ParamVector
from .spectral import Expansion, KernelTable
from .squarefn import NormProbeReport


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def expansion_to_dict(f: Expansion) -> dict:
    basis = "standard" if f.shift is None else {"shifted": f.shift}
    return {
        "alpha": list(f.params.alpha),
        "beta": list(f.params.beta),
        "basis": basis,
        "N": f.N,
        "coeffs": [
            {"k": list(k), "v": v} for k, v in sorted(f.coeffs.items())
        ],
    }


def expansion_from_dict(data: dict) -> Expansion:
    params = ParamVector(tuple(data["alpha"]), tuple(data["beta"]))
    basis = data.get("basis", "standard")
    shift = None if basis == "standard" else int(basis["shifted"])
    coeffs = {tuple(int(i) for i in row["k"]): float(row["v"]) for row in data["coeffs"]}
    return Expansion(params=params, N=int(data["N"]), coeffs=coeffs, shift=shift)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _point_label(pt: np.ndarray) -> str:
    if pt.size == 1:
        return fmt17(pt[0])
    return ";".join(fmt17(c) for c in pt)


def kernel_table_records(table: KernelTable) -> list[dict]:
    rows = []
    flag = 0 if table.converged else 1
    for a, xpt in enumerate(table.x):
        for b, ypt in enumerate(table.y):
            rows.append(
                {
                    "x": list(map(float, xpt)),
                    "y": list(map(float, ypt)),
                    "value": float(table.values[a, b]),
                    "residual_flag": flag,
                }
            )
    return rows


def kernel_table_csv(table: KernelTable) -> str:
    lines = ["x,y,value,residual_flag"]
    flag = "0" if table.converged else "1"
    for a, xpt in enumerate(table.x):
        for b, ypt in enumerate(table.y):
            lines.append(
                f"{_point_label(xpt)},{_point_label(ypt)},"
                f"{fmt17(table.values[a, b])},{flag}"
            )
    return "\n".join(lines) + "\n"


def kernel_table_json(table: KernelTable) -> dict:
    return {
        "variant": table.variant,
        "t": table.t,
        "alpha": list(table.params.alpha),
        "beta": list(table.params.beta),
        "degree_used": table.degree_used,
        "residual": table.residual,
        "converged": table.converged,
        "cross_residual": table.cross_residual,
        "rows": kernel_table_records(table),
    }


def normprobe_csv(reports: list[NormProbeReport]) -> str:
    lines = ["operator,p,d,N,samples,seed,best_ratio"]
    for r in reports:
        lines.append(
            f"{r.operator},{fmt17(r.p)},{r.d},{r.N},{r.samples},{r.seed},"
            f"{fmt17(r.best_ratio)}"
        )
    return "\n".join(lines) + "\n"


def gfunction_csv(points: np.ndarray, values: np.ndarray, cross_residual: float) -> str:
    lines = ["point,value,cross_residual"]
    for pt, v in zip(points, values):
        lines.append(f"{_point_label(pt)},{fmt17(v)},{fmt17(cross_residual)}")
    return "\n".join(lines) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
