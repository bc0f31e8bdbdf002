"""Command-line front end; a thin client of the compute service.

All computation happens behind the service boundary: by default the ASGI
app is mounted in process, and --server points the same commands at a
remote instance.  Exit codes: 0 success, 1 verification failure, 2
usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .client import ServiceClient, ServiceError
from .reporting import atomic_write, dumps


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v != ""]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v != ""]


def _param_vectors(args) -> tuple[list[float], list[float]]:
    alpha = _floats(args.alpha)
    beta = _floats(args.beta)
    d = getattr(args, "dim", None)
    if d:
        if len(alpha) == 1:
            alpha = alpha * d
        if len(beta) == 1:
            beta = beta * d
    if len(alpha) != len(beta):
        raise ValueError("--alpha and --beta must have the same length")
    return alpha, beta


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(dumps(payload), out)


def _emit_csv(csv_text: str, config: dict, out: str | None) -> None:
    header = "# config: " + json.dumps(config, sort_keys=True) + "\n"
    _emit(header + csv_text, out)


def _load_expansion_file(path: str) -> dict:
    with open(path) as handle:
        data = json.load(handle)
    return {key: data[key] for key in ("alpha", "beta", "basis", "N", "coeffs")}


def _add_common_params(p, dim_default=None):
    p.add_argument("--alpha", default="0", help="comma-separated parameters")
    p.add_argument("--beta", default="0", help="comma-separated parameters")
    p.add_argument("--dim", type=int, default=dim_default, help="dimension; broadcasts scalar parameters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobilab",
        description="Jacobi-expansion conjugacy toolkit: operators, kernels, "
        "square functions, and verification suites.",
    )
    parser.add_argument("--server", default=None, help="service URL; default is in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="build an expansion file from a builtin function spec")
    p.add_argument("spec", help="mode:k1,k2,... | poly:{json} | bump:center,width | @file.json")
    _add_common_params(p)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("apply", help="apply an operator to an expansion file")
    p.add_argument("operator", help="heat|poisson|pi0|riesz-i|riesz-adjoint-i|"
                   "conjugate-poisson[-adjoint]-i|modified-{heat,poisson}-i|delta[-star]-i")
    p.add_argument("expansion", help="expansion JSON file")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["exact", "numeric", "kernels", "energy", "domination"])
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--dim", default=None, help="comma-separated dimensions")
    p.add_argument("--t", default=None, help="comma-separated times")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--expect-violation", action="store_true")
    p.add_argument("--out", default=None, help="report path; default verify-<suite>.json")

    p = sub.add_parser("kernels", help="tabulate a semigroup kernel")
    p.add_argument("--variant", default="heat", help="heat | poisson | modified-i")
    _add_common_params(p, dim_default=1)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--grid", type=int, default=51)
    p.add_argument("--degree", type=int, default=200, help="series degree cap")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("gfun", help="evaluate a square function on a lattice")
    p.add_argument("expansion", help="expansion JSON file")
    p.add_argument("--variant", default="full", help="full | vertical | tilde")
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("normprobe", help="probe operator norms on random expansions")
    p.add_argument("--op", default="riesz-1")
    p.add_argument("--p", default="1.5,4")
    p.add_argument("--dim", default="1,2,3,4")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--alpha", default="0")
    p.add_argument("--beta", default="0")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("serve", help="run the service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_expand(client: ServiceClient, args) -> int:
    alpha, beta = _param_vectors(args)
    payload = {
        "spec": args.spec,
        "alpha": alpha,
        "beta": beta,
        "degree": args.degree,
        "grid": args.grid,
    }
    if args.spec.startswith("@"):
        payload["expansion"] = _load_expansion_file(args.spec[1:])
        payload["spec"] = "file"
    result = client.post("/expand", payload)
    out = dict(result["expansion"])
    out["config"] = result["config"]
    _emit_json(out, args.out)
    return 0


def _cmd_apply(client: ServiceClient, args) -> int:
    payload = {
        "operator": args.operator,
        "t": args.t,
        "expansion": _load_expansion_file(args.expansion),
    }
    result = client.post("/apply", payload)
    out = dict(result["expansion"])
    out["config"] = result["config"]
    _emit_json(out, args.out)
    return 0


def _cmd_verify(client: ServiceClient, args) -> int:
    payload = {
        "suite": args.suite,
        "alpha": _floats(args.alpha) if args.alpha else None,
        "beta": _floats(args.beta) if args.beta else None,
        "degree": args.degree,
        "dims": _ints(args.dim) if args.dim else None,
        "t": _floats(args.t) if args.t else None,
        "grid": args.grid,
        "seed": args.seed,
        "samples": args.samples,
        "expect_violation": args.expect_violation,
    }
    result = client.post("/verify", payload)
    out_path = args.out or f"verify-{args.suite}.json"
    report = result["report"]
    _emit_json(
        {
            "config": result["config"],
            "suite": report["suite"],
            "suite_config": report["config"],
            "passed": report["passed"],
            "checks": report["checks"],
        },
        out_path,
    )
    for check in result["report"]["checks"]:
        if not check["passed"]:
            sys.stderr.write(f"FAIL {check['name']}: {check['detail']}\n")
    sys.stdout.write(("PASS" if result["passed"] else "FAIL") + f" suite={args.suite}\n")
    return 0 if result["passed"] else 1


def _cmd_kernels(client: ServiceClient, args) -> int:
    alpha, beta = _param_vectors(args)
    payload = {
        "variant": args.variant,
        "alpha": alpha,
        "beta": beta,
        "t": args.t,
        "grid": args.grid,
        "degree": args.degree,
    }
    result = client.post("/kernels", payload)
    if args.format == "csv":
        _emit_csv(result["csv"], result["config"], args.out)
    else:
        _emit_json({"config": result["config"], **result["table"]}, args.out)
    return 0


def _cmd_gfun(client: ServiceClient, args) -> int:
    payload = {
        "expansion": _load_expansion_file(args.expansion),
        "variant": args.variant,
        "grid": args.grid,
    }
    result = client.post("/gfun", payload)
    if args.format == "csv":
        _emit_csv(result["csv"], result["config"], args.out)
    else:
        _emit_json(
            {
                "config": result["config"],
                "points": result["points"],
                "values": result["values"],
                "cross_residual": result["cross_residual"],
            },
            args.out,
        )
    return 0


def _cmd_normprobe(client: ServiceClient, args) -> int:
    payload = {
        "op": args.op,
        "p": _floats(args.p),
        "d": _ints(args.dim),
        "degree": args.degree,
        "samples": args.samples,
        "seed": args.seed,
        "t": args.t,
        "alpha0": _floats(args.alpha)[0],
        "beta0": _floats(args.beta)[0],
    }
    result = client.post("/normprobe", payload)
    if args.format == "csv":
        _emit_csv(result["csv"], result["config"], args.out)
    else:
        _emit_json({"config": result["config"], "rows": result["rows"]}, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    handlers = {
        "expand": _cmd_expand,
        "apply": _cmd_apply,
        "verify": _cmd_verify,
        "kernels": _cmd_kernels,
        "gfun": _cmd_gfun,
        "normprobe": _cmd_normprobe,
    }
    try:
        with ServiceClient(args.server) as client:
            return handlers[args.command](client, args)
    except ServiceError as exc:
        sys.stderr.write(f"error: {exc.detail}\n")
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
