"""Command-line front end.

Subcommands: ``model`` (classification and model constants), ``eigen``
(principal eigenvalues), ``curvature`` (curvature report for a collar), and
``verify`` (run a config-driven check suite, emit JSON and optional CSV).

Exit codes: 0 success (verify: all applicable checks pass), 1 verify found a
failing check, 2 invalid flags or config. All numeric output is printed with
17 significant digits; JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import checks as checks_mod
from . import manifolds as mf
from .config import build_manifolds, load_config
from .config import run as run_config
from .eigen import free_eigenvalue, model_eigenvalue
from .errors import CollarGeoError, ConfigError
from .models import (
    ball_radius,
    classify,
    collar_model_volume,
    kasue_constant,
    model_critical,
)

CSV_COLUMNS = (
    "check",
    "manifold",
    "p",
    "N",
    "kappa",
    "lambda",
    "D",
    "hypothesis_margin",
    "conclusion_margin",
    "pass",
)


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    return f"{x:.17g}"


def emit_json(obj, indent: int = 0) -> str:
    """Serialize reports to JSON with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {emit_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{emit_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj)}")


def _float_or_inf(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collargeo",
        description="Comparison-geometry model constants, eigenvalues, and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="classification and model constants")
    p_model.add_argument("--kappa", type=float, required=True)
    p_model.add_argument("--lambda", dest="lam", type=float, required=True)
    p_model.add_argument("--N", type=_float_or_inf)
    p_model.add_argument("--r", type=float, help="radius for the comparison volume")
    p_model.add_argument("--D", type=_float_or_inf, help="depth for the tail constant")

    p_eigen = sub.add_parser("eigen", help="principal p-Laplacian eigenvalue")
    p_eigen.add_argument("--p", type=float, required=True)
    p_eigen.add_argument("--D", type=float, required=True)
    p_eigen.add_argument("--free", action="store_true", help="constant density (N = inf)")
    p_eigen.add_argument("--N", type=_float_or_inf)
    p_eigen.add_argument("--kappa", type=float)
    p_eigen.add_argument("--lambda", dest="lam", type=float)

    p_curv = sub.add_parser("curvature", help="curvature report for a collar")
    p_curv.add_argument("--config", help="suite config defining the manifold")
    p_curv.add_argument("--manifold", help="manifold name in the config")
    p_curv.add_argument("--kind", choices=("rigidity", "product"), help="inline manifold")
    p_curv.add_argument("--n", type=int, default=3)
    p_curv.add_argument("--N", type=_float_or_inf)
    p_curv.add_argument("--kappa", type=float, default=0.0)
    p_curv.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_curv.add_argument("--L", type=float, default=1.0)
    p_curv.add_argument("--grid", type=int, default=256)

    p_verify = sub.add_parser("verify", help="run a verification suite config")
    p_verify.add_argument("config", help="path to the TOML suite config")
    p_verify.add_argument("--json", dest="json_out", help="write the JSON report here")
    p_verify.add_argument("--csv", dest="csv_out", help="write the CSV table here")
    p_verify.add_argument("--threads", type=int, default=None)
    return parser


def cmd_model(args) -> int:
    record = {
        "class": classify(args.kappa, args.lam).value,
        "c_ball": ball_radius(args.kappa, args.lam),
        "d_model": model_critical(args.kappa, args.lam),
        "s_N_at_r": None,
        "kasue_at_D": None,
    }
    if args.N is not None and args.r is not None:
        record["s_N_at_r"] = collar_model_volume(args.N, args.kappa, args.lam, args.r)
    if args.N is not None and args.D is not None:
        record["kasue_at_D"] = kasue_constant(args.N, args.kappa, args.lam, args.D)
    print(emit_json(record))
    return 0


def cmd_eigen(args) -> int:
    if args.free:
        result = free_eigenvalue(args.p, args.D)
    else:
        missing = [k for k in ("N", "kappa", "lam") if getattr(args, k) is None]
        if missing:
            raise ConfigError(f"eigen needs --free or all of --N --kappa --lambda (missing {missing})")
        result = model_eigenvalue(args.p, args.N, args.kappa, args.lam, args.D)
    print(
        emit_json(
            {
                "mu": result.mu,
                "residual": result.endpoint_residual,
                "iterations": result.iterations,
            }
        )
    )
    return 0


def cmd_curvature(args) -> int:
    if args.config is not None:
        if args.manifold is None:
            raise ConfigError("curvature --config needs --manifold")
        table = build_manifolds(load_config(args.config))
        if args.manifold not in table:
            raise ConfigError(f"unknown manifold {args.manifold!r}; defined: {sorted(table)}")
        M = table[args.manifold]
    elif args.kind == "rigidity":
        if args.N is None:
            raise ConfigError("curvature --kind rigidity needs --N")
        M = mf.make_rigidity_model(args.n, args.N, args.kappa, args.lam, args.L)
    elif args.kind == "product":
        M = mf.make_product(args.n, args.L)
    else:
        raise ConfigError("curvature needs --config/--manifold or --kind")
    N = args.N if args.N is not None else float(args.n)
    report = mf.curvature_margin(M, N, args.kappa, grid=args.grid)
    print(
        emit_json(
            {
                "margin": report.margin,
                "h_f_0": report.h_f_0,
                "h_f_L": report.h_f_L,
                "radial_min": float(np.min(report.radial_samples)),
                "fiber_min": float(np.min(report.fiber_samples)),
                "samples": len(report.ts),
                "assumptions": list(report.assumptions),
            }
        )
    )
    return 0


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def reports_to_csv(reports) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rep in reports:
        params = rep.params
        row = [
            rep.check_name,
            params.get("manifold"),
            params.get("p"),
            params.get("N"),
            params.get("kappa"),
            params.get("lam"),
            params.get("D", params.get("L")),
            rep.hypothesis_margin,
            rep.conclusion_margin,
            rep.passed,
        ]
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_params(params: dict) -> dict:
    return {("lambda" if k == "lam" else k): v for k, v in params.items()}


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    reports = run_config(cfg, threads=args.threads)
    records = []
    for rep in reports:
        record = rep.to_record()
        record["params"] = _json_params(record["params"])
        records.append(record)
    text = emit_json(records)
    print(text)
    json_path = args.json_out or cfg.output.json
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    csv_path = args.csv_out or cfg.output.csv
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(reports_to_csv(reports))
    n_fail = sum(1 for r in reports if r.failed)
    n_na = sum(1 for r in reports if r.status == checks_mod.STATUS_NOT_APPLICABLE)
    print(
        f"{len(reports)} checks: {len(reports) - n_fail - n_na} passed, "
        f"{n_fail} failed, {n_na} not applicable",
        file=sys.stderr,
    )
    return 1 if n_fail else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "model": cmd_model,
        "eigen": cmd_eigen,
        "curvature": cmd_curvature,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except CollarGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
