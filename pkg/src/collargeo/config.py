"""Suite configuration: TOML parsing, validation, and serialization.

The format is plain TOML: a ``[manifolds.<name>]`` section per collar, an
array of ``[[checks]]`` tables, an optional ``[sweep]`` section whose arrays
are expanded as a Cartesian grid over templated checks, and an ``[output]``
section with report paths. ``serialize_config`` writes the same subset back
out; parse(serialize(config)) reproduces the config exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python 3.10
    import tomli as tomllib

from . import manifolds as mf
from .checks import CHECKS, CheckRequest
from .errors import ConfigError, DomainError
from .models import c_bar
from .profiles import ConstantProfile, ExprProfile, TableProfile

MANIFOLD_KINDS = ("model", "rigidity", "product", "custom")

# config key -> check kwarg (everything else passes through unchanged)
_RENAME = {"lambda": "lam"}
_RENAME_BACK = {"lam": "lambda"}

_CHECK_KEYS = {
    "theta_comparison": {"N", "lambda", "kappa", "grid", "tolerance"},
    "heintze_karcher": {"N", "lambda", "kappa", "r_grid", "tolerance"},
    "bishop_gromov": {"N", "lambda", "kappa", "pairs", "ratio_grid", "tolerance"},
    "inscribed_radius": {"N", "lambda", "kappa", "tolerance"},
    "eigenvalue_bound": {"p", "N", "lambda", "kappa", "tolerance"},
    "kasue_eigen_bounds": {"p", "N", "lambda", "kappa", "D", "tolerance"},
    "spectrum_limit": {"p", "N", "lambda", "D_grid", "tolerance"},
    "domain_volume": {"N", "lambda", "kappa", "a", "b", "tolerance"},
    "volume_growth": {"N", "lambda", "kappa", "r_grid", "tolerance"},
}
_SWEEP_KEYS = ("p", "N", "kappa", "lambda", "D")


@dataclass
class ManifoldSpec:
    name: str
    kind: str
    n: int = 3
    N: float | None = None
    kappa: float = 0.0
    lam: float = 0.0
    L: float = 1.0
    f0: float = 0.0
    second_boundary: bool = False
    fiber_einstein: float | None = None
    fiber_volume: float = 1.0
    w: str | None = None
    f: str | None = None
    w_table: list | None = None
    f_table: list | None = None


@dataclass
class SweepSpec:
    grids: dict = field(default_factory=dict)
    checks: list[CheckRequest] = field(default_factory=list)


@dataclass
class OutputSpec:
    json: str | None = None
    csv: str | None = None


@dataclass
class SuiteConfig:
    manifolds: list[ManifoldSpec] = field(default_factory=list)
    checks: list[CheckRequest] = field(default_factory=list)
    sweep: SweepSpec | None = None
    output: OutputSpec = field(default_factory=OutputSpec)


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", where)
    return float(value)


def _parse_manifold(name: str, table: dict) -> ManifoldSpec:
    where = f"manifolds.{name}"
    if not isinstance(table, dict):
        raise ConfigError("manifold entry must be a table", where)
    kind = table.get("kind")
    if kind not in MANIFOLD_KINDS:
        raise ConfigError(f"kind must be one of {MANIFOLD_KINDS}, got {kind!r}", where)
    known = {
        "kind", "n", "N", "kappa", "lambda", "L", "f0", "second_boundary",
        "fiber_einstein", "fiber_volume", "w", "f", "w_table", "f_table",
    }
    for key in table:
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", where)
    spec = ManifoldSpec(
        name=name,
        kind=kind,
        n=int(table.get("n", 3)),
        N=_as_float(table["N"], f"{where}.N") if "N" in table else None,
        kappa=_as_float(table.get("kappa", 0.0), f"{where}.kappa"),
        lam=_as_float(table.get("lambda", 0.0), f"{where}.lambda"),
        L=_as_float(table.get("L", 1.0), f"{where}.L"),
        f0=_as_float(table.get("f0", 0.0), f"{where}.f0"),
        second_boundary=bool(table.get("second_boundary", False)),
        fiber_einstein=(
            _as_float(table["fiber_einstein"], f"{where}.fiber_einstein")
            if "fiber_einstein" in table
            else None
        ),
        fiber_volume=_as_float(table.get("fiber_volume", 1.0), f"{where}.fiber_volume"),
        w=table.get("w"),
        f=table.get("f"),
        w_table=table.get("w_table"),
        f_table=table.get("f_table"),
    )
    if spec.n < 2:
        raise ConfigError(f"n must be >= 2, got {spec.n}", f"{where}.n")
    if spec.kind in ("model", "rigidity"):
        cb = c_bar(spec.kappa, spec.lam)
        if spec.L >= cb:
            raise ConfigError(
                f"L = {spec.L} violates L < truncation radius {cb} for "
                f"(kappa, lambda) = ({spec.kappa}, {spec.lam})",
                f"{where}.L",
            )
    if spec.kind == "rigidity":
        if spec.N is None:
            raise ConfigError("rigidity manifolds need N", f"{where}.N")
        if not (spec.n <= spec.N < math.inf):
            raise ConfigError(f"need n <= N < inf, got N = {spec.N}", f"{where}.N")
    if spec.kind == "custom" and spec.w is None and spec.w_table is None:
        raise ConfigError("custom manifolds need w or w_table", where)
    return spec


def _parse_check(index: int, table: dict, manifold_names: set[str], where: str) -> CheckRequest:
    if not isinstance(table, dict):
        raise ConfigError("check entry must be a table", where)
    name = table.get("name")
    if name not in CHECKS:
        raise ConfigError(
            f"unknown check {name!r}; known checks: {sorted(CHECKS)}", f"{where}.name"
        )
    needs_manifold = CHECKS[name][1]
    manifold = table.get("manifold")
    if needs_manifold:
        if manifold is None:
            raise ConfigError(f"check {name!r} needs a manifold", f"{where}.manifold")
        if manifold not in manifold_names:
            raise ConfigError(
                f"unknown manifold {manifold!r}; defined: {sorted(manifold_names)}",
                f"{where}.manifold",
            )
    elif manifold is not None:
        raise ConfigError(f"check {name!r} takes no manifold", f"{where}.manifold")
    params = {}
    allowed = _CHECK_KEYS[name]
    for key, value in table.items():
        if key in ("name", "manifold"):
            continue
        if key not in allowed:
            raise ConfigError(
                f"unknown parameter {key!r} for check {name!r}; allowed: {sorted(allowed)}",
                f"{where}.{key}",
            )
        params[_RENAME.get(key, key)] = value
    return CheckRequest(name=name, manifold=manifold, params=params)


def parse_config(text: str) -> SuiteConfig:
    """Parse and validate a suite config; raises ConfigError with a line
    number (syntax) or key path (semantics)."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax error: {exc}") from exc

    for key in raw:
        if key not in ("manifolds", "checks", "sweep", "output"):
            raise ConfigError(f"unknown top-level section {key!r}", key)

    manifolds = []
    raw_manifolds = raw.get("manifolds", {})
    if not isinstance(raw_manifolds, dict):
        raise ConfigError("manifolds must be a table of tables", "manifolds")
    for name, table in raw_manifolds.items():
        manifolds.append(_parse_manifold(name, table))
    names = {m.name for m in manifolds}

    checks = []
    for i, table in enumerate(raw.get("checks", [])):
        checks.append(_parse_check(i, table, names, f"checks[{i}]"))

    sweep = None
    if "sweep" in raw:
        raw_sweep = raw["sweep"]
        if not isinstance(raw_sweep, dict):
            raise ConfigError("sweep must be a table", "sweep")
        grids = {}
        for key, value in raw_sweep.items():
            if key == "checks":
                continue
            if key not in _SWEEP_KEYS:
                raise ConfigError(
                    f"unknown sweep axis {key!r}; allowed: {_SWEEP_KEYS}", f"sweep.{key}"
                )
            if not isinstance(value, list) or not value:
                raise ConfigError("sweep grids must be nonempty arrays", f"sweep.{key}")
            grids[key] = [_as_float(v, f"sweep.{key}") for v in value]
        templates = [
            _parse_check(i, table, names, f"sweep.checks[{i}]")
            for i, table in enumerate(raw_sweep.get("checks", []))
        ]
        if not grids:
            raise ConfigError("sweep section needs at least one grid axis", "sweep")
        if not templates:
            raise ConfigError("sweep section needs at least one templated check", "sweep")
        sweep = SweepSpec(grids=grids, checks=templates)

    output = OutputSpec()
    if "output" in raw:
        raw_out = raw["output"]
        for key in raw_out:
            if key not in ("json", "csv"):
                raise ConfigError(f"unknown output key {key!r}", f"output.{key}")
        output = OutputSpec(json=raw_out.get("json"), csv=raw_out.get("csv"))

    return SuiteConfig(manifolds=manifolds, checks=checks, sweep=sweep, output=output)


def load_config(path: str) -> SuiteConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text)


def expand_requests(cfg: SuiteConfig) -> list[CheckRequest]:
    """Declared checks followed by the sweep grid expansion, in declaration
    order (grids expand odometer-style, last axis fastest)."""
    requests = list(cfg.checks)
    if cfg.sweep is not None:
        axes = [k for k in _SWEEP_KEYS if k in cfg.sweep.grids]
        combos: list[dict] = [{}]
        for axis in axes:
            combos = [{**c, axis: v} for c in combos for v in cfg.sweep.grids[axis]]
        for template in cfg.sweep.checks:
            allowed = _CHECK_KEYS[template.name]
            for combo in combos:
                params = dict(template.params)
                for key, value in combo.items():
                    if key in allowed:
                        params[_RENAME.get(key, key)] = value
                requests.append(
                    CheckRequest(name=template.name, manifold=template.manifold, params=params)
                )
    return requests


def build_manifold(spec: ManifoldSpec) -> mf.WarpedManifold:
    """Instantiate a parsed manifold spec."""
    where = f"manifolds.{spec.name}"
    try:
        if spec.kind == "model":
            return mf.make_rigidity_model(
                spec.n, float(spec.n), spec.kappa, spec.lam, spec.L, spec.f0, spec.fiber_volume
            )
        if spec.kind == "rigidity":
            return mf.make_rigidity_model(
                spec.n, spec.N, spec.kappa, spec.lam, spec.L, spec.f0, spec.fiber_volume
            )
        if spec.kind == "product":
            fiber = mf.FiberSpec(
                dim=spec.n - 1,
                einstein_constant=0.0 if spec.fiber_einstein is None else spec.fiber_einstein,
                total_volume=spec.fiber_volume,
            )
            return mf.make_product(spec.n, spec.L, fiber)
        # custom
        def profile(expr, table, default):
            if table is not None:
                ts = [row[0] for row in table]
                ys = [row[1] for row in table]
                return TableProfile(ts, ys)
            if expr is not None:
                return ExprProfile(expr)
            return default
        w = profile(spec.w, spec.w_table, None)
        f = profile(spec.f, spec.f_table, ConstantProfile(0.0))
        fiber = mf.FiberSpec(
            dim=spec.n - 1,
            einstein_constant=0.0 if spec.fiber_einstein is None else spec.fiber_einstein,
            total_volume=spec.fiber_volume,
        )
        return mf.build(spec.n, fiber, spec.L, w, f, spec.second_boundary)
    except DomainError as exc:
        raise ConfigError(str(exc), where) from exc


def build_manifolds(cfg: SuiteConfig) -> dict[str, mf.WarpedManifold]:
    return {spec.name: build_manifold(spec) for spec in cfg.manifolds}


def run(cfg: SuiteConfig, threads: int | None = None):
    """Build the config's manifolds and run its checks (sweep included)."""
    from .checks import run_suite

    return run_suite(build_manifolds(cfg), expand_requests(cfg), threads=threads)


# --- serialization -----------------------------------------------------------


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize value {value!r}")


def _check_lines(req: CheckRequest, header: str) -> list[str]:
    lines = [f"[[{header}]]", f'name = "{req.name}"']
    if req.manifold is not None:
        lines.append(f'manifold = "{req.manifold}"')
    for key, value in req.params.items():
        lines.append(f"{_RENAME_BACK.get(key, key)} = {_toml_value(value)}")
    lines.append("")
    return lines


def serialize_config(cfg: SuiteConfig) -> str:
    """Write a SuiteConfig back to TOML; parse_config inverts this exactly."""
    lines: list[str] = []
    for spec in cfg.manifolds:
        lines.append(f"[manifolds.{spec.name}]")
        lines.append(f'kind = "{spec.kind}"')
        lines.append(f"n = {spec.n}")
        if spec.N is not None:
            lines.append(f"N = {_toml_value(spec.N)}")
        lines.append(f"kappa = {_toml_value(spec.kappa)}")
        lines.append(f"lambda = {_toml_value(spec.lam)}")
        lines.append(f"L = {_toml_value(spec.L)}")
        if spec.f0 != 0.0:
            lines.append(f"f0 = {_toml_value(spec.f0)}")
        if spec.second_boundary:
            lines.append("second_boundary = true")
        if spec.fiber_einstein is not None:
            lines.append(f"fiber_einstein = {_toml_value(spec.fiber_einstein)}")
        if spec.fiber_volume != 1.0:
            lines.append(f"fiber_volume = {_toml_value(spec.fiber_volume)}")
        for key in ("w", "f"):
            value = getattr(spec, key)
            if value is not None:
                lines.append(f"{key} = {_toml_value(value)}")
        for key in ("w_table", "f_table"):
            value = getattr(spec, key)
            if value is not None:
                lines.append(f"{key} = {_toml_value(value)}")
        lines.append("")
    for req in cfg.checks:
        lines.extend(_check_lines(req, "checks"))
    if cfg.sweep is not None:
        lines.append("[sweep]")
        for key in _SWEEP_KEYS:
            if key in cfg.sweep.grids:
                lines.append(f"{key} = {_toml_value(cfg.sweep.grids[key])}")
        lines.append("")
        for req in cfg.sweep.checks:
            lines.extend(_check_lines(req, "sweep.checks"))
    if cfg.output.json or cfg.output.csv:
        lines.append("[output]")
        if cfg.output.json:
            lines.append(f"json = {_toml_value(cfg.output.json)}")
        if cfg.output.csv:
            lines.append(f"csv = {_toml_value(cfg.output.csv)}")
        lines.append("")
    return "\n".join(lines)
