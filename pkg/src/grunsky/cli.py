"""Command line front end.

Usage::

    grunsky <command> --config run.json [--out DIR] [--order N] [--route series|quadrature]

Commands: ``compute``, ``norm``, ``invariance``, ``recover``, ``holomorphy``,
``sweep``, ``zoo-list``. Exit status is 0 on success, 1 when the input is
rejected, 2 when a numerical procedure fails. Error messages start with
the config field they refer to, e.g. ``rigging[1].params.c: ...``.

Config schema (JSON)::

    {
      "rigging": [                                  # required except zoo-list
        {"kind": "affine_disk", "center": 0, "params": {"radius": 1}},
        {"kind": "quadratic", "center": [3, 0], "params": {"c": 0.2}},
        {"kind": "joukowski_ellipse", "center": "3j", "params": {"c": [0, 0.3]}},
        {"kind": "raw_series", "center": -3, "params": {"coeffs": [1, 0.1]}}
      ],
      "order": 16,                                  # truncation N
      "route": "series",                            # or "quadrature"
      "quadrature": {"radial": 48, "angular": 128},
      "samples": 256,                               # boundary samples for validation
      "mobius": [{"a": 2, "b": 0, "c": 0, "d": 1}], # invariance; default: 5 standard ones
      "family": {"index": 0, "phi": [0, 1], "q_slope": 0, "h": 0.001},
      "sweep": [4, 8, 16],                          # sweep orders
      "out": "grunsky-out"
    }

Complex numbers may be given as a number, a ``[re, im]`` pair or a string
such as ``"1-2j"``. ``raw_series`` coefficients start at ``z**1``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import export
from .bergman import build_quadrature
from .errors import ConfigParse, GrunskyError, NumericalError, OverlappingImages, PoleInImage
from .maps import ConformalMapModel, MobiusTransform, PreSchwarzianFamily, Rigging, validate_rigging
from .operator import ROUTES, assemble, operator_norm, series_order, truncation_sweep
from .period import (
    check_mobius_invariance,
    holomorphy_order,
    normalize_rigging,
    period,
    recover_jets,
)
from .zoo import catalog, default_transforms

COMMANDS = ("compute", "norm", "invariance", "recover", "holomorphy", "sweep", "zoo-list")


@dataclass
class RunConfig:
    maps: list[ConformalMapModel] = field(default_factory=list)
    order: int = 16
    route: str = "series"
    radial: int = 48
    angular: int = 128
    samples: int = 256
    mobius: list[MobiusTransform] | None = None
    family: dict | None = None
    sweep: list[int] | None = None
    out: str = "grunsky-out"


# --------------------------------------------------------------------------
# config parsing

def _complex(value, where: str) -> complex:
    if isinstance(value, bool):
        raise ConfigParse(where, "expected a complex number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigParse(where, f"expected a complex number, got {value!r}")


def _int(value, where: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigParse(where, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigParse(where, f"must be >= {minimum}, got {value}")
    return value


def _map(spec, where: str) -> ConformalMapModel:
    if not isinstance(spec, dict):
        raise ConfigParse(where, "expected an object with kind, center and params")
    kind = spec.get("kind")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise ConfigParse(f"{where}.params", "expected an object")
    center = _complex(spec.get("center", 0), f"{where}.center")

    def param(name):
        if name not in params:
            raise ConfigParse(f"{where}.params.{name}", "missing")
        return params[name]

    if kind == "affine_disk":
        r = param("radius")
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise ConfigParse(f"{where}.params.radius", f"expected a real number, got {r!r}")
        with _field(f"{where}.params.radius"):
            return ConformalMapModel.affine_disk(r, center)
    if kind in ("quadratic", "joukowski_ellipse"):
        c = _complex(param("c"), f"{where}.params.c")
        with _field(f"{where}.params.c"):
            return getattr(ConformalMapModel, kind)(c, center)
    if kind == "raw_series":
        raw = param("coeffs")
        if not isinstance(raw, list) or not raw:
            raise ConfigParse(f"{where}.params.coeffs", "expected a non-empty list")
        coeffs = [_complex(v, f"{where}.params.coeffs[{k}]") for k, v in enumerate(raw)]
        with _field(f"{where}.params.coeffs"):
            return ConformalMapModel.from_series([0j] + coeffs, center)
    raise ConfigParse(f"{where}.kind", f"unknown map kind {kind!r}")


def parse_config(data: dict, overrides: dict | None = None, need_rigging: bool = True) -> RunConfig:
    """Build a :class:`RunConfig` from parsed JSON; ``overrides`` replace
    scalar fields (``order``, ``route``, ``out``)."""
    if not isinstance(data, dict):
        raise ConfigParse("<root>", "expected a JSON object")
    data = {**data, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    cfg = RunConfig()
    known = {"rigging", "order", "route", "quadrature", "samples", "mobius", "family", "sweep", "out"}
    for key in sorted(set(data) - known):
        raise ConfigParse(key, "unknown field")

    if "order" in data:
        cfg.order = _int(data["order"], "order")
    if "route" in data:
        if data["route"] not in ROUTES:
            raise ConfigParse("route", f"expected one of {', '.join(ROUTES)}, got {data['route']!r}")
        cfg.route = data["route"]
    if "samples" in data:
        cfg.samples = _int(data["samples"], "samples", 64)
    if "out" in data:
        if not isinstance(data["out"], str):
            raise ConfigParse("out", "expected a path string")
        cfg.out = data["out"]
    quad = data.get("quadrature", {})
    if not isinstance(quad, dict):
        raise ConfigParse("quadrature", "expected an object with radial and angular")
    cfg.radial = _int(quad.get("radial", cfg.radial), "quadrature.radial", 4)
    cfg.angular = _int(quad.get("angular", cfg.angular), "quadrature.angular", 8)

    rig = data.get("rigging")
    if rig is None:
        if need_rigging:
            raise ConfigParse("rigging", "missing")
    elif not isinstance(rig, list) or not rig:
        raise ConfigParse("rigging", "expected a non-empty list of maps")
    else:
        cfg.maps = [_map(spec, f"rigging[{k}]") for k, spec in enumerate(rig)]

    if "mobius" in data:
        if not isinstance(data["mobius"], list) or not data["mobius"]:
            raise ConfigParse("mobius", "expected a non-empty list of {a, b, c, d}")
        cfg.mobius = []
        for k, t in enumerate(data["mobius"]):
            where = f"mobius[{k}]"
            if not isinstance(t, dict):
                raise ConfigParse(where, "expected an object with a, b, c, d")
            coef = [_complex(t.get(s, 0), f"{where}.{s}") for s in "abcd"]
            with _field(where):
                cfg.mobius.append(MobiusTransform(*coef))

    if "family" in data:
        fam = data["family"]
        if not isinstance(fam, dict):
            raise ConfigParse("family", "expected an object")
        index = _int(fam.get("index", 0), "family.index", 0)
        if cfg.maps and index >= len(cfg.maps):
            raise ConfigParse("family.index", f"no map with index {index}")
        phi = fam.get("phi", [0])
        if not isinstance(phi, list) or not phi:
            raise ConfigParse("family.phi", "expected a non-empty list of coefficients")
        h = fam.get("h", 1e-3)
        if isinstance(h, bool) or not isinstance(h, (int, float)) or not h > 0:
            raise ConfigParse("family.h", f"expected a positive step, got {h!r}")
        cfg.family = {
            "index": index,
            "phi": [_complex(v, f"family.phi[{k}]") for k, v in enumerate(phi)],
            "q_slope": _complex(fam.get("q_slope", 0), "family.q_slope"),
            "h": float(h),
        }

    if "sweep" in data:
        orders = data["sweep"]
        if not isinstance(orders, list) or not orders:
            raise ConfigParse("sweep", "expected a non-empty list of orders")
        cfg.sweep = [_int(v, f"sweep[{k}]") for k, v in enumerate(orders)]
        if any(a >= b for a, b in zip(cfg.sweep, cfg.sweep[1:])):
            raise ConfigParse("sweep", "orders must be strictly increasing")
    return cfg


def load_config(path: str | Path, overrides: dict | None = None,
                need_rigging: bool = True) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParse("--config", f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse("--config", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_config(data, overrides, need_rigging)


@contextlib.contextmanager
def _field(name: str):
    """Tag package errors escaping the block with the config field at fault."""
    try:
        yield
    except GrunskyError as exc:
        if not hasattr(exc, "field"):
            exc.field = name
        raise


# --------------------------------------------------------------------------
# commands

def _rigging(cfg: RunConfig) -> Rigging:
    try:
        return validate_rigging(cfg.maps, cfg.samples)
    except OverlappingImages as exc:
        exc.field = f"rigging[{exc.i}], rigging[{exc.j}]"
        raise


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _assemble(cfg: RunConfig, rigging: Rigging, N: int | None = None):
    quad = build_quadrature(cfg.radial, cfg.angular) if cfg.route == "quadrature" else None
    with _field("rigging"):
        return assemble(rigging, N or cfg.order, cfg.route, quad)


def cmd_compute(cfg: RunConfig, out: Path) -> str:
    rigging = _rigging(cfg)
    op = _assemble(cfg, rigging)
    norm = operator_norm(op)
    _write(out, "operator.json", export.dumps(export.operator_to_dict(op, norm)))
    _write(out, "operator.csv", export.operator_to_csv(op))
    lines = [f"n = {op.n}, N = {op.truncation}, route = {op.route}",
             f"disjointness margin = {rigging.disjointness_margin:.6g}",
             f"operator norm = {norm!r}",
             "largest |entry| per block (row j = target, column i = source):"]
    for j in range(op.n):
        lines.append("  " + "  ".join(f"{np.max(np.abs(op.block(j, i))):.6e}" for i in range(op.n)))
    return "\n".join(lines)


def _sweep_table(cfg, rigging, orders):
    quad = build_quadrature(cfg.radial, cfg.angular) if cfg.route == "quadrature" else None
    with _field("sweep"):
        return truncation_sweep(rigging, orders, cfg.route, quad)


def cmd_norm(cfg: RunConfig, out: Path) -> str:
    rigging = _rigging(cfg)
    orders = cfg.sweep or [cfg.order]
    table = _sweep_table(cfg, rigging, orders)
    payload = {"n": rigging.n, "route": cfg.route,
               "disjointness_margin": rigging.disjointness_margin,
               "norms": [{"N": N, "norm": v} for N, v in table]}
    _write(out, "norm.json", export.dumps(payload))
    return "\n".join(["N  norm"] + [f"{N}  {v!r}" for N, v in table])


def cmd_sweep(cfg: RunConfig, out: Path) -> str:
    rigging = _rigging(cfg)
    orders = cfg.sweep or sorted({*(2**k for k in range(1, 7) if 2**k < cfg.order), cfg.order})
    table = _sweep_table(cfg, rigging, orders)
    payload = {"n": rigging.n, "route": cfg.route,
               "sweep": [{"N": N, "norm": v} for N, v in table]}
    _write(out, "sweep.json", export.dumps(payload))
    _write(out, "sweep.csv", "N,norm\n" + "".join(f"{N},{v!r}\n" for N, v in table))
    return "\n".join(["N  norm"] + [f"{N}  {v!r}" for N, v in table])


def cmd_invariance(cfg: RunConfig, out: Path) -> str:
    rigging = _rigging(cfg)
    if cfg.mobius is not None:
        transforms = {f"mobius[{k}]": T for k, T in enumerate(cfg.mobius)}
    else:
        transforms = default_transforms(rigging)
    rows = []
    for name, T in transforms.items():
        try:
            with _field(name):
                dev = check_mobius_invariance(rigging, T, cfg.order)
        except PoleInImage as exc:
            exc.field = f"{name}, rigging[{exc.i}]"
            raise
        rows.append({"transform": name, "coefficients": [export._c(v) for v in (T.a, T.b, T.c, T.d)],
                     "deviation": dev})
    worst = max(r["deviation"] for r in rows)
    payload = {"n": rigging.n, "N": cfg.order, "max_deviation": worst, "transforms": rows}
    _write(out, "invariance.json", export.dumps(payload))
    return "\n".join([f"max deviation = {worst!r}"]
                     + [f"  {r['transform']}: {r['deviation']!r}" for r in rows])


def cmd_recover(cfg: RunConfig, out: Path) -> str:
    rigging = _rigging(cfg)
    with _field("rigging"):
        normalized, _ = normalize_rigging(rigging)
        datum = period(rigging, cfg.order, cfg.route)
        report = recover_jets(datum.grunsky, datum.normalized_centers, normalized)
    payload = {"period": export.period_to_dict(datum), "recovery": export.recovery_to_dict(report)}
    _write(out, "recovery.json", export.dumps(payload))
    lines = [f"normalized centers: {[_fmt(p) for p in normalized.centers]}"]
    for k in range(rigging.n):
        parts = [f"S(0) = {_fmt(report.schwarzian_at_zero[k])}"]
        if report.dprime:
            parts = [f"f'(0) = {_fmt(report.dprime[k])}", f"f''(0) = {_fmt(report.dsecond[k])}"] + parts
        lines.append(f"map {k}: " + ", ".join(parts))
    lines += [f"residual {k} = {v:.3e}" for k, v in sorted(report.residuals.items())]
    return "\n".join(lines)


def cmd_holomorphy(cfg: RunConfig, out: Path) -> str:
    if cfg.family is None:
        raise ConfigParse("family", "missing (holomorphy needs a family section)")
    rigging = _rigging(cfg)
    spec = cfg.family
    j = spec["index"]
    if j >= rigging.n:
        raise ConfigParse("family.index", f"no map with index {j}")
    with _field("family"):
        fam = PreSchwarzianFamily.from_map(rigging.maps[j], spec["phi"], spec["q_slope"],
                                           series_order(cfg.order))
        result = holomorphy_order(j, rigging, fam, spec["h"], cfg.order)
        scale = float(np.max(np.abs(assemble(rigging, cfg.order).matrix)))
    payload = {"index": j, "N": cfg.order, "matrix_scale": scale, **result}
    _write(out, "holomorphy.json", export.dumps(payload))
    return "\n".join([f"h = {result['h']!r}",
                      f"residual(h) = {result['residual_h']!r}",
                      f"residual(h/2) = {result['residual_h2']!r}",
                      f"ratio = {result['ratio']!r}",
                      f"observed order = {result['observed_order']!r}"])


HANDLERS = {
    "compute": cmd_compute,
    "norm": cmd_norm,
    "invariance": cmd_invariance,
    "recover": cmd_recover,
    "holomorphy": cmd_holomorphy,
    "sweep": cmd_sweep,
}


def run(command: str, cfg: RunConfig | None, out: Path | None = None) -> int:
    """Run one command; returns the exit status. Errors go to stderr."""
    try:
        if command == "zoo-list":
            print(catalog())
            return 0
        out = Path(out if out is not None else cfg.out)
        report = HANDLERS[command](cfg, out)
        _write(out, "report.txt", f"grunsky {command}\n{report}\n")
        print(report)
        return 0
    except GrunskyError as exc:
        return _fail(exc)


def _fail(exc: GrunskyError) -> int:
    where = getattr(exc, "field", None)
    msg = str(exc) if isinstance(exc, ConfigParse) or where is None else f"{where}: {exc}"
    print(f"grunsky: error: {msg}", file=sys.stderr)
    return 2 if isinstance(exc, NumericalError) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grunsky",
                                description="Generalized Grunsky operators of rigged disk maps.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", help="output directory (overrides config 'out')")
    p.add_argument("--order", type=int, help="truncation N (overrides config 'order')")
    p.add_argument("--route", choices=ROUTES, help="overrides config 'route'")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "zoo-list" and args.config is None:
        return run("zoo-list", None)
    if args.config is None:
        return _fail(ConfigParse("--config", f"required for {args.command}"))
    overrides = {"order": args.order, "route": args.route, "out": args.out}
    try:
        cfg = load_config(args.config, overrides, need_rigging=args.command != "zoo-list")
    except GrunskyError as exc:
        return _fail(exc)
    return run(args.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
