"""Stable file layouts for operators, period data and recovery reports.

JSON envelope (``operator.json``)::

    {"n": 2, "N": 16, "route": "series", "norm": 0.14...,
     "blocks": [{"j": 0, "i": 0, "re": [[...]], "im": [[...]]}, ...]}

Blocks are listed row-major over the block grid with 0-based indices; ``j``
is the target map (block row) and ``i`` the source map (block column).
Within a block, ``re[n][m]`` and ``im[n][m]`` hold entry ``M[n, m]``.

CSV (``operator.csv``): the flattened ``nN x nN`` matrix, one matrix row
per line, each cell the string ``"re,im"``. Row ``j*N + n`` and column
``i*N + m`` hold ``M[n, m]`` of block ``(j, i)``.

Floats are written with Python's shortest round-trip ``repr``, so reading
a file back gives the stored values bit for bit, and equal inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .operator import GrunskyBlock, GrunskyOperator, operator_norm
from .period import PeriodDatum, RecoveryReport


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _z(pair) -> complex:
    return complex(pair[0], pair[1])


def dumps(payload) -> str:
    """Deterministic JSON text: fixed key order, no NaN, one top-level
    field (or list item) per line."""
    if isinstance(payload, dict):
        items = [f"{json.dumps(k)}: {dumps_value(v)}" for k, v in payload.items()]
        return "{\n " + ",\n ".join(items) + "\n}\n"
    return dumps_value(payload) + "\n"


def dumps_value(value) -> str:
    if isinstance(value, list) and value and isinstance(value[0], dict):
        return "[\n  " + ",\n  ".join(json.dumps(v, allow_nan=False) for v in value) + "\n ]"
    return json.dumps(value, allow_nan=False)


def operator_to_dict(op: GrunskyOperator, norm: float | None = None) -> dict:
    if norm is None:
        norm = operator_norm(op)
    blocks = []
    for j in range(op.n):
        for i in range(op.n):
            b = op.block(j, i)
            blocks.append({"j": j, "i": i, "re": (b.real + 0.0).tolist(),
                           "im": (b.imag + 0.0).tolist()})
    return {"n": op.n, "N": op.truncation, "route": op.route, "norm": float(norm),
            "blocks": blocks}


def operator_from_dict(d: dict) -> GrunskyOperator:
    n, N = d["n"], d["N"]
    grid: list[list] = [[None] * n for _ in range(n)]
    for b in d["blocks"]:
        m = np.array(b["re"], dtype=float) + 1j * np.array(b["im"], dtype=float)
        if m.shape != (N, N):
            raise ValueError(f"block ({b['j']}, {b['i']}) has shape {m.shape}, expected {(N, N)}")
        grid[b["j"]][b["i"]] = GrunskyBlock(b["j"], b["i"], m)
    if any(x is None for row in grid for x in row):
        raise ValueError("block grid is incomplete")
    return GrunskyOperator(tuple(tuple(row) for row in grid), N, d["route"])


def operator_to_csv(op: GrunskyOperator) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in op.matrix:
        w.writerow([f"{float(z.real) + 0.0!r},{float(z.imag) + 0.0!r}" for z in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [[_z([float(x) for x in cell.split(",")]) for cell in row] for row in csv.reader(io.StringIO(text))]
    return np.array(rows, dtype=complex)


def period_to_dict(datum: PeriodDatum, norm: float | None = None) -> dict:
    out = operator_to_dict(datum.grunsky, norm)
    out["normalized_centers"] = [_c(p) for p in datum.normalized_centers]
    return out


def period_from_dict(d: dict) -> PeriodDatum:
    return PeriodDatum([_z(p) for p in d["normalized_centers"]], operator_from_dict(d))


def recovery_to_dict(report: RecoveryReport) -> dict:
    out = {
        "dprime": [_c(v) for v in report.dprime],
        "dsecond": [_c(v) for v in report.dsecond],
        "schwarzian_at_zero": [_c(v) for v in report.schwarzian_at_zero],
        "residuals": {k: float(report.residuals[k]) for k in sorted(report.residuals)},
    }
    if report.sign_spread is not None:
        out["sign_spread"] = [float(s) for s in report.sign_spread]
    return out


def recovery_from_dict(d: dict) -> RecoveryReport:
    spread = d.get("sign_spread")
    return RecoveryReport(
        [_z(v) for v in d["dprime"]],
        [_z(v) for v in d["dsecond"]],
        [_z(v) for v in d["schwarzian_at_zero"]],
        dict(d.get("residuals", {})),
        tuple(spread) if spread is not None else None,
    )
