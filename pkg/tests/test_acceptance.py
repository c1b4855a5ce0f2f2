"""Acceptance criteria, one test each, at their stated tolerances.

Every test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary, and running this file directly prints them too.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from grunsky.bergman import build_quadrature
from grunsky.maps import ConformalMapModel as F, validate_rigging
from grunsky.operator import assemble, block_quadrature, operator_norm, truncation_sweep
from grunsky.period import (
    check_mobius_invariance,
    holomorphy_order,
    normalize_rigging,
    period,
    recover_jets,
)
from grunsky.zoo import battery, default_transforms, families

RESULTS: dict[int, str] = {}


def record(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def riggings():
    return battery()


def test_criterion_1_norm_bound(riggings):
    start = time.perf_counter()
    norms = {name: operator_norm(assemble(r, 32)) for name, r in riggings.items()}
    elapsed = time.perf_counter() - start
    ns = sorted({r.n for r in riggings.values()})
    worst = max(norms, key=norms.get)
    ok = (len(riggings) >= 10 and ns == [1, 2, 3, 4] and elapsed <= 60
          and all(v < 1 - 1e-6 for v in norms.values()))
    record(1, "norm bound", ok,
           f"{len(riggings)} riggings, n in {ns}, max norm {norms[worst]:.6f} ({worst}), "
           f"{elapsed:.2f} s")


def test_criterion_2_route_equivalence(riggings):
    quad = build_quadrature(48, 128)
    worst = {}
    for name, r in riggings.items():
        s = assemble(r, 16).matrix
        q = assemble(r, 16, route="quadrature", quad=quad, workers=4).matrix
        worst[name] = float(np.max(np.abs(s - q)))
    name = max(worst, key=worst.get)
    record(2, "route equivalence", worst[name] <= 1e-8,
           f"max |series - quadrature| = {worst[name]:.2e} ({name}), N=16, 48x128")


def test_criterion_3_mobius_invariance(riggings):
    worst, where, kinds = 0.0, None, set()
    for name, r in riggings.items():
        transforms = default_transforms(r)
        kinds |= set(transforms)
        assert len(transforms) == 5
        for tname, T in transforms.items():
            dev = check_mobius_invariance(r, T, 32)
            if dev >= worst:
                worst, where = dev, (name, tname)
    ok = worst <= 1e-8 and {"dilation", "translation", "inversion"} <= kinds
    record(3, "Moebius invariance", ok, f"max deviation {worst:.2e} at {where}, 5 transforms each")


def test_criterion_4_golden_values():
    quad = build_quadrature(48, 128)
    pair = validate_rigging([F.affine_disk(1, 0), F.affine_disk(1, 3)])
    m_series = assemble(pair, 8).block(1, 0)[0, 0]
    m_quad = block_quadrature(pair, 1, 0, 8, quad).matrix[0, 0]
    entry_errs = [abs(m_series + 1 / 9), abs(m_quad + 1 / 9)]
    schwarzian_errs = []
    for c in (0.1, 0.2, 0.3 - 0.15j, 0.45j):
        r = validate_rigging([F.quadratic(c)])
        op = assemble(r, 8)
        entry_errs.append(abs(op.block(0, 0)[0, 0] - c**2))
        entry_errs.append(abs(block_quadrature(r, 0, 0, 8, quad).matrix[0, 0] - c**2))
        schwarzian_errs.append(abs(recover_jets(op, []).schwarzian_at_zero[0] + 6 * c**2))
    ok = max(entry_errs) <= 1e-10 and max(schwarzian_errs) <= 1e-8
    record(4, "golden values", ok,
           f"affine M[0,0] = {m_series.real:.15f}; max entry error {max(entry_errs):.2e} "
           f"(series and quadrature); max S(0) error {max(schwarzian_errs):.2e}")


def test_criterion_5_recovery(riggings):
    worst, where = 0.0, None
    for name, r in riggings.items():
        d = period(r, 16)
        normalized, _ = normalize_rigging(r)
        rep = recover_jets(d.grunsky, d.normalized_centers, normalized)
        err = max(rep.residuals.values())
        if err >= worst:
            worst, where = err, name
    record(5, "jet recovery round trip", worst <= 1e-7,
           f"max residual {worst:.2e} ({where}) over f', f'', S(0)")


def test_criterion_6_holomorphy():
    lines, ok = [], True
    for name, r, j, fam in families(16):
        out = holomorphy_order(j, r, fam, 1e-3, 16)
        scale = float(np.max(np.abs(assemble(r, 16).matrix)))
        good = out["residual_h"] <= 1e-5 * scale and 3 <= out["ratio"] <= 5
        ok &= good
        lines.append(f"{name} residual {out['residual_h']:.2e} ratio {out['ratio']:.4f}")
    record(6, "holomorphic dependence", ok and len(lines) == 3, "; ".join(lines))


def test_criterion_7_structure(riggings):
    sym = max(float(np.max(np.abs(M - M.T))) for M in
              (assemble(r, 32).matrix for r in riggings.values()))

    affine = validate_rigging([F.affine_disk(0.4, 0), F.affine_disk(0.7, 1.5), F.affine_disk(2, 5j)])
    op = assemble(affine, 32)
    diag = max(float(np.max(np.abs(op.block(k, k)))) for k in range(3))

    r = riggings["zoo_quad"]
    before = assemble(r, 24)
    after = assemble(r.replace_map(1, F.quadratic(-0.1j + 1e-3, 3)), 24)
    local = all(np.array_equal(before.block(j, i), after.block(j, i)) == (1 not in (j, i))
                for j in range(4) for i in range(4))

    monotone = True
    for rr in riggings.values():
        norms = [v for _, v in truncation_sweep(rr, [1, 2, 4, 8, 16, 32])]
        monotone &= all(b >= a for a, b in zip(norms, norms[1:]))

    ok = sym <= 1e-10 and diag <= 1e-14 and local and monotone
    record(7, "structural invariants", ok,
           f"symmetry {sym:.1e}, affine diagonal {diag:.1e}, locality {local}, monotone {monotone}")


def test_criterion_8_determinism(tmp_path):
    cfg = {"rigging": [{"kind": "quadratic", "center": 0, "params": {"c": 0.2}},
                       {"kind": "joukowski_ellipse", "center": [3, 0], "params": {"c": [0, 0.3]}},
                       {"kind": "affine_disk", "center": [0, -2.5], "params": {"radius": 0.7}}],
           "order": 16}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    blobs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        subprocess.run([sys.executable, "-m", "grunsky.cli", "compute", "--config", str(path),
                        "--out", str(out)], check=True, capture_output=True)
        blobs.append((out / "operator.json").read_bytes())
    record(8, "determinism", blobs[0] == blobs[1] and len(blobs[0]) > 0,
           f"two runs, {len(blobs[0])} bytes, identical = {blobs[0] == blobs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
