"""Period data of a rigging and the recovery of jets from it.

The period datum of a rigging is the pair (normalized puncture positions,
Grunsky operator of the normalized rigging). Normalization post-composes
every map with the Moebius transform sending the first three centers to
0, 1, -1 (for two maps: ``f_1(0) = 0``, ``f_1'(0) = 1``, ``f_2(0) = 1``).
The Grunsky operator is unchanged by any Moebius post-composition, so the
datum only depends on the rigging up to Moebius equivalence.

:func:`recover_jets` reads ``f_i'(0)``, ``f_i''(0)`` and the Schwarzians
``S(f_i)(0)`` back out of the operator: the first kernel coefficients are

    k_ji[0, 0] = f_i'(0) f_j'(0) / (p_i - p_j)**2                  (i != j)
    k_ji[1, 0] = f_i'(0) f_j''(0) / D**2 + 2 f_i'(0) f_j'(0)**2 / D**3,
                 D = p_i - p_j
    k_ii[0, 0] = S(f_i)(0) / 6
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCenters, InconsistentProducts
from .maps import (
    MobiusTransform,
    PreSchwarzianFamily,
    Rigging,
    post_compose_mobius,
    schwarzian,
    solve_pre_schwarzian,
    validate_rigging,
    with_center,
)
from .operator import GrunskyOperator, assemble, entries_to_kernel, series_order

ANCHORS = (0.0, 1.0, -1.0)


@dataclass(frozen=True)
class PeriodDatum:
    normalized_centers: list[complex]
    grunsky: GrunskyOperator

    def anchored_centers(self) -> list[complex]:
        """Centers of all maps of the normalized rigging."""
        n = self.grunsky.n
        if n >= 3:
            return [complex(a) for a in ANCHORS] + list(self.normalized_centers)
        return [complex(a) for a in ANCHORS[:n]]


@dataclass
class RecoveryReport:
    dprime: list[complex]
    dsecond: list[complex]
    schwarzian_at_zero: list[complex]
    residuals: dict[str, float] = field(default_factory=dict)
    sign_spread: tuple[float, float] | None = None


def normalize_rigging(rigging: Rigging) -> tuple[Rigging, MobiusTransform]:
    """Post-compose with the Moebius transform fixing the normalization.

    n >= 3: ``p_1, p_2, p_3 -> 0, 1, -1``. n == 2: ``f_1(0) = 0``,
    ``f_1'(0) = 1``, ``f_2(0) = 1``. n == 1: identity.
    """
    n = rigging.n
    centers = rigging.centers
    if len(set(centers)) < n:
        raise DegenerateCenters("two maps share a center")
    if n == 1:
        return rigging, MobiusTransform.identity()
    if n == 2:
        p1, p2 = centers
        a = 1.0 / rigging.maps[0].dprime0
        c = a - 1.0 / (p2 - p1)
        T = MobiusTransform(a, -a * p1, c, 1.0 - c * p1)
    else:
        T = MobiusTransform.from_three_points(centers[:3], ANCHORS)
    normalized = post_compose_mobius(rigging, T)
    maps = list(normalized.maps)
    for k, target in enumerate(ANCHORS[:min(n, 3)]):
        maps[k] = with_center(maps[k], target)
    return Rigging(tuple(maps), normalized.disjointness_margin, normalized.certified), T


def period(rigging: Rigging, N: int, route: str = "series") -> PeriodDatum:
    normalized, _ = normalize_rigging(rigging)
    centers = normalized.centers[3:] if rigging.n >= 3 else []
    return PeriodDatum(centers, assemble(normalized, N, route))


def check_mobius_invariance(rigging: Rigging, T: MobiusTransform, N: int) -> float:
    """Largest entry-wise change of the operator under ``f -> T o f``."""
    before = assemble(rigging, N).matrix
    after = assemble(post_compose_mobius(rigging, T), N).matrix
    return float(np.max(np.abs(before - after)))


def jets(rigging: Rigging) -> tuple[list[complex], list[complex], list[complex]]:
    """``f'(0)``, ``f''(0)``, ``S(f)(0)`` of every map, read from the series."""
    dprime, dsecond, schw = [], [], []
    for m in rigging.maps:
        g = m.taylor(8)
        dprime.append(g[1])
        dsecond.append(2 * g[2])
        schw.append(schwarzian(m, 8)[0])
    return dprime, dsecond, schw


def _second_derivatives(kernels, centers, x):
    """``f_j''(0)`` estimated from every partner ``i``; returns per-map lists."""
    n = len(x)
    out = [[] for _ in range(n)]
    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            D = centers[i] - centers[j]
            k10 = kernels[j][i][1, 0]
            out[j].append((k10 - 2 * x[i] * x[j] ** 2 / D**3) * D**2 / x[i])
    return out


def recover_jets(op: GrunskyOperator, normalized_centers, reference: Rigging | None = None,
                 rtol: float = 1e-6, centers=None) -> RecoveryReport:
    """Reconstruct jets of the normalized maps from the operator alone.

    ``normalized_centers`` is the datum's free center list (empty for
    ``n <= 3``). Pairwise products ``f_i'(0) f_j'(0)`` come from ``k[0,0]``
    of the off-diagonal blocks; triples of them give each ``f_i'(0)`` up to
    one common sign. That sign is the one under which the second
    derivatives read from different partner blocks agree; with only two
    maps the normalization ``f_1'(0) = 1`` fixes it. If ``reference`` (the
    normalized rigging) is given, absolute errors are stored in
    ``residuals``.

    Passing the full ``centers`` list instead reads the jets of an
    operator whose rigging is not normalized (for ``n >= 3``; with two maps
    ``f_1'(0) = 1`` is still assumed).
    """
    n = op.n
    if op.truncation < 2 and n >= 2:
        raise ValueError("jet recovery needs a truncation of at least 2")
    kernels = [[entries_to_kernel(op.block(j, i)) for i in range(n)] for j in range(n)]
    schw = [complex(6 * kernels[i][i][0, 0]) for i in range(n)]
    dprime: list[complex] = []
    dsecond: list[complex] = []
    spread = None

    if n >= 2:
        if centers is None:
            centers = PeriodDatum(list(normalized_centers), op).anchored_centers()
            if len(centers) != n:
                raise ValueError(f"expected {n - 3} free centers, got {len(normalized_centers)}")
        elif len(centers) != n:
            raise ValueError(f"expected {n} centers, got {len(centers)}")
        prod = np.zeros((n, n), dtype=complex)
        for i, j in itertools.permutations(range(n), 2):
            prod[i, j] = kernels[j][i][0, 0] * (centers[i] - centers[j]) ** 2

        if n == 2:
            x = np.array([1.0, prod[0, 1]], dtype=complex)
        else:
            x = np.zeros(n, dtype=complex)
            others = [k for k in range(n) if k != 0]
            j, k = others[0], others[1]
            x[0] = np.sqrt(prod[0, j] * prod[0, k] / prod[j, k])
            for m in range(1, n):
                x[m] = prod[0, m] / x[0]
        for i, j in itertools.permutations(range(n), 2):
            if abs(x[i] * x[j] - prod[i, j]) > rtol * max(abs(prod[i, j]), 1e-300):
                raise InconsistentProducts(
                    f"derivative products of maps {i} and {j} are not consistent"
                )

        if n == 2:
            est = _second_derivatives(kernels, centers, x)
        else:
            trials = []
            for cand in (x, -x):
                e = _second_derivatives(kernels, centers, cand)
                width = max(float(np.max(np.abs(np.array(v) - np.mean(v)))) for v in e)
                trials.append((width, cand, e))
            spread = (trials[0][0], trials[1][0])
            if abs(spread[0] - spread[1]) <= 1e-12 * (1 + max(spread)):
                # second derivatives carry no sign information: pin Re f_1'(0) > 0
                pick = 0 if (x[0].real, x[0].imag) > (0, 0) else 1
            else:
                pick = int(spread[1] < spread[0])
            _, x, est = trials[pick]
        dprime = [complex(v) for v in x]
        dsecond = [complex(np.mean(e)) for e in est]

    report = RecoveryReport(dprime, dsecond, schw, sign_spread=spread)
    if reference is not None:
        true_d1, true_d2, true_s = jets(reference)
        res = {"schwarzian_at_zero": max(abs(a - b) for a, b in zip(schw, true_s))}
        if dprime:
            res["dprime"] = max(abs(a - b) for a, b in zip(dprime, true_d1))
            res["dsecond"] = max(abs(a - b) for a, b in zip(dsecond, true_d2))
        report.residuals = {k: float(v) for k, v in res.items()}
    return report


# --------------------------------------------------------------------------
# holomorphic dependence

def family_rigging(rigging: Rigging, j: int, family: PreSchwarzianFamily, t: complex,
                   samples: int = 256) -> Rigging:
    """``rigging`` with map ``j`` replaced by the family member at ``t``."""
    maps = list(rigging.maps)
    maps[j] = solve_pre_schwarzian(family, t)
    return validate_rigging(maps, samples)


def holomorphy_probe(j: int, rigging: Rigging, family: PreSchwarzianFamily,
                     delta: float = 1e-2, N: int = 16, workers: int = 4) -> float:
    """Cauchy-Riemann residual of ``t -> Gr(rigging with f_j = g_t)`` at 0.

    With ``h = delta/2`` this is the largest entry of
    ``(G(h) - G(-h))/(2h) - (G(ih) - G(-ih))/(2ih)``, which is ``O(h**2)``
    when the dependence on ``t`` is holomorphic. The family is revalidated
    for disjointness on ``|t| = delta`` first.
    """
    if family.base_psi.order < series_order(N) - 2:
        raise ValueError(
            f"family series order {family.base_psi.order} too low for truncation {N}; "
            f"build it with order >= {series_order(N)}"
        )
    for t in (delta, -delta, 1j * delta, -1j * delta):
        family_rigging(rigging, j, family, t)
    h = delta / 2
    steps = (h, -h, 1j * h, -1j * h)

    def one(t):
        return assemble(family_rigging(rigging, j, family, t), N).matrix

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        gp, gm, gip, gim = pool.map(one, steps)
    cr = (gp - gm) / (2 * h) - (gip - gim) / (2j * h)
    return float(np.max(np.abs(cr)))


def holomorphy_order(j: int, rigging: Rigging, family: PreSchwarzianFamily,
                     h: float = 1e-3, N: int = 16) -> dict:
    """Residuals at steps ``h`` and ``h/2`` and their ratio (4 for O(h**2))."""
    r1 = holomorphy_probe(j, rigging, family, 2 * h, N)
    r2 = holomorphy_probe(j, rigging, family, h, N)
    ratio = r1 / r2 if r2 > 0 else float("inf")
    return {"h": h, "residual_h": r1, "residual_h2": r2, "ratio": ratio,
            "observed_order": float(np.log2(ratio)) if np.isfinite(ratio) and ratio > 0 else None}
