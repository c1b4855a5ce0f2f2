import numpy as np
import pytest

from grunsky.errors import DegenerateCenters, InconsistentProducts, OverlappingImages
from grunsky.maps import (
    ConformalMapModel as F,
    MobiusTransform as T,
    PreSchwarzianFamily,
    Rigging,
    post_compose_mobius,
    validate_rigging,
)
from grunsky.operator import GrunskyBlock, GrunskyOperator, assemble, series_order
from grunsky.period import (
    check_mobius_invariance,
    holomorphy_order,
    holomorphy_probe,
    normalize_rigging,
    period,
    recover_jets,
)
from grunsky.zoo import battery

PAIR = validate_rigging([F.affine_disk(1, 0), F.affine_disk(1, 3)])
TRIPLE = validate_rigging([F.affine_disk(0.4, 0), F.affine_disk(0.4, 1), F.affine_disk(0.4, -1)])
QTRIPLE = validate_rigging([F.quadratic(0.2, 0), F.joukowski_ellipse(0.3j, 3),
                            F.affine_disk(0.7, -2.5j)])


def test_normalize_examples():
    r, Tm = normalize_rigging(TRIPLE)
    for z in (0.3, 1j, -2 + 1j):
        assert Tm(z) == pytest.approx(z, abs=1e-15)

    spread = validate_rigging([F.affine_disk(0.5, 0), F.affine_disk(0.5, 2), F.affine_disk(0.5, -2)])
    r, Tm = normalize_rigging(spread)
    assert r.centers[:3] == [0, 1, -1]
    # the three points 0, 2, -2 go to 0, 1, -1 under z/2
    for z in (0.3, 1j, -2 + 1j):
        assert Tm(z) == pytest.approx(z / 2, abs=1e-15)

    pair = validate_rigging([F.quadratic(0.1, 0), F.affine_disk(0.5, 1.8)])
    pair = post_compose_mobius(pair, T(1, 0, 0.4444444444444444, 1))
    r, _ = normalize_rigging(pair)
    assert r.centers == [0, 1]
    assert r.maps[0].dprime0 == pytest.approx(1, abs=1e-14)


def test_normalize_pair_already_normalized():
    # z/(1 + 0.6z) keeps f(0) = 0, f'(0) = 1 and stays left of Re z = 0.63
    f1 = post_compose_mobius(validate_rigging([F.affine_disk(1, 0)]), T(1, 0, 0.6, 1)).maps[0]
    pair = validate_rigging([f1, F.affine_disk(0.2, 1)])
    r, Tm = normalize_rigging(pair)
    for z in (0.3, 1j):
        assert Tm(z) == pytest.approx(z, abs=1e-15)


def test_degenerate_centers():
    maps = (F.affine_disk(0.1, 0), F.affine_disk(0.1, 1), F.affine_disk(0.1, 1))
    bad = Rigging(maps, 1.0)
    with pytest.raises(DegenerateCenters):
        normalize_rigging(bad)


def test_period_examples():
    d = period(TRIPLE, 8)
    assert d.normalized_centers == []
    assert np.max(np.abs(d.grunsky.block(1, 0))) > 0.01
    d = period(battery()["zoo_quad"], 8)
    assert len(d.normalized_centers) == 1


def test_period_invariant_under_mobius():
    for r in (QTRIPLE, battery()["zoo_quad"], battery()["mixed_pair"]):
        a = period(r, 12)
        for Tm in (T.dilation(5), T(1, 2, 1, 10), T(0, 1, 1, -9j)):
            b = period(post_compose_mobius(r, Tm), 12)
            assert np.max(np.abs(a.grunsky.matrix - b.grunsky.matrix)) <= 1e-9
            assert np.allclose(a.normalized_centers, b.normalized_centers, rtol=0, atol=1e-9)


def test_invariance_examples():
    assert check_mobius_invariance(PAIR, T.identity(), 12) == 0
    assert check_mobius_invariance(PAIR, T.dilation(2 + 1j), 12) <= 1e-10
    small = validate_rigging([F.quadratic(0.2, 0), F.affine_disk(0.25, 1.5j)])
    assert check_mobius_invariance(small, T(0, 1, 1, -5), 12) <= 1e-8


def test_recover_examples():
    # f_1'(0) f_2'(0) = (0 - 3)**2 k00 = 9 * (1/9) = 1
    rep = recover_jets(assemble(PAIR, 4), [], centers=PAIR.centers)
    assert rep.dprime[0] * rep.dprime[1] == pytest.approx(1, abs=1e-14)
    assert rep.schwarzian_at_zero == [0, 0]

    r, _ = normalize_rigging(PAIR)
    rep = recover_jets(assemble(r, 4), [], r)
    assert rep.dprime[0] * rep.dprime[1] == pytest.approx(
        -assemble(r, 4).block(1, 0)[0, 0] * (r.centers[0] - r.centers[1]) ** 2, abs=1e-14)
    assert max(rep.residuals.values()) <= 1e-12


def test_recover_quadratic_in_triple():
    # read with the true centers, the operator gives the jets of the
    # rigging itself; S(0) is also Moebius invariant
    rep = recover_jets(assemble(QTRIPLE, 16), [], centers=QTRIPLE.centers)
    assert rep.dsecond[0] == pytest.approx(0.4, abs=1e-8)
    assert rep.dprime[0] == pytest.approx(1, abs=1e-8)
    assert rep.schwarzian_at_zero[0] == pytest.approx(-6 * 0.04, abs=1e-8)
    d = period(QTRIPLE, 16)
    rep = recover_jets(d.grunsky, d.normalized_centers)
    assert rep.schwarzian_at_zero[0] == pytest.approx(-6 * 0.04, abs=1e-8)


@pytest.mark.parametrize("name", sorted(battery()))
def test_recovery_round_trip(name):
    r = battery()[name]
    d = period(r, 16)
    normalized, _ = normalize_rigging(r)
    rep = recover_jets(d.grunsky, d.normalized_centers, normalized)
    assert all(v >= 0 for v in rep.residuals.values())
    assert max(rep.residuals.values()) <= 1e-7


def test_recovery_detects_corruption():
    d = period(QTRIPLE, 8)
    blocks = [list(row) for row in d.grunsky.blocks]
    m = blocks[2][1].matrix.copy()
    m[0, 0] *= 1.5
    blocks[2][1] = GrunskyBlock(2, 1, m)
    bad = GrunskyOperator(tuple(tuple(row) for row in blocks), 8, "series")
    with pytest.raises(InconsistentProducts):
        recover_jets(bad, [])


def test_distinguishability():
    base = [F.quadratic(0.2, 0), F.joukowski_ellipse(0.3j, 3), F.affine_disk(0.7, -2.5j),
            F.quadratic(0.1, 3j)]
    variants = {
        "quadratic c": (0, F.quadratic(0.201, 0)),
        "joukowski c": (1, F.joukowski_ellipse(0.301j, 3)),
        "affine radius": (2, F.affine_disk(0.701, -2.5j)),
        "center": (3, F.quadratic(0.1, 3j + 0.001)),
    }
    ref = period(validate_rigging(base), 8)
    for name, (k, m) in variants.items():
        maps = list(base)
        maps[k] = m
        other = period(validate_rigging(maps), 8)
        diff = max(np.max(np.abs(ref.grunsky.matrix - other.grunsky.matrix)),
                   np.max(np.abs(np.subtract(ref.normalized_centers, other.normalized_centers))))
        assert diff >= 1e-9, name


def test_holomorphy_examples():
    order = series_order(8)
    r = battery()["mixed_pair"]
    const = PreSchwarzianFamily.from_map(r.maps[0], [0], 0, order)
    assert holomorphy_probe(0, r, const, N=8) == 0

    single = validate_rigging([F.quadratic(0.3)])
    scale = PreSchwarzianFamily.from_map(single.maps[0], [0], 0.4, order)
    assert holomorphy_probe(0, single, scale, N=8) <= 1e-10

    fam = PreSchwarzianFamily.from_map(r.maps[0], [0, 1], 0, series_order(16))
    r1 = holomorphy_probe(0, r, fam, delta=2e-3, N=16)
    r2 = holomorphy_probe(0, r, fam, delta=2e-4, N=16)
    assert 70 <= r1 / r2 <= 130


def test_holomorphy_order_ratio():
    r = battery()["mixed_pair"]
    fam = PreSchwarzianFamily.from_map(r.maps[1], [0.5, 0.2j], 0.3, series_order(12))
    out = holomorphy_order(1, r, fam, 1e-3, 12)
    assert 3 <= out["ratio"] <= 5
    assert out["observed_order"] == pytest.approx(2, abs=0.1)


def test_holomorphy_revalidates_disjointness():
    r = battery()["tight_pair"]
    fam = PreSchwarzianFamily.from_map(r.maps[0], [0], 50, series_order(4))
    with pytest.raises(OverlappingImages):
        holomorphy_probe(0, r, fam, delta=1e-2, N=4)
