"""Disk maps, Moebius transformations and riggings.

A rigging is an ordered tuple of injective holomorphic maps of the unit
disk whose image closures are pairwise disjoint. Each map is stored by its
center ``p = f(0)`` and the Taylor series of ``f(z) - p``.

Zoo kinds (closed form, univalence certified by the parameter range)::

    affine_disk        f(z) = p + r z                 r > 0
    quadratic          f(z) = p + z + c z**2          |c| < 1/2
    joukowski_ellipse  f(z) = p + z / (1 + c z**2)    |c| < 1
    raw_series         f(z) = p + sum_k a_k z**k      (univalence assumed)

``joukowski_ellipse`` is the inversion ``1/F(1/z)`` of the exterior
Joukowski map ``F(w) = w + c/w``, so its image is the reciprocal of the
exterior of an ellipse.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateDerivative,
    DegenerateMobius,
    InvalidParameter,
    OutsideDisk,
    OverlappingImages,
    PoleInImage,
)
from .series import DEFAULT_ORDER, PowerSeries, exp, reciprocal

EPSILON = 1e-12
DISJOINTNESS_THRESHOLD = 1e-3
POLE_CHECK_SAMPLES = 256

KINDS = {
    "affine_disk": ("radius", "r > 0", "p + r z"),
    "quadratic": ("c", "|c| < 1/2", "p + z + c z^2"),
    "joukowski_ellipse": ("c", "|c| < 1", "p + z / (1 + c z^2)"),
    "raw_series": ("coeffs", "a_1 != 0, univalence assumed", "p + sum a_k z^k"),
}


# --------------------------------------------------------------------------
# Moebius transformations

@dataclass(frozen=True)
class MobiusTransform:
    """``T(z) = (a z + b) / (c z + d)``, stored with ``ad - bc = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det) < EPSILON:
            raise DegenerateMobius(f"ad - bc = {det!r} is (numerically) zero")
        s = cmath.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)) / s)

    @classmethod
    def identity(cls) -> MobiusTransform:
        return cls(1, 0, 0, 1)

    @classmethod
    def dilation(cls, k) -> MobiusTransform:
        return cls(k, 0, 0, 1)

    @classmethod
    def translation(cls, b) -> MobiusTransform:
        return cls(1, b, 0, 1)

    @classmethod
    def from_three_points(cls, src: Sequence[complex], dst: Sequence[complex]) -> MobiusTransform:
        """The unique transform with ``T(src[k]) = dst[k]`` (finite points)."""
        if len(set(src)) < 3 or len(set(dst)) < 3:
            raise DegenerateMobius("three distinct source and target points are required")
        return _to_standard(dst).inverse() @ _to_standard(src)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def pole(self) -> complex | None:
        """Finite pole ``-d/c``; ``None`` for affine transforms."""
        if abs(self.c) < EPSILON:
            return None
        return -self.d / self.c

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z):
        return 1.0 / (self.c * z + self.d) ** 2

    def inverse(self) -> MobiusTransform:
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: MobiusTransform) -> MobiusTransform:
        """Composition ``self o other``."""
        m = self.matrix @ other.matrix
        return MobiusTransform(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def _to_standard(p):
    # sends p0, p1, p2 to 0, 1, infinity
    p0, p1, p2 = (complex(x) for x in p)
    return MobiusTransform(p1 - p2, -p0 * (p1 - p2), p1 - p0, -p2 * (p1 - p0))


# --------------------------------------------------------------------------
# maps

@dataclass(frozen=True)
class ConformalMapModel:
    """A univalent map of the closed unit disk, ``f(0) = center``.

    Use the constructors :meth:`affine_disk`, :meth:`quadratic`,
    :meth:`joukowski_ellipse` and :meth:`from_series` rather than the raw
    dataclass signature.
    """

    center: complex
    kind: str
    param: complex | None = None
    raw: PowerSeries | None = field(default=None, repr=False)
    univalence_certified: bool = True
    # set for T o base, so that series and values stay exact at any order
    base: ConformalMapModel | None = field(default=None, repr=False)
    mobius: MobiusTransform | None = field(default=None, repr=False)

    @classmethod
    def affine_disk(cls, radius: float, center: complex = 0) -> ConformalMapModel:
        if not np.isreal(radius) or np.real(radius) <= 0:
            raise InvalidParameter(f"affine_disk radius must be real and positive, got {radius!r}")
        return cls(complex(center), "affine_disk", complex(np.real(radius)))

    @classmethod
    def quadratic(cls, c: complex, center: complex = 0) -> ConformalMapModel:
        if not abs(c) < 0.5:
            raise InvalidParameter(f"quadratic map needs |c| < 1/2, got |c| = {abs(c):.6g}")
        return cls(complex(center), "quadratic", complex(c))

    @classmethod
    def joukowski_ellipse(cls, c: complex, center: complex = 0) -> ConformalMapModel:
        if not abs(c) < 1:
            raise InvalidParameter(f"joukowski_ellipse needs |c| < 1, got |c| = {abs(c):.6g}")
        return cls(complex(center), "joukowski_ellipse", complex(c))

    @classmethod
    def from_series(cls, series, center: complex = 0, certified: bool = False) -> ConformalMapModel:
        """Map ``center + series(z)``; the constant term of ``series`` must be 0."""
        series = series if isinstance(series, PowerSeries) else PowerSeries(series)
        if abs(series[0]) > EPSILON:
            raise InvalidParameter("series of f(z) - f(0) must have zero constant term")
        if series.order < 1 or abs(series[1]) < EPSILON:
            raise DegenerateDerivative("f'(0) vanishes")
        series = PowerSeries(np.concatenate([[0], series.coeffs[1:]]))
        return cls(complex(center), "raw_series", raw=series, univalence_certified=certified)

    @property
    def series(self) -> PowerSeries:
        """Taylor series of ``f(z) - center`` at the default order."""
        if self.kind == "raw_series" and self.base is None:
            return self.raw
        return self.taylor(DEFAULT_ORDER)

    def taylor(self, order: int) -> PowerSeries:
        """Taylor series of ``f(z) - center`` to ``order``.

        Closed-form kinds and Moebius images of them are expanded exactly;
        a plain raw series is zero-extended (read as the polynomial it
        stores).
        """
        c = np.zeros(order + 1, dtype=complex)
        p = self.param
        if self.kind == "affine_disk":
            if order >= 1:
                c[1] = p
        elif self.kind == "quadratic":
            if order >= 1:
                c[1] = 1.0
            if order >= 2:
                c[2] = p
        elif self.kind == "joukowski_ellipse":
            # z / (1 + c z^2) = sum_k (-c)^k z^(2k+1)
            k = np.arange((order + 1) // 2 + 1)
            idx = 2 * k + 1
            keep = idx <= order
            c[idx[keep]] = (-p) ** k[keep]
        elif self.base is not None:
            return mobius_series(self.mobius, self.base, order)
        else:
            return PowerSeries(self.raw.coeffs, order=order)
        return PowerSeries(c)

    @property
    def dprime0(self) -> complex:
        return self.taylor(2)[1]

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self, z):
        """``f'(z)``, vectorized."""
        z = np.asarray(z, dtype=complex)
        p = self.param
        if self.kind == "affine_disk":
            return np.full(z.shape, p) if z.ndim else p
        if self.kind == "quadratic":
            return 1 + 2 * p * z
        if self.kind == "joukowski_ellipse":
            return (1 - p * z**2) / (1 + p * z**2) ** 2
        if self.base is not None:
            return self.mobius.derivative(self.base(z)) * self.base.derivative(z)
        return self.raw.derivative()(z)


def evaluate(model: ConformalMapModel, z, tol: float = 1e-9):
    """``f(z)`` for ``|z| <= 1`` (closed form where available, else Horner)."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1 + tol):
        raise OutsideDisk("evaluation point outside the closed unit disk")
    p = model.param
    if model.kind == "affine_disk":
        w = model.center + p * z
    elif model.kind == "quadratic":
        w = model.center + z + p * z**2
    elif model.kind == "joukowski_ellipse":
        w = model.center + z / (1 + p * z**2)
    elif model.base is not None:
        w = model.mobius(evaluate(model.base, z, tol))
    else:
        w = model.center + model.raw(z)
    return complex(w) if np.ndim(w) == 0 else w


def mobius_series(T: MobiusTransform, model: ConformalMapModel, order: int) -> PowerSeries:
    """Series of ``T(f(z)) - T(f(0))``."""
    g = model.taylor(order)
    p = model.center
    num = g * T.a + (T.a * p + T.b)
    den = g * T.c + (T.c * p + T.d)
    s = num * reciprocal(den)
    return s - s[0]


# --------------------------------------------------------------------------
# riggings

@dataclass(frozen=True)
class Rigging:
    maps: tuple[ConformalMapModel, ...]
    disjointness_margin: float
    certified: bool = True

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def centers(self) -> list[complex]:
        return [m.center for m in self.maps]

    def replace_map(self, k: int, model: ConformalMapModel, samples: int = 256) -> Rigging:
        maps = list(self.maps)
        maps[k] = model
        return validate_rigging(maps, samples)


def _boundary(model, samples):
    theta = 2 * np.pi * np.arange(samples) / samples
    return evaluate(model, np.exp(1j * theta))


def _winding(curve, points):
    """Winding number of the closed polygon ``curve`` around each point."""
    d = curve[None, :] - points[:, None]
    on_curve = np.any(np.abs(d) < 1e-14, axis=1)
    d[on_curve] = 1.0
    turn = np.angle(np.roll(d, -1, axis=1) / d)
    w = np.rint(turn.sum(axis=1) / (2 * np.pi)).astype(int)
    w[on_curve] = 1
    return w


def _segments_cross(a, b):
    """Whether any edge of closed polygon ``a`` crosses an edge of ``b``."""
    a0, a1 = a, np.roll(a, -1)
    b0, b1 = b, np.roll(b, -1)

    def orient(p, q, r):
        return np.imag(np.conj(q - p) * (r - p))

    o1 = orient(a0[:, None], a1[:, None], b0[None, :])
    o2 = orient(a0[:, None], a1[:, None], b1[None, :])
    o3 = orient(b0[None, :], b1[None, :], a0[:, None])
    o4 = orient(b0[None, :], b1[None, :], a1[:, None])
    return bool(np.any((o1 * o2 < 0) & (o3 * o4 < 0)))


def _interior(model, samples):
    radial = max(samples // 32, 2)
    r = np.arange(1, radial) / radial
    theta = 2 * np.pi * np.arange(samples // 4) / (samples // 4)
    z = np.concatenate([[0], (r[:, None] * np.exp(1j * theta)[None, :]).ravel()])
    return evaluate(model, z)


def pairwise_margin(maps: Sequence[ConformalMapModel], samples: int = 256):
    """Smallest sampled distance between image closures, and the pair.

    Returns ``(margin, (i, j))``; the margin is 0 when a crossing or a
    containment is detected.
    """
    bounds = [_boundary(m, samples) for m in maps]
    best, pair = np.inf, (0, 0)
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            d = float(np.min(np.abs(bounds[i][:, None] - bounds[j][None, :])))
            if d < best:
                best, pair = d, (i, j)
            if _segments_cross(bounds[i], bounds[j]):
                return 0.0, (i, j)
            for a, b in ((i, j), (j, i)):
                inner = _interior(maps[b], samples)
                if np.any(_winding(bounds[a], inner) != 0):
                    return 0.0, (a, b) if a < b else (b, a)
    return best, pair


def validate_rigging(maps: Sequence[ConformalMapModel], samples: int = 256,
                     threshold: float = DISJOINTNESS_THRESHOLD) -> Rigging:
    """Certify pairwise disjointness of image closures by boundary sampling.

    Raises
    ------
    OverlappingImages
        If the sampled margin of some pair is at most ``threshold``.
    """
    if samples < 64:
        raise ValueError("at least 64 boundary samples are required")
    maps = tuple(maps)
    if not maps:
        raise ValueError("a rigging needs at least one map")
    for k, m in enumerate(maps):
        if abs(m.dprime0) < EPSILON:
            raise DegenerateDerivative(f"map {k} has vanishing derivative at 0")
    if len(maps) == 1:
        return Rigging(maps, float("inf"))
    margin, (i, j) = pairwise_margin(maps, samples)
    if margin <= threshold:
        raise OverlappingImages(i, j, margin)
    return Rigging(maps, margin)


def _pole_inside(model, T, samples=POLE_CHECK_SAMPLES):
    if T.pole is None:
        return False
    curve = _boundary(model, samples)
    den = T.c * curve + T.d
    scale = abs(T.c) * np.max(np.abs(curve)) + abs(T.d)
    if np.min(np.abs(den)) < 1e-9 * scale:
        return True
    return _winding(den, np.zeros(1))[0] != 0


def post_compose_mobius(rigging: Rigging, T: MobiusTransform) -> Rigging:
    """The rigging ``(T o f_1, ..., T o f_n)``.

    Raises :class:`PoleInImage` when the pole of ``T`` lies in some image
    closure (boundary winding test).
    """
    maps = []
    for k, m in enumerate(rigging.maps):
        if _pole_inside(m, T):
            raise PoleInImage(k)
        if m.base is not None:
            base, U = m.base, T @ m.mobius
        else:
            base, U = m, T
        series = mobius_series(U, base, DEFAULT_ORDER)
        maps.append(ConformalMapModel(complex(U(base.center)), "raw_series", raw=series,
                                      univalence_certified=m.univalence_certified,
                                      base=base, mobius=U))
    margin = pairwise_margin(maps)[0] if len(maps) > 1 else float("inf")
    return Rigging(tuple(maps), margin, rigging.certified)


def with_center(model: ConformalMapModel, center: complex) -> ConformalMapModel:
    """Same map, center pinned to an exact value (for normalizations)."""
    return replace(model, center=complex(center))


# --------------------------------------------------------------------------
# pre-Schwarzian families and the Schwarzian

def pre_schwarzian(model: ConformalMapModel, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Series of ``f''/f'`` (order ``order - 2``)."""
    g = model.taylor(order)
    d1 = g.derivative()
    if abs(d1[0]) < EPSILON:
        raise DegenerateDerivative("f'(0) vanishes")
    return d1.derivative() * reciprocal(d1)


def schwarzian(model: ConformalMapModel, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Series of ``S(f) = (f''/f')' - (f''/f')**2 / 2`` (order ``order - 3``)."""
    pre = pre_schwarzian(model, order)
    return pre.derivative() - pre * pre * 0.5


@dataclass(frozen=True)
class PreSchwarzianFamily:
    """Complex line ``t -> (q0 + q_slope t, base_psi + t direction_phi)``.

    Each ``t`` names the map ``g`` with ``g''/g' = base_psi + t phi``,
    ``g(0) = 0``, ``g'(0) = q0 + q_slope t``, translated by ``center``.
    """

    base_psi: PowerSeries
    direction_phi: PowerSeries
    q0: complex
    q_slope: complex = 0
    center: complex = 0

    @classmethod
    def from_map(cls, model: ConformalMapModel, direction_phi, q_slope: complex = 0,
                 order: int = DEFAULT_ORDER) -> PreSchwarzianFamily:
        psi = pre_schwarzian(model, order + 2)
        phi = direction_phi if isinstance(direction_phi, PowerSeries) else PowerSeries(direction_phi)
        return cls(psi, PowerSeries(phi.coeffs, order=psi.order), model.dprime0, q_slope, model.center)


def solve_pre_schwarzian(family: PreSchwarzianFamily, t: complex) -> ConformalMapModel:
    """Integrate ``g''/g' = psi_t`` with ``g(0)=0, g'(0)=q(t)``.

    Univalence is not certified; callers revalidate the rigging.
    """
    psi = family.base_psi + family.direction_phi * t
    gprime = exp(psi.antiderivative()) * (family.q0 + family.q_slope * t)
    return ConformalMapModel.from_series(gprime.antiderivative(), family.center)
