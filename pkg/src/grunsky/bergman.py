"""Bergman spaces of the disk and its exterior, and a disk quadrature rule.

One-forms ``h(z) dz`` are stored through the function ``h``. Orthonormal
bases::

    plus  (|z| < 1):  e_k(z) = sqrt((k+1)/pi) z**k,         k >= 0
    minus (|z| > 1):  f_k(z) = sqrt((k+1)/pi) z**(-k-2),    k >= 0

The exterior basis starts at ``z**-2``: a form ``h dz`` is square
integrable near infinity only if ``h`` decays at least like ``z**-2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResolutionTooLow, SpaceMismatch, WrongSpace

PLUS = "plus"
MINUS = "minus"


def basis_scale(count: int) -> np.ndarray:
    """``sqrt((k+1)/pi)`` for ``k < count``."""
    return np.sqrt(np.arange(1, count + 1) / np.pi)


@dataclass(frozen=True)
class BergmanElement:
    space: str
    coeffs: np.ndarray

    def __post_init__(self):
        if self.space not in (PLUS, MINUS):
            raise ValueError(f"space must be {PLUS!r} or {MINUS!r}")
        c = np.array(self.coeffs, dtype=complex).ravel()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def unit(cls, space: str, k: int, size: int | None = None) -> BergmanElement:
        c = np.zeros(size if size is not None else k + 1, dtype=complex)
        c[k] = 1.0
        return cls(space, c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, z):
        """Value of the coefficient function ``h`` at ``z``."""
        z = np.asarray(z, dtype=complex)
        c = self.coeffs * basis_scale(len(self.coeffs))
        w = z if self.space == PLUS else 1.0 / z
        acc = np.zeros(z.shape, dtype=complex)
        for coef in c[::-1]:
            acc = acc * w + coef
        return acc if self.space == PLUS else acc * w**2


def reflect(h: BergmanElement) -> BergmanElement:
    """The reflection ``h(z) dz -> -conj(z)**-2 h(1/conj(z)) d conj(z)``.

    The image is anti-holomorphic on the disk; it is returned as the plus
    element ``g`` with ``Rh = conj(g)``. In coefficients ``f_k -> -conj(e_k)``,
    so ``g_k = -conj(c_k)``.
    """
    if h.space != MINUS:
        raise WrongSpace("reflect acts on the exterior space")
    return BergmanElement(PLUS, -np.conj(h.coeffs))


def unreflect(g: BergmanElement) -> BergmanElement:
    """Inverse of :func:`reflect`."""
    if g.space != PLUS:
        raise WrongSpace("unreflect expects an element of the disk space")
    return BergmanElement(MINUS, -np.conj(g.coeffs))


def inner_product(a: BergmanElement, b: BergmanElement) -> complex:
    """``sum a_k conj(b_k)`` (Parseval in the orthonormal basis)."""
    if a.space != b.space:
        raise SpaceMismatch(f"cannot pair {a.space} with {b.space}")
    n = min(len(a.coeffs), len(b.coeffs))
    return complex(np.dot(a.coeffs[:n], np.conj(b.coeffs[:n])))


@dataclass(frozen=True)
class DiskQuadrature:
    """Tensor rule on the unit disk: Gauss-Legendre in ``r`` (with the
    Jacobian ``r`` folded into the weights) times the trapezoid rule in
    the angle.

    Exact for ``z**a conj(z)**b`` when ``|a - b| < angular`` and
    ``a + b + 1 <= 2 radial - 1``.
    """

    radial: int
    angular: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> complex:
        return complex(np.dot(self.weights, values))

    def __len__(self):
        return len(self.nodes)


def build_quadrature(radial: int = 48, angular: int = 128, phase: float = 0.0) -> DiskQuadrature:
    """Build the tensor rule; ``phase`` rotates all nodes (in units of the
    angular step) so two rules can be kept from sharing nodes."""
    if radial < 4 or angular < 8:
        raise ResolutionTooLow(f"need radial >= 4 and angular >= 8, got {radial}x{angular}")
    x, w = np.polynomial.legendre.leggauss(radial)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w * r
    theta = 2 * np.pi * (np.arange(angular) + phase) / angular
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(wr * (2 * np.pi / angular), angular)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return DiskQuadrature(radial, angular, nodes, weights)


def quadrature_inner_product(a: BergmanElement, b: BergmanElement, quad: DiskQuadrature) -> complex:
    """The defining area integral of ``(a, b)`` evaluated numerically.

    The exterior integral is mapped to the disk with ``w = 1/z``, under
    which ``|h(z)|**2 dA_z`` becomes ``|w**-2 h(1/w)|**2 dA_w``.
    """
    if a.space != b.space:
        raise SpaceMismatch(f"cannot pair {a.space} with {b.space}")
    w = quad.nodes
    if a.space == PLUS:
        va, vb = a(w), b(w)
    else:
        va, vb = a(1 / w) / w**2, b(1 / w) / w**2
    return quad.integrate(va * np.conj(vb))
