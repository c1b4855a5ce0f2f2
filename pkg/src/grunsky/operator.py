"""The generalized Grunsky operator of a rigging, truncated to N x N blocks.

Block ``(j, i)`` maps the exterior space of map ``i`` to the disk space of
map ``j``. Its kernel, in the target variable ``z`` and the source variable
``zeta``, is

    i != j:   f_i'(zeta) f_j'(z) / (f_i(zeta) - f_j(z))**2
    i == j:   f'(zeta) f'(z) / (f(zeta) - f(z))**2 - 1/(zeta - z)**2
              = d/dz d/dzeta log[(f(zeta) - f(z)) / (zeta - z)]

and the operator acts by ``(1/pi) * integral over the disk of
kernel(z, zeta) * (R h)(zeta)``, where ``R`` is the reflection of
:mod:`grunsky.bergman`. With ``k[n, m]`` the Taylor coefficient of
``z**n zeta**m`` in the kernel, the matrix in the orthonormal bases is

    M[n, m] = -k[n, m] / sqrt((n + 1)(m + 1))

(``R f_m = -sqrt((m+1)/pi) conj(zeta)**m`` and
``integral zeta**k conj(zeta)**m dA = pi/(m+1)`` when ``k == m``).

Two independent routes compute the blocks: exact nested-series arithmetic
(:func:`block_series`, the reference) and direct quadrature of the area
integral (:func:`block_quadrature`, the oracle).

The full matrix is block-major: row ``j*N + n``, column ``i*N + m``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bergman import DiskQuadrature, basis_scale, build_quadrature
from .errors import (
    PowerIterationStalled,
    QuadratureDiverged,
    RiggingNotCertified,
    SeriesIllConditioned,
    ZeroConstantTerm,
)
from .maps import ConformalMapModel, Rigging, schwarzian
from .series import PowerSeries, lift, reciprocal

ROUTES = ("series", "quadrature")
DENSE_LIMIT = 512


@dataclass(frozen=True)
class GrunskyBlock:
    j: int
    i: int
    matrix: np.ndarray

    @property
    def kernel(self) -> np.ndarray:
        """Kernel Taylor coefficients recovered from the matrix entries."""
        return entries_to_kernel(self.matrix)


@dataclass(frozen=True)
class GrunskyOperator:
    blocks: tuple[tuple[GrunskyBlock, ...], ...]
    truncation: int
    route: str
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.blocks)

    def block(self, j: int, i: int) -> np.ndarray:
        return self.blocks[j][i].matrix

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[b.matrix for b in row] for row in self.blocks])

    def truncated(self, order: int) -> GrunskyOperator:
        """Compression to the leading ``order`` basis vectors of each block."""
        if order > self.truncation:
            raise ValueError(f"cannot extend a truncation-{self.truncation} operator to {order}")
        blocks = tuple(
            tuple(GrunskyBlock(b.j, b.i, b.matrix[:order, :order].copy()) for b in row)
            for row in self.blocks
        )
        return GrunskyOperator(blocks, order, self.route, dict(self.meta))

    def norm(self) -> float:
        return operator_norm(self)


def kernel_to_entries(k: np.ndarray) -> np.ndarray:
    n = np.arange(1, k.shape[0] + 1)
    m = np.arange(1, k.shape[1] + 1)
    return -k / np.sqrt(np.outer(n, m))


def entries_to_kernel(M: np.ndarray) -> np.ndarray:
    n = np.arange(1, M.shape[0] + 1)
    m = np.arange(1, M.shape[1] + 1)
    return -M * np.sqrt(np.outer(n, m))


def series_order(N: int) -> int:
    """Map series order needed for an N x N block (diagonal blocks need
    coefficients up to ``2N + 1``)."""
    return 2 * N + 1


# --------------------------------------------------------------------------
# series route

def _diagonal_kernel(f: ConformalMapModel, N: int) -> np.ndarray:
    g = f.taylor(series_order(N)).coeffs
    # (f(zeta) - f(z)) / (zeta - z) has coefficient g[a+b+1] at z^a zeta^b
    idx = np.add.outer(np.arange(N + 1), np.arange(N + 1)) + 1
    Q = PowerSeries(g[idx])
    Qz, Qw = Q.derivative(0), Q.derivative(1)
    Qzw = Qz.derivative(1)
    try:
        R = reciprocal(Q)
    except ZeroConstantTerm as exc:
        raise SeriesIllConditioned(f"divided difference has no usable pivot: {exc}") from None
    k = (Qzw * Q - Qz * Qw) * (R * R)
    return np.array(k.coeffs[:N, :N])


def _offdiagonal_kernel(fj: ConformalMapModel, fi: ConformalMapModel, N: int) -> np.ndarray:
    order = N - 1
    gi = fi.taylor(N + 1)
    gj = fj.taylor(N + 1)
    E = np.zeros((N, N), dtype=complex)
    E[0, 0] = fi.center - fj.center
    E[0, 1:] = gi.coeffs[1:N]
    E[1:, 0] = -gj.coeffs[1:N]
    try:
        R = reciprocal(PowerSeries(E))
    except ZeroConstantTerm as exc:
        raise SeriesIllConditioned(f"centers too close for a series expansion: {exc}") from None
    orders = (order, order)
    A = lift(gi.derivative(), 1, orders)   # f_i'(zeta)
    B = lift(gj.derivative(), 0, orders)   # f_j'(z)
    k = (R * R) * A * B
    return np.array(k.coeffs)


def kernel_coefficients(rigging: Rigging, j: int, i: int, N: int) -> np.ndarray:
    """Taylor coefficients ``k[n, m]`` (``z**n zeta**m``, ``n, m < N``) of
    the kernel of block ``(j, i)``."""
    if not rigging.certified:
        raise RiggingNotCertified("the rigging has not been certified disjoint")
    if N < 1:
        raise ValueError("truncation must be at least 1")
    if i == j:
        k = _diagonal_kernel(rigging.maps[i], N)
    else:
        k = _offdiagonal_kernel(rigging.maps[j], rigging.maps[i], N)
    if not np.all(np.isfinite(k)):
        raise SeriesIllConditioned(f"non-finite kernel coefficients in block ({j}, {i})")
    return k


def block_series(rigging: Rigging, j: int, i: int, N: int) -> GrunskyBlock:
    return GrunskyBlock(j, i, kernel_to_entries(kernel_coefficients(rigging, j, i, N)))


# --------------------------------------------------------------------------
# quadrature route

COINCIDENCE_RADIUS = 1e-3


def pointwise_diagonal_kernel(f: ConformalMapModel, z, zeta):
    """``f'(z) f'(zeta)/(f(zeta)-f(z))**2 - 1/(zeta-z)**2`` at points.

    Closed forms remove the removable singularity for the zoo kinds; the
    kernel is Moebius invariant, so Moebius images use their base map. For
    plain series maps, pairs closer than ``COINCIDENCE_RADIUS`` take the
    coincidence limit ``S(f)/6`` at the midpoint (the kernel is symmetric,
    so the error is second order in the separation).
    """
    z, zeta = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(zeta, dtype=complex))
    c = f.param
    if f.kind == "affine_disk":
        return np.zeros(z.shape, dtype=complex)
    if f.kind == "quadratic":
        return -c**2 / (1 + c * (z + zeta)) ** 2
    if f.kind == "joukowski_ellipse":
        return -c / (1 - c * z * zeta) ** 2
    if f.base is not None:
        return pointwise_diagonal_kernel(f.base, z, zeta)
    delta = zeta - z
    close = np.abs(delta) < COINCIDENCE_RADIUS
    safe = np.where(close, 1.0, delta)
    fz, fw = f(z), f(np.where(close, z + 1.0, zeta))
    dfz, dfw = f.derivative(z), f.derivative(zeta)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = dfz * dfw / (fw - fz) ** 2 - 1.0 / safe**2
    if np.any(close):
        s = schwarzian(f, f.raw.order)
        k = np.where(close, s(0.5 * (z + zeta)) / 6.0, k)
    return k


def _kernel_matrix(fj, fi, diagonal, z, zeta, fi_vals, dfi_vals):
    if diagonal:
        return pointwise_diagonal_kernel(fi, z[:, None], zeta[None, :])
    fjz = fj(z)
    dfjz = fj.derivative(z)
    return dfi_vals[None, :] * dfjz[:, None] / (fi_vals[None, :] - fjz[:, None]) ** 2


def block_quadrature(rigging: Rigging, j: int, i: int, N: int,
                     quad: DiskQuadrature | None = None,
                     outer: DiskQuadrature | None = None,
                     chunk: int = 512) -> GrunskyBlock:
    """Block ``(j, i)`` from the area integral.

    For each source basis vector the inner integral over ``zeta`` is
    evaluated with ``quad`` at the nodes of a second rule ``outer`` (rotated
    by half an angular step so the two node sets never meet), then projected
    onto the disk basis with ``outer``.

    Raises :class:`QuadratureDiverged` if the projection violates Bessel's
    inequality beyond round-off, or produces non-finite values.
    """
    if not rigging.certified:
        raise RiggingNotCertified("the rigging has not been certified disjoint")
    quad = quad if quad is not None else build_quadrature(48, 128)
    if outer is None:
        outer = build_quadrature(max(N + 8, 16), quad.angular, phase=0.5)
    fi, fj = rigging.maps[i], rigging.maps[j]
    scale = basis_scale(N)
    powers = np.arange(N)

    zeta = quad.nodes
    reflected = -scale[None, :] * np.conj(zeta)[:, None] ** powers[None, :]
    source = quad.weights[:, None] * reflected / np.pi
    fi_vals, dfi_vals = fi(zeta), fi.derivative(zeta)

    z = outer.nodes
    U = np.empty((len(z), N), dtype=complex)
    for start in range(0, len(z), chunk):
        zc = z[start:start + chunk]
        K = _kernel_matrix(fj, fi, i == j, zc, zeta, fi_vals, dfi_vals)
        U[start:start + chunk] = K @ source
    target = scale[None, :] * z[:, None] ** powers[None, :]
    M = (np.conj(target) * outer.weights[:, None]).T @ U

    if not np.all(np.isfinite(M)):
        raise QuadratureDiverged(f"non-finite entries in block ({j}, {i})")
    total = outer.weights @ np.abs(U) ** 2
    excess = np.sum(np.abs(M) ** 2, axis=0) - total
    if np.any(excess > 1e-6 * (1 + total)):
        raise QuadratureDiverged(
            f"projection residual {excess.max():.3g} exceeds bound in block ({j}, {i})"
        )
    return GrunskyBlock(j, i, M)


# --------------------------------------------------------------------------
# assembly and norms

def assemble(rigging: Rigging, N: int, route: str = "series",
             quad: DiskQuadrature | None = None, workers: int | None = None) -> GrunskyOperator:
    """All ``n x n`` blocks of the truncated operator.

    Blocks are independent, so ``workers > 1`` fills the grid from a thread
    pool; the result does not depend on the worker count.
    """
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    pairs = [(j, i) for j in range(rigging.n) for i in range(rigging.n)]
    if route == "series":
        def one(pair):
            return block_series(rigging, pair[0], pair[1], N)
    else:
        quad = quad if quad is not None else build_quadrature(48, 128)

        def one(pair):
            return block_quadrature(rigging, pair[0], pair[1], N, quad)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(one, pairs))
    else:
        done = [one(p) for p in pairs]
    grid = tuple(tuple(done[j * rigging.n:(j + 1) * rigging.n]) for j in range(rigging.n))
    meta = {"centers": rigging.centers, "margin": rigging.disjointness_margin}
    if route == "quadrature":
        meta["quadrature"] = (quad.radial, quad.angular)
    return GrunskyOperator(grid, N, route, meta)


def operator_norm(op, dense_limit: int = DENSE_LIMIT, maxiter: int = 20000,
                  rtol: float = 1e-10) -> float:
    """Largest singular value of the flattened matrix.

    This is the norm of a compression, hence a lower bound for the norm of
    the full operator. Dense SVD up to ``dense_limit`` rows, power iteration
    on ``M^H M`` above.
    """
    M = op.matrix if isinstance(op, GrunskyOperator) else np.asarray(op)
    if M.size == 0 or not np.any(M):
        return 0.0
    if max(M.shape) <= dense_limit:
        return float(np.linalg.svd(M, compute_uv=False)[0])
    rng = np.random.default_rng(0)
    v = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    sigma = change = 0.0
    for _ in range(maxiter):
        w = M @ v
        new = float(np.linalg.norm(w))
        v = M.conj().T @ w
        v /= np.linalg.norm(v)
        change = abs(new - sigma) / new
        sigma = new
        if change < 1e-14:
            return sigma
    if change > rtol:
        raise PowerIterationStalled(f"relative change {change:.3g} after {maxiter} iterations")
    return sigma


def truncation_sweep(rigging: Rigging, orders, route: str = "series",
                     quad: DiskQuadrature | None = None) -> list[tuple[int, float]]:
    """Norm of the compression for each order in ``orders`` (ascending).

    Entries do not depend on the truncation, so the operator is built once
    at the largest order and compressed; the norms are then non-decreasing.
    """
    orders = list(orders)
    if not orders:
        return []
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be strictly ascending")
    op = assemble(rigging, orders[-1], route, quad)
    return [(N, operator_norm(op.truncated(N))) for N in orders]
