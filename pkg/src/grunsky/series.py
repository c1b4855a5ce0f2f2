"""Truncated power series with complex coefficients.

A :class:`PowerSeries` of order ``N`` holds the coefficients ``c_0 .. c_N`` of

    f(z) = c_0 + c_1 z + ... + c_N z**N + O(z**(N+1)).

Coefficients above the order are *unknown*, not zero, so every binary
operation truncates to the smaller of the two operand orders.

Series can be nested: a series whose coefficients are themselves series in a
second variable. Nesting is stored as an N-dimensional coefficient array,
axis 0 being the outer variable, so that ``s[k]`` is the inner series
multiplying ``z**k``. All ring operations (product, reciprocal, exp, ...)
work unchanged at any depth; this is how bivariate kernels such as

    f'(zeta) g'(z) / (f(zeta) - g(z))**2

are expanded exactly to a fixed rectangle of coefficients.

Instances are immutable; every operation returns a new series.
"""

from __future__ import annotations

from numbers import Number

import numpy as np
from scipy import signal

from .errors import CompositionDomain, NonzeroConstant, ZeroConstantTerm

DEFAULT_ORDER = 32
PIVOT_EPSILON = 1e-14


def _fit(c, shape):
    """Truncate or zero-pad ``c`` to ``shape``."""
    out = np.zeros(shape, dtype=complex)
    region = tuple(slice(0, min(a, b)) for a, b in zip(c.shape, shape))
    out[region] = c[region]
    return out


def _toeplitz(c):
    """``T[..., i, j] = c[..., i - j]`` for ``i >= j``, else 0 (last axis)."""
    n = c.shape[-1]
    d = np.arange(n)[:, None] - np.arange(n)[None, :]
    return np.where(d >= 0, c[..., np.clip(d, 0, None)], 0)


def _conv(a, b):
    """Truncated product of two coefficient arrays of equal depth."""
    shape = tuple(min(x, y) for x, y in zip(a.shape, b.shape))
    a = a[tuple(slice(0, s) for s in shape)]
    b = b[tuple(slice(0, s) for s in shape)]
    if a.ndim == 1:
        return np.convolve(a, b)[:shape[0]]
    if a.ndim == 2:
        ta = _toeplitz(a)
        out = np.empty(shape, dtype=complex)
        for k in range(shape[0]):
            out[k] = np.einsum("lij,lj->i", ta[:k + 1], b[k::-1])
        return out
    full = signal.convolve(a, b, method="direct")
    return full[tuple(slice(0, s) for s in shape)]


def _reciprocal(c, eps):
    if c.ndim == 1:
        if abs(c[0]) < eps:
            raise ZeroConstantTerm(f"constant term {c[0]!r} is below {eps:g}")
        r = np.zeros_like(c)
        r[0] = 1.0 / c[0]
        for k in range(1, len(c)):
            r[k] = -np.dot(c[1:k + 1], r[k - 1::-1]) * r[0]
        return r
    r = np.zeros_like(c)
    r0 = _reciprocal(c[0], eps)
    r[0] = r0
    if c.ndim == 2:
        tc = _toeplitz(c)
        t0 = _toeplitz(r0)
        for k in range(1, c.shape[0]):
            acc = np.einsum("jab,jb->a", tc[1:k + 1], r[k - 1::-1])
            r[k] = -(t0 @ acc)
        return r
    for k in range(1, c.shape[0]):
        acc = np.zeros_like(r0)
        for j in range(1, k + 1):
            acc += _conv(c[j], r[k - j])
        r[k] = -_conv(r0, acc)
    return r


class PowerSeries:
    """Immutable truncated power series, possibly nested.

    Parameters
    ----------
    coeffs : array_like
        Coefficients ``c_0 .. c_N``. A 2-D array is read as a series in the
        outer variable (axis 0) whose coefficients are series in the inner
        variable (axis 1), and so on for higher depth.
    order : int, optional
        Pad with zeros or truncate along axis 0 to this order.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs, order: int | None = None):
        if isinstance(coeffs, PowerSeries):
            coeffs = coeffs._c
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 0:
            c = c.reshape(1)
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            c = _fit(c, (order + 1,) + c.shape[1:])
        c.flags.writeable = False
        self._c = c

    # construction helpers -------------------------------------------------
    @classmethod
    def _wrap(cls, c):
        obj = cls.__new__(cls)
        c.flags.writeable = False
        obj._c = c
        return obj

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> PowerSeries:
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls._wrap(c)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> PowerSeries:
        """The series ``z``."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return cls._wrap(c)

    @classmethod
    def zeros(cls, orders) -> PowerSeries:
        if isinstance(orders, int):
            orders = (orders,)
        return cls._wrap(np.zeros(tuple(o + 1 for o in orders), dtype=complex))

    # basic protocol -------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.shape[0] - 1

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self._c.shape)

    @property
    def depth(self) -> int:
        return self._c.ndim

    def __len__(self):
        return self._c.shape[0]

    def __getitem__(self, k):
        item = self._c[k]
        if isinstance(k, (int, np.integer)) and self.depth > 1:
            return PowerSeries._wrap(np.array(item))
        if np.ndim(item) == 0:
            return complex(item)
        return np.array(item)

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def __repr__(self):
        if self.depth == 1:
            return f"PowerSeries({np.array2string(self._c, precision=6)}, order={self.order})"
        return f"PowerSeries(<depth {self.depth}>, orders={self.orders})"

    def truncate(self, order: int) -> PowerSeries:
        """Lower (or zero-extend) the order along axis 0."""
        return PowerSeries(self._c, order=order)

    def allclose(self, other, atol=1e-12) -> bool:
        other = _coerce(other, self)
        a, b = _common(self._c, other._c)
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol)

    # evaluation -----------------------------------------------------------
    def __call__(self, x):
        """Evaluate the outer variable at ``x`` by Horner's rule.

        For a nested series the result is the inner series at that point.
        Array ``x`` is supported at depth 1.
        """
        c = self._c
        if c.ndim == 1:
            x = np.asarray(x)
            acc = np.zeros(x.shape, dtype=complex) + c[-1]
            for coef in c[-2::-1]:
                acc = acc * x + coef
            return complex(acc) if acc.ndim == 0 else acc
        acc = c[-1].copy()
        for coef in c[-2::-1]:
            acc = acc * x + coef
        return PowerSeries._wrap(acc)

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return PowerSeries._wrap(-self._c)

    def __add__(self, other):
        if isinstance(other, Number):
            c = self._c.copy()
            c[(0,) * c.ndim] += other
            return PowerSeries._wrap(c)
        other = _coerce(other, self)
        a, b = _common(self._c, other._c)
        return PowerSeries._wrap(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return PowerSeries._wrap(self._c * other)
        return mul(self, _coerce(other, self))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return PowerSeries._wrap(self._c / other)
        return mul(self, reciprocal(_coerce(other, self)))

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            return NotImplemented
        result = PowerSeries.constant(1.0, self.order) if self.depth == 1 else _one_like(self)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus -------------------------------------------------------------
    def derivative(self, axis: int = 0) -> PowerSeries:
        c = np.moveaxis(self._c, axis, 0)
        if c.shape[0] == 1:
            d = np.zeros_like(c)
        else:
            k = np.arange(1, c.shape[0]).reshape((-1,) + (1,) * (c.ndim - 1))
            d = c[1:] * k
        return PowerSeries._wrap(np.ascontiguousarray(np.moveaxis(d, 0, axis)))

    def antiderivative(self, axis: int = 0) -> PowerSeries:
        """Term-wise integral with zero constant; the order grows by one."""
        c = np.moveaxis(self._c, axis, 0)
        out = np.zeros((c.shape[0] + 1,) + c.shape[1:], dtype=complex)
        k = np.arange(1, c.shape[0] + 1).reshape((-1,) + (1,) * (c.ndim - 1))
        out[1:] = c / k
        return PowerSeries._wrap(np.ascontiguousarray(np.moveaxis(out, 0, axis)))

    def reciprocal(self, eps: float = PIVOT_EPSILON) -> PowerSeries:
        return reciprocal(self, eps)

    def exp(self) -> PowerSeries:
        return exp(self)

    def compose(self, inner: PowerSeries, allow_constant: bool = False) -> PowerSeries:
        return compose(self, inner, allow_constant)


def _coerce(other, like: PowerSeries) -> PowerSeries:
    if isinstance(other, PowerSeries):
        if other.depth != like.depth:
            raise ValueError(
                f"cannot combine series of depth {like.depth} and {other.depth}; "
                "use lift() to embed the shallower one"
            )
        return other
    if isinstance(other, Number):
        return _constant_like(like, other)
    return NotImplemented


def _common(a, b):
    shape = tuple(min(x, y) for x, y in zip(a.shape, b.shape))
    sl = tuple(slice(0, s) for s in shape)
    return a[sl], b[sl]


def _constant_like(s: PowerSeries, value) -> PowerSeries:
    c = np.zeros(s.coeffs.shape, dtype=complex)
    c[(0,) * c.ndim] = value
    return PowerSeries._wrap(c)


def _one_like(s: PowerSeries) -> PowerSeries:
    return _constant_like(s, 1.0)


def lift(series: PowerSeries, axis: int, orders) -> PowerSeries:
    """Embed a univariate series as a series in variable ``axis`` of a
    nested series with per-axis ``orders``.

    The embedded order along ``axis`` never exceeds the series' own order.
    """
    shape = [o + 1 for o in orders]
    shape[axis] = min(shape[axis], series.order + 1)
    c = np.zeros(shape, dtype=complex)
    index = [0] * len(shape)
    index[axis] = slice(None)
    c[tuple(index)] = series.coeffs[:shape[axis]]
    return PowerSeries._wrap(c)


# the operation-level interface ----------------------------------------------

def mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the smaller order (per variable)."""
    return PowerSeries._wrap(_conv(a.coeffs, b.coeffs))


def reciprocal(a: PowerSeries, eps: float = PIVOT_EPSILON) -> PowerSeries:
    """``1/a`` by forward substitution on the triangular Cauchy system.

    Raises :class:`ZeroConstantTerm` if the (innermost) pivot has modulus
    below ``eps``.
    """
    return PowerSeries._wrap(_reciprocal(a.coeffs, eps))


def calculus(a: PowerSeries, mode: str) -> PowerSeries:
    if mode == "derivative":
        return a.derivative()
    if mode == "antiderivative":
        return a.antiderivative()
    raise ValueError(f"unknown mode {mode!r}")


def exp(a: PowerSeries) -> PowerSeries:
    """Exponential of a series with zero constant term.

    For nested series only the innermost constant has to vanish.

    Uses the recurrence obtained from ``(exp a)' = a' exp a``:
    ``k c_k = sum_{j=1..k} j a_j c_{k-j}``.
    """
    c = a.coeffs
    if c.flat[0] != 0:
        raise NonzeroConstant("exp needs a series with zero constant term")
    out = np.zeros_like(c)
    unit = np.zeros(c.shape[1:], dtype=complex)
    unit[(0,) * unit.ndim] = 1.0
    # nested: the outer constant coefficient is itself a series
    out[0] = exp(PowerSeries._wrap(c[0].copy())).coeffs if c.ndim > 1 else unit
    for k in range(1, c.shape[0]):
        if c.ndim == 1:
            acc = np.dot(np.arange(1, k + 1) * c[1:k + 1], out[k - 1::-1])
        else:
            acc = np.zeros_like(unit)
            for j in range(1, k + 1):
                acc += j * _conv(c[j], out[k - j])
        out[k] = acc / k
    return PowerSeries._wrap(out)


def compose(outer: PowerSeries, inner: PowerSeries, allow_constant: bool = False) -> PowerSeries:
    """Series of ``outer(inner(z))``.

    ``outer`` must have scalar coefficients. The inner constant term must
    vanish unless ``allow_constant`` is set, in which case ``outer`` is
    treated as the polynomial it stores (exact only if it is entire to the
    stored order, which the caller asserts).
    """
    if outer.depth != 1:
        raise ValueError("outer series must have scalar coefficients")
    if inner.coeffs.flat[0] != 0 and not allow_constant:
        raise CompositionDomain(
            "inner series has a nonzero constant term; pass allow_constant=True "
            "if the outer series is a polynomial"
        )
    if allow_constant:
        shape = inner.coeffs.shape
    else:
        shape = tuple(min(s, outer.order + 1) for s in inner.coeffs.shape)
    inner_c = _fit(inner.coeffs, shape)
    acc = np.zeros(shape, dtype=complex)
    origin = (0,) * len(shape)
    for coef in outer.coeffs[::-1]:
        acc = _conv(acc, inner_c)
        acc[origin] += coef
    return PowerSeries._wrap(acc)
