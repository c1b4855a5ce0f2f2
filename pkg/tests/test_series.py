import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grunsky.errors import CompositionDomain, NonzeroConstant, ZeroConstantTerm
from grunsky.series import PowerSeries as P, compose, exp, lift, mul, reciprocal


def close(a, b, tol=1e-14):
    a = a.coeffs if isinstance(a, P) else np.asarray(a)
    b = b.coeffs if isinstance(b, P) else np.asarray(b)
    assert a.shape == b.shape
    assert np.max(np.abs(a - b), initial=0) <= tol


def test_mul_examples():
    close(mul(P([1, 1, 0]), P([1, -1, 0])), [1, 0, -1])
    b = P([2, -1j, 3])
    close(mul(P([1, 0, 0]), b), b)
    close(mul(P([1, 2, 1]), P([3, 1, 0])), [3, 7, 5])


def test_order_is_min_of_operands():
    assert (P([1, 2, 3, 4]) * P([1, 1])).order == 1
    assert (P([1, 2, 3]) + P([1, 1, 1, 1, 1])).order == 2


def test_reciprocal_examples():
    close(reciprocal(P([1, -1, 0, 0])), [1, 1, 1, 1])
    close(reciprocal(P([2, 0, 0])), [0.5, 0, 0])
    close(reciprocal(P([1, 1, 1])), [1, -1, 0])


def test_reciprocal_zero_pivot():
    with pytest.raises(ZeroConstantTerm):
        reciprocal(P([0, 1, 2]))
    with pytest.raises(ZeroConstantTerm):
        reciprocal(P([1e-16, 1]))


def test_compose_examples():
    close(compose(P([0, 0, 1, 0]), P([0, 1, 1, 0])), [0, 0, 1, 2])
    q = P([0, 2, -1j, 5])
    close(compose(P([0, 1, 0, 0]), q), q)
    close(compose(P([1, 1, 1]), P([0, 2, 0])), [1, 2, 4])


def test_compose_needs_zero_constant():
    with pytest.raises(CompositionDomain):
        compose(P([1, 1]), P([1, 1]))
    # a polynomial outer series may take any inner series
    close(compose(P([1, 0, 1]), P([1, 1, 0]), allow_constant=True), [2, 2, 1])


def test_calculus_examples():
    close(P([1, 1, 1]).derivative(), [1, 2])
    close(P([1, 2]).antiderivative(), [0, 1, 1])
    a = P([3, -1, 2j, 0.5])
    close(a.antiderivative().derivative(), a)


def test_exp_examples():
    close(exp(P([0, 0, 0])), [1, 0, 0])
    close(exp(P([0, 1, 0, 0])), [1, 1, 0.5, 1 / 6])
    close(exp(P([0, 2, 1])), [1, 2, 3])
    with pytest.raises(NonzeroConstant):
        exp(P([1, 1]))


def test_evaluation_and_scalars():
    a = P([1, 2, 3])
    assert a(0.5) == pytest.approx(1 + 1 + 0.75)
    np.testing.assert_allclose(a(np.array([0, 1])), [1, 6])
    close(2 * a - a, a)
    close(a / 2, [0.5, 1, 1.5])
    close(a**2, [1, 4, 10])


def test_bivariate_product_and_reciprocal():
    # (1 - z w)^-1 = sum (z w)^k
    one_minus = np.zeros((5, 5), complex)
    one_minus[0, 0], one_minus[1, 1] = 1, -1
    r = reciprocal(P(one_minus))
    close(r, np.eye(5))
    z = lift(P([0, 1, 0, 0, 0]), 0, (4, 4))
    w = lift(P([0, 1, 0, 0, 0]), 1, (4, 4))
    s = (z + w) * (z + w)
    assert s.coeffs[2, 0] == 1 and s.coeffs[1, 1] == 2 and s.coeffs[0, 2] == 1


def test_nested_exp_matches_univariate_on_diagonal_slice():
    a = np.zeros((4, 4), complex)
    a[1, 0] = 0.3
    a[0, 1] = -0.2j
    e = exp(P(a))
    # exp(0.3 z - 0.2i w) factorizes
    ez = exp(P([0, 0.3, 0, 0])).coeffs
    ew = exp(P([0, -0.2j, 0, 0])).coeffs
    close(e, np.outer(ez, ew))


# -- properties ---------------------------------------------------------------

def series(order=st.integers(1, 64)):
    part = st.floats(-1, 1, allow_nan=False)
    coef = st.builds(complex, part, part)
    return order.flatmap(lambda n: st.lists(coef, min_size=n + 1, max_size=n + 1).map(P))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 64).flatmap(lambda n: st.tuples(*(series(st.just(n)),) * 3)))
def test_ring_axioms(abc):
    a, b, c = abc
    close(a * b, b * a, 1e-12)
    close((a * b) * c, a * (b * c), 1e-12)
    close(a * (b + c), a * b + a * c, 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 64), st.integers(0, 2**31 - 1))
def test_reciprocal_residual(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.uniform(-10, 10, n + 1) + 1j * rng.uniform(-10, 10, n + 1)
    c[0] = 0.1 + abs(c[0]) if abs(c[0]) < 0.1 else c[0]
    # |c_0| >= 0.1 with tail decay: a large tail would make 1/a grow
    # geometrically and the residual would measure that growth instead
    c[1:] *= 0.5 * abs(c[0]) / np.maximum(np.abs(c[1:]), 1e-300) / np.arange(1, n + 1) ** 2
    a = P(c)
    unit = np.zeros(n + 1)
    unit[0] = 1
    close(a * reciprocal(a), unit, 1e-10)


@settings(max_examples=40, deadline=None)
@given(series(st.integers(1, 40)))
def test_exp_derivative_identity(a):
    a = a - a.coeffs[0]
    a = a * (1 / max(1.0, np.max(np.abs(a.coeffs))))
    e = exp(a)
    lhs = e.derivative()
    rhs = a.derivative() * e.truncate(e.order - 1)
    close(lhs, rhs, 1e-10)


@settings(max_examples=40, deadline=None)
@given(series(st.integers(2, 16)), series(st.integers(2, 16)), series(st.integers(2, 16)))
def test_compose_associative(a, b, c):
    b = b - b.coeffs[0]
    c = c - c.coeffs[0]
    a, b, c = (s * (0.5 / max(1.0, np.max(np.abs(s.coeffs)))) for s in (a, b, c))
    left = compose(compose(a, b), c)
    right = compose(a, compose(b, c))
    m = min(left.order, right.order)
    close(left.truncate(m), right.truncate(m), 1e-12)
