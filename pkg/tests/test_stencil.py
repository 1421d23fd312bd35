import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from triharm.grid import GridFunction, make_grid
from triharm.stencil import (
    StencilContext,
    apply_lambda1,
    apply_lambda2,
    apply_lambda_star,
    modified_rhs,
    second_difference_eigenvalue,
)

from conftest import sine_field


def eig(p, h):
    # Direct formula, independent of the library helper.
    return -4.0 / h**2 * math.sin(p * math.pi * h / 2) ** 2


def test_context_coefficient():
    g = make_grid(4, 8)
    assert StencilContext(g).c == pytest.approx((0.25**2 + 0.125**2) / 12)


def test_lambda1_constant_and_quadratic():
    g = make_grid(7, 5, 1.3, 0.9)
    assert np.all(apply_lambda1(GridFunction.constant(g, 4.0)).values == 0.0)
    q = apply_lambda1(GridFunction.sample(g, lambda x1, x2: x1**2 + 0 * x2))
    np.testing.assert_allclose(q.values[1:-1, :], 2.0, rtol=1e-10)
    assert np.all(q.values[[0, -1], :] == 0.0)


def test_lambda2_quadratic():
    g = make_grid(6, 9)
    q = apply_lambda2(GridFunction.sample(g, lambda x1, x2: 3 * x2**2 + x1))
    np.testing.assert_allclose(q.values[:, 1:-1], 6.0, rtol=1e-10)


@pytest.mark.parametrize("n", [8, 16, 32])
def test_lambda1_eigenrelation_all_modes(n):
    g = make_grid(n)
    X1, X2 = g.mesh()
    for p in range(1, n):
        y = np.sin(p * np.pi * X1) * np.cos(X2)
        out = apply_lambda1(GridFunction(g, y)).values
        lam = eig(p, g.h1)
        np.testing.assert_allclose(out[1:-1, :], lam * y[1:-1, :], rtol=1e-12, atol=1e-12 * abs(lam))
        assert second_difference_eigenvalue(p, n, g.h1) == pytest.approx(lam, rel=1e-14)


def test_lambda_star_zero_and_bilinear():
    g = make_grid(6, 4)
    assert np.all(apply_lambda_star(GridFunction.zeros(g)).values == 0.0)
    y = GridFunction.sample(g, lambda x1, x2: 1.5 - 2 * x1 + 0.5 * x2 + 3 * x1 * x2)
    np.testing.assert_allclose(apply_lambda_star(y).values, 0.0, atol=1e-11)


@pytest.mark.parametrize("p, q", [(1, 1), (2, 3), (5, 1)])
def test_lambda_star_product_eigenrelation(p, q):
    g = make_grid(16)
    y = sine_field(g, p, q)
    lp, lq = eig(p, g.h1), eig(q, g.h2)
    c = (g.h1**2 + g.h2**2) / 12
    expected = (lp + lq + c * lp * lq) * y.values
    out = apply_lambda_star(y).values
    np.testing.assert_allclose(out[1:-1, 1:-1], expected[1:-1, 1:-1], atol=1e-12 * abs(lp + lq))


def test_modified_rhs_examples():
    g = make_grid(8, 4)
    out = modified_rhs(GridFunction.constant(g, 2.5))
    np.testing.assert_allclose(out.interior(), 2.5, rtol=1e-14)

    out = modified_rhs(GridFunction.sample(g, lambda x1, x2: x1**2 + 0 * x2))
    X1, _ = g.mesh()
    np.testing.assert_allclose(out.interior(), (X1**2 + g.h1**2 / 6)[1:-1, 1:-1], rtol=1e-12)

    g = make_grid(16, 8)
    y = sine_field(g)
    factor = 1 + g.h1**2 / 12 * eig(1, g.h1) + g.h2**2 / 12 * eig(1, g.h2)
    np.testing.assert_allclose(modified_rhs(y).interior(), factor * y.interior(), atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), nx=st.integers(2, 10), ny=st.integers(2, 10), a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_linearity(seed, nx, ny, a, b):
    rng = np.random.default_rng(seed)
    g = make_grid(nx, ny, 1.0, 0.7)
    y = GridFunction(g, rng.standard_normal(g.shape))
    z = GridFunction(g, rng.standard_normal(g.shape))
    for op in (apply_lambda1, apply_lambda2, apply_lambda_star, modified_rhs):
        lhs = op(a * y + b * z).values
        rhs = a * op(y).values + b * op(z).values
        scale = 1 + np.abs(op(y).values).max() + np.abs(op(z).values).max()
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * scale * (1 + abs(a) + abs(b)))


def test_consistency_is_fourth_order():
    def defect(n):
        g = make_grid(n)
        y = GridFunction.sample(g, lambda x1, x2: np.exp(x1 + x2))
        lap = GridFunction.sample(g, lambda x1, x2: 2 * np.exp(x1 + x2))
        return np.abs(apply_lambda_star(y).interior() - modified_rhs(lap).interior()).max()

    d = [defect(n) for n in (8, 16, 32)]
    for coarse, fine in zip(d, d[1:]):
        assert 12 <= coarse / fine <= 20
