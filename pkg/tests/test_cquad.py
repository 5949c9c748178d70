import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complexdisc import (
    ContourMeasure,
    complex_jacobi,
    complex_recurrence,
    contour_inner_product,
    contour_integrate,
    contour_rule,
    eval_eta,
    semicircle_rule,
)
from complexdisc.polyquad import QuadratureRule

UNIT = ContourMeasure()


def theta_oracle(n):
    """Unit-weight coefficients from a closed recursion in b_k = k^2 / (4k^2 - 1).

    The semicircle family is tied to Legendre polynomials, whose monic
    recurrence has ``beta_k = b_k``; eliminating the Legendre data leaves
    ``theta_k = theta_{k-1} + (b_k - nu_k) / theta_{k-1}`` with
    ``nu_{k+1} = b_k theta_k / theta_{k-1}`` and ``mu_k = theta_k - theta_{k-1}``.
    """
    b = lambda k: k * k / (4.0 * k * k - 1.0)  # noqa: E731
    theta = [-2.0 / np.pi]
    mu = [theta[0]]
    nu = [np.pi, 4.0 / np.pi**2]
    for k in range(1, n):
        theta.append(theta[-1] + (b(k) - nu[k]) / theta[-1])
        mu.append(theta[k] - theta[k - 1])
        nu.append(b(k) * theta[k] / theta[k - 1])
    return np.array(mu), np.array(nu[:n])


def moment(k):
    if k == 0:
        return np.pi
    return -2j / k if k % 2 else 0.0


@pytest.mark.parametrize(
    "f, g, expected",
    [(lambda z: np.ones_like(z), lambda z: np.ones_like(z), np.pi), (lambda z: z, lambda z: np.ones_like(z), -2j), (lambda z: z, lambda z: z, 0.0)],
)
@pytest.mark.parametrize("route", ["arc", "segment"])
def test_inner_product_examples(f, g, expected, route):
    assert abs(contour_inner_product(UNIT, f, g, route=route) - expected) < 1e-12


def test_low_order_coefficients():
    r = complex_recurrence(UNIT, 2)
    assert r.mu[0] == pytest.approx(-2 / np.pi, abs=1e-13)
    assert r.mu[1] == pytest.approx((4 / np.pi**2 - 1 / 3) * np.pi / 2, abs=1e-12)
    assert r.mu[1] == pytest.approx(0.11302, abs=1e-5)
    assert r.nu[1] == pytest.approx(4 / np.pi**2, abs=1e-13)


def test_against_theta_oracle():
    n = 100
    r = complex_recurrence(UNIT, n)
    mu, nu = theta_oracle(n)
    np.testing.assert_allclose(r.mu, mu, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(r.nu[1:n], nu[1:n], rtol=1e-9)


def test_jacobi_shape_and_symmetry():
    r = complex_recurrence(UNIT, 2)
    M = complex_jacobi(r)
    expected = np.array([[-2j / np.pi, 2 / np.pi], [2 / np.pi, 1j * r.mu[1]]])
    np.testing.assert_allclose(M, expected, atol=1e-13)
    assert np.array_equal(M, M.T)
    one = complex_jacobi(complex_recurrence(UNIT, 1))
    assert one.shape == (1, 1) and one[0, 0] == pytest.approx(-2j / np.pi)


def test_small_rules():
    one = semicircle_rule(1)
    assert one.nodes[0] == pytest.approx(-2j / np.pi, abs=1e-13)
    assert one.weights[0] == pytest.approx(np.pi, abs=1e-13)
    two = semicircle_rule(2)
    # roots of lam^2 + (i pi / 6) lam - 1/3
    roots = np.sort_complex(np.roots([1.0, 1j * np.pi / 6, -1.0 / 3]))
    np.testing.assert_allclose(two.nodes, roots, atol=1e-12)
    np.testing.assert_allclose(two.nodes, [-0.514581785415 - 0.261799387799j, 0.514581785415 - 0.261799387799j], atol=1e-11)
    assert contour_integrate(one, lambda z: z) == pytest.approx(-2j, abs=1e-12)
    assert abs(contour_integrate(two, lambda z: z**2)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=1, max_value=100))
def test_node_geometry_and_mass(n):
    rule = semicircle_rule(n)
    assert np.all(rule.nodes.imag < 0)
    assert np.all(np.abs(rule.nodes) < 1)
    assert abs(rule.weights.sum() - np.pi) < 1e-10


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=1, max_value=60))
def test_moment_exactness(n):
    rule = semicircle_rule(n)
    for k in range(2 * n):
        got = contour_integrate(rule, lambda z: z**k)
        ref = moment(k)
        scale = abs(ref) if ref != 0 else 1.0
        assert abs(got - ref) / scale < 1e-8, (n, k, got, ref)


def test_bilinear_biorthogonality():
    M = complex_jacobi(complex_recurrence(UNIT, 30))
    _, V = np.linalg.eig(M)
    V = V / np.sqrt(np.sum(V * V, axis=0))
    np.testing.assert_allclose(V.T @ V, np.eye(30), atol=1e-9)


def test_nodes_are_zeros_of_eta():
    n = 12
    r = complex_recurrence(UNIT, n + 1)
    rule = contour_rule(r.truncate(n))
    vals = eval_eta(r, rule.nodes, n)
    # polish each zero of eta_n with Newton steps using a finite-difference slope
    for z0 in rule.nodes:
        z = z0
        for _ in range(5):
            f = eval_eta(r, z, n)[n]
            h = 1e-7
            df = (eval_eta(r, z + h, n)[n] - eval_eta(r, z - h, n)[n]) / (2 * h)
            z = z - f / df
        assert abs(z - z0) < 1e-8
    assert np.max(np.abs(vals[n])) < 1e-8 * np.max(np.abs(vals))


def test_eta_normalization():
    r = complex_recurrence(UNIT, 3)
    e0 = eval_eta(r, np.array([0.3 - 0.2j, -1j]), 1)[0]
    np.testing.assert_allclose(e0, 1 / np.sqrt(np.pi))
    eta1 = lambda z: eval_eta(r, z, 1)[1]  # noqa: E731
    assert abs(contour_inner_product(UNIT, eta1, eta1) - 1.0) < 1e-10
    assert abs(contour_inner_product(UNIT, lambda z: eval_eta(r, z, 1)[0], eta1)) < 1e-10
    r1 = complex_recurrence(UNIT, 1)
    assert abs(eval_eta(r1, -2j / np.pi, 1)[1]) < 1e-12


def test_branch_of_sqrt_nu_is_irrelevant():
    r = complex_recurrence(UNIT, 20)
    M = complex_jacobi(r)
    signs = np.where(np.arange(19) % 3 == 0, -1.0, 1.0)
    M2 = M.copy()
    idx = np.arange(19)
    M2[idx, idx + 1] *= signs
    M2[idx + 1, idx] *= signs
    a = contour_rule(r)
    vals, V = np.linalg.eig(M2)
    V = V / np.sqrt(np.sum(V * V, axis=0))
    order = np.lexsort((vals.imag, vals.real))
    np.testing.assert_allclose(vals[order], a.nodes, atol=1e-12)
    np.testing.assert_allclose(np.pi * V[0, order] ** 2, a.weights, atol=1e-11)


def test_integrate_rejects_real_rules():
    with pytest.raises(ValueError):
        contour_integrate(QuadratureRule(np.array([1.0]), np.array([1.0]), 1.0), lambda z: z)
