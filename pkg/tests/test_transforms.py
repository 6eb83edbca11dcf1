import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyinf import transforms as tr
from polyinf.gaussmoments import berezin_of_poly, gauss_hermite_nodes
from polyinf.polycore import PolyFun, random_polyfun
from polyinf.spaces import SF, norm

z, zb = PolyFun.z(), PolyFun.zbar()
seeds = st.integers(0, 2**31)


def _random_hermite(rng, top):
    return tr.HermiteCoeffs({(m, n): complex(*rng.normal(size=2))
                             for m in range(top) for n in range(top - m) if rng.random() < 0.6})


def test_hermite_functions_orthonormal():
    x, w = gauss_hermite_nodes(120)
    psi = np.array(tr.hermite_functions(30, x)) * np.exp(x * x / 2)
    G = (psi * w) @ psi.T
    assert np.max(np.abs(G - np.eye(31))) < 1e-12


def test_hermite_function_values():
    assert tr.hermite_function(0, 0.0) == pytest.approx(math.pi ** -0.25)
    x = 0.7
    h2 = 4 * x * x - 2
    expected = h2 * math.exp(-x * x / 2) / math.sqrt(2 ** 2 * 2 * math.sqrt(math.pi))
    assert tr.hermite_function(2, x) == pytest.approx(expected, rel=1e-13)


def test_bargmann_kernel_series():
    for zz, x in [(0.3 + 0.2j, 0.5), (-1.0j, -1.2), (1.1, 0.0)]:
        assert tr.bargmann_series(zz, x, 60) == pytest.approx(tr.bargmann_kernel(zz, x), rel=1e-12)


def test_bargmann_inner_is_exponential():
    for a, b in [(0.5j, 0.3), (1 - 1j, 0.2 + 0.4j)]:
        assert tr.bargmann_inner(a, b) == pytest.approx(np.exp(a * np.conj(b)), rel=1e-12)


def test_segal_bargmann_roundtrip(rng):
    phi = _random_hermite(rng, 10)
    back = tr.segal_bargmann_inverse(tr.segal_bargmann(phi))
    assert back.max_abs_diff(phi) < 1e-12


@given(seeds)
def test_segal_bargmann_isometry(seed):
    phi = _random_hermite(np.random.default_rng(seed), 12)
    assert norm(tr.segal_bargmann(phi), SF) == pytest.approx(phi.l2_norm(), rel=1e-12, abs=1e-300)


def test_segal_bargmann_against_quadrature(rng):
    phi = _random_hermite(rng, 8)
    f = tr.segal_bargmann(phi)
    for p in (0.2 - 0.1j, 1.0 + 0.5j):
        assert tr.segal_bargmann_quadrature_oracle(phi, p) == pytest.approx(f.eval(p), rel=1e-11)


def test_kernel_factorization():
    for a, b in [(0.4j, -0.3), (0.5 + 0.5j, 1.0 - 0.2j)]:
        F = np.exp(a * np.conj(b))
        assert tr.kernel_factorization_quadrature(a, b) == pytest.approx(F * np.conj(F), rel=1e-12)


def test_conjugation_identities():
    assert tr.position_conjugation_residual(8) < 1e-12
    assert tr.creation_conjugation_residual(8) < 1e-12
    with pytest.raises(ValueError):
        tr.position_conjugation_residual(3)


def test_complex_hermite_examples():
    assert tr.complex_hermite_to_monomials(1, 1) == z * zb - PolyFun.constant(1)
    assert tr.complex_hermite_to_monomials(3, 0) == z ** 3
    ch = tr.monomials_to_complex_hermite(z * zb)
    assert ch.terms == {(1, 1): 1, (0, 0): 1}


@given(seeds)
def test_complex_hermite_roundtrip(seed):
    f = random_polyfun(np.random.default_rng(seed), 8)
    back = tr.monomials_to_complex_hermite(f).to_polyfun()
    assert back.allclose(f, rtol=1e-12, atol=1e-12)


def test_berezin_examples():
    assert tr.berezin(z * zb) == z * zb + PolyFun.constant(1)
    assert tr.berezin(z ** 4) == z ** 4
    assert tr.berezin(z * zb - PolyFun.constant(1)) == z * zb


def test_berezin_against_moment_oracle(rng):
    f = random_polyfun(rng, 8)
    bf = tr.berezin(f)
    for p in (0.3j, -0.7 + 0.2j, 1.1):
        assert bf.eval(p) == pytest.approx(berezin_of_poly(f, p), rel=1e-10, abs=1e-10)


@given(seeds)
def test_mu_norm_two_ways(seed):
    f = random_polyfun(np.random.default_rng(seed), 7)
    assert tr.mu_norm(f) == pytest.approx(tr.mu_norm_by_moments(f), rel=1e-9, abs=1e-12)


@given(seeds)
def test_berezin_is_unitary_onto_sf(seed):
    f = random_polyfun(np.random.default_rng(seed), 7)
    assert tr.berezin_sf_norm(f) == pytest.approx(tr.mu_norm(f), rel=1e-12, abs=1e-300)


def test_berezin_derivative_relations(rng):
    res = tr.berezin_derivative_residuals(random_polyfun(rng, 8))
    assert len(res) == 19
    assert max(res.values()) < 1e-9


@pytest.mark.parametrize("beta", [2.5, 4.0, 10.0])
def test_berezin_bound(beta, rng):
    for _ in range(5):
        lhs, rhs = tr.berezin_bound_check(random_polyfun(rng, 6), beta)
        assert lhs <= rhs * (1 + 1e-12)
    with pytest.raises(ValueError):
        tr.berezin_bound_check(z, 2.0)


def test_s_phi_specializations(rng):
    f = random_polyfun(rng, 5)
    p = 0.4 - 0.3j
    assert tr.s_phi(f, p, p) == pytest.approx(tr.berezin(f).eval(p), rel=1e-10)
    g = PolyFun({(3, 0): 1.0, (1, 0): -2.0, (0, 0): 0.5})
    assert tr.s_phi(g, 0, p) == pytest.approx(g.eval(p), rel=1e-11)
