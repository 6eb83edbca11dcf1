import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyinf import pick
from polyinf.errors import DomainViolation
from polyinf.polycore import PolyFun, random_polyfun

ball = st.tuples(st.floats(0, 0.7), st.floats(0, 6.28)).map(
    lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


def test_problem_validation():
    with pytest.raises(ValueError):
        pick.PickProblem((0.1,), ())
    with pytest.raises(ValueError):
        pick.PickProblem((0.1, 0.1), (0, 0))
    with pytest.raises(DomainViolation):
        pick.PickProblem((0.9,), (0,))


def test_one_point():
    assert pick.feasible(pick.PickProblem((0.3j,), (0.99,)))
    assert not pick.feasible(pick.PickProblem((0.3j,), (1.01,)))
    rep = pick.feasibility_report(pick.PickProblem((0.1,), (0.5,)))
    assert rep["feasible"] and rep["cholesky_ok"]
    assert rep["min_eig"] == pytest.approx(0.75 / 0.98)


def test_two_point_constant_targets():
    p = pick.PickProblem((0.1, -0.2j), (0.5, 0.5))
    assert pick.feasible(p)
    # two distinct targets at the same inner-product level need enough separation of nodes
    q = pick.PickProblem((0.1, 0.11), (0.9, -0.9))
    assert not pick.feasible(q)
    assert not pick.feasibility_report(q)["cholesky_ok"]


def test_pivoted_cholesky():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    A = X @ X.conj().T
    L, perm, rank, ok = pick.pivoted_cholesky(A)
    assert ok and rank == 3
    P = A[np.ix_(perm, perm)]
    assert np.max(np.abs(P - L[:, :rank] @ L[:, :rank].conj().T)) < 1e-10
    assert not pick.pivoted_cholesky(np.diag([1.0, -1.0]))[3]


@given(st.lists(ball, min_size=1, max_size=8, unique=True))
def test_kernel_gram_is_psd(nodes):
    p = pick.PickProblem(tuple(nodes), tuple(0 for _ in nodes))
    assert pick.psd_report(pick.pick_matrix(p), 1e-8)["psd"]


def test_c_coeffs():
    c = pick.c_coeffs(5, exact=True)
    assert c[:3] == [Fraction(1, 2), Fraction(1, 8), Fraction(1, 16)]
    cf = pick.c_coeffs(5)
    assert cf == pytest.approx([float(x) for x in c])
    for N in (1, 5, 60):
        assert 1 - sum(pick.c_coeffs(N, exact=True)) == pick.c_tail(N)
    assert float(pick.c_tail(60)) == pytest.approx(0.0727, abs=1e-4)
    with pytest.raises(ValueError):
        pick.c_coeffs(0)


def test_sqrt_factor():
    assert np.array_equal(pick.sqrt_factor(0), np.eye(2))
    for a in (0.3, 0.5 - 0.2j, 0.69j):
        S = pick.sqrt_factor(a)
        v = np.array([[np.conj(a)], [a]])
        assert np.max(np.abs(S @ S - (np.eye(2) - v @ v.conj().T))) < 1e-13
        assert np.max(np.abs(S - pick.sqrt_factor_series(a))) < 1e-11


def test_blaschke_factor():
    assert np.allclose(pick.blaschke_eval(0, 0.3 + 0.1j), [[0.3 + 0.1j, 0.3 - 0.1j]])
    b = pick.BlaschkeFactor(0.2j)
    assert np.allclose(b(0.2j), 0)
    assert b.prefactor == pytest.approx(1 - 2 * 0.04)
    # the row norm of b_a stays below one inside the ball
    for zz in (0.1, -0.5j, 0.4 + 0.4j):
        assert np.linalg.norm(b(zz)) < 1


def test_kernel_gleason_closed_form():
    for a, b, zz in [(0.1, 0.2j, -0.3), (0.4 - 0.1j, 0.3, 0.2 + 0.5j)]:
        assert pick.kernel_gleason_residual(a, b, zz) < 1e-14


def test_counterexample():
    f = pick.counterexample_function(3)
    assert f.coeff(1, 0) == 1 and f.coeff(0, 2) == 0.5 and f.coeff(0, 6) == 1 / 16
    sup, nrm2 = pick.schur_counterexample_report(20, n_boundary=1024, n_interior=2000)
    assert sup <= 1 + 1e-9
    c = pick.c_coeffs(20)
    assert nrm2 == pytest.approx(1 + sum(x * x for x in c), rel=1e-12)
    assert nrm2 > 1


@pytest.mark.parametrize("n,m", [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)])
def test_derivative_reproducing(n, m, rng):
    f = random_polyfun(rng, 6)
    assert pick.da_derivative_reproducing_residual(f, 0.2, -0.3, n, m, 6) < 1e-10


def test_derivative_reproducing_domain():
    with pytest.raises(DomainViolation):
        pick.da_derivative_reproducing_residual(PolyFun.z(), 0.6, 0.5, 1, 0, 4)
    with pytest.raises(ValueError):
        pick.da_derivative_reproducing_residual(PolyFun.z(), 0.1, 0.1, 3, 2, 4)


def test_xy_monomials():
    assert pick.monomials_in_hk_check(1, 0) ** 2 == pytest.approx(0.5)
    assert pick.monomials_in_hk_check(0, 1) ** 2 == pytest.approx(0.5)
    assert pick.monomials_in_hk_check(2, 3) > 0


def test_cnp_split():
    pts = [0.1, 0.2j, -0.3 + 0.1j]
    J, G = pick.cnp_split(pts)
    p = pick.PickProblem(tuple(pts), (0, 0, 0))
    assert np.allclose(1 / (J - G), pick.pick_matrix(p))
    assert np.linalg.eigvalsh(G)[0] > -1e-14
