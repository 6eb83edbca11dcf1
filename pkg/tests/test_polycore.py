import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyinf.errors import DegreeOverflow
from polyinf.polycore import PolyFun, SparseCoeffs, as_point, exp_series, phi_basis, random_polyfun

z, zb = PolyFun.z(), PolyFun.zbar()

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
idx = st.tuples(st.integers(0, 6), st.integers(0, 6))
polys = st.dictionaries(idx, coef, max_size=12).map(PolyFun)
points = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_eval_examples():
    assert (z * zb).eval(1 + 1j) == pytest.approx(2)
    assert PolyFun.constant(1).eval(0.3 - 2j) == 1
    assert (z ** 2 + zb ** 2).eval(1j) == pytest.approx(-2)


def test_wirtinger_derivatives():
    f = z ** 2 * zb
    assert f.ddz() == PolyFun({(1, 1): 2})
    assert f.ddzbar() == PolyFun({(2, 0): 1})
    assert PolyFun.constant(1).ddz().is_zero()


def test_laplacian_examples():
    assert (z ** 3).laplacian().is_zero()
    assert (z * zb).laplacian() == PolyFun.constant(4)
    for p, q in [(1, 1), (3, 2), (4, 4)]:
        lhs = phi_basis(p, q).laplacian()
        rhs = phi_basis(p - 1, q - 1).scale(4 * np.sqrt(p * q))
        assert lhs.allclose(rhs)


def test_multiplication_and_conjugation():
    assert zb.mul_zbar().mul_z() == PolyFun({(1, 2): 1})
    assert PolyFun({(2, 1): 1j}).conj() == PolyFun({(1, 2): -1j})
    assert (z + zb).mul(z - zb) == z ** 2 - zb ** 2


def test_real_partials():
    assert z.ddx() == PolyFun.constant(1)
    assert z.ddy() == PolyFun.constant(1j)
    assert (z * zb).ddx() == z + zb
    x, y = PolyFun.x(), PolyFun.y()
    assert x.eval(0.3 + 0.4j) == pytest.approx(0.3)
    assert y.eval(0.3 + 0.4j) == pytest.approx(0.4)


def test_zero_pruning_and_bad_indices():
    f = PolyFun({(1, 0): 1, (0, 1): 0})
    assert dict(f.terms) == {(1, 0): 1}
    assert (z - z).is_zero()
    with pytest.raises(ValueError):
        PolyFun({(-1, 0): 1})


def test_degree_cap():
    f = PolyFun.monomial(3, 2, cap=5)
    with pytest.raises(DegreeOverflow):
        f.mul_z()
    with pytest.raises(DegreeOverflow):
        f.mul(f)
    with pytest.raises(DegreeOverflow):
        PolyFun({(4, 4): 1}, cap=7)


def test_as_point():
    assert as_point((1, 2)) == 1 + 2j
    with pytest.raises(ValueError):
        as_point(complex(float("nan"), 0))


def test_json_roundtrip(rng):
    f = random_polyfun(rng, 5)
    g = PolyFun.from_json(f.to_json())
    assert g == f
    data = json.loads(f.to_json())
    assert set(data) == {"terms"}
    assert set(data["terms"][0]) == {"m", "n", "re", "im"}


def test_json_rejects_duplicates():
    doc = {"terms": [{"m": 1, "n": 0, "re": 1, "im": 0}, {"m": 1, "n": 0, "re": 2, "im": 0}]}
    with pytest.raises(ValueError):
        PolyFun.from_dict(doc)


def test_exact_mode():
    f = PolyFun({(2, 1): 0.5, (0, 3): 3}).exact()
    assert all(isinstance(c, Fraction) for c in f.terms.values())
    g = f.mul_z().ddz() - f.ddz().mul_z()
    assert g == f


def test_exp_series_matches_exponential():
    c = 0.3 - 0.2j
    f = exp_series(c, "z", 30)
    assert f.eval(0.7 + 0.1j) == pytest.approx(np.exp(c * (0.7 + 0.1j)), rel=1e-14)


def test_sparse_coeffs_base_is_generic():
    a = SparseCoeffs({(0, 1): 2})
    assert (a + a).coeff(0, 1) == 4


@given(polys, points)
def test_conj_is_pointwise(f, p):
    assert f.conj().eval(p) == pytest.approx(f.eval(p).conjugate(), rel=1e-9, abs=1e-9)


@given(polys)
def test_conj_involution(f):
    assert f.conj().conj() == f


@given(polys)
def test_mixed_partials_commute(f):
    assert f.ddz().ddzbar().allclose(f.ddzbar().ddz())


@given(polys)
def test_commutator_is_identity(f):
    assert (f.mul_z().ddz() - f.ddz().mul_z()).allclose(f)
    assert (f.mul_zbar().ddzbar() - f.ddzbar().mul_zbar()).allclose(f)


@given(polys)
def test_euler_scales_monomials_by_degree(f):
    expect = PolyFun({k: sum(k) * c for k, c in f.terms.items()})
    assert f.euler().allclose(expect)


@given(polys, points)
def test_euler_is_radial_derivative(f, p):
    h = 1e-6
    fd = (f.eval(p * (1 + h)) - f.eval(p * (1 - h))) / (2 * h)
    assert fd == pytest.approx(f.euler().eval(p), rel=1e-5, abs=1e-5)


@given(polys, polys, points)
def test_product_is_pointwise(f, g, p):
    assert (f * g).eval(p) == pytest.approx(f.eval(p) * g.eval(p), rel=1e-9, abs=1e-8)
