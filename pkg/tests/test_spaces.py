import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyinf.errors import DomainViolation
from polyinf.polycore import PolyFun, phi_basis, random_polyfun
from polyinf.spaces import (
    DA, SF, SH, SpaceWeight, gram_matrix, inner, kernel_section, norm, reproduce_residual, space,
)


def test_weights():
    assert SF.weight(3, 2) == 12
    assert SH.weight(7, 1) == 1
    assert DA.weight(2, 1) == pytest.approx(2 / 6)
    assert DA.weight(1, 1, exact=True) * 2 == 1


def test_log_weight_consistent():
    for m, n in [(0, 0), (5, 7), (30, 29)]:
        for s in (SF, SH, DA):
            assert math.exp(s.log_weight(m, n)) == pytest.approx(s.weight(m, n), rel=1e-12)


def test_unknown_tag():
    with pytest.raises(ValueError):
        SpaceWeight("XX")
    assert space("da") is not None and space("da").kind == "DA"


def test_domains():
    assert SF.contains(100)
    assert SH.contains(0.99) and not SH.contains(1.0)
    assert DA.contains(0.7) and not DA.contains(1 / math.sqrt(2))
    with pytest.raises(DomainViolation):
        DA.check(0.71)


def test_orthonormal_bases():
    basis = [phi_basis(m, n) for m in range(8) for n in range(8 - m)]
    G = np.array([[inner(a, b, SF) for b in basis] for a in basis])
    assert np.allclose(G, np.eye(len(basis)), atol=1e-14)


@pytest.mark.parametrize("s, w", [(SF, 0.8 - 0.5j), (SH, 0.4 + 0.3j), (DA, 0.2 - 0.4j)])
def test_reproducing_property(s, w, rng):
    f = random_polyfun(rng, 10)
    assert reproduce_residual(f, w, s, 10) < 1e-12


def test_kernel_section_converges_to_closed_form():
    z, w = 0.3 + 0.1j, -0.2 + 0.25j
    assert kernel_section(SF, w, 40).eval(z) == pytest.approx(
        np.exp(2 * (z * np.conj(w)).real), rel=1e-14)
    assert kernel_section(SH, w, 60).eval(z) == pytest.approx(
        1 / ((1 - z * np.conj(w)) * (1 - np.conj(z) * w)), rel=1e-12)
    assert kernel_section(DA, w, 60).eval(z) == pytest.approx(
        1 / (1 - 2 * (z * np.conj(w)).real), rel=1e-12)


def test_gram_matrix_is_psd(rng):
    pts = [complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(6)]
    G = gram_matrix(DA, pts, 30)
    assert np.allclose(G, G.conj().T)
    assert np.linalg.eigvalsh(G)[0] > -1e-12


def test_exact_inner():
    f = PolyFun({(1, 1): 0.5, (2, 0): 3}).exact()
    assert inner(f, f, DA, exact=True) == 0.25 * DA.weight(1, 1, exact=True) + 9


@given(st.integers(0, 2**31))
def test_norm_matches_inner(seed):
    f = random_polyfun(np.random.default_rng(seed), 6)
    for s in (SF, SH, DA):
        assert norm(f, s) ** 2 == pytest.approx(inner(f, f, s).real, rel=1e-12)
