"""Segal-Bargmann transform, complex Hermite polynomials and the Berezin transform.

Each transform is implemented as an exact map between coefficient tables.
The defining integrals are kept as oracles: tensor Gauss-Hermite quadrature
for the Segal-Bargmann transform and moment expansion for the Berezin
transform.
"""

from __future__ import annotations

import math

import numpy as np

from .gaussmoments import (
    GaussianMeasure,
    exp_moment_series,
    gauss_hermite_nodes,
    integrate_poly_gaussian,
)
from .polycore import DEFAULT_CAP, PolyFun, SparseCoeffs, as_point
from .spaces import SF, norm

PI_QUARTER = math.pi ** -0.25


class HermiteCoeffs(SparseCoeffs):
    """``phi(x, y) = sum beta[m, n] psi_m(x) psi_n(y)`` in L^2 of the plane."""

    __slots__ = ()

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self._terms.values()))

    def eval(self, x: float, y: float) -> complex:
        top = max((max(k) for k in self._terms), default=0)
        px = hermite_functions(top, x)
        py = hermite_functions(top, y)
        return sum(c * px[m] * py[n] for (m, n), c in self._terms.items())


class ComplexHermiteCoeffs(SparseCoeffs):
    """``sum c[p, q] H_{p,q}(z, zbar)``."""

    __slots__ = ()

    def to_polyfun(self) -> PolyFun:
        out = PolyFun.zero(cap=self._cap)
        for (p, q), c in self._terms.items():
            out = out + complex_hermite_to_monomials(p, q, cap=self._cap).scale(c)
        return out

    def mu_norm(self) -> float:
        """Norm in ``L^2(dmu)``; the ``H_{p,q}`` are orthogonal with ``||H_{p,q}||^2 = p! q!``."""
        return math.sqrt(math.fsum(math.factorial(p) * math.factorial(q) * abs(c) ** 2
                                   for (p, q), c in self._terms.items()))


# Hermite functions and the Bargmann kernel --------------------------------

def hermite_functions(nmax: int, x):
    """``psi_0(x), ..., psi_nmax(x)``, orthonormal in ``L^2(R)``.

    ``psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}``, started
    from ``psi_0 = pi^(-1/4) exp(-x^2/2)``.  ``x`` may be an array.
    """
    x = np.asarray(x, dtype=float)
    out = [PI_QUARTER * np.exp(-0.5 * x * x)]
    prev = np.zeros_like(x)
    for k in range(nmax):
        nxt = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * prev
        prev = out[k]
        out.append(nxt)
    return out


def hermite_function(n: int, x):
    return hermite_functions(n, x)[n]


def _hermite_polys(nmax: int, x: np.ndarray) -> list[np.ndarray]:
    # psi_k(x) * exp(x^2 / 2): same recurrence without the Gaussian factor
    out = [np.full_like(x, PI_QUARTER)]
    prev = np.zeros_like(x)
    for k in range(nmax):
        nxt = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * prev
        prev = out[k]
        out.append(nxt)
    return out


def bargmann_kernel(z, x):
    """``pi^(-1/4) exp(-(z^2 + x^2)/2 + sqrt(2) z x)``."""
    z = as_point(z)
    x = np.asarray(x, dtype=float)
    val = PI_QUARTER * np.exp(-0.5 * (z * z + x * x) + math.sqrt(2.0) * z * x)
    return complex(val) if val.ndim == 0 else val


def bargmann_inner(z, w, n_quad: int = 200) -> complex:
    """``<A_z, A_w>`` in ``L^2(R)`` by Gauss-Hermite quadrature."""
    z, w = as_point(z), as_point(w)
    x, wt = gauss_hermite_nodes(n_quad)
    wb = w.conjugate()
    # A_z(x) conj(A_w(x)) exp(x^2)
    g = np.exp(-0.5 * (z * z + wb * wb) + math.sqrt(2.0) * (z + wb) * x) / math.sqrt(math.pi)
    return complex(np.dot(wt, g))


def bargmann_series(z, x: float, nmax: int = 40) -> complex:
    """``sum_{n <= nmax} z^n psi_n(x) / sqrt(n!)``."""
    z = as_point(z)
    psi = hermite_functions(nmax, x)
    terms, t = [], 1 + 0j
    for n in range(nmax + 1):
        terms.append(t * float(psi[n]))
        t *= z / math.sqrt(n + 1)
    return complex(sum(terms))


# Segal-Bargmann transform ---------------------------------------------------

def _inv_sqrt_fact(m: int, n: int) -> float:
    return 1.0 / math.sqrt(math.factorial(m) * math.factorial(n))


def segal_bargmann(phi: HermiteCoeffs) -> PolyFun:
    """``psi_m(x) psi_n(y) -> z^m zbar^n / sqrt(m! n!)``."""
    return PolyFun({(m, n): c * _inv_sqrt_fact(m, n) for (m, n), c in phi.items()},
                   cap=phi.cap)


def segal_bargmann_inverse(f: PolyFun) -> HermiteCoeffs:
    return HermiteCoeffs({(m, n): c * math.sqrt(math.factorial(m) * math.factorial(n))
                          for (m, n), c in f.items()}, cap=f.cap)


def _bargmann_moments(z: complex, nmax: int, n_quad: int) -> np.ndarray:
    # integral of A_z(x) psi_k(x) dx for k = 0..nmax, by Gauss-Hermite
    x, wt = gauss_hermite_nodes(n_quad)
    az = PI_QUARTER * np.exp(-0.5 * z * z + math.sqrt(2.0) * z * x)
    polys = _hermite_polys(nmax, x)
    return np.array([np.dot(wt, az * p) for p in polys])


def segal_bargmann_quadrature_oracle(phi: HermiteCoeffs, z, n_quad: int = 80) -> complex:
    """The defining double integral of ``T(phi)(z)`` by tensor Gauss-Hermite.

    ``A_z(x) A_zbar(y) psi_m(x) psi_n(y)`` is a product, so the sum over the
    ``n_quad x n_quad`` tensor grid factors into two one-dimensional sums.
    """
    z = as_point(z)
    if phi.is_zero():
        return 0j
    top = max(max(k) for k in phi.terms)
    ix = _bargmann_moments(z, top, n_quad)
    iy = _bargmann_moments(z.conjugate(), top, n_quad)
    return complex(sum(c * ix[m] * iy[n] for (m, n), c in phi.items()))


def kernel_factorization_quadrature(z, w, n_quad: int = 80) -> complex:
    """``<A_z (x) A_zbar, A_w (x) A_wbar>`` in ``L^2(R^2)`` by tensor quadrature."""
    z, w = as_point(z), as_point(w)
    return bargmann_inner(z, w, n_quad) * bargmann_inner(z.conjugate(), w.conjugate(), n_quad)


def hermite_x(phi: HermiteCoeffs, axis: int = 0) -> HermiteCoeffs:
    """Multiplication by ``x`` (``axis=0``) or ``y`` (``axis=1``).

    ``x psi_m = sqrt((m+1)/2) psi_{m+1} + sqrt(m/2) psi_{m-1}``.
    """
    return _tridiag(phi, axis, 1.0)


def hermite_dx(phi: HermiteCoeffs, axis: int = 0) -> HermiteCoeffs:
    """``d/dx psi_m = -sqrt((m+1)/2) psi_{m+1} + sqrt(m/2) psi_{m-1}``."""
    return _tridiag(phi, axis, -1.0)


def _tridiag(phi: HermiteCoeffs, axis: int, up_sign: float) -> HermiteCoeffs:
    out: dict = {}
    for (m, n), c in phi.items():
        k = (m, n)[axis]
        up = (m + 1, n) if axis == 0 else (m, n + 1)
        out[up] = out.get(up, 0) + up_sign * math.sqrt((k + 1) / 2.0) * c
        if k > 0:
            dn = (m - 1, n) if axis == 0 else (m, n - 1)
            out[dn] = out.get(dn, 0) + math.sqrt(k / 2.0) * c
    return HermiteCoeffs(out, cap=phi.cap + 1)


def position_conjugation_residual(D: int) -> float:
    """``(d/dz + z) T psi = sqrt(2) T(X psi)`` and the ``zbar``/``Y`` twin, on ``psi_{m,n}``, ``m, n <= D - 2``."""
    if D < 4:
        raise ValueError("D must be at least 4")
    worst = 0.0
    for m in range(D - 1):
        for n in range(D - 1):
            psi = HermiteCoeffs({(m, n): 1.0}, cap=2 * D)
            t = segal_bargmann(psi)
            lhs_x = t.ddz() + t.mul_z()
            lhs_y = t.ddzbar() + t.mul_zbar()
            rhs_x = segal_bargmann(hermite_x(psi, 0)).scale(math.sqrt(2.0))
            rhs_y = segal_bargmann(hermite_x(psi, 1)).scale(math.sqrt(2.0))
            worst = max(worst, lhs_x.max_abs_diff(rhs_x), lhs_y.max_abs_diff(rhs_y))
    return worst


def creation_conjugation_residual(D: int) -> float:
    """``T (X - d/dx) T^{-1} = sqrt(2) M_z`` and the ``Y``/``zbar`` twin, on ``phi_{m,n}``, ``m, n <= D - 2``."""
    if D < 4:
        raise ValueError("D must be at least 4")
    worst = 0.0
    for m in range(D - 1):
        for n in range(D - 1):
            f = PolyFun({(m, n): _inv_sqrt_fact(m, n)}, cap=2 * D)
            psi = segal_bargmann_inverse(f)
            for axis in (0, 1):
                lhs = segal_bargmann(hermite_x(psi, axis) - hermite_dx(psi, axis))
                rhs = (f.mul_z() if axis == 0 else f.mul_zbar()).scale(math.sqrt(2.0))
                worst = max(worst, lhs.max_abs_diff(rhs))
    return worst


# complex Hermite basis ------------------------------------------------------

def complex_hermite_to_monomials(p: int, q: int, cap: int = DEFAULT_CAP) -> PolyFun:
    """``H_{p,q} = sum_k (-1)^k k! C(p,k) C(q,k) z^(p-k) zbar^(q-k)``."""
    terms = {(p - k, q - k): (-1) ** k * math.factorial(k) * math.comb(p, k) * math.comb(q, k)
             for k in range(min(p, q) + 1)}
    return PolyFun(terms, cap=cap)


def monomials_to_complex_hermite(f: PolyFun) -> ComplexHermiteCoeffs:
    """Expand ``f`` in the ``H_{p,q}``.

    The change of basis is unitriangular along the ``min(p, q)`` filtration
    and inverts to ``z^p zbar^q = sum_k k! C(p,k) C(q,k) H_{p-k,q-k}``, a sum
    of positive terms.
    """
    out: dict = {}
    for (p, q), c in f.items():
        for k in range(min(p, q) + 1):
            key = (p - k, q - k)
            out[key] = out.get(key, 0) + c * (math.factorial(k) * math.comb(p, k) * math.comb(q, k))
    return ComplexHermiteCoeffs(out, cap=f.cap)


# Berezin transform ----------------------------------------------------------

def berezin(f: PolyFun) -> PolyFun:
    """Berezin transform: expand in ``H_{p,q}`` and relabel ``H_{p,q} -> z^p zbar^q``."""
    return PolyFun(dict(monomials_to_complex_hermite(f).terms), cap=f.cap)


def mu_norm(f: PolyFun) -> float:
    """``||f||`` in ``L^2(dmu)`` through the complex Hermite expansion."""
    return monomials_to_complex_hermite(f).mu_norm()


def mu_norm_by_moments(f: PolyFun) -> float:
    return math.sqrt(max(integrate_poly_gaussian(f.mul(f.conj()), 1.0).real, 0.0))


def _mul_w(f: PolyFun) -> PolyFun:
    return f.mul_z()


def _mul_wbar(f: PolyFun) -> PolyFun:
    return f.mul_zbar()


def berezin_derivative_residuals(f: PolyFun) -> dict[str, float]:
    """Residuals of the intertwining relations between ``berezin`` and derivatives.

    Keys name the relation; each value is a max coefficient difference.
    ``table-*`` entries are the operator pairs ``S B = B T`` of the
    equivalence table, with ``n`` up to 3 for the pure derivative rows.
    """
    B = berezin
    bf = B(f)
    out = {}
    out["d1"] = bf.ddz().max_abs_diff(B(_mul_wbar(f)) - bf.mul_zbar())
    for n in (1, 2, 3):
        # d^n/dz^n B(f) = B((wbar - zbar)^n f), the zbar powers acting outside B
        rhs = PolyFun.zero(cap=f.cap)
        g = f
        for k in range(n + 1):
            term = B(g)
            for _ in range(n - k):
                term = term.mul_zbar()
            rhs = rhs + term.scale(math.comb(n, k) * (-1) ** (n - k))
            g = _mul_wbar(g)
        lhs = bf
        for _ in range(n):
            lhs = lhs.ddz()
        out[f"dn-{n}"] = lhs.max_abs_diff(rhs)
    out["commute-dz"] = bf.ddz().max_abs_diff(B(f.ddz()))
    out["commute-dzbar"] = bf.ddzbar().max_abs_diff(B(f.ddzbar()))
    out["ndwbar"] = B(f.ddzbar()).max_abs_diff(B(_mul_w(f)) - bf.mul_z())

    out["table-dz+zbar"] = (bf.ddz() + bf.mul_zbar()).max_abs_diff(B(_mul_wbar(f)))
    out["table-dzbar+z"] = (bf.ddzbar() + bf.mul_z()).max_abs_diff(B(_mul_w(f)))
    for n in (1, 2, 3):
        lz, rz, lzb, rzb = bf, f, bf, f
        for _ in range(n):
            lz, rz, lzb, rzb = lz.ddz(), rz.ddz(), lzb.ddzbar(), rzb.ddzbar()
        out[f"table-dz^{n}"] = lz.max_abs_diff(B(rz))
        out[f"table-dzbar^{n}"] = lzb.max_abs_diff(B(rzb))
    lap = bf.laplacian().scale(0.25) + bf.mul_zbar().ddzbar() + bf.ddz().mul_z() \
        + bf.mul_z().mul_zbar()
    out["table-abs2-left"] = lap.max_abs_diff(B(f.mul_z().mul_zbar()))
    inner_op = f.laplacian().scale(0.25) - f.mul_zbar().ddzbar() - f.ddz().mul_z() \
        + f.mul_z().mul_zbar()
    out["table-abs2-right"] = bf.mul_z().mul_zbar().max_abs_diff(B(inner_op))
    out["table-z"] = bf.mul_z().max_abs_diff(B(_mul_w(f) - f.ddzbar()))
    out["table-zbar"] = bf.mul_zbar().max_abs_diff(B(_mul_wbar(f) - f.ddz()))
    return out


def berezin_bound_check(f: PolyFun, beta: float) -> tuple[float, float]:
    """``(||B f|| in L^2(mu_beta), sqrt(beta/(beta-2)) ||f|| in L^2(mu))``."""
    if not beta > 2:
        raise ValueError("beta must exceed 2")
    lhs = GaussianMeasure(beta).norm(berezin(f))
    rhs = math.sqrt(beta / (beta - 2)) * mu_norm_by_moments(f)
    return lhs, rhs


def berezin_sf_norm(f: PolyFun) -> float:
    return norm(berezin(f), SF)


def s_phi(f: PolyFun, a, z, D_exp: int | None = None) -> complex:
    """``integral of exp(z wbar) f(w) phi_a(w - z) dmu(w)`` with ``phi_a(w) = exp(abar w)``.

    ``exp(z wbar + abar (w - z))`` is expanded in a double series and
    integrated against the moments of ``dmu``.  At ``a = z`` this is the
    Berezin transform; at ``a = 0`` it reproduces analytic ``f``.

    Raises
    ------
    TailNotConverged
        If ``D_exp`` terms do not bring the tail bound below tolerance.
    """
    a, z = as_point(a), as_point(z)
    ab = a.conjugate()
    if D_exp is None:
        D_exp = 2 * math.ceil(math.e * math.sqrt(abs(z) * abs(a)) * max(f.degree, 1)) + 40
    return exp_moment_series(f, z, ab, ab * z, D_exp)


__all__ = [
    "HermiteCoeffs", "ComplexHermiteCoeffs", "hermite_functions", "hermite_function",
    "bargmann_kernel", "bargmann_inner", "bargmann_series", "segal_bargmann",
    "segal_bargmann_inverse", "segal_bargmann_quadrature_oracle",
    "kernel_factorization_quadrature", "hermite_x", "hermite_dx",
    "position_conjugation_residual", "creation_conjugation_residual",
    "complex_hermite_to_monomials", "monomials_to_complex_hermite", "berezin",
    "mu_norm", "mu_norm_by_moments", "berezin_derivative_residuals",
    "berezin_bound_check", "berezin_sf_norm", "s_phi",
]
