"""Gaussian moments and Gauss-Hermite quadrature.

These are the independent oracles for the integral identities: every
coefficient-level transform elsewhere in the package is checked against
term-by-term integration with :func:`moment` or against tensor quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import TailNotConverged
from .polycore import PolyFun, as_point

TAIL_TOL = 1e-12
MAX_GH = 200


@dataclass(frozen=True)
class GaussianMeasure:
    """The probability measure ``(beta/pi) exp(-beta |w|^2) dA(w)``."""

    beta: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def integrate(self, f: PolyFun) -> complex:
        return self.beta * integrate_poly_gaussian(f, self.beta)

    def norm(self, f: PolyFun) -> float:
        return math.sqrt(max(self.integrate(f.mul(f.conj())).real, 0.0))


def moment(m: int, n: int, beta: float) -> float:
    """``(1/pi) * integral of w^m conj(w)^n exp(-beta |w|^2) dA(w)``.

    Equals ``m! / beta^(m+1)`` when ``m == n`` and zero otherwise; evaluated
    in log space so large orders neither overflow nor underflow early.
    """
    if m < 0 or n < 0:
        raise ValueError("moment orders must be nonnegative")
    if not beta > 0:
        raise ValueError("beta must be positive")
    if m != n:
        return 0.0
    if beta == 1.0 and m <= 170:
        return float(math.factorial(m))
    return math.exp(math.lgamma(m + 1) - (m + 1) * math.log(beta))


def gaussian_1d(a: float, b: complex) -> complex:
    """``integral over R of exp(-a t^2 + b t) dt = sqrt(pi/a) exp(b^2 / (4a))``."""
    if not a > 0:
        raise ValueError("a must be positive")
    return math.sqrt(math.pi / a) * cmath.exp(b * b / (4 * a))


def _csum(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def integrate_poly_gaussian(f: PolyFun, beta: float = 1.0) -> complex:
    """``sum alpha[m, n] * moment(m, n, beta)``; only the diagonal survives."""
    return _csum(complex(c) * moment(m, m, beta) for (m, n), c in f.items() if m == n)


def default_d_exp(f: PolyFun, z) -> int:
    z = as_point(z)
    return 2 * math.ceil(math.e * abs(z) * max(f.degree, 1)) + 40


def exp_moment_series(f: PolyFun, u: complex, v: complex, shift: complex,
                      D_exp: int) -> complex:
    """``exp(-shift) * sum alpha[m, n] sum_k u^j v^k (m + k)! / (j! k!)`` with ``j = m + k - n``.

    This is what remains of ``integral of exp(u conj(w) + v w) f(w) dmu(w)``
    after term-by-term integration, since ``w^(m+k) conj(w)^(n+j)`` only
    survives when ``m + k = n + j``.  Terms are built in log space relative
    to ``exp(Re shift)``; the summand ratio in ``k`` decreases, so once it
    falls below one the neglected tail is bounded by a geometric series.
    """
    au, av = abs(u), abs(v)
    phase_shift = cmath.exp(-1j * shift.imag)
    parts, tail = [], 0.0
    for (m, n), c in f.items():
        k0 = max(0, n - m)
        j0 = m + k0 - n
        if au == 0.0 or av == 0.0:
            # only the lowest admissible term can be nonzero
            if (au == 0.0 and j0 > 0) or (av == 0.0 and k0 > 0):
                continue
            t = (u ** j0 * v ** k0 * math.factorial(m + k0)
                 / (math.factorial(j0) * math.factorial(k0)))
            parts.append(complex(c) * t * math.exp(-shift.real))
            continue
        logt = (j0 * math.log(au) + k0 * math.log(av) + math.lgamma(m + k0 + 1)
                - math.lgamma(j0 + 1) - math.lgamma(k0 + 1) - shift.real)
        step = (u / au) * (v / av)
        phase = (u / au) ** j0 * (v / av) ** k0
        t = math.exp(logt)
        acc = []
        k, j = k0, j0
        while True:
            acc.append(t * phase)
            ratio = au * av * (m + k + 1) / ((j + 1) * (k + 1))
            if k - k0 >= D_exp:
                if ratio >= 1.0:
                    raise TailNotConverged(f"series for monomial ({m}, {n}) still growing at k={k}")
                tail += abs(c) * t * ratio / (1.0 - ratio)
                break
            t *= ratio
            phase *= step
            k, j = k + 1, j + 1
            if t == 0.0:
                break
        parts.append(complex(c) * _csum(acc))
    value = _csum(parts) * phase_shift
    if tail > TAIL_TOL * max(1.0, abs(value)):
        raise TailNotConverged(f"tail bound {tail:.3e} exceeds tolerance with D_exp={D_exp}")
    return value


def berezin_of_poly(f: PolyFun, z, D_exp: int | None = None) -> complex:
    """Integral form of the Berezin transform, by moments.

    ``exp(z conj(w) + conj(z) w)`` is expanded as a double series in ``w``
    and integrated term by term against ``exp(-|w|^2) dA / pi``, then
    multiplied by ``exp(-|z|^2)``.  Every surviving term of a monomial
    carries the same phase, so the sum has no cancellation.

    Raises
    ------
    TailNotConverged
        If the bound on the neglected tail exceeds ``1e-12`` relative to
        the result after ``D_exp`` terms.
    """
    z = as_point(z)
    if D_exp is None:
        D_exp = default_d_exp(f, z)
    return exp_moment_series(f, z, z.conjugate(), complex(abs(z) ** 2), D_exp)


def kernel_gaussian_average(z, D: int) -> complex:
    """``(1/pi) * integral of K(z, w) exp(-|w|^2) dA(w)`` from the moment expansion of ``K``.

    Only the diagonal terms ``|z|^(2j) conj(w)^j w^j / (j!)^2`` of the
    kernel expansion to degree ``2D`` integrate to something nonzero.
    """
    z = as_point(z)
    r2 = abs(z) ** 2
    # conj(w)^j w^j / (j!)^2 integrates to 1/j!, leaving |z|^(2j) / j!
    terms, t = [], 1.0
    for j in range(D + 1):
        terms.append(t)
        t *= r2 / (j + 1)
    return complex(math.fsum(terms))


@lru_cache(maxsize=None)
def _gh(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(1, n)
    x = eigh_tridiagonal(np.zeros(n), np.sqrt(k / 2.0), eigvals_only=True)
    x = np.sort(x)
    x = 0.5 * (x - x[::-1])
    # Newton polish on the orthonormal Hermite p_n, with p_n' = sqrt(2n) p_{n-1}
    for _ in range(2):
        p_prev, p = np.zeros(n), np.full(n, math.pi ** -0.25)
        for j in range(n):
            p_prev, p = p, (x * p - math.sqrt(j / 2.0) * p_prev) / math.sqrt((j + 1) / 2.0)
        x = x - p / (math.sqrt(2.0 * n) * p_prev)
    # Christoffel numbers 1 / sum p_k(x)^2, accurate even where weights are tiny
    s = np.zeros(n)
    p_prev, p = np.zeros(n), np.full(n, math.pi ** -0.25)
    for j in range(n):
        s += p * p
        p_prev, p = p, (x * p - math.sqrt(j / 2.0) * p_prev) / math.sqrt((j + 1) / 2.0)
    w = 1.0 / s
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_hermite_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals against ``exp(-x^2)`` on the real line.

    Nodes are the eigenvalues of the symmetric Jacobi matrix, refined by two
    Newton steps; weights come from the Christoffel function.  Results are
    cached and returned read-only.
    """
    if not 1 <= n <= MAX_GH:
        raise ValueError(f"n must lie in 1..{MAX_GH}")
    return _gh(int(n))


def plane_quadrature(func, beta: float = 1.0, n: int = 80) -> complex:
    """``(1/pi) * integral of func(w) exp(-beta |w|^2) dA(w)`` by tensor Gauss-Hermite.

    ``func`` must accept an array of complex points.
    """
    x, wt = gauss_hermite_nodes(n)
    s = 1.0 / math.sqrt(beta)
    W = (x[:, None] + 1j * x[None, :]) * s
    vals = np.asarray(func(W))
    return complex(np.sum(wt[:, None] * wt[None, :] * vals)) / (math.pi * beta)


def poly_plane_quadrature(f: PolyFun, beta: float = 1.0, n: int = 80) -> complex:
    """Quadrature counterpart of :func:`integrate_poly_gaussian`."""
    def func(W):
        out = np.zeros(W.shape, dtype=complex)
        Wb = W.conj()
        for (m, k), c in f.items():
            out += c * W ** m * Wb ** k
        return out
    return plane_quadrature(func, beta, n)
