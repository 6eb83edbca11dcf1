"""Interpolation and multipliers for the Drury-Arveson-type kernel ``1 / (1 - 2 Re(z wbar))``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainViolation
from .polycore import PolyFun, as_point
from .spaces import DA, DA_RADIUS, inner, norm

PSD_TOL = 1e-10
CHOLESKY_MAX_N = 12


def _rpart(z, w) -> float:
    return 2 * (z * w.conjugate()).real


@dataclass(frozen=True)
class PickProblem:
    nodes: tuple
    targets: tuple

    def __post_init__(self):
        nodes = tuple(DA.check(z) for z in self.nodes)
        targets = tuple(as_point(w) for w in self.targets)
        if not nodes:
            raise ValueError("at least one node is required")
        if len(nodes) != len(targets):
            raise ValueError("nodes and targets must have the same length")
        if len(set(nodes)) != len(nodes):
            raise ValueError("nodes must be pairwise distinct")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    def __len__(self):
        return len(self.nodes)


def pick_matrix(p: PickProblem) -> np.ndarray:
    """``[(1 - w_i conj(w_j)) / (1 - 2 Re(z_i conj(z_j)))]``."""
    z = np.array(p.nodes)
    w = np.array(p.targets)
    num = 1 - np.outer(w, w.conj())
    den = 1 - 2 * np.outer(z, z.conj()).real
    return num / den


def pivoted_cholesky(A: np.ndarray, tol: float = PSD_TOL):
    """Diagonally pivoted Cholesky factorization of a Hermitian matrix.

    Returns ``(L, perm, rank, ok)`` with ``A[perm][:, perm] ~ L @ L^H`` on the
    first ``rank`` columns.  ``ok`` is False as soon as a pivot falls below
    ``-tol``, which certifies that ``A`` is not positive semidefinite.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    perm = np.arange(n)
    L = np.zeros((n, n), dtype=complex)
    d = np.real(np.diag(A)).copy()
    rank = 0
    for k in range(n):
        j = k + int(np.argmax(d[k:]))
        if d[j] < -tol:
            return L, perm, rank, False
        if d[j] <= tol:
            # remaining Schur complement must vanish to within tolerance
            rest = A[np.ix_(perm[k:], perm[k:])] - L[k:, :k] @ L[k:, :k].conj().T
            ok = bool(np.max(np.abs(rest), initial=0.0) <= max(tol, 1e-12) * max(1.0, n))
            return L, perm, rank, ok
        perm[[k, j]] = perm[[j, k]]
        d[[k, j]] = d[[j, k]]
        L[[k, j], :k] = L[[j, k], :k]
        piv = math.sqrt(d[k])
        L[k, k] = piv
        col = A[perm[k + 1:], perm[k]] - L[k + 1:, :k] @ L[k, :k].conj()
        L[k + 1:, k] = col / piv
        d[k + 1:] -= np.abs(L[k + 1:, k]) ** 2
        rank += 1
    return L, perm, rank, True


def psd_report(A: np.ndarray, tol: float = PSD_TOL) -> dict:
    A = np.asarray(A)
    min_eig = float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0])
    out = {"min_eig": min_eig, "psd": min_eig >= -tol}
    if A.shape[0] <= CHOLESKY_MAX_N:
        out["cholesky_ok"] = pivoted_cholesky(A, tol)[3]
    return out


def feasible(p: PickProblem, tol: float = PSD_TOL) -> bool:
    """Whether the interpolation problem has a solution in the multiplier unit ball."""
    return psd_report(pick_matrix(p), tol)["psd"]


def feasibility_report(p: PickProblem, tol: float = PSD_TOL) -> dict:
    rep = psd_report(pick_matrix(p), tol)
    rep["feasible"] = rep.pop("psd")
    return rep


def c_coeffs(N: int, exact: bool = False) -> list:
    """Taylor coefficients ``c_1..c_N`` of ``1 - sqrt(1 - t)``.

    ``c_1 = 1/2`` and ``c_{n+1} = c_n (2n - 1) / (2n + 2)``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    c = Fraction(1, 2) if exact else 0.5
    out = [c]
    for n in range(1, N):
        c = c * (2 * n - 1) / (2 * n + 2) if not exact else c * Fraction(2 * n - 1, 2 * n + 2)
        out.append(c)
    return out


def c_tail(N: int) -> Fraction:
    """``1 - sum_{n <= N} c_n = C(2N, N) / 4^N``, exactly."""
    return Fraction(math.comb(2 * N, N), 4 ** N)


def _v(a: complex) -> np.ndarray:
    return np.array([[a.conjugate()], [a]])


def sqrt_factor_closed(a) -> np.ndarray:
    """``I - v v^H (1 - sqrt(1 - 2|a|^2)) / (2|a|^2)`` with ``v = (abar, a)``."""
    a = DA.check(a)
    t = 2 * abs(a) ** 2
    if t == 0:
        return np.eye(2, dtype=complex)
    v = _v(a)
    # (1 - sqrt(1 - t)) / t, written without cancellation
    g = 1.0 / (1.0 + math.sqrt(1.0 - t))
    return np.eye(2) - g * (v @ v.conj().T)


def sqrt_factor_series(a, rtol: float = 1e-13, max_terms: int = 100000) -> np.ndarray:
    """``I - sum c_n (v v^H)^n``, truncated once ``t^(N+1) / (1 - t) < rtol``."""
    a = DA.check(a)
    v = _v(a)
    P = v @ v.conj().T
    t = 2 * abs(a) ** 2
    if t == 0:
        return np.eye(2, dtype=complex)
    acc = np.zeros((2, 2), dtype=complex)
    Pn = P.copy()
    c = 0.5
    for n in range(1, max_terms + 1):
        acc += c * Pn
        if t ** (n + 1) / (1 - t) < rtol:
            break
        Pn = Pn @ P
        c *= (2 * n - 1) / (2 * n + 2)
    return np.eye(2) - acc


def sqrt_factor(a, check: bool = True) -> np.ndarray:
    """Square root of ``I - v v^H`` for ``v = (abar, a)``.

    The closed form is returned.  With ``check`` the ``c_n`` series is
    summed as well and a disagreement above ``1e-10`` raises
    :class:`ArithmeticError`.
    """
    S = sqrt_factor_closed(a)
    if check:
        err = float(np.max(np.abs(S - sqrt_factor_series(a))))
        if err > 1e-10:
            raise ArithmeticError(f"series and closed square root differ by {err:.3e}")
    return S


@dataclass(frozen=True)
class BlaschkeFactor:
    a: complex

    def __post_init__(self):
        object.__setattr__(self, "a", DA.check(self.a))

    @property
    def sqrt_matrix(self) -> np.ndarray:
        return sqrt_factor(self.a)

    @property
    def prefactor(self) -> float:
        return 1 - 2 * abs(self.a) ** 2

    def __call__(self, z) -> np.ndarray:
        return blaschke_eval(self.a, z)


def blaschke_eval(a, z) -> np.ndarray:
    """``b_a(z) = (1 - 2|a|^2) (z - a, zbar - abar) / (1 - 2 Re(z abar)) S_a`` as a 1x2 row."""
    a, z = DA.check(a), DA.check(z)
    row = np.array([[z - a, z.conjugate() - a.conjugate()]])
    return (1 - 2 * abs(a) ** 2) / (1 - _rpart(z, a)) * row @ sqrt_factor(a)


def kernel(z, w) -> float:
    return 1.0 / (1 - _rpart(DA.check(z), DA.check(w)))


def kernel_gleason_residual(a, b, z) -> float:
    """``|k_b(z) - k_b(a) - (z - a) A_a* k_b(z) - (zbar - abar) B_a* k_b(z)|`` in closed form."""
    a, b, z = DA.check(a), DA.check(b), DA.check(z)
    kbz = kernel(z, b)
    den = 1 - _rpart(b, a)
    rhs = (z - a) * b.conjugate() / den * kbz + (z.conjugate() - a.conjugate()) * b / den * kbz
    return abs(kbz - kernel(a, b) - rhs)


def counterexample_function(m: int) -> PolyFun:
    """``f_m = z + sum_{n=1}^m c_n zbar^(2n)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    terms = {(1, 0): 1.0}
    for n, c in enumerate(c_coeffs(m), start=1):
        terms[(0, 2 * n)] = c
    return PolyFun(terms, cap=max(60, 2 * m))


def _eval_many(f: PolyFun, Z: np.ndarray) -> np.ndarray:
    Zb = Z.conj()
    out = np.zeros(Z.shape, dtype=complex)
    for (m, n), c in f.items():
        out += c * Z ** m * Zb ** n
    return out


def schur_counterexample_report(m: int, n_boundary: int = 4096, n_interior: int = 10000,
                                seed: int = 0) -> tuple[float, float]:
    """``(max |f_m|, ||f_m||^2)`` for the bounded function that is not a contractive multiplier.

    The maximum is taken over ``n_boundary`` points on the circle of radius
    ``(1 - 1e-9) / sqrt(2)`` and ``n_interior`` uniform random points of the
    disk.  The squared norm is the coefficient sum ``1 + sum c_n^2``.
    """
    f = counterexample_function(m)
    r = DA_RADIUS * (1 - 1e-9)
    theta = 2 * np.pi * np.arange(n_boundary) / n_boundary
    ring = r * np.exp(1j * theta)
    rng = np.random.default_rng(seed)
    rad = r * np.sqrt(rng.random(n_interior))
    disk = rad * np.exp(2j * np.pi * rng.random(n_interior))
    sup = float(max(np.max(np.abs(_eval_many(f, ring))), np.max(np.abs(_eval_many(f, disk)))))
    return sup, norm(f, DA) ** 2


def da_kernel_derivative_section(t: float, u: float, n: int, m: int, D: int) -> PolyFun:
    """``d^(n+m)/dt^n du^m`` of the degree-``D`` DA kernel section at ``w = t + iu``.

    The coefficient of ``z^p zbar^q`` is ``conj(w)^p w^q / weight(p, q)``;
    it is differentiated as a polynomial in ``w`` and evaluated.
    """
    w = DA.check(complex(t, u))
    terms = {}
    for p in range(D + 1):
        for q in range(D + 1 - p):
            g = PolyFun.monomial(q, p, cap=D + 1)  # w^q conj(w)^p
            for _ in range(n):
                g = g.ddx()
            for _ in range(m):
                g = g.ddy()
            terms[(p, q)] = g.eval(w) / DA.weight(p, q)
    return PolyFun(terms, cap=max(D, 60))


def da_derivative_reproducing_residual(f: PolyFun, t: float, u: float, n: int, m: int,
                                       D: int) -> float:
    """``|<f, d^(n+m) k_w / dt^n du^m> - (d^(n+m) f / dx^n dy^m)(t + iu)|`` in the DA space."""
    if t * t + u * u >= 0.5:
        raise DomainViolation("parameter point must lie in the ball of radius 1/sqrt(2)")
    if n + m > 4:
        raise ValueError("derivative order n + m is limited to 4")
    lhs = inner(f, da_kernel_derivative_section(t, u, n, m, D), DA)
    g = f
    for _ in range(n):
        g = g.ddx()
    for _ in range(m):
        g = g.ddy()
    return abs(lhs - g.eval(complex(t, u)))


def xy_monomial_coeffs(n: int, m: int) -> dict:
    """Coefficients of ``x^n y^m`` in ``z, zbar`` by the binomial theorem."""
    out: dict = {}
    scale = 1.0 / (2 ** n * (2j) ** m)
    for i in range(n + 1):
        for k in range(m + 1):
            # (z + zbar)^n (z - zbar)^m : term z^(i+k) zbar^(n-i+m-k)
            key = (i + k, n - i + m - k)
            out[key] = out.get(key, 0) + math.comb(n, i) * math.comb(m, k) * (-1) ** (m - k) * scale
    return out


def monomials_in_hk_check(n: int, m: int) -> float:
    """DA norm of ``x^n y^m``, cross-checked against its binomial expansion.

    Raises :class:`ArithmeticError` if the product expansion and the
    binomial formula give norms differing by more than ``1e-12`` relative.
    """
    f = PolyFun.x() ** n * PolyFun.y() ** m
    direct = math.sqrt(math.fsum(DA.weight(*k) * abs(c) ** 2
                                 for k, c in xy_monomial_coeffs(n, m).items()))
    got = norm(f, DA)
    if abs(got - direct) > 1e-12 * max(1.0, direct):
        raise ArithmeticError("norm of x^n y^m disagrees with its binomial expansion")
    return got


def cnp_split(points) -> tuple[np.ndarray, np.ndarray]:
    """``[1 - 2 Re(z_i conj(z_j))] = J - G`` with ``J`` all ones and ``G`` the real Gram matrix."""
    z = np.array([DA.check(p) for p in points])
    J = np.ones((len(z), len(z)))
    G = 2 * np.outer(z, z.conj()).real
    return J, G
