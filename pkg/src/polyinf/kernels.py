"""Closed-form reproducing kernels and the special functions behind them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import Singularity
from .polycore import as_point
from .spaces import DA, SH

KERNEL_TAGS = ("FockInf", "FockN", "Gfactor", "Hardy", "DruryArveson", "BidiskJ")

# relative agreement required between the two K_n formulas
KN_DUAL_RTOL = 1e-11


@dataclass(frozen=True)
class KernelId:
    tag: str
    n: int | None = None

    def __post_init__(self):
        if self.tag not in KERNEL_TAGS:
            raise ValueError(f"unknown kernel {self.tag!r}; expected one of {KERNEL_TAGS}")
        if self.tag == "FockN":
            if self.n is None or int(self.n) < 1:
                raise ValueError("FockN needs an order n >= 1")
        elif self.n is not None:
            raise ValueError(f"{self.tag} takes no order")

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> KernelId:
        """Parse ``"FockInf"``, ``"FockN:3"`` or ``"FockN"`` with an explicit ``n``."""
        if ":" in text:
            tag, order = text.split(":", 1)
            return cls(tag, int(order))
        return cls(text, n)

    def __str__(self):
        return f"{self.tag}:{self.n}" if self.tag == "FockN" else self.tag


FOCK = KernelId("FockInf")
GFACTOR = KernelId("Gfactor")
HARDY = KernelId("Hardy")
DRURY_ARVESON = KernelId("DruryArveson")
BIDISK_J = KernelId("BidiskJ")


def fock_n(n: int) -> KernelId:
    return KernelId("FockN", n)


# special functions ---------------------------------------------------------

def laguerre_table(nmax: int, alpha: float, x: float) -> list[float]:
    """Values ``L_0^alpha(x), ..., L_nmax^alpha(x)`` from the three-term recurrence

    ``(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}``.
    """
    out = [1.0]
    if nmax == 0:
        return out
    out.append(1.0 + alpha - x)
    for k in range(1, nmax):
        out.append(((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    return out


def laguerre(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial ``L_n^alpha(x)``."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    return laguerre_table(n, alpha, x)[n]


def hermite_poly(n: int, x: float) -> float:
    """Physicists' Hermite polynomial, ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    h0, h1 = 1.0, 2.0 * x
    if n == 0:
        return h0
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1


# kernels -------------------------------------------------------------------

def fock_kernel(z, w) -> complex:
    z, w = as_point(z), as_point(w)
    return cmath.exp(z * w.conjugate() + z.conjugate() * w)


def fock_n_binomial(n: int, z, w) -> complex:
    """``K_n`` from the finite binomial sum, summed exactly in rational arithmetic.

    The alternating sum cancels catastrophically in floating point (about
    five lost digits at ``n = 40``, ``|z - w|^2 = 9``), so the polynomial in
    ``|z - w|^2`` is evaluated exactly at the floating point value of its
    argument and rounded once.
    """
    z, w = as_point(z), as_point(w)
    x = Fraction(abs(z - w) ** 2)
    s = Fraction(0)
    xk = Fraction(1)
    for k in range(n):
        s += Fraction((-1) ** k * math.comb(n, k + 1), math.factorial(k)) * xk
        xk *= x
    return cmath.exp(z * w.conjugate()) * float(s)


def fock_n_binomial_table(nmax: int, z, w) -> list[complex]:
    """``K_1, ..., K_nmax`` by the exact binomial sum, sharing the powers of ``|z - w|^2``."""
    z, w = as_point(z), as_point(w)
    x = Fraction(abs(z - w) ** 2)
    powers = [Fraction(1)]
    for k in range(1, nmax):
        powers.append(powers[-1] * x / k)
    pref = cmath.exp(z * w.conjugate())
    return [pref * float(sum((-1) ** k * math.comb(n, k + 1) * powers[k] for k in range(n)))
            for n in range(1, nmax + 1)]


def fock_n_laguerre(n: int, z, w) -> complex:
    """``K_n = exp(z conj(w)) L_{n-1}^1(|z - w|^2)``."""
    z, w = as_point(z), as_point(w)
    return cmath.exp(z * w.conjugate()) * laguerre(n - 1, 1.0, abs(z - w) ** 2)


def fock_n_dual_error(n: int, z, w) -> float:
    """Relative disagreement between the binomial and Laguerre forms of ``K_n``."""
    a, b = fock_n_binomial(n, z, w), fock_n_laguerre(n, z, w)
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def g_factor(z, w) -> complex:
    z, w = as_point(z), as_point(w)
    return cmath.exp(z * w.conjugate() - (abs(z) ** 2 + abs(w) ** 2))


def hardy_kernel(z, w) -> complex:
    z, w = SH.check(z), SH.check(w)
    return 1.0 / ((1 - z * w.conjugate()) * (1 - z.conjugate() * w))


def da_kernel(z, w) -> complex:
    z, w = DA.check(z), DA.check(w)
    return 1.0 / (1 - (z * w.conjugate() + z.conjugate() * w))


def eval_kernel(kid, z, w, cross_check: bool = False) -> complex:
    """Evaluate one of the closed-form kernels.

    For ``FockN`` the Laguerre form is returned; with ``cross_check`` the
    binomial form is computed as well and a disagreement above
    :data:`KN_DUAL_RTOL` raises :class:`ArithmeticError`.
    """
    if isinstance(kid, str):
        kid = KernelId.parse(kid)
    tag = kid.tag
    if tag == "FockInf":
        return fock_kernel(z, w)
    if tag == "FockN":
        val = fock_n_laguerre(kid.n, z, w)
        if cross_check:
            err = fock_n_dual_error(kid.n, z, w)
            if err > KN_DUAL_RTOL:
                raise ArithmeticError(f"K_{kid.n} forms disagree: relative error {err:.3e}")
        return val
    if tag == "Gfactor":
        return g_factor(z, w)
    if tag == "Hardy":
        return hardy_kernel(z, w)
    if tag == "DruryArveson":
        return da_kernel(z, w)
    return eval_Kj(z, w)


def kernel_domain_contains(kid: KernelId, z) -> bool:
    z = as_point(z)
    if kid.tag in ("Hardy", "BidiskJ"):
        return abs(z) < 1.0
    if kid.tag == "DruryArveson":
        return DA.contains(z)
    return True


def kernel_gram(kid: KernelId, points) -> np.ndarray:
    pts = [as_point(p) for p in points]
    return np.array([[eval_kernel(kid, zi, zj) for zj in pts] for zi in pts])


def kernel_sum_partials(z, w, N: int) -> list[complex]:
    """Partial sums ``S_N = sum_{n=1}^N K_n(z, w) / 2^(n+1)`` for ``N = 1..N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    z, w = as_point(z), as_point(w)
    lag = laguerre_table(N - 1, 1.0, abs(z - w) ** 2)
    # summing the real Laguerre weights first keeps every partial sum correctly rounded
    weights = [lag[n - 1] / 2.0 ** (n + 1) for n in range(1, N + 1)]
    pref = cmath.exp(z * w.conjugate())
    out, acc = [], []
    for t in weights:
        acc.append(t)
        out.append(pref * math.fsum(acc))
    return out


def kernel_sum_residuals(z, w, N: int) -> list[float]:
    """``|S_k - G(z, w) K(z, w)|`` for ``k = 1..N``."""
    target = g_factor(z, w) * fock_kernel(z, w)
    return [abs(s - target) for s in kernel_sum_partials(z, w, N)]


def kernel_sum_residual(z, w, N: int) -> float:
    return kernel_sum_residuals(z, w, N)[-1]


# finite differences -------------------------------------------------------

_CENTRAL = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


def fd_partial(func, z, nx: int, ny: int, h: float) -> complex:
    """Second-order central difference for ``d^(nx+ny) func / dx^nx dy^ny`` at ``z``."""
    total = 0j
    for i, a in _CENTRAL[nx].items():
        for j, b in _CENTRAL[ny].items():
            total += a * b * func(z + complex(i * h, j * h))
    return total / h ** (nx + ny)


def fd_wirtinger(func, z, n: int, h: float, richardson: bool = True) -> complex:
    """``d^n func / dz^n`` as ``2^-n (d/dx - i d/dy)^n`` of central differences.

    With ``richardson`` the step-``h`` and step-``h/2`` estimates are
    combined to cancel the ``h^2`` error term.
    """
    def est(step):
        s = 0j
        for k in range(n + 1):
            s += math.comb(n, k) * (-1j) ** k * fd_partial(func, z, n - k, k, step)
        return s / 2 ** n
    if not richardson:
        return est(h)
    return (4 * est(h / 2) - est(h)) / 3


def fd_laplacian(func, z, h: float, richardson: bool = True) -> complex:
    def est(step):
        return fd_partial(func, z, 2, 0, step) + fd_partial(func, z, 0, 2, step)
    if not richardson:
        return est(h)
    return (4 * est(h / 2) - est(h)) / 3


# steps balancing truncation against rounding for each derivative order
FD_STEPS = {1: 1e-5, 2: 1e-3, 3: 4e-3}


def fock_derivative_fd_residual(z, w, n: int, h: float | None = None) -> float:
    """``|d^n/dz^n K(z, w) - conj(w)^n K(z, w)|`` relative to ``|K|``, by finite differences."""
    z, w = as_point(z), as_point(w)
    step = FD_STEPS[n] if h is None else h
    est = fd_wirtinger(lambda p: fock_kernel(p, w), z, n, step, richardson=n > 1)
    exact = w.conjugate() ** n * fock_kernel(z, w)
    return abs(est - exact) / abs(fock_kernel(z, w))


def fock_laplacian_fd_residuals(z, w, h: float = 1e-2) -> tuple[float, float]:
    """Relative residuals of ``Lap_z K = 4|w|^2 K`` and ``Lap_w Lap_z K = 16 |1 + conj(w) z|^2 K``."""
    z, w = as_point(z), as_point(w)
    k = fock_kernel(z, w)
    lap_z = fd_laplacian(lambda p: fock_kernel(p, w), z, h)
    r1 = abs(lap_z - 4 * abs(w) ** 2 * k) / (abs(k) * max(1.0, 4 * abs(w) ** 2))
    both = fd_laplacian(lambda q: fd_laplacian(lambda p: fock_kernel(p, q), z, h), w, h)
    target = 16 * abs(1 + w.conjugate() * z) ** 2 * k
    r2 = abs(both - target) / max(abs(target), abs(k))
    return r1, r2


# the bidisk inner function -------------------------------------------------

_S = 1.0 / math.sqrt(2.0)
# unitary colligation [[A, B], [C, D]] realizing j
J_COLLIGATION = np.array([
    [-0.5, -0.5, _S],
    [-0.5, -0.5, -_S],
    [_S, -_S, 0.0],
])
J_A = J_COLLIGATION[:2, :2]
J_B = J_COLLIGATION[:2, 2:]
J_C = J_COLLIGATION[2:, :2]
J_D = J_COLLIGATION[2:, 2:]

SINGULAR_TOL = 1e-13


def eval_j(z1, z2) -> complex:
    """``j(z1, z2) = (z1 + z2 + 2 z1 z2) / (z1 + z2 + 2)``."""
    z1, z2 = as_point(z1), as_point(z2)
    den = z1 + z2 + 2
    if abs(den) < SINGULAR_TOL:
        raise Singularity(f"j has a pole at ({z1!r}, {z2!r})")
    return (z1 + z2 + 2 * z1 * z2) / den


def eval_j_realization(z1, z2) -> complex:
    """``j = D + C (I - Z A)^{-1} Z B`` with ``Z = diag(z1, z2)``."""
    z1, z2 = as_point(z1), as_point(z2)
    Z = np.diag([z1, z2])
    lhs = np.eye(2) - Z @ J_A
    if np.linalg.cond(lhs) > 1.0 / SINGULAR_TOL:
        raise Singularity(f"I - ZA is singular at ({z1!r}, {z2!r})")
    x = np.linalg.solve(lhs, Z @ J_B)
    return complex((J_D + J_C @ x)[0, 0])


def colligation_unitarity_defect() -> float:
    M = J_COLLIGATION
    return float(np.max(np.abs(M @ M.conj().T - np.eye(3))))


def eval_Kj_quotient(z, w) -> complex:
    """``(1 - j(z, zbar) conj(j(w, wbar))) / ((1 - z wbar)(1 - zbar w))``."""
    z, w = SH.check(z), SH.check(w)
    num = 1 - eval_j(z, z.conjugate()) * eval_j(w, w.conjugate()).conjugate()
    return num / ((1 - z * w.conjugate()) * (1 - z.conjugate() * w))


def eval_Kj(z, w, cross_check: bool = False) -> complex:
    """The kernel attached to ``j`` on the diagonal ``(z, zbar)``, two-term form.

    With ``cross_check`` the defining quotient is evaluated as well and a
    relative disagreement above ``1e-11`` raises :class:`ArithmeticError`.
    """
    z, w = SH.check(z), SH.check(w)
    zb, wb = z.conjugate(), w.conjugate()
    pref = 2.0 / ((z + zb + 2) * (wb + w + 2))
    val = pref * ((z + 1) * (wb + 1) / (1 - z * wb) + (zb + 1) * (w + 1) / (1 - zb * w))
    if cross_check:
        q = eval_Kj_quotient(z, w)
        if abs(q - val) > 1e-11 * max(abs(q), abs(val)):
            raise ArithmeticError("two forms of K_j disagree")
    return val
