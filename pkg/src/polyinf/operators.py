"""Shift, integration, Gleason and multiplication operators on coefficient tables.

Every operator acts on the ``(m, n)`` table directly.  Backward shifts never
divide by ``z`` pointwise, so there is no special case at the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegreeOverflow
from .polycore import PolyFun, as_point
from .spaces import DA, SpaceWeight, inner, kernel_section, space

OPERATOR_TAGS = ("Mz", "Mzbar", "Dz", "Dzbar", "Rinf", "Linf", "Iinf", "Jinf",
                 "A0", "B0", "Aa", "Ba", "AaStar", "BaStar")
PARAMETRIC = ("Aa", "Ba", "AaStar", "BaStar")

ADJOINT_TOL = 1e-10


@dataclass(frozen=True)
class OperatorId:
    tag: str
    a: complex | None = None

    def __post_init__(self):
        if self.tag not in OPERATOR_TAGS:
            raise ValueError(f"unknown operator {self.tag!r}")
        if self.tag in PARAMETRIC:
            if self.a is None:
                raise ValueError(f"{self.tag} needs a parameter a")
            object.__setattr__(self, "a", DA.check(self.a))
        elif self.a is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> OperatorId:
        """``"Mz"`` or ``"Aa:0.3,0.1"`` (real and imaginary part of ``a``)."""
        if ":" in text:
            tag, arg = text.split(":", 1)
            re, im = (float(t) for t in arg.split(","))
            return cls(tag, complex(re, im))
        return cls(text)

    def __str__(self):
        if self.a is None:
            return self.tag
        return f"{self.tag}:{self.a.real!r},{self.a.imag!r}"


def _op(tag, a=None) -> OperatorId:
    return OperatorId(tag, a)


def _mul_truncated(f: PolyFun, g: PolyFun, D: int) -> PolyFun:
    out: dict = {}
    for (m1, n1), x in f.items():
        for (m2, n2), y in g.items():
            if m1 + m2 + n1 + n2 <= D:
                k = (m1 + m2, n1 + n2)
                out[k] = out.get(k, 0) + x * y
    return PolyFun(out, cap=f.cap)


def da_prefactor(a, D: int, cap: int | None = None) -> PolyFun:
    """Degree-``D`` truncation of ``1 / (1 - 2 Re(z conj(a)))`` as a geometric series."""
    a = DA.check(a)
    cap = max(D, 60) if cap is None else cap
    u = PolyFun({(1, 0): a.conjugate(), (0, 1): a}, cap=cap)
    out = PolyFun.constant(1, cap=cap)
    term = out
    for _ in range(D):
        term = _mul_truncated(term, u, D)
        out = out + term
    return out


def prefactor_tail_bound(a, z, D: int) -> float:
    """Bound ``(2|a||z|)^(D+1) / (1 - 2|a||z|)`` on the neglected geometric tail."""
    r = 2 * abs(as_point(a)) * abs(as_point(z))
    return math.inf if r >= 1 else r ** (D + 1) / (1 - r)


def _aa(op: OperatorId, f: PolyFun, D: int) -> PolyFun:
    if f.is_zero():
        return f
    shifted = f._shift(1, 0) if op.tag in ("Aa", "AaStar") else f._shift(0, 1)
    return _mul_truncated(shifted, da_prefactor(op.a, D, cap=f.cap), D)


def _aa_star(op: OperatorId, f: PolyFun) -> PolyFun:
    # exact adjoint in the DA space: (A* f)_pq w_pq = sum_mn w_mn f_mn conj((A e_pq)_mn);
    # A raises degree, so A* f is a polynomial of degree below deg f
    d = f.degree
    forward = _op(op.tag[:2], op.a)
    out = {}
    for p in range(d):
        for q in range(d - p):
            img = _aa(forward, PolyFun.monomial(p, q, cap=f.cap), d)
            s = 0j
            for k, c in img.items():
                fk = f.coeff(*k)
                if fk:
                    s += DA.weight(*k) * fk * c.conjugate()
            if s:
                out[(p, q)] = s / DA.weight(p, q)
    return PolyFun(out, cap=f.cap)


def apply(op, f: PolyFun, D: int | None = None) -> PolyFun:
    """Apply an operator to a truncated polyanalytic function.

    Parameters
    ----------
    op : OperatorId or str
    f : PolyFun
    D : int, optional
        Truncation degree for ``Aa`` and ``Ba``, whose images are infinite
        series.  Defaults to the degree cap of ``f``.

    Raises
    ------
    DegreeOverflow
        If a degree-raising operator (``Mz``, ``Mzbar``, ``Iinf``, ``Jinf``)
        would exceed the cap.
    """
    if isinstance(op, str):
        op = OperatorId.parse(op)
    t = f.terms
    tag = op.tag
    if tag == "Mz":
        return f.mul_z()
    if tag == "Mzbar":
        return f.mul_zbar()
    if tag == "Dz":
        return f.ddz()
    if tag == "Dzbar":
        return f.ddzbar()
    if tag == "Rinf":
        return PolyFun({(m - 1, n): c for (m, n), c in t.items() if m > 0}, cap=f.cap)
    if tag == "Linf":
        return PolyFun({(m, n - 1): c for (m, n), c in t.items() if n > 0}, cap=f.cap)
    if tag in ("Iinf", "Jinf"):
        if t and f.degree + 1 > f.cap:
            raise DegreeOverflow(f"{tag} would exceed degree cap {f.cap}")
        if tag == "Iinf":
            return PolyFun({(m + 1, n): c / (m + 1) for (m, n), c in t.items()}, cap=f.cap)
        return PolyFun({(m, n + 1): c / (n + 1) for (m, n), c in t.items()}, cap=f.cap)
    if tag == "A0":
        return PolyFun({(m - 1, n): c * m / (m + n) for (m, n), c in t.items() if m > 0},
                       cap=f.cap)
    if tag == "B0":
        return PolyFun({(m, n - 1): c * n / (m + n) for (m, n), c in t.items() if n > 0},
                       cap=f.cap)
    if tag in ("Aa", "Ba"):
        return _aa(op, f, f.cap if D is None else D)
    return _aa_star(op, f)


@dataclass
class OperatorReport:
    op_pair: tuple[str, str]
    space: str
    degree: int
    max_residual: float
    tolerance: float = ADJOINT_TOL
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["op_pair"] = list(self.op_pair)
        return d


def _basis(D: int):
    return [(m, n) for m in range(D) for n in range(D - m)]


def adjoint_residual(opL, opR, s: SpaceWeight, D: int, tol: float = ADJOINT_TOL) -> OperatorReport:
    """Maximum of ``|<L f, g> - <f, R g>|`` over monomials ``f, g`` of degree at most ``D - 1``.

    The ``1/(m+1)`` factors of ``Iinf`` and ``Jinf`` and the ``m/(m+n)``
    factors of ``A0`` and ``B0`` are not representable in binary, so those
    pairings carry rounding at the level of one ulp of the largest weight.
    """
    if isinstance(opL, str):
        opL = OperatorId.parse(opL)
    if isinstance(opR, str):
        opR = OperatorId.parse(opR)
    s = space(s)
    idx = _basis(D)
    cap = D + 1
    basis = [PolyFun.monomial(m, n, cap=cap) for m, n in idx]
    left = [apply(opL, b, D) for b in basis]
    right = [apply(opR, b, D) for b in basis]
    L = np.array([[inner(lf, g, s) for g in basis] for lf in left])
    R = np.array([[inner(f, rg, s) for rg in right] for f in basis])
    res = float(np.max(np.abs(L - R))) if idx else 0.0
    return OperatorReport((str(opL), str(opR)), s.kind, D, res, tol)


# the adjoint pairings asserted by the acceptance suite: (left, right, space)
ADJOINT_TABLE = (
    ("Dz", "Mz", "SF"),
    ("Dzbar", "Mzbar", "SF"),
    ("Iinf", "Rinf", "SF"),
    ("Jinf", "Linf", "SF"),
    ("Rinf", "Mz", "SH"),
    ("Linf", "Mzbar", "SH"),
    ("A0", "Mz", "DA"),
    ("B0", "Mzbar", "DA"),
)


def commutator_residual(f: PolyFun) -> float:
    """Max distance of ``[Dz, Mz] f`` and ``[Dzbar, Mzbar] f`` from ``f``."""
    c1 = f.mul_z().ddz() - f.ddz().mul_z()
    c2 = f.mul_zbar().ddzbar() - f.ddzbar().mul_zbar()
    return max(c1.max_abs_diff(f), c2.max_abs_diff(f))


def contraction_check(f: PolyFun, s: SpaceWeight | str = "SF") -> tuple[float, float]:
    """``(||Rinf f||^2, ||f||^2 - sum_n n! |alpha[0, n]|^2)`` in the Fock-type space."""
    s = space(s)
    if s.kind != "SF":
        raise ValueError("the contraction bound is stated for SF")
    rf = apply(_op("Rinf"), f)
    lhs = math.fsum(s.weight(*k) * abs(c) ** 2 for k, c in rf.items())
    rhs = math.fsum(s.weight(*k) * abs(c) ** 2 for k, c in f.items() if k[0] > 0)
    return lhs, rhs


def gleason_residual(f: PolyFun) -> float:
    """Distance between ``f - f(0)`` and ``z A0 f + zbar B0 f``."""
    lhs = f - PolyFun.constant(f.coeff(0, 0), cap=f.cap)
    rhs = apply(_op("A0"), f).mul_z() + apply(_op("B0"), f).mul_zbar()
    return lhs.max_abs_diff(rhs)


def gleason_grid(radius: float = 0.6, rings: int = 5, spokes: int = 16) -> list[complex]:
    pts = [0j]
    for i in range(1, rings):
        r = radius * i / (rings - 1)
        pts.extend(cmath.rect(r, 2 * math.pi * k / spokes) for k in range(spokes))
    return pts


def da_gleason_residual(w, a, D: int, grid=None) -> float:
    """Residual of ``f(z) - f(a) = (z - a) A_a* f + (zbar - abar) B_a* f`` for ``f = k_w``.

    ``f`` is the degree-``D`` kernel section at ``w``; the adjoints act by
    their closed form on kernels, ``A_a* k_w = conj(w) k_w / (1 - 2 Re(w abar))``
    and ``B_a* k_w = w k_w / (1 - 2 Re(w abar))``.
    """
    w, a = DA.check(w), DA.check(a)
    kw = kernel_section(DA, w, D)
    den = 1 - 2 * (w * a.conjugate()).real
    fa = kw.eval(a)
    worst = 0.0
    for z in (gleason_grid() if grid is None else grid):
        fz = kw.eval(z)
        rhs = (z - a) * w.conjugate() * fz / den + (z.conjugate() - a.conjugate()) * w * fz / den
        worst = max(worst, abs(fz - fa - rhs))
    return worst


def da_gleason_poly_residual(f: PolyFun, a, grid=None) -> float:
    """Same identity for a polynomial ``f``, with the adjoints applied exactly."""
    a = DA.check(a)
    A = apply(_op("AaStar", a), f)
    B = apply(_op("BaStar", a), f)
    fa = f.eval(a)
    worst = 0.0
    for z in (gleason_grid() if grid is None else grid):
        rhs = (z - a) * A.eval(z) + (z.conjugate() - a.conjugate()) * B.eval(z)
        worst = max(worst, abs(f.eval(z) - fa - rhs))
    return worst


def _interior_diff(g: PolyFun, h: PolyFun, D: int) -> float:
    keys = {k for k in (g.terms.keys() | h.terms.keys()) if sum(k) <= D - 1}
    return max((abs(g.coeff(*k) - h.coeff(*k)) for k in keys), default=0.0)


def product_geometric(l1: complex, l2: complex, D: int) -> PolyFun:
    """Truncation of ``1 / ((1 - l1 z)(1 - l2 zbar))``."""
    terms = {}
    p1 = 1 + 0j
    for m in range(D + 1):
        p2 = p1
        for n in range(D + 1 - m):
            terms[(m, n)] = p2
            p2 *= l2
        p1 *= l1
    return PolyFun(terms, cap=max(D, 60))


def eigenfunction_residual(lambda1: complex, lambda2: complex, D: int) -> tuple[float, float]:
    """Interior residuals of ``Rinf f - lambda1 f`` and ``Linf f - lambda2 f``."""
    f = product_geometric(complex(lambda1), complex(lambda2), D)
    r1 = _interior_diff(apply(_op("Rinf"), f), f.scale(lambda1), D)
    r2 = _interior_diff(apply(_op("Linf"), f), f.scale(lambda2), D)
    return r1, r2


def multinomial_geometric(a: complex, b: complex, D: int) -> PolyFun:
    """Truncation of ``1 / (1 - a z - b zbar)``: coefficients ``C(m+n, m) a^m b^n``."""
    terms = {}
    for m in range(D + 1):
        for n in range(D + 1 - m):
            terms[(m, n)] = math.comb(m + n, m) * a ** m * b ** n
    return PolyFun(terms, cap=max(D, 60))


def a0b0_common_eigenfunction_residual(a: complex, b: complex, D: int) -> float:
    """Interior residual of ``A0 f = a f`` and ``B0 f = b f`` for ``f = 1/(1 - az - b zbar)``."""
    a, b = complex(a), complex(b)
    f = multinomial_geometric(a, b, D)
    ra = _interior_diff(apply(_op("A0"), f), f.scale(a), D)
    rb = _interior_diff(apply(_op("B0"), f), f.scale(b), D)
    return max(ra, rb)


def multiplier_gram(points, which: str = "z") -> np.ndarray:
    """``[(1 - m(z_i) conj(m(z_j))) k(z_i, z_j)]`` for the DA kernel with multiplier ``z`` or ``zbar``.

    Positive semidefiniteness of this matrix is the Gram-level statement
    that multiplication by ``z`` (or ``zbar``) is a contraction.
    """
    pts = [DA.check(p) for p in points]
    mult = (lambda z: z) if which == "z" else (lambda z: z.conjugate())
    n = len(pts)
    G = np.empty((n, n), dtype=complex)
    for i, zi in enumerate(pts):
        for j, zj in enumerate(pts):
            k = 1.0 / (1 - 2 * (zi * zj.conjugate()).real)
            G[i, j] = (1 - mult(zi) * mult(zj).conjugate()) * k
    return G
