"""Weighted coefficient spaces and their reproducing-kernel sections.

Three Hilbert spaces of truncated polyanalytic functions are modelled, each
by a diagonal weight on the monomials ``z^m zbar^n``:

==== =================== ===================================
tag  weight(m, n)        evaluation domain
==== =================== ===================================
SF   ``m! n!``           the whole plane
SH   ``1``               the open unit disk
DA   ``m! n! / (m+n)!``  the open disk of radius ``1/sqrt(2)``
==== =================== ===================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainViolation
from .polycore import DEFAULT_CAP, PolyFun, as_point

DA_RADIUS = 1.0 / math.sqrt(2.0)
# strict-interior margin for the Drury-Arveson-type ball
DA_MARGIN = 1e-12


@lru_cache(maxsize=None)
def _weight_exact(kind: str, m: int, n: int) -> Fraction:
    if kind == "SF":
        return Fraction(math.factorial(m) * math.factorial(n))
    if kind == "SH":
        return Fraction(1)
    return Fraction(math.factorial(m) * math.factorial(n), math.factorial(m + n))


@lru_cache(maxsize=None)
def _weight_float(kind: str, m: int, n: int) -> float:
    try:
        return float(_weight_exact(kind, m, n))
    except OverflowError:
        return math.exp(_log_weight(kind, m, n))


@lru_cache(maxsize=None)
def _log_weight(kind: str, m: int, n: int) -> float:
    if kind == "SF":
        return math.lgamma(m + 1) + math.lgamma(n + 1)
    if kind == "SH":
        return 0.0
    return math.lgamma(m + 1) + math.lgamma(n + 1) - math.lgamma(m + n + 1)


@dataclass(frozen=True)
class SpaceWeight:
    """Diagonal monomial weight together with the space's evaluation domain."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("SF", "SH", "DA"):
            raise ValueError(f"unknown space tag {self.kind!r}; expected SF, SH or DA")

    def weight(self, m: int, n: int, exact: bool = False):
        """Squared norm of the monomial ``z^m zbar^n``.

        The float value is the correctly rounded exact rational, so
        identities that are exact in integer arithmetic stay exact.
        """
        if exact:
            return _weight_exact(self.kind, m, n)
        return _weight_float(self.kind, m, n)

    def log_weight(self, m: int, n: int) -> float:
        return _log_weight(self.kind, m, n)

    @property
    def radius(self) -> float:
        return {"SF": math.inf, "SH": 1.0, "DA": DA_RADIUS}[self.kind]

    def contains(self, w) -> bool:
        w = as_point(w)
        if self.kind == "SF":
            return True
        if self.kind == "SH":
            return abs(w) < 1.0
        return abs(w) < DA_RADIUS - DA_MARGIN

    def check(self, w) -> complex:
        w = as_point(w)
        if not self.contains(w):
            raise DomainViolation(f"{w!r} lies outside the domain of {self.kind}")
        return w

    def __str__(self):
        return self.kind


SF = SpaceWeight("SF")
SH = SpaceWeight("SH")
DA = SpaceWeight("DA")


def space(tag) -> SpaceWeight:
    if isinstance(tag, SpaceWeight):
        return tag
    return SpaceWeight(str(tag).upper())


def inner(f: PolyFun, g: PolyFun, s: SpaceWeight, exact: bool = False):
    """Weighted coefficient pairing, linear in ``f`` and antilinear in ``g``."""
    s = space(s)
    tf, tg = f.terms, g.terms
    common = tf.keys() & tg.keys()
    total = Fraction(0) if exact else 0j
    for k in sorted(common):
        total += s.weight(*k, exact=exact) * tf[k] * tg[k].conjugate()
    return total


def norm(f: PolyFun, s: SpaceWeight) -> float:
    s = space(s)
    return math.sqrt(math.fsum(s.weight(m, n) * abs(c) ** 2 for (m, n), c in f.terms.items()))


def kernel_section(s: SpaceWeight, w, D: int, cap: int | None = None) -> PolyFun:
    """Degree-``D`` truncation of ``K_w`` as a function of ``z, zbar``.

    The coefficient on ``z^m zbar^n`` is ``conj(w)^m w^n / weight(m, n)``.
    """
    s = space(s)
    w = s.check(w)
    cap = max(D, DEFAULT_CAP) if cap is None else cap
    wb = w.conjugate()
    pw_bar = [1 + 0j]
    pw = [1 + 0j]
    for _ in range(D):
        pw_bar.append(pw_bar[-1] * wb)
        pw.append(pw[-1] * w)
    terms = {}
    for m in range(D + 1):
        for n in range(D + 1 - m):
            if s.kind == "SH":
                terms[(m, n)] = pw_bar[m] * pw[n]
            else:
                terms[(m, n)] = pw_bar[m] * pw[n] / s.weight(m, n)
    return PolyFun(terms, cap=cap)


def reproduce_residual(f: PolyFun, w, s: SpaceWeight, D: int) -> float:
    """``|<f, K_w> - f(w)|`` with the kernel truncated at degree ``D``."""
    s = space(s)
    if f.degree > D:
        raise ValueError(f"degree of f ({f.degree}) exceeds truncation degree {D}")
    kw = kernel_section(s, w, D)
    return abs(inner(f, kw, s) - f.eval(w))


def gram_matrix(s: SpaceWeight, points, D: int) -> np.ndarray:
    """Gram matrix ``[K_D(z_i, z_j)]`` of the truncated kernel at ``points``."""
    s = space(s)
    sections = [kernel_section(s, p, D) for p in points]
    pts = [s.check(p) for p in points]
    return np.array([[sections[j].eval(pts[i]) for j in range(len(pts))]
                     for i in range(len(pts))])


def weighted_gram(basis, s: SpaceWeight) -> np.ndarray:
    """Matrix of inner products ``<b_i, b_j>`` for a list of functions."""
    s = space(s)
    return np.array([[inner(bi, bj, s) for bj in basis] for bi in basis])
