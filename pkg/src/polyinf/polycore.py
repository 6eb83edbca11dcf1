"""Truncated polyanalytic functions of infinite order.

A :class:`PolyFun` stores finitely many coefficients ``alpha[m, n]`` of the
double series ``sum alpha[m, n] * z**m * conj(z)**n``.  All calculus
(Wirtinger derivatives, multiplication by ``z`` and ``conj(z)``, real
partials) acts directly on the coefficient table, so every operation is exact
up to floating point rounding of the coefficient arithmetic.

Coefficients are normally Python ``complex``.  :meth:`SparseCoeffs.exact`
converts a table with real rational entries to :class:`fractions.Fraction`,
in which case all real-structure-constant operations stay exact.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from numbers import Number
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import DegreeOverflow

DEFAULT_CAP = 60
# largest total degree allowed in exact mode
EXACT_CAP = 20

Index = tuple[int, int]


def as_point(z) -> complex:
    """Coerce ``z`` to a finite complex number."""
    if isinstance(z, (tuple, list)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"point must be finite, got {z!r}")
    return z


def _conj(c):
    return c.conjugate()


class SparseCoeffs:
    """Immutable, finitely supported map ``(m, n) -> coefficient``.

    Subclasses attach a meaning to the index pair (monomials, Hermite
    products, complex Hermite polynomials); this base class only provides the
    vector-space structure, comparison and JSON serialization.
    """

    __slots__ = ("_terms", "_cap")

    def __init__(self, terms: Mapping[Index, Number] | Iterable | None = None,
                 cap: int = DEFAULT_CAP):
        if cap < 0:
            raise ValueError("degree cap must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        clean = {}
        for key, c in items:
            m, n = key
            if not (isinstance(m, int) and isinstance(n, int)) or m < 0 or n < 0:
                raise ValueError(f"index must be a pair of nonnegative ints, got {key!r}")
            if m + n > cap:
                raise DegreeOverflow(f"term ({m}, {n}) exceeds degree cap {cap}")
            if c != 0:
                clean[(m, n)] = c
        self._terms = clean
        self._cap = cap

    # construction helpers -------------------------------------------------

    def _new(self, terms):
        return type(self)(terms, cap=self._cap)

    @classmethod
    def zero(cls, cap: int = DEFAULT_CAP):
        return cls({}, cap=cap)

    @classmethod
    def monomial(cls, m: int, n: int, coeff=1, cap: int = DEFAULT_CAP):
        return cls({(m, n): coeff}, cap=cap)

    # read access -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Index, Number]:
        return MappingProxyType(self._terms)

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def degree(self) -> int:
        """Largest total degree ``m + n`` in the support, ``-1`` for zero."""
        return max((m + n for m, n in self._terms), default=-1)

    def coeff(self, m: int, n: int):
        return self._terms.get((m, n), 0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def with_cap(self, cap: int):
        return type(self)(self._terms, cap=cap)

    # vector space ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SparseCoeffs):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparseCoeffs):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        return self._new({k: s * c for k, c in self._terms.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self._terms.items())))

    def max_abs_diff(self, other) -> float:
        """Sup-norm distance between two coefficient tables."""
        keys = set(self._terms) | set(other._terms)
        return max((abs(complex(self.coeff(*k)) - complex(other.coeff(*k))) for k in keys),
                   default=0.0)

    def allclose(self, other, rtol: float = 1e-10, atol: float = 1e-14) -> bool:
        keys = set(self._terms) | set(other._terms)
        for k in keys:
            a, b = complex(self.coeff(*k)), complex(other.coeff(*k))
            if abs(a - b) > atol + rtol * max(abs(a), abs(b)):
                return False
        return True

    # precision modes -------------------------------------------------------

    def exact(self):
        """Return a copy with :class:`~fractions.Fraction` coefficients.

        Only real coefficients are supported and the total degree must not
        exceed :data:`EXACT_CAP`.
        """
        if self.degree > EXACT_CAP:
            raise DegreeOverflow(f"exact mode covers degree <= {EXACT_CAP}")
        out = {}
        for k, c in self._terms.items():
            if isinstance(c, complex):
                if c.imag != 0:
                    raise TypeError("exact mode requires real rational coefficients")
                c = c.real
            out[k] = Fraction(c)
        return self._new(out)

    def to_complex(self):
        return self._new({k: complex(c) for k, c in self._terms.items()})

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        terms = []
        for (m, n), c in self.items():
            c = complex(c)
            terms.append({"m": m, "n": n, "re": c.real, "im": c.imag})
        return {"terms": terms}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: Mapping, cap: int = DEFAULT_CAP):
        try:
            raw = data["terms"]
        except (KeyError, TypeError):
            raise ValueError("expected an object with a 'terms' array") from None
        terms = {}
        for t in raw:
            key = (int(t["m"]), int(t["n"]))
            if key in terms:
                raise ValueError(f"duplicate term {key}")
            terms[key] = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(terms, cap=cap)

    @classmethod
    def from_json(cls, text: str, cap: int = DEFAULT_CAP):
        return cls.from_dict(json.loads(text), cap=cap)

    def __repr__(self):
        body = ", ".join(f"({m},{n}): {c!r}" for (m, n), c in self.items())
        return f"{type(self).__name__}({{{body}}})"


class PolyFun(SparseCoeffs):
    """Truncated polyanalytic function ``sum alpha[m, n] z^m zbar^n``."""

    __slots__ = ()

    @classmethod
    def constant(cls, c=1, cap: int = DEFAULT_CAP):
        return cls({(0, 0): c}, cap=cap)

    @classmethod
    def z(cls, cap: int = DEFAULT_CAP):
        return cls({(1, 0): 1}, cap=cap)

    @classmethod
    def zbar(cls, cap: int = DEFAULT_CAP):
        return cls({(0, 1): 1}, cap=cap)

    @classmethod
    def x(cls, cap: int = DEFAULT_CAP):
        """The real coordinate ``x = (z + zbar) / 2``."""
        return cls({(1, 0): 0.5, (0, 1): 0.5}, cap=cap)

    @classmethod
    def y(cls, cap: int = DEFAULT_CAP):
        """The real coordinate ``y = (z - zbar) / (2i)``."""
        return cls({(1, 0): -0.5j, (0, 1): 0.5j}, cap=cap)

    # evaluation -------------------------------------------------------------

    def eval(self, z) -> complex:
        """Evaluate at ``z``: Horner in ``z`` within each ``zbar`` slice, then in ``zbar``."""
        z = as_point(z)
        if not self._terms:
            return 0j
        zb = z.conjugate()
        slices: dict[int, dict[int, Number]] = {}
        for (m, n), c in self._terms.items():
            slices.setdefault(n, {})[m] = c
        acc = 0j
        for n in range(max(slices), -1, -1):
            row = slices.get(n)
            s = 0j
            if row:
                for m in range(max(row), -1, -1):
                    s = s * z + row.get(m, 0)
            acc = acc * zb + s
        return complex(acc)

    __call__ = eval

    # calculus ---------------------------------------------------------------

    def ddz(self) -> PolyFun:
        return self._new({(m - 1, n): m * c for (m, n), c in self._terms.items() if m > 0})

    def ddzbar(self) -> PolyFun:
        return self._new({(m, n - 1): n * c for (m, n), c in self._terms.items() if n > 0})

    def laplacian(self) -> PolyFun:
        """``4 * d^2/(dz dzbar)``, the flat Laplacian in ``x, y``."""
        return self.ddz().ddzbar().scale(4)

    def ddx(self) -> PolyFun:
        return self.ddz() + self.ddzbar()

    def ddy(self) -> PolyFun:
        return (self.ddz() - self.ddzbar()).scale(1j)

    def euler(self) -> PolyFun:
        """``z df/dz + zbar df/dzbar``: the radial derivative ``d/dt f(tz)`` at ``t = 1``."""
        return self.ddz().mul_z() + self.ddzbar().mul_zbar()

    # multiplication ---------------------------------------------------------

    def _shift(self, dm: int, dn: int) -> PolyFun:
        if self._terms and self.degree + dm + dn > self._cap:
            raise DegreeOverflow(f"shift by ({dm}, {dn}) exceeds degree cap {self._cap}")
        return self._new({(m + dm, n + dn): c for (m, n), c in self._terms.items()})

    def mul_z(self) -> PolyFun:
        return self._shift(1, 0)

    def mul_zbar(self) -> PolyFun:
        return self._shift(0, 1)

    def mul(self, other: PolyFun) -> PolyFun:
        if self._terms and other._terms and self.degree + other.degree > self._cap:
            raise DegreeOverflow(
                f"product degree {self.degree + other.degree} exceeds cap {self._cap}")
        out: dict[Index, Number] = {}
        for (m1, n1), a in self._terms.items():
            for (m2, n2), b in other._terms.items():
                k = (m1 + m2, n1 + n2)
                out[k] = out.get(k, 0) + a * b
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, PolyFun):
            return self.mul(other)
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> PolyFun:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = self.constant(1, cap=self._cap)
        for _ in range(k):
            out = out.mul(self)
        return out

    def conj(self) -> PolyFun:
        """Pointwise complex conjugate: ``alpha[m, n] -> conj(alpha[n, m])``."""
        return self._new({(n, m): _conj(c) for (m, n), c in self._terms.items()})

    # slicing ----------------------------------------------------------------

    def zbar_slice(self, n: int) -> dict[int, Number]:
        """Analytic component ``f_n``: the coefficients of ``zbar**n`` keyed by power of ``z``."""
        return {m: c for (m, k), c in self._terms.items() if k == n}

    def truncate(self, degree: int) -> PolyFun:
        """Drop every term of total degree above ``degree``."""
        return self._new({k: c for k, c in self._terms.items() if sum(k) <= degree})


def monomial(m: int, n: int, coeff=1, cap: int = DEFAULT_CAP) -> PolyFun:
    return PolyFun.monomial(m, n, coeff, cap=cap)


def phi_basis(m: int, n: int, cap: int = DEFAULT_CAP) -> PolyFun:
    """Orthonormal basis element ``z^m zbar^n / sqrt(m! n!)`` of the Fock-type space."""
    return PolyFun.monomial(m, n,
                            1.0 / math.sqrt(math.factorial(m) * math.factorial(n)),
                            cap=cap)


def exp_series(c: complex, kind: str, degree: int, cap: int = DEFAULT_CAP) -> PolyFun:
    """Truncation of ``exp(c z)`` (``kind='z'``) or ``exp(c zbar)`` (``kind='zbar'``)."""
    terms = {}
    t = 1 + 0j
    for k in range(degree + 1):
        terms[(k, 0) if kind == "z" else (0, k)] = t
        t = t * c / (k + 1)
    return PolyFun(terms, cap=cap)


def random_polyfun(rng, degree: int, density: float = 1.0, scale: float = 1.0,
                   cap: int = DEFAULT_CAP) -> PolyFun:
    """Random complex coefficients on the triangle ``m + n <= degree``.

    ``rng`` is a :class:`numpy.random.Generator`; ``density`` is the fraction
    of indices that receive a nonzero coefficient.
    """
    terms = {}
    for m in range(degree + 1):
        for n in range(degree + 1 - m):
            if density >= 1.0 or rng.random() < density:
                re, im = rng.normal(size=2)
                terms[(m, n)] = complex(re, im) * scale
    return PolyFun(terms, cap=cap)


__all__ = [
    "DEFAULT_CAP", "EXACT_CAP", "SparseCoeffs", "PolyFun", "as_point", "monomial",
    "phi_basis", "exp_series", "random_polyfun",
]
