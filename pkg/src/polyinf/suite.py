"""Registry of identity checks, each named after the result it exercises.

Every check returns a :class:`CheckRecord`.  The acceptance criteria are the
checks with a ``criterion`` number; the remaining ones cover invariants that
are cheap enough to run with the rest.
"""

from __future__ import annotations

import cmath
import fnmatch
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import gaussmoments as gm
from . import kernels as kn
from . import operators as ops
from . import pick as pk
from . import transforms as tr
from .polycore import DEFAULT_CAP, PolyFun, phi_basis, random_polyfun
from .spaces import SF, SH, weighted_gram

DEFAULT_SEED = 1729
EPS = np.finfo(float).eps


@dataclass
class CheckRecord:
    name: str
    criterion: int | None
    max_residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteConfig:
    degree: int = 12
    kernel_degree: int = 60
    seed: int = DEFAULT_SEED
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    workers: int = 4
    only: tuple = ()

    def validate(self):
        for label, d in (("degree", self.degree), ("kernel_degree", self.kernel_degree)):
            if not isinstance(d, int) or not 1 <= d <= DEFAULT_CAP:
                raise ValueError(f"{label} must be an integer in 1..{DEFAULT_CAP}, got {d!r}")
        names = [c.name for c in CHECKS]
        for pattern, tol in self.tolerances.items():
            if not (isinstance(tol, (int, float)) and tol > 0 and math.isfinite(tol)):
                raise ValueError(f"tolerance for {pattern!r} must be positive, got {tol!r}")
            if not fnmatch.filter(names, pattern):
                raise ValueError(f"tolerance pattern {pattern!r} matches no check")
        for pattern in self.only:
            if not fnmatch.filter(names, pattern):
                raise ValueError(f"selection {pattern!r} matches no check")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def tolerance(self, name: str, default: float) -> float:
        tol = default
        for pattern, value in self.tolerances.items():
            if fnmatch.fnmatchcase(name, pattern):
                tol = value
        return tol

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])


@dataclass(frozen=True)
class Check:
    name: str
    criterion: int | None
    tolerance: float
    func: Callable


CHECKS: list[Check] = []


def check(name: str, criterion: int | None, tol: float):
    def deco(func):
        CHECKS.append(Check(name, criterion, tol, func))
        return func
    return deco


def _disk(rng, n: int, radius: float) -> list[complex]:
    r = radius * np.sqrt(rng.random(n))
    t = 2 * np.pi * rng.random(n)
    return [complex(v) for v in r * np.exp(1j * t)]


def kernel_grid() -> list[complex]:
    """Nine points ``r (i + j 1j)``, ``i, j in {-1, 0, 1}``, with ``|z| <= 1.5``."""
    r = 1.5 / math.sqrt(2)
    return [r * complex(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]


# criterion 1, 2: kernel-sum identity and the two K_n formulas ---------------

@check("prop-kernel-formula", 1, 1e-9)
def _kernel_formula(cfg, rng):
    g = kernel_grid()
    worst = max(kn.kernel_sum_residual(z, w, cfg.kernel_degree) for z in g for w in g)
    return worst, {"N": cfg.kernel_degree, "pairs": len(g) ** 2}


@check("prop-kernel-formula-monotone", 1, 0.5)
def _kernel_formula_monotone(cfg, rng):
    """Number of grid pairs whose residual sequence ever increases.

    Increases smaller than a few ulps of ``|G K|`` are treated as rounding.
    """
    g = kernel_grid()
    bad, biggest = 0, 0.0
    for z in g:
        for w in g:
            seq = kn.kernel_sum_residuals(z, w, cfg.kernel_degree)
            floor = 64 * EPS * abs(kn.g_factor(z, w) * kn.fock_kernel(z, w))
            jumps = [b - a for a, b in zip(seq, seq[1:])]
            up = max(jumps, default=0.0)
            if up > floor:
                bad += 1
                biggest = max(biggest, up)
    return float(bad), {"nonmonotone_pairs": bad, "pairs": len(g) ** 2,
                        "largest_increase": biggest}


@check("eq-kn-lkn-dual", 2, 1e-11)
def _kn_dual(cfg, rng):
    g = kernel_grid()
    worst = 0.0
    for z in g:
        for w in g:
            exact = kn.fock_n_binomial_table(40, z, w)
            for n, a in enumerate(exact, start=1):
                b = kn.fock_n_laguerre(n, z, w)
                scale = max(abs(a), abs(b))
                if scale:
                    worst = max(worst, abs(a - b) / scale)
    return worst, {"nmax": 40}


# criterion 3: orthonormal bases --------------------------------------------

def _gram_defect(basis, s):
    G = weighted_gram(basis, s)
    return float(np.max(np.abs(G - np.eye(len(basis)))))


@check("onb-sf-phi", 3, 1e-10)
def _onb_sf(cfg, rng):
    basis = [phi_basis(m, n) for m in range(21) for n in range(21 - m)]
    return _gram_defect(basis, SF), {"size": len(basis)}


@check("onb-sh-monomials", 3, 1e-10)
def _onb_sh(cfg, rng):
    basis = [PolyFun.monomial(m, n) for m in range(21) for n in range(21 - m)]
    return _gram_defect(basis, SH), {"size": len(basis)}


# criterion 4: adjoint table ------------------------------------------------

_ADJ_NAMES = {
    ("Dz", "Mz", "SF"): "thm-adj-dz-mz",
    ("Dzbar", "Mzbar", "SF"): "thm-adj-dzbar-mzbar",
    ("Iinf", "Rinf", "SF"): "thm-rinf-star-iinf",
    ("Jinf", "Linf", "SF"): "thm-linf-star-jinf",
    ("Rinf", "Mz", "SH"): "lemma-hardy-r0-mz",
    ("Linf", "Mzbar", "SH"): "lemma-hardy-l0-mzbar",
    ("A0", "Mz", "DA"): "prop-mz-star-a0",
    ("B0", "Mzbar", "DA"): "prop-mzbar-star-b0",
}


def _adjoint_check(left, right, sp):
    def run(cfg, rng):
        rep = ops.adjoint_residual(left, right, sp, cfg.degree)
        return rep.max_residual, {"op_pair": [left, right], "space": sp, "degree": cfg.degree}
    return run


for _key, _name in _ADJ_NAMES.items():
    check(_name, 4, ops.ADJOINT_TOL)(_adjoint_check(*_key))


# criterion 5: commutator ---------------------------------------------------

@check("prop-commutator", 5, 1e-12)
def _commutator(cfg, rng):
    worst = max(ops.commutator_residual(random_polyfun(rng, 10)) for _ in range(100))
    return worst, {"samples": 100, "degree": 10}


# criterion 6: Segal-Bargmann -------------------------------------------------

def _random_hermite(rng, top: int) -> tr.HermiteCoeffs:
    return tr.HermiteCoeffs({(m, n): complex(*rng.normal(size=2))
                             for m in range(top + 1) for n in range(top + 1)})


@check("thm-sb-isometry", 6, 1e-12)
def _sb_isometry(cfg, rng):
    worst = 0.0
    for _ in range(20):
        phi = _random_hermite(rng, 10)
        a = tr.norm(tr.segal_bargmann(phi), SF)
        worst = max(worst, abs(a - phi.l2_norm()) / phi.l2_norm())
        back = tr.segal_bargmann_inverse(tr.segal_bargmann(phi))
        worst = max(worst, back.max_abs_diff(phi))
    return worst, {"samples": 20, "relative": True}


@check("thm-sb-quadrature", 6, 1e-8)
def _sb_quadrature(cfg, rng):
    worst = 0.0
    pts = _disk(rng, 12, 1.5) + [1.5, -1.5j]
    for _ in range(4):
        phi = _random_hermite(rng, 10)
        f = tr.segal_bargmann(phi)
        for z in pts:
            worst = max(worst, abs(tr.segal_bargmann_quadrature_oracle(phi, z, 80) - f.eval(z)))
    return worst, {"n_quad": 80, "max_index": 10, "points": len(pts)}


@check("thm-kerfac", 6, 1e-8)
def _kerfac(cfg, rng):
    worst = 0.0
    zs, ws = _disk(rng, 25, 1.5), _disk(rng, 25, 1.5)
    for z, w in zip(zs, ws):
        worst = max(worst, abs(tr.kernel_factorization_quadrature(z, w, 80)
                               - kn.fock_kernel(z, w)))
    return worst, {"pairs": 25, "n_quad": 80}


# criterion 7: conjugation identities ---------------------------------------

@check("prop-positionx", 7, 1e-12)
def _positionx(cfg, rng):
    return tr.position_conjugation_residual(10), {"degree": 10}


@check("prop-creationm", 7, 1e-12)
def _creationm(cfg, rng):
    return tr.creation_conjugation_residual(10), {"degree": 10}


# criterion 8: Berezin transform --------------------------------------------

@check("prop-bzn", 8, 0.5)
def _bzn(cfg, rng):
    bad = sum(tr.berezin(PolyFun.monomial(n, 0)) != PolyFun.monomial(n, 0) for n in range(16))
    return float(bad), {"exact_failures": bad, "nmax": 15}


@check("lemma-naction", 8, 0.5)
def _naction(cfg, rng):
    bad = 0
    for p in range(9):
        for q in range(9):
            h = tr.complex_hermite_to_monomials(p, q)
            bad += tr.berezin(h) != PolyFun.monomial(p, q)
    return float(bad), {"exact_failures": bad, "max_index": 8}


@check("eq-noperator-oracle", 8, 1e-9)
def _berezin_oracle(cfg, rng):
    worst = 0.0
    pts = _disk(rng, 10, 1.5) + [1.5, 1.5j, 0j]
    for _ in range(5):
        f = random_polyfun(rng, 8)
        bf = tr.berezin(f)
        for z in pts:
            worst = max(worst, abs(bf.eval(z) - gm.berezin_of_poly(f, z)))
    return worst, {"degree": 8, "points": len(pts)}


@check("thm-berezin-unitary", 8, 1e-10)
def _berezin_unitary(cfg, rng):
    worst = 0.0
    for _ in range(50):
        f = random_polyfun(rng, 8)
        worst = max(worst, abs(tr.berezin_sf_norm(f) - tr.mu_norm_by_moments(f)))
    return worst, {"samples": 50, "degree": 8}


@check("prop-berezin-derivatives", 8, 1e-10)
def _berezin_derivatives(cfg, rng):
    inputs = [PolyFun.z(), tr.complex_hermite_to_monomials(1, 1), PolyFun.constant(1)]
    inputs += [random_polyfun(rng, 6) for _ in range(5)]
    worst, where = 0.0, None
    for f in inputs:
        for key, val in tr.berezin_derivative_residuals(f).items():
            if val >= worst:
                worst, where = val, key
    return worst, {"inputs": len(inputs), "worst_identity": where}


@check("thm-berezin-bound", 8, 1e-10)
def _berezin_bound(cfg, rng):
    worst = -math.inf
    for beta in (2.5, 3.0, 6.0):
        inputs = [PolyFun.constant(1)] + [random_polyfun(rng, int(rng.integers(0, 7)))
                                           for _ in range(49)]
        for f in inputs:
            lhs, rhs = tr.berezin_bound_check(f, beta)
            worst = max(worst, lhs - rhs)
    # report the violation amount; nonpositive means the bound holds everywhere
    return max(worst, 0.0), {"largest_lhs_minus_rhs": worst, "betas": [2.5, 3.0, 6.0]}


# criterion 9: eigenfunctions -------------------------------------------------

@check("thm-hardy-eigen", 9, 1e-12)
def _hardy_eigen(cfg, rng):
    worst = 0.0
    for _ in range(20):
        l1 = cmath.rect(0.7 * rng.random(), 2 * np.pi * rng.random())
        l2 = cmath.rect(0.7 * rng.random(), 2 * np.pi * rng.random())
        worst = max(worst, *ops.eigenfunction_residual(l1, l2, 25))
    return worst, {"samples": 20, "degree": 25}


@check("lemma-a0b0-eigen", 9, 1e-12)
def _a0b0_eigen(cfg, rng):
    worst = 0.0
    for _ in range(20):
        ra = 0.7 * rng.random()
        rb = (0.7 - ra) * rng.random()
        a = cmath.rect(ra, 2 * np.pi * rng.random())
        b = cmath.rect(rb, 2 * np.pi * rng.random())
        worst = max(worst, ops.a0b0_common_eigenfunction_residual(a, b, 25))
    return worst, {"samples": 20, "degree": 25}


# criterion 10: Gleason identities ------------------------------------------

@check("eq-gleason-origin", 10, 1e-12)
def _gleason(cfg, rng):
    worst = max(ops.gleason_residual(random_polyfun(rng, 10)) for _ in range(100))
    return worst, {"samples": 100, "degree": 10}


@check("eq-wer-da-gleason", 10, 1e-8)
def _da_gleason(cfg, rng):
    pairs = [(0j, 0.3 + 0.2j), (0.3, 0.2j), (0.45, 0.45), (-0.45j, 0.45)]
    pairs += list(zip(_disk(rng, 8, 0.45), _disk(rng, 8, 0.45)))
    worst = max(ops.da_gleason_residual(w, a, 60) for a, w in pairs)
    return worst, {"pairs": len(pairs), "degree": 60, "grid_radius": 0.6}


# criterion 11: Pick -------------------------------------------------------------

@check("thm-pick-one-point", 11, 0.5)
def _pick_one(cfg, rng):
    bad = 0
    for _ in range(50):
        z = _disk(rng, 1, 0.7)[0]
        w = cmath.rect(2 * rng.random(), 2 * np.pi * rng.random())
        bad += pk.feasible(pk.PickProblem((z,), (w,))) != (abs(w) ** 2 <= 1)
    return float(bad), {"mismatches": bad, "instances": 50}


@check("thm-pick-two-point", 11, 0.5)
def _pick_two(cfg, rng):
    rep = pk.feasibility_report(pk.PickProblem((0, 0.5), (0, 0)))
    ok = rep["feasible"] and rep.get("cholesky_ok", True)
    return 0.0 if ok else 1.0, rep


@check("kernel-gram-psd", 11, 1e-9)
def _gram_psd(cfg, rng):
    kids = [kn.FOCK, kn.fock_n(3), kn.GFACTOR, kn.HARDY, kn.DRURY_ARVESON, kn.BIDISK_J]
    radius = {"FockInf": 1.5, "FockN": 1.5, "Gfactor": 1.5, "Hardy": 0.95,
              "DruryArveson": 0.7, "BidiskJ": 0.95}
    worst, mins = 0.0, {}
    for kid in kids:
        pts = _disk(rng, 8, radius[kid.tag])
        G = kn.kernel_gram(kid, pts)
        lo = float(np.linalg.eigvalsh(0.5 * (G + G.conj().T))[0])
        mins[str(kid)] = lo
        worst = max(worst, -lo)
    return worst, {"min_eigenvalues": mins, "points": 8}


# criterion 12: square-root factor and the counterexample -------------------

def _v_outer(a: complex) -> np.ndarray:
    v = np.array([[a.conjugate()], [a]])
    return v @ v.conj().T


@check("sqrt-factor-square", 12, 1e-12)
def _sqrt_square(cfg, rng):
    worst = 0.0
    for a in _disk(rng, 20, 0.7):
        S = pk.sqrt_factor(a, check=False)
        worst = max(worst, float(np.max(np.abs(S @ S - (np.eye(2) - _v_outer(a))))))
    return worst, {"samples": 20}


@check("sqrt-factor-series", 12, 1e-10)
def _sqrt_series(cfg, rng):
    worst = 0.0
    for a in _disk(rng, 20, 0.7):
        worst = max(worst, float(np.max(np.abs(pk.sqrt_factor_closed(a)
                                               - pk.sqrt_factor_series(a)))))
    return worst, {"samples": 20}


@check("ex-schur-counterexample", 12, 1e-12)
def _schur(cfg, rng):
    details, worst = {}, 0.0
    for m in (1, 5, 20):
        sup, nsq = pk.schur_counterexample_report(m, seed=cfg.seed)
        details[f"m={m}"] = {"sup_modulus": sup, "da_norm_sq": nsq}
        # violation of sup <= 1 or of norm^2 >= 1 + c_1^2
        worst = max(worst, sup - 1.0, 1.25 - nsq)
    return max(worst, 0.0), details


# criterion 13: bidisk inner function ---------------------------------------

@check("j-realization", 13, 1e-12)
def _j_real(cfg, rng):
    z1s, z2s = _disk(rng, 100, 1.0), _disk(rng, 100, 1.0)
    worst = max(abs(kn.eval_j(a, b) - kn.eval_j_realization(a, b)) for a, b in zip(z1s, z2s))
    return worst, {"samples": 100}


@check("j-colligation-unitary", 13, 1e-14)
def _j_unitary(cfg, rng):
    return kn.colligation_unitarity_defect(), {}


@check("j-boundary", 13, 1e-12)
def _j_boundary(cfg, rng):
    pts = [cmath.exp(2j * np.pi * (k + 0.5) / 64) for k in range(64)]
    return max(abs(kn.eval_j(z, z.conjugate()) - 1) for z in pts), {"samples": 64}


@check("kj-two-forms", 13, 1e-11)
def _kj_forms(cfg, rng):
    zs, ws = _disk(rng, 100, 0.95), _disk(rng, 100, 0.95)
    worst = 0.0
    for z, w in zip(zs, ws):
        a, b = kn.eval_Kj(z, w), kn.eval_Kj_quotient(z, w)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    return worst, {"samples": 100, "relative": True}


# criterion 14: derivative reproducing ----------------------------------------

@check("cor-da-derivative-reproducing", 14, 1e-11)
def _da_deriv(cfg, rng):
    pts = [(0.0, 0.0), (0.3, 0.1), (-0.2, 0.4), (0.5, -0.3), (0.1, -0.6)]
    worst = 0.0
    for _ in range(3):
        f = random_polyfun(rng, 8)
        for t, u in pts:
            for n in range(5):
                for m in range(5 - n):
                    worst = max(worst, pk.da_derivative_reproducing_residual(f, t, u, n, m, 12))
    return worst, {"points": len(pts), "degree": 8, "max_order": 4}


# invariants outside the numbered criteria ----------------------------------

@check("prop-fockpptd-fd", None, 1e-6)
def _fd_derivative(cfg, rng):
    pts = _disk(rng, 5, 1.0)
    worst = max(kn.fock_derivative_fd_residual(z, w, n)
                for n in (1, 2, 3) for z in pts for w in pts)
    return worst, {"orders": [1, 2, 3], "steps": kn.FD_STEPS}


@check("prop-deltadelta-fd", None, 1e-4)
def _fd_laplacian(cfg, rng):
    pts = _disk(rng, 3, 1.0)
    worst = max(max(kn.fock_laplacian_fd_residuals(z, w)) for z in pts for w in pts)
    return worst, {"step": 1e-2, "relative": True}


@check("kernel-hermitian", None, 1e-12)
def _hermitian(cfg, rng):
    kids = [kn.FOCK, kn.fock_n(4), kn.GFACTOR, kn.HARDY, kn.DRURY_ARVESON, kn.BIDISK_J]
    worst = 0.0
    for kid in kids:
        r = {"DruryArveson": 0.7, "Hardy": 0.95, "BidiskJ": 0.95}.get(kid.tag, 1.5)
        for z, w in zip(_disk(rng, 100, r), _disk(rng, 100, r)):
            a, b = kn.eval_kernel(kid, z, w), kn.eval_kernel(kid, w, z)
            worst = max(worst, abs(a - b.conjugate()) / max(1.0, abs(a)))
    return worst, {"pairs_per_kernel": 100}


@check("prop-gaussian-average", None, 1e-10)
def _gaussian_average(cfg, rng):
    pts = _disk(rng, 20, 2.0) + [2.0]
    worst = max(abs(gm.kernel_gaussian_average(z, 60) - math.exp(abs(z) ** 2)) / math.exp(abs(z) ** 2)
                for z in pts)
    return worst, {"points": len(pts), "relative": True}


@check("moment-quadrature", None, 1e-9)
def _moment_quadrature(cfg, rng):
    worst = 0.0
    for beta in (1.0, 2.5, 4.0):
        f = random_polyfun(rng, 20)
        a = gm.integrate_poly_gaussian(f, beta)
        b = gm.poly_plane_quadrature(f, beta, 80)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst, {"degree": 20, "betas": [1.0, 2.5, 4.0], "relative": True}


@check("multiplier-contractivity", None, 1e-9)
def _multiplier(cfg, rng):
    pts = _disk(rng, 6, 0.7)
    worst = 0.0
    for which in ("z", "zbar"):
        G = ops.multiplier_gram(pts, which)
        worst = max(worst, -float(np.linalg.eigvalsh(0.5 * (G + G.conj().T))[0]))
    return max(worst, 0.0), {"points": 6}


# runner ----------------------------------------------------------------------

def selected_checks(cfg: SuiteConfig) -> list[Check]:
    if not cfg.only:
        return list(CHECKS)
    return [c for c in CHECKS if any(fnmatch.fnmatchcase(c.name, p) for p in cfg.only)]


def run_check(c: Check, cfg: SuiteConfig) -> CheckRecord:
    tol = cfg.tolerance(c.name, c.tolerance)
    try:
        value, details = c.func(cfg, cfg.rng(c.name))
    except Exception as exc:  # a crashing check is a failed check, not a crashed suite
        return CheckRecord(c.name, c.criterion, math.inf, tol, False,
                           {"error": f"{type(exc).__name__}: {exc}"})
    value = float(value)
    return CheckRecord(c.name, c.criterion, value, tol, bool(value <= tol), details)


def run_suite(cfg: SuiteConfig | None = None) -> list[CheckRecord]:
    """Run every selected check in a thread pool; records come back in registry order."""
    cfg = SuiteConfig() if cfg is None else cfg
    cfg.validate()
    chosen = selected_checks(cfg)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda c: run_check(c, cfg), chosen))


def run_criterion(k: int, cfg: SuiteConfig | None = None) -> list[CheckRecord]:
    cfg = SuiteConfig() if cfg is None else cfg
    cfg.validate()
    return [run_check(c, cfg) for c in CHECKS if c.criterion == k]
