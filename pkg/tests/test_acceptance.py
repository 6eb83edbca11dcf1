"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Tolerances are pinned here so that a change to the registry defaults cannot
silently loosen the gate.  Checks with tolerance 0.5 count violations, so
they pass only with zero violations.
"""

import pytest

from polyinf.suite import CHECKS, SuiteConfig, run_criterion

PINNED = {
    1: {"prop-kernel-formula": 1e-9, "prop-kernel-formula-monotone": 0.5},
    2: {"eq-kn-lkn-dual": 1e-11},
    3: {"onb-sf-phi": 1e-10, "onb-sh-monomials": 1e-10},
    4: {name: 1e-10 for name in (
        "thm-adj-dz-mz", "thm-adj-dzbar-mzbar", "thm-rinf-star-iinf", "thm-linf-star-jinf",
        "lemma-hardy-r0-mz", "lemma-hardy-l0-mzbar", "prop-mz-star-a0", "prop-mzbar-star-b0")},
    5: {"prop-commutator": 1e-12},
    6: {"thm-sb-isometry": 1e-12, "thm-sb-quadrature": 1e-8, "thm-kerfac": 1e-8},
    7: {"prop-positionx": 1e-12, "prop-creationm": 1e-12},
    8: {"prop-bzn": 0.5, "lemma-naction": 0.5, "eq-noperator-oracle": 1e-9,
        "thm-berezin-unitary": 1e-10, "prop-berezin-derivatives": 1e-10,
        "thm-berezin-bound": 1e-10},
    9: {"thm-hardy-eigen": 1e-12, "lemma-a0b0-eigen": 1e-12},
    10: {"eq-gleason-origin": 1e-12, "eq-wer-da-gleason": 1e-8},
    11: {"thm-pick-one-point": 0.5, "thm-pick-two-point": 0.5, "kernel-gram-psd": 1e-9},
    12: {"sqrt-factor-square": 1e-12, "sqrt-factor-series": 1e-10,
         "ex-schur-counterexample": 1e-12},
    13: {"j-realization": 1e-12, "j-colligation-unitary": 1e-14, "j-boundary": 1e-12,
         "kj-two-forms": 1e-11},
    14: {"cor-da-derivative-reproducing": 1e-11},
}


def test_pins_cover_registry():
    registered = {c.name: c.criterion for c in CHECKS if c.criterion is not None}
    pinned = {name: k for k, names in PINNED.items() for name in names}
    assert registered == pinned


@pytest.mark.parametrize("k", sorted(PINNED))
def test_criterion(k, acceptance_log):
    cfg = SuiteConfig(tolerances=dict(PINNED[k]))
    records = run_criterion(k, cfg)
    assert {r.name for r in records} == set(PINNED[k])
    ok = all(r.passed for r in records)
    summary = ", ".join(f"{r.name}={r.max_residual:.2e}/{r.tolerance:.0e}" for r in records)
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({summary})"
    acceptance_log.append(line)
    print(line)
    failed = [r for r in records if not r.passed]
    assert ok, "; ".join(f"{r.name}: {r.max_residual!r} > {r.tolerance!r} {r.details}"
                         for r in failed)
