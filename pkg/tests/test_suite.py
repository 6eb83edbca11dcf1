import json
import math

import pytest

from polyinf import suite
from polyinf.suite import CHECKS, SuiteConfig, run_check, run_suite


def test_registry_names_unique():
    names = [c.name for c in CHECKS]
    assert len(names) == len(set(names))
    assert {c.criterion for c in CHECKS} - {None} == set(range(1, 15))


def test_kernel_grid():
    g = suite.kernel_grid()
    assert len(g) == 9
    assert max(abs(p) for p in g) == pytest.approx(1.5)


@pytest.mark.parametrize("kw", [
    {"degree": 0}, {"kernel_degree": 61}, {"workers": 0},
    {"tolerances": {"no-such-*": 1e-3}}, {"tolerances": {"prop-commutator": -1.0}},
    {"only": ("nothing",)},
])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SuiteConfig(**kw).validate()


def test_tolerance_patterns():
    cfg = SuiteConfig(tolerances={"thm-*": 1e-3, "thm-kerfac": 1e-4})
    assert cfg.tolerance("thm-sb-isometry", 1.0) == 1e-3
    assert cfg.tolerance("thm-kerfac", 1.0) == 1e-4
    assert cfg.tolerance("prop-commutator", 1e-12) == 1e-12


def test_deterministic_given_seed():
    cfg = SuiteConfig(only=("prop-commutator", "thm-berezin-unitary", "kernel-gram-psd"))
    a = [r.to_dict() for r in run_suite(cfg)]
    b = [r.to_dict() for r in run_suite(cfg)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert [r["name"] for r in a] == list(cfg.only)


def test_rng_streams_are_per_check():
    cfg = SuiteConfig()
    assert cfg.rng("a").random() != cfg.rng("b").random()
    assert cfg.rng("a").random() == cfg.rng("a").random()


def test_record_schema():
    cfg = SuiteConfig(only=("j-boundary",))
    (rec,) = run_suite(cfg)
    assert set(rec.to_dict()) == {"name", "criterion", "max_residual", "tolerance", "passed", "details"}
    assert rec.passed and rec.criterion == 13


def test_crashing_check_is_a_failure():
    def boom(cfg, rng):
        raise RuntimeError("kaput")
    rec = run_check(suite.Check("boom", None, 1.0, boom), SuiteConfig())
    assert not rec.passed and math.isinf(rec.max_residual)
    assert "kaput" in rec.details["error"]


def test_tiny_fd_tolerance_fails_in_a_controlled_way():
    cfg = SuiteConfig(only=("prop-*-fd",), tolerances={"prop-*-fd": 1e-30})
    recs = run_suite(cfg)
    assert len(recs) == 2
    assert not any(r.passed for r in recs)
    assert all(math.isfinite(r.max_residual) for r in recs)
