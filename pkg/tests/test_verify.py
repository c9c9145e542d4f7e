import random

import pytest

from multihyp import enumerate_hyps, first_variable, last_variable
from multihyp.verify import (
    DEFAULT_SEED,
    SCENARIOS,
    ScenarioResult,
    random_mhyp,
    run_scenario,
    sample_rb_identities,
)
from conftest import SIG


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_scenario_passes(name):
    res = run_scenario(name)
    assert res.passed, res.failures
    assert res.lines


@pytest.mark.parametrize("name", ["sec2-example", "ex311-collapse", "derived-match", "rb-first-last"])
def test_scenarios_are_deterministic(name):
    assert run_scenario(name).lines == run_scenario(name).lines


def test_other_seeds_also_pass():
    for seed in (1, 2, DEFAULT_SEED + 1):
        assert run_scenario("derived-match", seed).passed
        assert run_scenario("ex311-collapse", seed).passed


def test_result_bookkeeping():
    res = ScenarioResult("x")
    res.expect("a", 1, 1)
    res.require("b", True)
    assert res.passed and res.lines == [("a", "1"), ("b", "yes")]
    res.expect("c", 2, 3)
    res.require("d", False)
    assert not res.passed and res.failures == ["c: expected 3, got 2", "d"]


def test_sampled_identities_are_rb_identities():
    rng = random.Random(3)
    ids = sample_rb_identities(rng, 50)
    assert len(ids) == 50
    for e in ids:
        assert e.lhs != e.rhs
        assert first_variable(e.lhs) == first_variable(e.rhs)
        assert last_variable(e.lhs) == last_variable(e.rhs)


def test_random_mhyp_draws_from_pool():
    pool = enumerate_hyps(SIG, 1)
    rho = random_mhyp(random.Random(0), pool, colours=(0, 5))
    assert rho(0) in pool.hyps and rho(5) in pool.hyps and rho(99) in pool.hyps
