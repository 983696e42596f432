import json

import pytest

from embed47 import oracle
from embed47.errors import BudgetExceeded
from embed47.zmodule import IntMatrix


def test_unimzd_small_grid():
    run = oracle.verify_unimzd(max_rank=2, max_d=4, entry_bound=1, spot_samples=20)
    assert run.passed and run.instances > 100


def test_unimzd_budget_refusal():
    with pytest.raises(BudgetExceeded):
        oracle.verify_unimzd(max_rank=3, max_d=2, entry_bound=2, spot_samples=0,
                             budget=1000, sample=False)


def test_runs_are_deterministic():
    a = oracle.verify_unimzd(max_rank=2, max_d=3, entry_bound=1, spot_samples=30, seed=5)
    b = oracle.verify_unimzd(max_rank=2, max_d=3, entry_bound=1, spot_samples=30, seed=5)
    strip = lambda r: {k: v for k, v in r.to_dict().items() if k != "wall_time"}
    assert strip(a) == strip(b)
    assert json.loads(json.dumps(a.to_dict())) == a.to_dict()


def test_cap_welldef_negative_controls_fire():
    run = oracle.verify_cap_welldef(max_rank=1, d_set=(0, 3), negative_controls=True)
    assert run.passed
    assert run.controls and all(c["detected"] > 0 for c in run.controls)
    rows = {tuple(map(tuple, c["L"])) for c in run.controls}
    assert rows == set(oracle.NEGATIVE_CONTROLS)


def test_three_orbit_counts_examples():
    from embed47.classify import action_modulus, classify, core_from_divisibility

    core = core_from_divisibility(24, [[0]])
    b = (3,)
    X = oracle.direct_theta_subgroup(core, b)
    assert classify(core, b).orbit_size == action_modulus(core, b) == 6 == 12 // len(X)
    core = core_from_divisibility(0, [[0]])
    assert classify(core, (3,)).orbit_size == action_modulus(core, (3,)) == 6
    core = core_from_divisibility(8, [[4]])
    assert classify(core, (0,)).orbit_size == core.d_hat // 2


def test_small_suites_pass():
    assert oracle.verify_cgen_arithmetic(d_set=(0, 4, 6), max_rank=1).passed
    assert oracle.verify_s1s3_crosscheck(range(-2, 3), range(-4, 5)).passed


def test_summand_brute_examples():
    from embed47.zmodule import FgAbelianGroup

    Z6 = FgAbelianGroup.from_invariants([6])
    assert oracle.summand_brute(IntMatrix.from_rows([[2]]), Z6)
    assert not oracle.summand_brute(IntMatrix.from_rows([[2]]), FgAbelianGroup.from_invariants([8]))
    with pytest.raises(BudgetExceeded):
        oracle.summand_brute(IntMatrix.from_rows([[2]]), FgAbelianGroup.free(1))


def test_subgroup_closure():
    assert oracle.subgroup_closure([8], 24) == {0, 8, 16}
    assert oracle.subgroup_closure([], 24) == {0}
