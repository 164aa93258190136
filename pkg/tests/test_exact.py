import math

import pytest

from helpers import (enumerate_opt, ex1, ex2, ex3, sneaky_bad_table,
                     superadditive_table)
from subknap.core import (CoverageOracle, Instance, Item, ModularOracle,
                          OracleValidationError, TableOracle, curvature)
from subknap.exact import (GuardError, breakpoints, brute_force_opt,
                           check_curvature_lemma, check_indispensable_properties,
                           check_lemma2, check_theorem6, robustness_sweep)
from subknap.generate import GeneratorSpec, generate_instance
from subknap.greedy import agreedy, mgreedy
from subknap.policy import execute_policy, make_fit_oracle


# ---------------------------------------------------------------------------
# brute force and breakpoints

def test_brute_force_opt_ex1():
    opt = brute_force_opt(ex1(), 2)
    assert opt.items == {"b"} and opt.value == pytest.approx(1.9)
    opt = brute_force_opt(ex1(), 3)
    assert opt.items == {"a", "b"} and opt.value == pytest.approx(2.9)


def test_brute_force_opt_nothing_fits():
    inst = Instance((Item("a", 5),), ModularOracle({"a": 3.0}))
    opt = brute_force_opt(inst, 2)
    assert opt.items == frozenset() and opt.value == 0.0 and opt.total_size == 0


def test_brute_force_opt_tie_breaks_lexicographically():
    inst = Instance((Item("1", 1), Item("2", 1)),
                    CoverageOracle({"x": 1.0}, {"1": ["x"], "2": ["x"]}))
    assert brute_force_opt(inst, 2).items == {"1"}


def test_brute_force_opt_matches_independent_enumeration():
    for seed in range(12):
        kind = ("modular", "coverage", "concave_modular")[seed % 3]
        inst = generate_instance(GeneratorSpec(kind, n=4 + seed % 5, seed=seed))
        for gamma in breakpoints(inst):
            got = brute_force_opt(inst, gamma)
            _, ref_value = enumerate_opt(inst, gamma)
            assert got.value == pytest.approx(ref_value, abs=1e-9)
            assert got.total_size <= gamma


def test_exhaustive_guard_rejects_large_instances():
    ids = [f"i{k:02d}" for k in range(23)]
    inst = Instance(tuple(Item(i, 1) for i in ids),
                    ModularOracle({i: 1.0 for i in ids}))
    with pytest.raises(GuardError):
        brute_force_opt(inst, 3)
    with pytest.raises(GuardError):
        breakpoints(inst)
    with pytest.raises(GuardError):
        robustness_sweep(inst)


def test_breakpoints_values():
    assert breakpoints(ex1()).capacities == (1, 2, 3)
    two_ones = Instance((Item("a", 1), Item("b", 1)),
                        ModularOracle({"a": 1.0, "b": 1.0}))
    assert breakpoints(two_ones).capacities == (1, 2)
    single = Instance((Item("a", 5),), ModularOracle({"a": 1.0}))
    assert breakpoints(single).capacities == (5,)


# ---------------------------------------------------------------------------
# sweeps

def test_sweep_ex1_everything_optimal():
    rep = robustness_sweep(ex1())
    assert [r.gamma for r in rep.rows] == [1, 2, 3]
    assert all(r.ratio_policy == pytest.approx(1.0) for r in rep.rows)
    assert rep.empirical_robustness == pytest.approx(1.0)
    assert rep.curvature == 0.0 and rep.alpha_bound == pytest.approx(0.5)


def test_sweep_ex3_policy_gap():
    rep = robustness_sweep(ex3())
    row = next(r for r in rep.rows if r.gamma == 2)
    assert row.policy_value == pytest.approx(1.0)
    assert row.opt_value == pytest.approx(1.9)
    assert row.ratio_policy == pytest.approx(1.0 / 1.9)
    assert rep.empirical_robustness == pytest.approx(1.0 / 1.9)
    assert rep.curvature == 1.0
    assert rep.empirical_robustness >= rep.alpha_bound - 1e-9


def test_sweep_single_item_instance():
    inst = Instance((Item("a", 4),), ModularOracle({"a": 2.5}))
    rep = robustness_sweep(inst)
    assert [(r.gamma, r.ratio_mg, r.ratio_ag, r.ratio_policy)
            for r in rep.rows] == [(4, 1.0, 1.0, 1.0)]


def test_sweep_rows_dominated_by_optimum():
    for seed in (0, 7, 13):
        inst = generate_instance(GeneratorSpec("coverage", n=7, seed=seed))
        rep = robustness_sweep(inst)
        for r in rep.rows:
            top = max(r.mg_value, r.ag_value, r.policy_value)
            assert r.opt_value >= top - 1e-9 * max(1.0, top)


def test_sweep_deterministic_and_parallel_identical():
    inst = generate_instance(GeneratorSpec("planted", n=7, size_max=6, seed=3))
    a = robustness_sweep(inst).to_csv()
    b = robustness_sweep(inst).to_csv()
    c = robustness_sweep(inst, parallel=True).to_csv()
    assert a == b == c


def test_sweep_csv_shape():
    csv = robustness_sweep(ex1()).to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == ("gamma,opt_value,mg_value,ag_value,policy_value,"
                        "ratio_mg,ratio_ag,ratio_policy")
    assert lines[1].startswith("1,")
    assert lines[-3].startswith("# curvature=")
    assert lines[-2].startswith("# alpha_bound=")
    assert lines[-1].startswith("# empirical_robustness=")


def test_algorithms_constant_between_breakpoints():
    inst = generate_instance(GeneratorSpec("planted", n=6, size_max=6, seed=9))
    caps = breakpoints(inst).capacities
    for lo, hi in zip(caps, caps[1:]):
        if hi - 1 == lo:
            continue
        assert mgreedy(inst, lo) == mgreedy(inst, hi - 1)
        assert agreedy(inst, lo) == agreedy(inst, hi - 1)
        assert brute_force_opt(inst, lo) == brute_force_opt(inst, hi - 1)
        assert execute_policy(inst, make_fit_oracle(lo)) \
            == execute_policy(inst, make_fit_oracle(hi - 1))


# ---------------------------------------------------------------------------
# prefix-value bound

def test_theorem6_modular_limit_form():
    rep = check_theorem6(ex1(), 3)
    assert rep.passed and rep.trials == 2
    # j=1 clears its bound by 1.0 - 2.9/3; j=2 is tight, so the worst slack
    # across the prefix is exactly zero
    assert rep.worst_slack == pytest.approx(0.0, abs=1e-12)
    rep = check_theorem6(ex1(), 2)
    assert rep.passed
    assert rep.worst_slack == pytest.approx(1.0 - 1.9 / 2.0)


def test_theorem6_full_curvature_fixture():
    rep = check_theorem6(ex2(), 4)
    assert rep.passed and rep.worst_slack >= -1e-9


def test_theorem6_capacity_covers_everything():
    for build in (ex1, ex2, ex3):
        inst = build()
        total = sum(it.size for it in inst.items)
        rep = check_theorem6(inst, total)
        assert rep.passed


def test_theorem6_rejects_bad_table():
    inst = Instance((Item("a", 1), Item("b", 1)),
                    TableOracle(superadditive_table()))
    with pytest.raises(OracleValidationError):
        check_theorem6(inst, 2)


# ---------------------------------------------------------------------------
# per-step marginal bounds

def test_lemma2_ex1_indices():
    rep = check_lemma2(ex1(), 2)
    assert rep.passed
    assert rep.chi == (0, 1)
    assert rep.s_star == (0, 0)
    assert rep.trials == 4  # two inequalities at j in {1, 2}


def test_lemma2_ex3_full_curvature():
    rep = check_lemma2(ex3(), 2)
    assert rep.passed and rep.worst_slack >= -1e-9


def test_lemma2_skips_trivial_capacity():
    rep = check_lemma2(ex1(), 3)  # greedy packs everything, which is optimal
    assert rep.trials == 0
    assert any("skipped" in n for n in rep.notes)


def test_lemma2_notes_record_the_optimum():
    rep = check_lemma2(ex1(), 2)
    assert any(n.startswith("opt=") for n in rep.notes)


def test_lemma2_passes_across_random_instances():
    for seed in range(10):
        kind = ("modular", "coverage", "concave_modular", "planted")[seed % 4]
        inst = generate_instance(GeneratorSpec(kind, n=4 + seed % 6, seed=seed))
        for gamma in breakpoints(inst):
            rep = check_lemma2(inst, gamma)
            assert rep.passed, (kind, seed, gamma, rep.failures)


# ---------------------------------------------------------------------------
# curvature inequalities

def test_curvature_lemma_modular_equalities():
    inst = Instance((Item("a", 1), Item("b", 2), Item("c", 1), Item("d", 3)),
                    ModularOracle({"a": 1.0, "b": 2.0, "c": 0.5, "d": 4.0}))
    rep = check_curvature_lemma(inst, trials=10)
    assert rep.passed
    assert rep.worst_slack == 0.0  # binary-exact weights make ties exact


def test_curvature_lemma_coverage_exhaustive():
    rep = check_curvature_lemma(ex2(), trials=5)
    assert rep.passed
    assert "mode=exhaustive" in rep.notes


def test_curvature_lemma_negative_control():
    inst = Instance((Item("a", 1), Item("b", 1), Item("c", 1)),
                    sneaky_bad_table())
    assert curvature(inst) == pytest.approx(0.5)
    rep = check_curvature_lemma(inst, trials=5)
    assert not rep.passed
    assert rep.worst_slack < -1e-9
    assert any("marginal_sum_upper" in f.witness for f in rep.failures)


def test_curvature_lemma_sampled_mode_counts():
    inst = generate_instance(GeneratorSpec("coverage", n=9, seed=4))
    rep = check_curvature_lemma(inst, trials=120, seed=1)
    assert rep.passed
    assert "mode=sampled" in rep.notes
    assert all(count == 120 for count in rep.counts.values())


def test_curvature_lemma_requires_trials():
    with pytest.raises(ValueError):
        check_curvature_lemma(ex1(), trials=0)


def test_check_report_serialization():
    rep = check_lemma2(ex1(), 2)
    d = rep.to_dict()
    assert d["name"] == "lemma2" and d["failures"] == []
    assert d["chi"] == [0, 1] and d["s_star"] == [0, 0]
    assert math.isfinite(d["worst_slack"])
    empty = check_lemma2(ex1(), 3).to_dict()
    assert empty["worst_slack"] is None


# ---------------------------------------------------------------------------
# indispensable-item properties

def test_indispensable_properties_ex1():
    rep = check_indispensable_properties(ex1())
    assert rep.passed and rep.trials > 0


def test_indispensable_properties_vacuous_cases():
    rep = check_indispensable_properties(ex3())
    assert rep.passed and rep.trials == 0
    assert any("vacuously" in n for n in rep.notes)
    single = Instance((Item("a", 2),), ModularOracle({"a": 1.0}))
    rep = check_indispensable_properties(single)
    assert rep.passed and rep.trials == 0


def test_indispensable_properties_across_planted_instances():
    for seed in range(12):
        inst = generate_instance(GeneratorSpec("planted", n=4 + seed % 7,
                                               size_max=8, seed=seed))
        rep = check_indispensable_properties(inst)
        assert rep.passed, (seed, rep.failures)
        assert rep.trials > 0
