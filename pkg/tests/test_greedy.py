import pytest

from helpers import ex1, ex3
from subknap.core import Instance, Item, ModularOracle, size_breakpoints
from subknap.generate import GeneratorSpec, generate_instance
from subknap.greedy import agreedy, greedy_sequence, mgreedy


def test_greedy_sequence_ex1():
    run = greedy_sequence(ex1(), 2)
    assert run.order == ("a", "b")
    assert run.k == 1
    assert run.overflow_item == "b"
    assert run.prefix_sizes == (1, 3)
    assert run.marginals == pytest.approx((1.0, 1.9))


def test_greedy_sequence_rejects_nonpositive_capacity():
    with pytest.raises(ValueError):
        greedy_sequence(ex1(), 0)
    with pytest.raises(ValueError):
        greedy_sequence(ex1(), -3)


def test_greedy_sequence_empty_when_nothing_fits():
    inst = Instance((Item("a", 5), Item("b", 7)),
                    ModularOracle({"a": 1.0, "b": 2.0}))
    run = greedy_sequence(inst, 2)
    assert run.order == () and run.k == 0 and run.overflow_item is None
    for alg in (mgreedy, agreedy):
        sol = alg(inst, 2)
        assert sol.items == frozenset() and sol.value == 0.0


def test_greedy_sequence_ex3_marginals():
    run = greedy_sequence(ex3(), 2)
    assert run.order == ("a", "b")
    assert run.k == 1 and run.overflow_item == "b"
    assert run.marginals == pytest.approx((1.0, 0.9))


def test_mgreedy_examples():
    assert mgreedy(ex1(), 2).items == {"b"}
    assert mgreedy(ex1(), 2).value == pytest.approx(1.9)
    assert mgreedy(ex1(), 3).items == {"a", "b"}
    assert mgreedy(ex1(), 3).value == pytest.approx(2.9)
    assert mgreedy(ex3(), 2).items == {"b"}
    assert mgreedy(ex3(), 2).value == pytest.approx(1.9)


def test_agreedy_examples():
    assert agreedy(ex1(), 2).items == {"b"}
    assert agreedy(ex3(), 2).items == {"a"}
    assert agreedy(ex3(), 2).value == pytest.approx(1.0)
    assert agreedy(ex1(), 3).items == {"a", "b"}


def _random_instances(count=24):
    for seed in range(count):
        kind = ("modular", "coverage", "concave_modular")[seed % 3]
        yield generate_instance(GeneratorSpec(kind, n=4 + seed % 6, size_max=7,
                                              seed=seed))


def test_run_invariants_on_random_instances():
    for inst in _random_instances():
        for gamma in size_breakpoints(inst.items):
            run = greedy_sequence(inst, gamma)
            assert all(a < b for a, b in
                       zip(run.prefix_sizes, run.prefix_sizes[1:]))
            if run.k:
                assert run.prefix_sizes[run.k - 1] <= gamma
            if run.overflow_item is not None:
                assert run.prefix_sizes[run.k] > gamma
            assert all(m >= -1e-9 for m in run.marginals)
            total = 0.0
            for j, m in enumerate(run.marginals, start=1):
                total += m
                assert total == pytest.approx(inst.value(run.prefix(j)), abs=1e-9)


def test_mgreedy_dominates_agreedy_everywhere():
    for inst in _random_instances():
        for gamma in size_breakpoints(inst.items):
            mg, ag = mgreedy(inst, gamma), agreedy(inst, gamma)
            assert mg.value >= ag.value - 1e-9 * max(1.0, ag.value)


def test_agreedy_returns_prefix_or_overflow_singleton():
    for inst in _random_instances():
        for gamma in size_breakpoints(inst.items):
            run = greedy_sequence(inst, gamma)
            ag = agreedy(inst, gamma)
            options = {run.fitting_prefix}
            if run.overflow_item is not None:
                options.add(frozenset({run.overflow_item}))
            assert ag.items in options


def test_solutions_are_feasible():
    for inst in _random_instances(9):
        for gamma in size_breakpoints(inst.items):
            assert mgreedy(inst, gamma).total_size <= gamma
            assert agreedy(inst, gamma).total_size <= gamma


def test_modular_oracles_make_both_algorithms_agree():
    for seed in range(12):
        inst = generate_instance(GeneratorSpec("modular", n=4 + seed % 6, seed=seed))
        for gamma in size_breakpoints(inst.items):
            assert mgreedy(inst, gamma) == agreedy(inst, gamma)


def test_determinism():
    inst = generate_instance(GeneratorSpec("coverage", n=8, seed=11))
    for gamma in (1, 4, 9):
        assert greedy_sequence(inst, gamma) == greedy_sequence(inst, gamma)
        assert mgreedy(inst, gamma) == mgreedy(inst, gamma)
        assert agreedy(inst, gamma) == agreedy(inst, gamma)
