"""Shared fixtures: hand-checkable instances and the seeded corpus."""

from itertools import combinations

from subknap.core import (CoverageOracle, Instance, Item, ModularOracle,
                          TableOracle)
from subknap.generate import GeneratorSpec

CORPUS_KINDS = ("modular", "coverage", "concave_modular", "planted")
SEEDS_PER_KIND = 50


def ex1() -> Instance:
    """Modular pair where the big item is indispensable."""
    return Instance((Item("a", 1), Item("b", 2)),
                    ModularOracle({"a": 1.0, "b": 1.9}))


def ex2() -> Instance:
    """Coverage pair with curvature one (the big item swallows the small)."""
    return Instance((Item("1", 1), Item("2", 3)),
                    CoverageOracle({"x": 1.0, "y": 1.0},
                                   {"1": ["x"], "2": ["x", "y"]}))


def ex3() -> Instance:
    """Coverage pair where mgreedy beats agreedy at capacity 2."""
    return Instance((Item("a", 1), Item("b", 2)),
                    CoverageOracle({"x": 1.0, "y": 0.9},
                                   {"a": ["x"], "b": ["x", "y"]}))


def ex1_extended() -> Instance:
    """ex1 plus a dominant size-3 item that reshuffles larger greedy orders."""
    return Instance((Item("a", 1), Item("b", 2), Item("c", 3)),
                    ModularOracle({"a": 1.0, "b": 1.9, "c": 10.0}))


def superadditive_table() -> dict:
    """Non-submodular two-item table: the pair is worth more than its parts."""
    return {"": 0.0, "a": 1.0, "b": 1.0, "a,b": 3.0}


def sneaky_bad_table() -> TableOracle:
    """Non-submodular table whose curvature formula still lands in [0, 1].

    The pairwise condition fails on {a, b} while every marginal-vs-singleton
    ratio stays between 0 and 1, so curvature-based checkers can run and must
    report the violation themselves.
    """
    return TableOracle({
        "": 0.0, "a": 1.0, "b": 1.0, "c": 1.0,
        "a,b": 2.5, "a,c": 2.0, "b,c": 2.0, "a,b,c": 3.0,
    })


def corpus_specs() -> list[GeneratorSpec]:
    specs = []
    for kind in CORPUS_KINDS:
        for seed in range(SEEDS_PER_KIND):
            kwargs = dict(kind=kind, n=4 + seed % 7, size_max=8, seed=seed)
            if kind == "concave_modular":
                kwargs["exponent"] = (seed % 10 + 1) / 10.0
            specs.append(GeneratorSpec(**kwargs))
    return specs


def enumerate_opt(instance: Instance, gamma: int) -> tuple[frozenset, float]:
    """Reference optimum by plain combination scanning, independent of the
    library's enumeration (used to cross-check brute_force_opt)."""
    ids = sorted(it.id for it in instance.items)
    best_ids: tuple = ()
    best_val = 0.0
    for r in range(len(ids) + 1):
        for combo in combinations(ids, r):
            if sum(instance.size(i) for i in combo) > gamma:
                continue
            v = instance.value(combo)
            if v > best_val + 1e-12:
                best_ids, best_val = combo, v
    return frozenset(best_ids), best_val
