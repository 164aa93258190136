"""Exhaustive ground truth and checkers for the algorithm guarantees.

Everything here enumerates: optima come from scanning all subsets, and the
worst case over capacities is evaluated exactly by visiting every subset-sum
breakpoint, since integer sizes make each half-open capacity interval behave
like its left endpoint.
"""

from __future__ import annotations

import math
import random
import threading
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from . import bounds
from .core import (Instance, TOL, curvature, instance_digest, size_breakpoints,
                   sorted_ids, value_gt, values_close)
from .greedy import Solution, agreedy, agreedy_override, greedy_sequence, mgreedy
from .policy import (execute_policy, indispensability_interval, is_indispensable,
                     make_fit_oracle)

MAX_EXHAUSTIVE_ITEMS = 22


class GuardError(RuntimeError):
    """Instance too large for exhaustive enumeration."""


def _guard(instance: Instance) -> None:
    if instance.n > MAX_EXHAUSTIVE_ITEMS:
        raise GuardError(
            f"exhaustive routines accept at most {MAX_EXHAUSTIVE_ITEMS} items, "
            f"got {instance.n}")


def _check_gamma(gamma) -> int:
    if isinstance(gamma, bool) or not isinstance(gamma, int) or gamma < 1:
        raise ValueError(f"capacity must be a positive integer, got {gamma!r}")
    return gamma


# ---------------------------------------------------------------------------
# brute-force optimum

# per-instance table of (sorted ids, total size, value) for every subset
_TABLE_CACHE: "weakref.WeakKeyDictionary[Instance, tuple]" = weakref.WeakKeyDictionary()
_TABLE_LOCK = threading.Lock()


def _subset_table(instance: Instance) -> tuple:
    with _TABLE_LOCK:
        table = _TABLE_CACHE.get(instance)
    if table is not None:
        return table
    ids = list(instance.ids)
    sizes = [instance.size(i) for i in ids]
    value_of = instance.oracle.evaluate
    rows = []
    for mask in range(1 << len(ids)):
        members = tuple(ids[i] for i in range(len(ids)) if mask >> i & 1)
        total = sum(sizes[i] for i in range(len(ids)) if mask >> i & 1)
        rows.append((members, total, value_of(members)))
    table = tuple(rows)
    with _TABLE_LOCK:
        _TABLE_CACHE[instance] = table
    return table


def brute_force_opt(instance: Instance, gamma: int) -> Solution:
    """Best feasible subset by full enumeration; value ties go to the
    lexicographically smallest id sequence."""
    _guard(instance)
    gamma = _check_gamma(gamma)
    instance.oracle.ensure_usable()
    best_ids: tuple[str, ...] = ()
    best_size = 0
    best_value = 0.0
    for members, total, value in _subset_table(instance):
        if total > gamma:
            continue
        if value_gt(value, best_value) or (
                values_close(value, best_value) and members < best_ids):
            best_ids, best_size, best_value = members, total, value
    return Solution(frozenset(best_ids), best_value, best_size)


# ---------------------------------------------------------------------------
# breakpoints and sweeps

@dataclass(frozen=True)
class BreakpointSet:
    """All capacities at which any algorithm's behavior can change."""

    capacities: tuple[int, ...]

    def __iter__(self):
        return iter(self.capacities)

    def __len__(self) -> int:
        return len(self.capacities)


def breakpoints(instance: Instance) -> BreakpointSet:
    _guard(instance)
    return BreakpointSet(size_breakpoints(instance.items))


@dataclass(frozen=True)
class SweepRow:
    gamma: int
    opt_value: float
    mg_value: float
    ag_value: float
    policy_value: float
    ratio_mg: float
    ratio_ag: float
    ratio_policy: float


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    empirical_robustness: float
    curvature: float
    alpha_bound: float
    digest: str

    def to_csv(self) -> str:
        lines = ["gamma,opt_value,mg_value,ag_value,policy_value,"
                 "ratio_mg,ratio_ag,ratio_policy"]
        for r in self.rows:
            lines.append(
                f"{r.gamma},{r.opt_value!r},{r.mg_value!r},{r.ag_value!r},"
                f"{r.policy_value!r},{r.ratio_mg!r},{r.ratio_ag!r},"
                f"{r.ratio_policy!r}")
        lines.append(f"# curvature={self.curvature!r}")
        lines.append(f"# alpha_bound={self.alpha_bound!r}")
        lines.append(f"# empirical_robustness={self.empirical_robustness!r}")
        return "\n".join(lines) + "\n"


def _ratio(value: float, opt: float) -> float:
    # a zero optimum carries no information and must not poison the minimum
    if values_close(opt, 0.0):
        return 1.0
    return value / opt


def _sweep_row(instance: Instance, gamma: int) -> SweepRow:
    opt = brute_force_opt(instance, gamma)
    mg = mgreedy(instance, gamma)
    ag = agreedy(instance, gamma)
    trace = execute_policy(instance, make_fit_oracle(gamma))
    return SweepRow(
        gamma=gamma,
        opt_value=opt.value,
        mg_value=mg.value,
        ag_value=ag.value,
        policy_value=trace.packed.value,
        ratio_mg=_ratio(mg.value, opt.value),
        ratio_ag=_ratio(ag.value, opt.value),
        ratio_policy=_ratio(trace.packed.value, opt.value),
    )


def robustness_sweep(instance: Instance, parallel: bool = False) -> SweepReport:
    """One row per breakpoint capacity plus the worst policy-to-optimum ratio."""
    _guard(instance)
    caps = breakpoints(instance).capacities
    if parallel and len(caps) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(caps))) as pool:
            rows = tuple(pool.map(lambda g: _sweep_row(instance, g), caps))
    else:
        rows = tuple(_sweep_row(instance, g) for g in caps)
    c = curvature(instance)
    return SweepReport(
        rows=rows,
        empirical_robustness=min((r.ratio_policy for r in rows), default=1.0),
        curvature=c,
        alpha_bound=bounds.alpha(c),
        digest=instance_digest(instance),
    )


# ---------------------------------------------------------------------------
# check reports

@dataclass(frozen=True)
class Failure:
    witness: str
    slack: float


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    failures: tuple[Failure, ...]
    worst_slack: float = math.inf
    notes: tuple[str, ...] = ()
    counts: Mapping[str, int] | None = None
    chi: tuple[int, ...] | None = None
    s_star: tuple[int, ...] | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "failures": [{"witness": f.witness, "slack": f.slack}
                         for f in self.failures],
            "worst_slack": None if math.isinf(self.worst_slack) else self.worst_slack,
            "notes": list(self.notes),
            "counts": dict(self.counts) if self.counts else None,
            "chi": list(self.chi) if self.chi is not None else None,
            "s_star": list(self.s_star) if self.s_star is not None else None,
        }


class _Recorder:
    """Accumulates slack observations; a slack below -1e-9 is a failure."""

    def __init__(self) -> None:
        self.trials = 0
        self.failures: list[Failure] = []
        self.worst = math.inf

    def observe(self, witness: str, slack: float) -> None:
        self.trials += 1
        self.worst = min(self.worst, slack)
        if slack < -TOL:
            self.failures.append(Failure(witness, slack))

    def check(self, witness: str, ok: bool) -> None:
        self.observe(witness, 0.0 if ok else -1.0)


# ---------------------------------------------------------------------------
# prefix-value lower bound (exponential-in-curvature form)

def check_theorem6(instance: Instance, gamma: int) -> CheckReport:
    """Every fitting greedy prefix reaches the curvature-dependent fraction
    of the optimum: f(G_j) >= (1/c)(1 - exp(-c s(G_j)/gamma)) f(OPT)."""
    _guard(instance)
    gamma = _check_gamma(gamma)
    c = curvature(instance)
    opt = brute_force_opt(instance, gamma).value
    run = greedy_sequence(instance, gamma)
    rec = _Recorder()
    for j in range(1, run.k + 1):
        z = run.prefix_sizes[j - 1] / gamma
        if c <= TOL:
            factor = z  # analytic limit of (1/c)(1 - exp(-c z)) as c -> 0
        else:
            factor = (1.0 - math.exp(-c * z)) / c
        fj = instance.value(run.prefix(j))
        rec.observe(f"gamma={gamma} j={j}: f(G_j)={fj!r} bound={factor * opt!r}",
                    fj - factor * opt)
    return CheckReport("theorem6", rec.trials, tuple(rec.failures), rec.worst)


# ---------------------------------------------------------------------------
# per-step marginal lower bounds

def check_lemma2(instance: Instance, gamma: int) -> CheckReport:
    """Two lower bounds on each greedy marginal in terms of the optimum.

    Capacities where the fitting prefix equals the (tie-broken) optimum are
    skipped, mirroring the excluded trivial case; denominator degeneracies
    are skipped and noted as well.
    """
    _guard(instance)
    gamma = _check_gamma(gamma)
    c = curvature(instance)
    run = greedy_sequence(instance, gamma)
    opt = brute_force_opt(instance, gamma)
    notes = [f"opt={{{','.join(sorted_ids(opt.items))}}}"]
    if run.fitting_prefix == opt.items:
        return CheckReport("lemma2", 0, (), notes=(
            f"skipped gamma={gamma}: greedy prefix equals the optimum", *notes))

    upto = run.k + (1 if run.overflow_item is not None else 0)
    chi = tuple(1 if run.order[m] in opt.items else 0 for m in range(upto))
    s_star = [0]
    for m in range(run.k):
        s_star.append(s_star[-1] + chi[m] * instance.size(run.order[m]))

    rec = _Recorder()
    sum_delta = 0.0
    sum_chi_delta = 0.0
    for j in range(1, upto + 1):
        delta = run.marginals[j - 1]
        sj = instance.size(run.order[j - 1])
        prefix_size = run.prefix_sizes[j - 2] if j >= 2 else 0

        denom1 = gamma - s_star[j - 1]
        if denom1 <= 0:
            notes.append(f"skipped (i) at j={j}: optimum already inside the prefix")
        else:
            rhs = (c * sj / gamma) * (opt.value - sum_delta) \
                + ((1.0 - c) * sj / denom1) * (opt.value - sum_chi_delta)
            rec.observe(f"gamma={gamma} (i) j={j}: delta={delta!r} bound={rhs!r}",
                        delta - rhs)

        denom2 = gamma - (1.0 - c) * prefix_size
        if denom2 <= TOL:
            notes.append(f"skipped (ii) at j={j}: capacity exactly consumed")
        else:
            rhs = (sj / denom2) * (opt.value - sum_delta)
            rec.observe(f"gamma={gamma} (ii) j={j}: delta={delta!r} bound={rhs!r}",
                        delta - rhs)

        sum_delta += delta
        sum_chi_delta += chi[j - 1] * delta

    return CheckReport("lemma2", rec.trials, tuple(rec.failures), rec.worst,
                       notes=tuple(notes), chi=chi, s_star=tuple(s_star))


# ---------------------------------------------------------------------------
# curvature inequalities

def check_curvature_lemma(instance: Instance, trials: int = 10000,
                          seed: int = 0) -> CheckReport:
    """Curvature bounds on marginals plus the marginal-sum upper bound.

    Exhaustive over all qualifying set pairs for n <= 8, seeded random
    samples otherwise.  Three families are checked:
      marginal_lower:      (1-c) f({j}) <= f(A + j) - f(A)
      disjoint_union:      f(A + B) >= f(A) + (1-c) sum of f({i}), i in B
      marginal_sum_upper:  f(B) <= f(A) + sum of marginals of B - A on A
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    c = curvature(instance)
    ids = list(instance.ids)
    n = len(ids)
    value_of = instance.oracle.evaluate
    rec = _Recorder()
    counts = {"marginal_lower": 0, "disjoint_union": 0, "marginal_sum_upper": 0}

    def check_marginal_lower(a: frozenset, j: str) -> None:
        counts["marginal_lower"] += 1
        slack = (value_of(a | {j}) - value_of(a)) - (1.0 - c) * value_of({j})
        rec.observe(f"marginal_lower A={sorted(a)} j={j}", slack)

    def check_disjoint_union(a: frozenset, b: frozenset) -> None:
        counts["disjoint_union"] += 1
        slack = value_of(a | b) - value_of(a) \
            - (1.0 - c) * sum(value_of({i}) for i in sorted(b))
        rec.observe(f"disjoint_union A={sorted(a)} B={sorted(b)}", slack)

    def check_marginal_sum_upper(a: frozenset, b: frozenset) -> None:
        counts["marginal_sum_upper"] += 1
        fa = value_of(a)
        bound = fa + sum(value_of(a | {u}) - fa for u in sorted(b - a))
        rec.observe(f"marginal_sum_upper A={sorted(a)} B={sorted(b)}",
                    bound - value_of(b))

    if n <= 8:
        for mask in range(1 << n):
            a = frozenset(ids[i] for i in range(n) if mask >> i & 1)
            for j in ids:
                if j not in a:
                    check_marginal_lower(a, j)
        for code in range(3 ** n):
            a, b = set(), set()
            rest = code
            for i in range(n):
                rest, digit = divmod(rest, 3)
                if digit == 1:
                    a.add(ids[i])
                elif digit == 2:
                    b.add(ids[i])
            check_disjoint_union(frozenset(a), frozenset(b))
            # reuse the assignment as a nested pair: A and A|B
            check_marginal_sum_upper(frozenset(a), frozenset(a | b))
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        for _ in range(trials):
            j = rng.choice(ids)
            a = frozenset(i for i in ids if i != j and rng.random() < 0.5)
            check_marginal_lower(a, j)

            a, b = set(), set()
            for i in ids:
                r = rng.random()
                if r < 1.0 / 3.0:
                    a.add(i)
                elif r < 2.0 / 3.0:
                    b.add(i)
            check_disjoint_union(frozenset(a), frozenset(b))
            check_marginal_sum_upper(frozenset(a), frozenset(a | b))
        mode = "sampled"

    return CheckReport("curvature_lemma", rec.trials, tuple(rec.failures),
                       rec.worst, notes=(f"mode={mode}",), counts=counts)


# ---------------------------------------------------------------------------
# indispensable-item properties

def check_indispensable_properties(instance: Instance) -> CheckReport:
    """Structural checks on every indispensable item.

    For each flagged item: the replay prefix is nonempty and strictly smaller
    than the item; agreedy returns the item exactly on the computed capacity
    interval (checked at every breakpoint and at the interval edges); and at
    the first breakpoint where the head of the greedy order changes, the
    first larger item either leads the new order or is itself the agreedy
    answer there.
    """
    _guard(instance)
    caps = size_breakpoints(instance.items)
    rec = _Recorder()
    notes = []
    flagged = 0
    for it in sorted(instance.items, key=lambda it: (it.size, it.id)):
        res = is_indispensable(instance, it)
        if not res.indispensable:
            continue
        flagged += 1
        prefix_size = instance.total_size(res.greedy_prefix)
        rec.check(
            f"{it.id}: nonempty prefix with s(item) > s(prefix) "
            f"({it.size} > {prefix_size})",
            len(res.greedy_prefix) >= 1 and it.size > prefix_size)

        interval = indispensability_interval(instance, it)
        rec.check(f"{it.id}: interval starts at the item size",
                  interval is not None and interval.gamma1 == it.size)
        if interval is None:
            continue
        probes = set(caps) | {interval.gamma1, interval.gamma2 - 1, interval.gamma2}
        if interval.gamma1 > 1:
            probes.add(interval.gamma1 - 1)
        for cap in sorted(probes):
            expected = interval.gamma1 <= cap < interval.gamma2
            actual = agreedy_override(instance, cap) == it.id
            rec.check(
                f"{it.id}: agreedy override at gamma={cap} expected={expected}",
                actual == expected)

        run1 = greedy_sequence(instance, interval.gamma1)
        head = run1.order[:run1.k + 1]
        for cap in caps:
            if cap <= interval.gamma1:
                continue
            run2 = greedy_sequence(instance, cap)
            if run2.order[:run1.k + 1] == head:
                continue
            larger = next((i for i in run2.order if instance.size(i) > it.size), None)
            rec.check(
                f"{it.id}: first larger item at order-change gamma={cap} "
                f"leads or overrides ({larger})",
                larger is not None and (
                    larger == run2.order[0]
                    or agreedy_override(instance, cap) == larger))
            break
    if flagged == 0:
        notes.append("no indispensable items; all properties hold vacuously")
    return CheckReport("indispensable_properties", rec.trials,
                       tuple(rec.failures), rec.worst, notes=tuple(notes))
