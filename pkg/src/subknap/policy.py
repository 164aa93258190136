"""Capacity-oblivious packing: indispensable items, start lists, and the policy.

An item is indispensable when, at a capacity equal to its own size, it is the
first item to overflow the greedy order and its marginal on the packed prefix
strictly exceeds the prefix value.  The policy seeds the knapsack with the
largest fitting start item, replays that item's greedy prefix, and then packs
adaptively by marginal density, learning the hidden capacity only through
fit queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Instance, Item, size_breakpoints, sorted_ids, value_gt
from .greedy import Solution, greedy_sequence, make_solution

REASON_INDISPENSABLE = "indispensable"
REASON_FIRST_GREEDY = "first_greedy"

PHASE_START_ITEM = "start_item"
PHASE_GREEDY_PREFIX = "greedy_prefix"
PHASE_MAIN_GREEDY = "main_greedy"


@dataclass(frozen=True)
class IndispensabilityResult:
    indispensable: bool
    greedy_prefix: frozenset[str]


@dataclass(frozen=True)
class IndispensabilityInterval:
    """Half-open capacity interval [gamma1, gamma2) on which the item is
    the single-item answer of agreedy."""

    gamma1: int
    gamma2: int


@dataclass(frozen=True)
class StartEntry:
    item_id: str
    reason: str  # REASON_INDISPENSABLE | REASON_FIRST_GREEDY


@dataclass(frozen=True)
class StartList:
    entries: tuple[StartEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class FitOracle:
    """Answers whether a total load fits a hidden capacity.

    The policy may read the capacity only through fits(); query_count records
    how many answers were consumed.
    """

    def __init__(self, gamma: int):
        if isinstance(gamma, bool) or not isinstance(gamma, int) or gamma < 1:
            raise ValueError(f"capacity must be a positive integer, got {gamma!r}")
        self._gamma = gamma
        self.query_count = 0

    def fits(self, candidate_total_size: int) -> bool:
        self.query_count += 1
        return candidate_total_size <= self._gamma


def make_fit_oracle(gamma: int) -> FitOracle:
    return FitOracle(gamma)


@dataclass(frozen=True)
class PolicyAttempt:
    item_id: str
    fitted: bool
    phase: str


@dataclass(frozen=True)
class PolicyTrace:
    attempts: tuple[PolicyAttempt, ...]
    packed: Solution
    query_count: int

    def to_dict(self) -> dict:
        return {
            "attempts": [
                {"item": a.item_id, "fitted": a.fitted, "phase": a.phase}
                for a in self.attempts
            ],
            "packed": list(sorted_ids(self.packed.items)),
            "value": self.packed.value,
            "total_size": self.packed.total_size,
            "query_count": self.query_count,
        }


def _resolve(instance: Instance, item) -> Item:
    if isinstance(item, Item):
        if instance.item(item.id) != item:
            raise KeyError(f"item {item.id!r} is not part of the instance")
        return item
    return instance.item(item)


def is_indispensable(instance: Instance, item) -> IndispensabilityResult:
    """Decide indispensability by running the greedy order at capacity s(item).

    True iff the item is the first to overflow that capacity at position two
    or later and its marginal on the packed prefix strictly exceeds the
    prefix value; the prefix is returned for the policy's replay step.
    """
    it = _resolve(instance, item)
    run = greedy_sequence(instance, it.size)
    if run.overflow_item != it.id or run.k < 1:
        return IndispensabilityResult(False, frozenset())
    prefix = run.fitting_prefix
    if value_gt(run.marginals[run.k], instance.value(prefix)):
        return IndispensabilityResult(True, prefix)
    return IndispensabilityResult(False, frozenset())


def indispensability_interval(instance: Instance, item) -> IndispensabilityInterval | None:
    """Capacity interval on which an indispensable item is agreedy's answer.

    The interval starts at the item's own size.  It ends where the item
    itself starts to fit after its prefix, or earlier at the first capacity
    breakpoint where the head of the greedy order changes, whichever comes
    first.  Absent for items that are not indispensable.
    """
    it = _resolve(instance, item)
    if not is_indispensable(instance, it).indispensable:
        return None
    gamma1 = it.size
    run = greedy_sequence(instance, gamma1)
    head = run.order[:run.k + 1]
    fits_with_prefix = run.prefix_sizes[run.k]  # s(prefix) + s(item)
    for cap in size_breakpoints(instance.items):
        if cap <= gamma1:
            continue
        if cap >= fits_with_prefix:
            break
        if greedy_sequence(instance, cap).order[:run.k + 1] != head:
            return IndispensabilityInterval(gamma1, cap)
    return IndispensabilityInterval(gamma1, fits_with_prefix)


def start_item_list(instance: Instance) -> StartList:
    """Seed items for the policy, ordered by strictly increasing size.

    Every item is tested at the capacity equal to its own size: indispensable
    items always join the list; an item that leads its own greedy order joins
    only once the list is nonempty, so the smallest indispensable item is
    always the first entry.
    """
    entries: list[StartEntry] = []
    for it in sorted(instance.items, key=lambda it: (it.size, it.id)):
        if is_indispensable(instance, it).indispensable:
            entries.append(StartEntry(it.id, REASON_INDISPENSABLE))
        elif entries and greedy_sequence(instance, it.size).order[0] == it.id:
            entries.append(StartEntry(it.id, REASON_FIRST_GREEDY))
    sizes = [instance.size(e.item_id) for e in entries]
    assert all(a < b for a, b in zip(sizes, sizes[1:])), \
        "start list sizes must be strictly increasing"
    return StartList(tuple(entries))


def execute_policy(instance: Instance, oracle: FitOracle,
                   start_list: StartList | None = None) -> PolicyTrace:
    """Run the oblivious policy against a fit-query interface.

    Step 1 tries start items from largest to smallest; a failed attempt
    discards every pool item at least that large.  Step 2 replays the packed
    start item's greedy prefix, dropping prefix items from the pool whether
    or not they fit.  Step 3 packs the remaining pool adaptively by marginal
    density with the same discard rule.  Packed items are never removed.
    """
    value_of = instance.oracle.evaluate
    if start_list is None:
        start_list = start_item_list(instance)

    pool = {it.id for it in instance.items}
    packed: list[str] = []
    packed_size = 0
    attempts: list[PolicyAttempt] = []
    prefix_order: tuple[str, ...] = ()

    # Step 1: largest start item that fits opens the knapsack
    for entry in reversed(start_list.entries):
        it = instance.item(entry.item_id)
        ok = oracle.fits(packed_size + it.size)
        attempts.append(PolicyAttempt(it.id, ok, PHASE_START_ITEM))
        if ok:
            packed.append(it.id)
            packed_size += it.size
            pool.discard(it.id)
            if entry.reason == REASON_INDISPENSABLE:
                run = greedy_sequence(instance, it.size)
                prefix_order = run.order[:run.k]
            break
        pool = {i for i in pool if instance.size(i) < it.size}

    # Step 2: replay the start item's greedy prefix in order
    for iid in prefix_order:
        size = instance.size(iid)
        ok = oracle.fits(packed_size + size)
        attempts.append(PolicyAttempt(iid, ok, PHASE_GREEDY_PREFIX))
        if ok:
            packed.append(iid)
            packed_size += size
        pool.discard(iid)

    # Step 3: adaptive greedy over whatever is left
    while pool:
        packed_set = frozenset(packed)
        packed_value = value_of(packed_set)
        best_id = None
        best_density = 0.0
        for iid in sorted(pool):
            gain = value_of(packed_set | {iid}) - packed_value
            density = gain / instance.size(iid)
            if best_id is None or value_gt(density, best_density):
                best_id, best_density = iid, density
        size = instance.size(best_id)
        ok = oracle.fits(packed_size + size)
        attempts.append(PolicyAttempt(best_id, ok, PHASE_MAIN_GREEDY))
        if ok:
            packed.append(best_id)
            packed_size += size
            pool.discard(best_id)
        else:
            pool = {i for i in pool if instance.size(i) < size}

    return PolicyTrace(
        attempts=tuple(attempts),
        packed=make_solution(instance, packed),
        query_count=oracle.query_count,
    )
