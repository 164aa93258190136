"""Submodular instances: items, value oracles, validation, and curvature.

Item sizes are exact positive integers so that capacity comparisons and
breakpoint enumeration are exact; objective values are floats compared with a
scaled absolute tolerance, remaining ties broken by ascending item id.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

TOL = 1e-9

#: validation switches from exhaustive to sampled above this item count
MAX_VALIDATE_EXHAUSTIVE = 12


class ConfigurationError(ValueError):
    """Bad oracle parameters or malformed instance data."""


class OracleValidationError(ValueError):
    """An oracle failed a normalization, monotonicity, or submodularity check."""


# ---------------------------------------------------------------------------
# tolerance-aware value comparisons

def values_close(a: float, b: float) -> bool:
    return abs(a - b) <= TOL * max(1.0, abs(a), abs(b))


def value_gt(a: float, b: float) -> bool:
    """a strictly greater than b, beyond tolerance."""
    return a > b and not values_close(a, b)


def value_ge(a: float, b: float) -> bool:
    return a >= b or values_close(a, b)


def sorted_ids(ids: Iterable[str]) -> tuple[str, ...]:
    """Canonical ascending-id tuple for an item set."""
    return tuple(sorted(ids))


# ---------------------------------------------------------------------------
# items and oracles

@dataclass(frozen=True)
class Item:
    id: str
    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise ConfigurationError("item id must be a nonempty string")
        if isinstance(self.size, bool) or not isinstance(self.size, int) or self.size < 1:
            raise ConfigurationError(
                f"item {self.id!r}: size must be a positive integer, got {self.size!r}"
            )


class ValueOracle:
    """Monotone, normalized, submodular set function queried by item subset.

    Results are memoized per subset; the cache never changes observable
    behavior and is safe for concurrent read-only callers.
    """

    kind = "abstract"

    def __init__(self, domain: Iterable[str]):
        self._domain = frozenset(domain)
        self._cache: dict[frozenset[str], float] = {}

    @property
    def domain(self) -> frozenset[str]:
        return self._domain

    def evaluate(self, ids: Iterable[str]) -> float:
        s = frozenset(ids)
        unknown = s - self._domain
        if unknown:
            raise KeyError(f"unknown item ids: {sorted(unknown)}")
        v = self._cache.get(s)
        if v is None:
            v = self._value(s)
            self._cache[s] = v
        return v

    def _value(self, s: frozenset[str]) -> float:
        raise NotImplementedError

    def restrict(self, ids: Iterable[str]) -> "ValueOracle":
        """Oracle over a subset of the domain (used by normalize_instance)."""
        raise NotImplementedError

    def ensure_usable(self) -> None:
        """Refuse use in algorithms if the oracle is not a valid objective.

        Parametric families are valid by construction; table oracles are
        checked exhaustively on first use.
        """

    def to_dict(self) -> dict:
        raise NotImplementedError


class ModularOracle(ValueOracle):
    kind = "modular"

    def __init__(self, weights: Mapping[str, float]):
        for i, w in weights.items():
            if w < 0:
                raise ConfigurationError(f"weight for {i!r} must be nonnegative")
        super().__init__(weights)
        self._weights = dict(weights)

    def _value(self, s: frozenset[str]) -> float:
        return float(sum(self._weights[i] for i in sorted(s)))

    def restrict(self, ids: Iterable[str]) -> "ModularOracle":
        keep = frozenset(ids)
        return ModularOracle({i: w for i, w in self._weights.items() if i in keep})

    def to_dict(self) -> dict:
        return {"kind": "modular", "weights": dict(sorted(self._weights.items()))}


class CoverageOracle(ValueOracle):
    """Weighted coverage: value of a set is the weight of the covered elements."""

    kind = "coverage"

    def __init__(self, element_weights: Mapping[str, float], covers: Mapping[str, Iterable[str]]):
        for e, w in element_weights.items():
            if w < 0:
                raise ConfigurationError(f"element {e!r}: weight must be nonnegative")
        cov = {i: tuple(sorted(set(es))) for i, es in covers.items()}
        for i, es in cov.items():
            for e in es:
                if e not in element_weights:
                    raise ConfigurationError(f"item {i!r} covers unknown element {e!r}")
        super().__init__(cov)
        self._element_weights = dict(element_weights)
        self._covers = cov

    def _value(self, s: frozenset[str]) -> float:
        covered = set()
        for i in s:
            covered.update(self._covers[i])
        return float(sum(self._element_weights[e] for e in sorted(covered)))

    def restrict(self, ids: Iterable[str]) -> "CoverageOracle":
        keep = frozenset(ids)
        return CoverageOracle(self._element_weights,
                              {i: es for i, es in self._covers.items() if i in keep})

    def to_dict(self) -> dict:
        return {
            "kind": "coverage",
            "elements": dict(sorted(self._element_weights.items())),
            "covers": {i: list(es) for i, es in sorted(self._covers.items())},
        }


class ConcaveModularOracle(ValueOracle):
    """Concave power of a modular sum; exponent 1 gives the modular oracle."""

    kind = "concave_modular"

    def __init__(self, weights: Mapping[str, float], exponent: float):
        if not 0.0 < exponent <= 1.0:
            raise ConfigurationError(f"exponent must be in (0, 1], got {exponent!r}")
        for i, w in weights.items():
            if w < 0:
                raise ConfigurationError(f"weight for {i!r} must be nonnegative")
        super().__init__(weights)
        self._weights = dict(weights)
        self._exponent = float(exponent)

    def _value(self, s: frozenset[str]) -> float:
        total = float(sum(self._weights[i] for i in sorted(s)))
        return total ** self._exponent

    def restrict(self, ids: Iterable[str]) -> "ConcaveModularOracle":
        keep = frozenset(ids)
        return ConcaveModularOracle(
            {i: w for i, w in self._weights.items() if i in keep}, self._exponent)

    def to_dict(self) -> dict:
        return {
            "kind": "concave_modular",
            "weights": dict(sorted(self._weights.items())),
            "exponent": self._exponent,
        }


class TableOracle(ValueOracle):
    """Explicit subset-to-value map for hand-built (possibly adversarial) fixtures.

    The table must cover all 2^n subsets with value 0 on the empty set.
    A table is not required to be submodular at construction time, but
    algorithm entry points refuse a table that fails validation.
    """

    kind = "table"

    MAX_ITEMS = 16  # completeness check enumerates 2^n subsets

    def __init__(self, values: Mapping):
        table: dict[frozenset[str], float] = {}
        for key, v in values.items():
            ids = self._parse_key(key)
            if ids in table:
                raise ConfigurationError(f"duplicate table key for subset {sorted(ids)}")
            table[ids] = float(v)
        domain = frozenset().union(*table.keys()) if table else frozenset()
        if len(domain) > self.MAX_ITEMS:
            raise ConfigurationError(
                f"table oracle limited to {self.MAX_ITEMS} items, got {len(domain)}")
        if len(table) != 2 ** len(domain):
            raise ConfigurationError(
                f"table must define all {2 ** len(domain)} subsets, got {len(table)}")
        empty = table.get(frozenset())
        if empty is None or abs(empty) > TOL:
            raise ConfigurationError("table value for the empty set must be 0")
        table[frozenset()] = 0.0
        super().__init__(domain)
        self._table = table
        self._usable: bool | None = None

    @staticmethod
    def _parse_key(key) -> frozenset[str]:
        if isinstance(key, str):
            return frozenset(p for p in key.split(",") if p) if key else frozenset()
        return frozenset(key)

    def _value(self, s: frozenset[str]) -> float:
        return self._table[s]

    def restrict(self, ids: Iterable[str]) -> "TableOracle":
        keep = frozenset(ids)
        kept = {",".join(sorted(s)): v for s, v in self._table.items() if s <= keep}
        return TableOracle(kept)

    def ensure_usable(self) -> None:
        if self._usable is None:
            report = _scan_oracle(self, sorted(self._domain), exhaustive=True)
            self._usable = report.normalized and report.monotone and report.submodular
            self._first_violation = report.first_violation
        if not self._usable:
            raise OracleValidationError(
                f"table oracle refused: {self._first_violation}")

    def to_dict(self) -> dict:
        values = {",".join(sorted(s)): v for s, v in self._table.items()}
        return {"kind": "table", "values": dict(sorted(values.items()))}


def make_modular_oracle(weights: Mapping[str, float]) -> ModularOracle:
    return ModularOracle(weights)


def make_coverage_oracle(element_weights: Mapping[str, float],
                         covers: Mapping[str, Iterable[str]]) -> CoverageOracle:
    return CoverageOracle(element_weights, covers)


def make_concave_modular_oracle(weights: Mapping[str, float],
                                exponent: float) -> ConcaveModularOracle:
    return ConcaveModularOracle(weights, exponent)


def make_table_oracle(values: Mapping) -> TableOracle:
    return TableOracle(values)


def evaluate(oracle: ValueOracle, ids: Iterable[str]) -> float:
    """Value of an item set; deterministic and pure."""
    return oracle.evaluate(ids)


# ---------------------------------------------------------------------------
# instances

@dataclass(frozen=True)
class Instance:
    items: tuple[Item, ...]
    oracle: ValueOracle

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        ids = [it.id for it in self.items]
        if len(set(ids)) != len(ids):
            raise ConfigurationError("duplicate item ids in instance")
        if self.oracle.domain != frozenset(ids):
            raise ConfigurationError(
                "oracle domain must match instance items exactly; "
                f"instance={sorted(ids)} oracle={sorted(self.oracle.domain)}")
        object.__setattr__(self, "_by_id", {it.id: it for it in self.items})

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def ids(self) -> tuple[str, ...]:
        return sorted_ids(self._by_id)

    def item(self, item_id: str) -> Item:
        return self._by_id[item_id]

    def size(self, item_id: str) -> int:
        return self._by_id[item_id].size

    def total_size(self, ids: Iterable[str]) -> int:
        return sum(self._by_id[i].size for i in ids)

    def value(self, ids: Iterable[str]) -> float:
        return self.oracle.evaluate(ids)


def size_breakpoints(items: Iterable[Item]) -> tuple[int, ...]:
    """Sorted distinct nonempty subset sums of the item sizes.

    Sums are integers, so the reachable set is computed by a set-based DP
    bounded by the total size rather than by 2^n.
    """
    sums = {0}
    for it in items:
        sums |= {s + it.size for s in sums}
    sums.discard(0)
    return tuple(sorted(sums))


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str  # "normalized" | "monotone" | "submodular"
    subset: tuple[str, ...]
    items: tuple[str, ...]
    slack: float

    def __str__(self) -> str:
        return (f"{self.kind} violated at A={list(self.subset)} "
                f"items={list(self.items)} slack={self.slack:.6g}")


@dataclass(frozen=True)
class ValidationReport:
    normalized: bool
    monotone: bool
    submodular: bool
    first_violation: Violation | None
    mode: str  # "exhaustive" | "sampled"

    @property
    def ok(self) -> bool:
        return self.normalized and self.monotone and self.submodular


def _subsets(ids: list[str]):
    n = len(ids)
    for mask in range(1 << n):
        yield frozenset(ids[i] for i in range(n) if mask >> i & 1)


def _scan_oracle(oracle: ValueOracle, ids: list[str], exhaustive: bool,
                 seed: int = 0, samples: int = 2000) -> ValidationReport:
    first: Violation | None = None
    normalized = monotone = submodular = True

    def record(v: Violation) -> None:
        nonlocal first
        if first is None:
            first = v

    empty = oracle.evaluate(())
    if abs(empty) > TOL:
        normalized = False
        record(Violation("normalized", (), (), abs(empty)))

    if exhaustive:
        mono_cases = ((a, u) for a in _subsets(ids) for u in ids if u not in a)
        sub_cases = ((a, u1, u2) for a in _subsets(ids)
                     for u1, u2 in combinations([i for i in ids if i not in a], 2))
    else:
        rng = random.Random(seed)

        def _mono_sample():
            for _ in range(samples):
                u = rng.choice(ids)
                a = frozenset(i for i in ids if i != u and rng.random() < 0.5)
                yield a, u

        def _sub_sample():
            for _ in range(samples):
                u1, u2 = rng.sample(ids, 2)
                a = frozenset(i for i in ids if i not in (u1, u2) and rng.random() < 0.5)
                yield a, min(u1, u2), max(u1, u2)

        mono_cases = _mono_sample()
        sub_cases = _sub_sample()

    for a, u in mono_cases:
        slack = oracle.evaluate(a) - oracle.evaluate(a | {u})
        if slack > TOL:
            monotone = False
            record(Violation("monotone", sorted_ids(a), (u,), slack))
            break

    # pairwise diminishing-returns condition on every set and item pair
    for a, u1, u2 in sub_cases:
        lhs = oracle.evaluate(a | {u1}) + oracle.evaluate(a | {u2})
        rhs = oracle.evaluate(a | {u1, u2}) + oracle.evaluate(a)
        if rhs - lhs > TOL:
            submodular = False
            record(Violation("submodular", sorted_ids(a), (u1, u2), rhs - lhs))
            break

    return ValidationReport(normalized, monotone, submodular, first,
                            "exhaustive" if exhaustive else "sampled")


def validate_oracle(instance: Instance, seed: int = 0) -> ValidationReport:
    """Check normalization, monotonicity, and submodularity.

    Exhaustive for n <= 12; larger instances are spot-checked with seeded
    random samples and the report's mode flags this.
    """
    ids = list(instance.ids)
    return _scan_oracle(instance.oracle, ids,
                        exhaustive=len(ids) <= MAX_VALIDATE_EXHAUSTIVE, seed=seed)


def normalize_instance(instance: Instance) -> Instance:
    """Drop items whose singleton value is zero; they never change the objective."""
    keep = [it for it in instance.items
            if not values_close(instance.oracle.evaluate({it.id}), 0.0)]
    if len(keep) == len(instance.items):
        return instance
    return Instance(tuple(keep), instance.oracle.restrict(it.id for it in keep))


def curvature(instance: Instance) -> float:
    """How far the objective is from modular: 0 is modular, 1 fully curved.

    Computed as one minus the smallest ratio between an item's marginal on
    the rest of the ground set and its singleton value.  The result is
    clamped to [0, 1] only to absorb float noise up to 1e-9; anything larger
    means the oracle is broken and raises.
    """
    if instance.n < 1:
        raise ValueError("curvature requires at least one item")
    ids = instance.ids
    full = instance.value(ids)
    worst = math.inf
    for j in ids:
        singleton = instance.value({j})
        if singleton <= TOL:
            raise ValueError(
                f"curvature requires strictly positive singletons; f({{{j}}}) = {singleton}")
        drop = full - instance.value(frozenset(ids) - {j})
        worst = min(worst, drop / singleton)
    c = 1.0 - worst
    if c < -TOL or c > 1.0 + TOL:
        raise OracleValidationError(
            f"curvature {c} outside [0, 1] beyond tolerance; oracle is not "
            "monotone submodular")
    # snap float noise to the boundaries so modular instances report 0 exactly
    if abs(c) <= TOL:
        return 0.0
    if abs(c - 1.0) <= TOL:
        return 1.0
    return min(1.0, max(0.0, c))


# ---------------------------------------------------------------------------
# instance files (JSON)

def instance_to_dict(instance: Instance) -> dict:
    return {
        "items": [{"id": it.id, "size": it.size} for it in
                  sorted(instance.items, key=lambda it: it.id)],
        "objective": instance.oracle.to_dict(),
    }


def instance_from_dict(data: Mapping) -> Instance:
    try:
        raw_items = data["items"]
        objective = data["objective"]
        kind = objective["kind"]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed instance data: missing {exc}") from exc
    items = []
    for entry in raw_items:
        size = entry.get("size")
        if isinstance(size, bool) or not isinstance(size, int):
            raise ConfigurationError(
                f"item {entry.get('id')!r}: size must be a positive integer")
        items.append(Item(str(entry["id"]), size))
    try:
        if kind == "modular":
            oracle: ValueOracle = ModularOracle(objective["weights"])
        elif kind == "coverage":
            oracle = CoverageOracle(objective["elements"], objective["covers"])
        elif kind == "concave_modular":
            oracle = ConcaveModularOracle(objective["weights"], objective["exponent"])
        elif kind == "table":
            oracle = TableOracle(objective["values"])
        else:
            raise ConfigurationError(f"unknown objective kind {kind!r}")
    except KeyError as exc:
        raise ConfigurationError(f"objective missing field {exc}") from exc
    return Instance(tuple(items), oracle)


def save_instance(instance: Instance, path, header: Mapping | None = None) -> None:
    data = instance_to_dict(instance)
    if header:
        data = {"generator": dict(header), **data}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"invalid instance file {path}: {exc}") from exc
    return instance_from_dict(data)


def instance_digest(instance: Instance) -> str:
    """Short stable fingerprint of the instance contents."""
    blob = json.dumps(instance_to_dict(instance), sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
