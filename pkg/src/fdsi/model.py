"""Core data model: instances, allocations, impact structure, validation.

All quantities are integers; comparisons that would naively need division
(weighted envy, rational awareness thresholds) are done by cross
multiplication elsewhere, so no floating point appears anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Malformed instance, allocation, or operation input."""


class GoodsOnlyError(ValidationError):
    """A goods-only operation was given an instance with negative valuations."""


class IncompleteAllocationError(ValidationError):
    """An operation that needs a complete allocation got a partial one."""


class BudgetExceededError(RuntimeError):
    """A configured resource budget ran out before an answer was reached.

    Distinct from a negative answer: when this is raised, nothing has been
    decided.
    """


@dataclass(frozen=True)
class Instance:
    """Agents, items, and the two integer matrices that drive everything.

    ``valuations[i][g]`` is agent i's value for item g.  Negative entries are
    storable (so chore data can be represented) but every checker and
    allocator except raw bundle arithmetic rejects them with
    :class:`GoodsOnlyError`.  ``impacts[i][g]`` is the non-negative
    contribution agent i generates for the group when holding g.  ``weights``
    are positive entitlements used by the weighted notions, and ``aware``
    marks which agents apply the social-awareness override.

    Instances are immutable values; every operation on them is a pure
    function, so they are safe to share across threads.
    """

    agents: tuple[str, ...]
    items: tuple[str, ...]
    valuations: tuple[tuple[int, ...], ...]
    impacts: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    aware: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(
            self, "valuations", tuple(tuple(row) for row in self.valuations)
        )
        object.__setattr__(
            self, "impacts", tuple(tuple(row) for row in self.impacts)
        )
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "aware", tuple(bool(a) for a in self.aware))

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.items)


def make_instance(
    valuations: Sequence[Sequence[int]],
    impacts: Sequence[Sequence[int]],
    *,
    weights: Sequence[int] | None = None,
    aware: Sequence[bool] | None = None,
    agents: Sequence[str] | None = None,
    items: Sequence[str] | None = None,
) -> Instance:
    """Build a validated :class:`Instance`, filling in default names/weights.

    Raises :class:`ValidationError` listing every violated invariant.
    """
    n = len(valuations)
    m = len(valuations[0]) if n else 0
    if agents is None:
        agents = tuple(f"a{i + 1}" for i in range(n))
    if items is None:
        items = tuple(f"g{j + 1}" for j in range(m))
    if weights is None:
        weights = (1,) * n
    if aware is None:
        aware = (True,) * n
    inst = Instance(
        agents=tuple(agents),
        items=tuple(items),
        valuations=valuations,
        impacts=impacts,
        weights=weights,
        aware=aware,
    )
    errors = validate(inst)
    if errors:
        raise ValidationError("; ".join(errors))
    return inst


def validate(inst: Instance) -> list[str]:
    """Check every instance invariant; return the list of violations (empty if ok)."""
    errors: list[str] = []
    n, m = inst.n, inst.m
    if n < 1:
        errors.append("instance needs at least one agent")
    if len(set(inst.agents)) != n:
        errors.append("duplicate agent ids")
    if len(set(inst.items)) != m:
        errors.append("duplicate item ids")
    for name, matrix in (("valuations", inst.valuations), ("impacts", inst.impacts)):
        if len(matrix) != n:
            errors.append(f"{name} has {len(matrix)} rows, expected {n}")
            continue
        for i, row in enumerate(matrix):
            if len(row) != m:
                errors.append(f"{name} row {i} has {len(row)} entries, expected {m}")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    errors.append(f"{name} row {i} contains a non-integer entry")
                    break
    for i, row in enumerate(inst.impacts):
        if len(row) == m and any(x < 0 for x in row):
            errors.append(f"impacts row {i} has a negative entry")
    if len(inst.weights) != n:
        errors.append(f"weights has {len(inst.weights)} entries, expected {n}")
    elif any(not isinstance(w, int) or isinstance(w, bool) or w < 1 for w in inst.weights):
        errors.append("weights must be integers >= 1")
    if len(inst.aware) != n:
        errors.append(f"aware has {len(inst.aware)} entries, expected {n}")
    return errors


def is_goods(inst: Instance) -> bool:
    """True iff every valuation entry is non-negative."""
    return all(x >= 0 for row in inst.valuations for x in row)


def require_goods(inst: Instance) -> None:
    if not is_goods(inst):
        raise GoodsOnlyError(
            "instance has negative valuations; this operation is defined for goods only"
        )


@dataclass(frozen=True)
class Allocation:
    """One bundle of item indices per agent; bundles are pairwise disjoint.

    The allocation is *complete* when the bundles cover every item.  Partial
    allocations are first-class (the allocators grow them item by item).
    """

    bundles: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))

    @classmethod
    def empty(cls, n: int) -> "Allocation":
        return cls(bundles=tuple(frozenset() for _ in range(n)))

    @classmethod
    def from_assignment(cls, n: int, owners: Sequence[int]) -> "Allocation":
        """Build from an item -> agent map (owners[g] is the agent index)."""
        sets: list[set[int]] = [set() for _ in range(n)]
        for g, i in enumerate(owners):
            sets[i].add(g)
        return cls(bundles=tuple(frozenset(s) for s in sets))

    def owners(self, m: int) -> list[int | None]:
        """Inverse view: item index -> agent index (None when unallocated)."""
        out: list[int | None] = [None] * m
        for i, bundle in enumerate(self.bundles):
            for g in bundle:
                out[g] = i
        return out

    def give(self, i: int, g: int) -> "Allocation":
        """Return a copy with item g added to agent i's bundle."""
        new = list(self.bundles)
        new[i] = new[i] | {g}
        return Allocation(bundles=tuple(new))


def validate_allocation(inst: Instance, alloc: Allocation) -> list[str]:
    """Check bundle shape, item validity, and disjointness; return violations."""
    errors: list[str] = []
    if len(alloc.bundles) != inst.n:
        errors.append(
            f"allocation has {len(alloc.bundles)} bundles, expected {inst.n}"
        )
        return errors
    seen: dict[int, int] = {}
    for i, bundle in enumerate(alloc.bundles):
        for g in bundle:
            if not (0 <= g < inst.m):
                errors.append(f"bundle of agent {i} references unknown item {g}")
            elif g in seen:
                errors.append(
                    f"item {g} appears in bundles of agents {seen[g]} and {i}"
                )
            else:
                seen[g] = i
    return errors


def is_complete(inst: Instance, alloc: Allocation) -> bool:
    allocated: set[int] = set()
    for bundle in alloc.bundles:
        allocated |= bundle
    return allocated == set(range(inst.m))


def require_complete(inst: Instance, alloc: Allocation) -> None:
    errors = validate_allocation(inst, alloc)
    if errors:
        raise ValidationError("; ".join(errors))
    if not is_complete(inst, alloc):
        raise IncompleteAllocationError("allocation does not cover every item")


def _check_bundle(inst: Instance, i: int, item_set: Iterable[int]) -> list[int]:
    if not (0 <= i < inst.n):
        raise ValidationError(f"unknown agent index {i}")
    members = list(item_set)
    for g in members:
        if not (0 <= g < inst.m):
            raise ValidationError(f"unknown item index {g}")
    return members

def bundle_value(inst: Instance, i: int, item_set: Iterable[int]) -> int:
    """Additive value of a bundle for agent i; the empty bundle is worth 0."""
    row = inst.valuations[i] if 0 <= i < inst.n else ()
    return sum(row[g] for g in _check_bundle(inst, i, item_set))


def bundle_impact(inst: Instance, i: int, item_set: Iterable[int]) -> int:
    """Additive social impact agent i generates with a bundle; empty bundle gives 0."""
    row = inst.impacts[i] if 0 <= i < inst.n else ()
    return sum(row[g] for g in _check_bundle(inst, i, item_set))


def total_social_impact(inst: Instance, alloc: Allocation) -> int:
    """Sum over agents of the impact they generate with their own bundle.

    Requires a complete allocation.
    """
    require_complete(inst, alloc)
    return sum(bundle_impact(inst, i, alloc.bundles[i]) for i in range(inst.n))


def impact_maximizers(inst: Instance, g: int) -> frozenset[int]:
    """All agents attaining the maximum impact for item g (never empty)."""
    if not (0 <= g < inst.m):
        raise ValidationError(f"unknown item index {g}")
    column = [inst.impacts[i][g] for i in range(inst.n)]
    top = max(column)
    return frozenset(i for i, s in enumerate(column) if s == top)


def all_maximizers(inst: Instance) -> tuple[frozenset[int], ...]:
    """Per-item maximizer sets, in item order."""
    return tuple(impact_maximizers(inst, g) for g in range(inst.m))


def normalize_impacts(inst: Instance) -> Instance:
    """Replace every impact entry by the 0/1 indicator of maximizer membership.

    Existence of an impact-maximizing and fair allocation is unchanged by this
    rewrite (same maximizer sets, untouched valuations), and the operation is
    idempotent.
    """
    maxsets = all_maximizers(inst)
    new_impacts = tuple(
        tuple(1 if i in maxsets[g] else 0 for g in range(inst.m))
        for i in range(inst.n)
    )
    return Instance(
        agents=inst.agents,
        items=inst.items,
        valuations=inst.valuations,
        impacts=new_impacts,
        weights=inst.weights,
        aware=inst.aware,
    )


@dataclass(frozen=True)
class TypePartition:
    """Items grouped by identical maximizer sets, agents by identical maximized item sets.

    ``maximizer_sets[t]`` is the agent set shared by every item in
    ``item_types[t]``.
    """

    item_types: tuple[tuple[int, ...], ...]
    agent_types: tuple[tuple[int, ...], ...]
    maximizer_sets: tuple[frozenset[int], ...]


def compute_types(inst: Instance) -> TypePartition:
    """Partition items and agents into types (first-occurrence order).

    Two items share a type iff their impact-maximizer sets are equal; two
    agents share a type iff they maximize impact for exactly the same items.
    Depends only on maximizer sets, so raw and normalized impacts give the
    same partition.
    """
    maxsets = all_maximizers(inst)
    item_groups: dict[frozenset[int], list[int]] = {}
    for g in range(inst.m):
        item_groups.setdefault(maxsets[g], []).append(g)
    agent_groups: dict[frozenset[int], list[int]] = {}
    for i in range(inst.n):
        maximized = frozenset(g for g in range(inst.m) if i in maxsets[g])
        agent_groups.setdefault(maximized, []).append(i)
    return TypePartition(
        item_types=tuple(tuple(v) for v in item_groups.values()),
        agent_types=tuple(tuple(v) for v in agent_groups.values()),
        maximizer_sets=tuple(item_groups.keys()),
    )
