"""Independent reference implementations used as oracles by the tests.

Everything here is a deliberate, slow transliteration of the definitions
(explicit loops, fresh sums, Fraction arithmetic) so that agreement with the
library is meaningful.  Nothing imports the library's decision logic except
the shared data types.
"""

from __future__ import annotations

import random
from fractions import Fraction

from fdsi.model import Allocation, Instance, all_maximizers, make_instance


def value_of(inst: Instance, i: int, items_) -> int:
    total = 0
    for g in items_:
        total += inst.valuations[i][g]
    return total


def impact_of(inst: Instance, i: int, items_) -> int:
    total = 0
    for g in items_:
        total += inst.impacts[i][g]
    return total


def naive_base(inst: Instance, alloc: Allocation, i: int, j: int, base: str) -> bool:
    """Literal definition of one base condition for the ordered pair (i, j).

    The one-removal existentials range over the whole item set as written;
    with no items at all they are read as vacuously true (the same convention
    the library documents).
    """
    if i == j:
        return True
    a_i, a_j = alloc.bundles[i], alloc.bundles[j]
    own = value_of(inst, i, a_i)
    other = value_of(inst, i, a_j)
    items_ = range(inst.m)
    if base == "ef":
        return own >= other
    if base == "ef1":
        if inst.m == 0:
            return True
        return any(own >= value_of(inst, i, a_j - {g}) for g in items_)
    if base == "wef1":
        if inst.m == 0:
            return True
        wi, wj = inst.weights[i], inst.weights[j]
        return any(
            Fraction(own, wi) >= Fraction(value_of(inst, i, a_j - {g}), wj)
            for g in items_
        )
    if base == "efl":
        positives = [g for g in a_j if inst.valuations[i][g] > 0]
        if len(positives) <= 1:
            return True
        return any(
            own >= value_of(inst, i, a_j - {g})
            and own >= inst.valuations[i][g]
            for g in a_j
        )
    if base == "tef1":
        if own >= other:
            return True
        return any(
            value_of(inst, i, a_i | {g}) >= value_of(inst, i, a_j - {g})
            for g in a_j
        )
    raise AssertionError(base)


def naive_override(
    inst: Instance, alloc: Allocation, i: int, j: int, awareness, alpha=None
) -> bool:
    if awareness is None or not inst.aware[i]:
        return False
    s_i = impact_of(inst, i, alloc.bundles[j])
    s_j = impact_of(inst, j, alloc.bundles[j])
    if awareness == "sa":
        return s_i < s_j
    if awareness == "alpha":
        return Fraction(s_i) < Fraction(alpha) * s_j
    if awareness == "wsa":
        v_other = value_of(inst, i, alloc.bundles[j])
        v_own = value_of(inst, i, alloc.bundles[i])
        return v_other * s_i <= v_own * s_j
    raise AssertionError(awareness)


def naive_target(
    inst: Instance, alloc: Allocation, j: int, base: str, exempt
) -> bool:
    observers = [i for i in range(inst.n) if i != j and i not in exempt]
    if not observers:
        return True
    if inst.m == 0:
        return True
    a_j = alloc.bundles[j]
    weighted = base == "swef1"
    for g in range(inst.m):
        ok = True
        for i in observers:
            own = value_of(inst, i, alloc.bundles[i])
            reduced = value_of(inst, i, a_j - {g})
            if weighted:
                if Fraction(own, inst.weights[i]) < Fraction(reduced, inst.weights[j]):
                    ok = False
                    break
            elif own < reduced:
                ok = False
                break
        if ok:
            return True
    return False


def naive_check(inst: Instance, alloc: Allocation, notion) -> bool:
    """Full transliteration of the composed fairness decision."""
    if notion.base == "sa-empty":
        for i in range(inst.n):
            for j in range(inst.n):
                if i == j or not alloc.bundles[j]:
                    continue
                if impact_of(inst, i, alloc.bundles[j]) >= impact_of(
                    inst, j, alloc.bundles[j]
                ):
                    return False
        return True
    if notion.base in ("sef1", "swef1"):
        for j in range(inst.n):
            exempt = {
                i
                for i in range(inst.n)
                if i != j
                and naive_override(inst, alloc, i, j, notion.awareness, notion.alpha)
            }
            if not naive_target(inst, alloc, j, notion.base, exempt):
                return False
        return True
    for i in range(inst.n):
        for j in range(inst.n):
            if i == j:
                continue
            if naive_base(inst, alloc, i, j, notion.base):
                continue
            if naive_override(inst, alloc, i, j, notion.awareness, notion.alpha):
                continue
            return False
    return True


def literal_picking(inst: Instance, weights=None) -> Allocation:
    """The skip-and-increment form of the weighted picking sequence.

    Every round THE pick-count/weight minimizer (ties by index) is selected
    and its counter incremented even when it has nothing to pick.  Used to
    confirm the library's deactivation variant is behavior-identical.
    """
    w = tuple(weights) if weights is not None else inst.weights
    maxsets = all_maximizers(inst)
    counts = [0] * inst.n
    remaining = set(range(inst.m))
    bundles = [set() for _ in range(inst.n)]
    while remaining:
        picker = 0
        for i in range(1, inst.n):
            if counts[i] * w[picker] < counts[picker] * w[i]:
                picker = i
        candidates = sorted(g for g in remaining if picker in maxsets[g])
        if candidates:
            best = candidates[0]
            for g in candidates[1:]:
                if inst.valuations[picker][g] > inst.valuations[picker][best]:
                    best = g
            bundles[picker].add(best)
            remaining.discard(best)
        counts[picker] += 1
    return Allocation(bundles=tuple(frozenset(b) for b in bundles))


def random_instances(count, seed, n_lo, n_hi, m_lo, m_hi, v_max, s_max, w_max=1):
    """Deterministic stream of random goods instances."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(n_lo, n_hi)
        m = rng.randint(m_lo, m_hi)
        vals = [[rng.randint(0, v_max) for _ in range(m)] for _ in range(n)]
        imps = [[rng.randint(0, s_max) for _ in range(m)] for _ in range(n)]
        w = [rng.randint(1, w_max) for _ in range(n)]
        yield make_instance(vals, imps, weights=w)


def random_allocation(inst: Instance, rng: random.Random) -> Allocation:
    owners = [rng.randrange(inst.n) for _ in range(inst.m)]
    return Allocation.from_assignment(inst.n, owners)


def random_sim_allocation(inst: Instance, rng: random.Random) -> Allocation:
    maxsets = all_maximizers(inst)
    owners = [rng.choice(sorted(maxsets[g])) for g in range(inst.m)]
    return Allocation.from_assignment(inst.n, owners)
