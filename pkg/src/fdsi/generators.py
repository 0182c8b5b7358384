"""Instance builders: reduction gadgets, canned examples, random instances.

Each ``gen_*`` constructor embeds a small source problem into a fair-division
instance so that the source is solvable exactly when the generated instance
admits an impact-maximizing allocation satisfying the target notion.  The
source-problem brute-force oracles live here too, so the embeddings can be
verified end to end at desk scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .model import Allocation, Instance, ValidationError, make_instance

ORACLE_WEIGHT_CAP = 10  # source-problem oracles stay exhaustive below this size


def _check_weights(weights: tuple[int, ...], *, even_sum: bool = True) -> int:
    if not weights:
        raise ValidationError("weight multiset must be non-empty")
    if any(not isinstance(w, int) or isinstance(w, bool) or w < 1 for w in weights):
        raise ValidationError("weights must be integers >= 1")
    total = sum(weights)
    if even_sum and total % 2:
        raise ValidationError("weight multiset must have an even sum")
    return total // 2


def gen_partition_ef1(weights) -> Instance:
    """Two agents, two big items, one small item per weight.

    Impact maximization pins big item 1 on agent 1 and big item 2 on agent 2;
    each agent values the other's big item at half the weight total, so the
    envy-up-to-one-item condition forces the small items to split into two
    equal-sum halves.  The instance therefore admits an impact-maximizing
    fair allocation exactly when the weights admit an equal partition.
    """
    weights = tuple(weights)
    t = _check_weights(weights)
    items = ("G1", "G2") + tuple(f"g{j + 1}" for j in range(len(weights)))
    valuations = (
        (0, t) + weights,
        (t, 0) + weights,
    )
    impacts = (
        (1, 0) + (1,) * len(weights),
        (0, 1) + (1,) * len(weights),
    )
    return make_instance(valuations, impacts, items=items)


def gen_mixed_awareness(weights) -> Instance:
    """Two agents, the first unaware, embedding an equal-partition question.

    Three big items: the first two are pinned on the aware agent 2, the third
    is co-maximized.  A maximizing allocation that is fair-for-agent-1 and
    override-fair for agent 2 exists exactly when the weights split evenly.
    Every weight must stay below half the total (otherwise handing the
    co-maximized big item to agent 2 and all small items to agent 1 becomes
    fair regardless of the split, because removing the heavy small item
    already kills agent 2's envy).
    """
    weights = tuple(weights)
    t = _check_weights(weights)
    if any(w >= t for w in weights):
        raise ValidationError(
            "every weight must be smaller than half the weight total"
        )
    items = ("G1", "G2", "G3") + tuple(f"g{j + 1}" for j in range(len(weights)))
    valuations = (
        (t, t, t) + weights,
        (0, 0, t) + weights,
    )
    impacts = (
        (0, 0, 1) + (1,) * len(weights),
        (1, 1, 1) + (1,) * len(weights),
    )
    return make_instance(valuations, impacts, aware=(False, True), items=items)


def gen_alpha_sa(weights, alpha: Fraction) -> Instance:
    """Partition embedding that survives the alpha-scaled awareness override.

    The override excuses observer i toward bundle A_j when
    s_i(A_j) < alpha * s_j(A_j), so the gadget must keep that ratio at or
    above alpha whenever the envied bundle contains any small item.  With
    alpha = p/q the small items carry impact 2p for both agents while the
    pinned big items carry only q-p (side of agent 1, two items) and 2(q-p)
    (side of agent 2, one item); then a single small item already pushes the
    rival's share to the threshold and the override fails exactly when it
    must.  Valuations mirror the plain partition gadget, so fairness again
    forces an equal split.  Requires 0 < alpha < 1.
    """
    weights = tuple(weights)
    t = _check_weights(weights)
    alpha = Fraction(alpha)
    if not (0 < alpha < 1):
        raise ValidationError("alpha gadget needs 0 < alpha < 1")
    p, q = alpha.numerator, alpha.denominator
    small_impact = 2 * p
    big_one = q - p  # each of agent 1's two pinned items
    big_two = 2 * (q - p)  # agent 2's single pinned item
    ell = len(weights)
    items = ("G1", "G2", "G3") + tuple(f"g{j + 1}" for j in range(ell))
    valuations = (
        (0, 0, t) + weights,
        (t, t, t) + weights,
    )
    impacts = (
        (big_one, big_one, 0) + (small_impact,) * ell,
        (0, 0, big_two) + (small_impact,) * ell,
    )
    return make_instance(valuations, impacts, items=items)


def gen_wsa(weights) -> Instance:
    """Equitable-partition embedding for the proportional-gain override.

    Needs 2L weights with L > 4 such that every (L-1)-subset sums below half
    the total (checked); under that promise any unbalanced maximizing
    allocation leaves one agent with envy the override cannot excuse, so
    fairness forces an equal-size equal-sum split.
    """
    weights = tuple(weights)
    t = _check_weights(weights)
    if len(weights) % 2:
        raise ValidationError("equitable gadget needs an even number of weights")
    ell = len(weights) // 2
    if ell <= 4:
        raise ValidationError("equitable gadget needs more than 4 weights per side")
    if sum(sorted(weights)[-(ell - 1):]) >= t:
        raise ValidationError(
            "every (L-1)-subset must sum below half the weight total"
        )
    items = ("G1", "G2") + tuple(f"g{j + 1}" for j in range(len(weights)))
    valuations = (
        (0, t) + weights,
        (t, 0) + weights,
    )
    impacts = (
        (1, 0) + (1,) * len(weights),
        (0, 1) + (1,) * len(weights),
    )
    return make_instance(valuations, impacts, items=items)


@dataclass(frozen=True)
class RX3CInput:
    """A cover-by-3-sets source: universe 0..3L-1 and a family of triples.

    The regular form additionally has exactly 3L triples, every element in
    exactly three of them, and pairwise intersections of at most one element
    (see :func:`validate_rx3c`); the embedding itself only needs distinct
    triples over a universe of size 3L.
    """

    universe_size: int
    triples: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "triples", tuple(frozenset(tr) for tr in self.triples)
        )


def validate_rx3c(src: RX3CInput, *, strict: bool = True) -> list[str]:
    """Structural checks; with ``strict`` also the regularity conditions."""
    errors: list[str] = []
    if src.universe_size < 3 or src.universe_size % 3:
        errors.append("universe size must be a positive multiple of 3")
    for tr in src.triples:
        if len(tr) != 3 or any(not (0 <= u < src.universe_size) for u in tr):
            errors.append(f"triple {sorted(tr)} is not a 3-subset of the universe")
    if len(set(src.triples)) != len(src.triples):
        errors.append("triples must be distinct")
    if strict:
        if len(src.triples) != src.universe_size:
            errors.append("regular form needs exactly as many triples as elements")
        occurrences = [0] * src.universe_size
        for tr in src.triples:
            for u in tr:
                if 0 <= u < src.universe_size:
                    occurrences[u] += 1
        if any(c != 3 for c in occurrences):
            errors.append("regular form needs every element in exactly 3 triples")
        for a, b in combinations(src.triples, 2):
            if len(a & b) > 1:
                errors.append("regular form allows pairwise intersections of at most 1")
                break
    return errors


def gen_x3c_sa_empty(src: RX3CInput, *, strict: bool = False) -> Instance:
    """Cover embedding for the strict-domination notion.

    One set agent per triple plus two identical guard agents; one element
    item per universe element plus one dummy item per three elements.  All
    valuations are 1.  Set agents maximize their triple's elements and every
    dummy; guards maximize every element and no dummy.  The guards being
    twins forces them empty, non-empty set agents need a dummy to dominate
    the guards, and counting then forces the chosen set agents to be an exact
    cover, so a maximizing strictly-dominating allocation exists exactly when
    the triples contain an exact cover.
    """
    errors = validate_rx3c(src, strict=strict)
    if errors:
        raise ValidationError("; ".join(errors))
    ell = src.universe_size // 3
    n_sets = len(src.triples)
    n = n_sets + 2
    m = src.universe_size + ell
    agents = tuple(f"s{j + 1}" for j in range(n_sets)) + ("guard1", "guard2")
    items = tuple(f"g{u + 1}" for u in range(src.universe_size)) + tuple(
        f"d{d + 1}" for d in range(ell)
    )
    valuations = tuple((1,) * m for _ in range(n))
    impacts = []
    for j in range(n_sets):
        row = [1 if u in src.triples[j] else 0 for u in range(src.universe_size)]
        row += [1] * ell
        impacts.append(tuple(row))
    guard_row = (1,) * src.universe_size + (0,) * ell
    impacts.append(guard_row)
    impacts.append(guard_row)
    return make_instance(valuations, tuple(impacts), agents=agents, items=items)


def gen_ef_embedding(valuations, *, tef1: bool = False) -> Instance:
    """Embed a binary envy-free allocation question.

    Standard items keep their valuations and are co-maximized by everyone;
    one special item per agent (two copies in transfer mode) is pinned on its
    agent, worthless to it, and worth 1 to everyone else.  The initial envy
    from the pinned items forces the standard items to be split envy-freely,
    so the target notion is satisfiable exactly when the source admits an
    envy-free allocation.
    """
    vals = tuple(tuple(row) for row in valuations)
    n = len(vals)
    if n < 1:
        raise ValidationError("need at least one agent")
    m = len(vals[0]) if vals else 0
    if any(len(row) != m for row in vals):
        raise ValidationError("valuation rows must have equal length")
    if any(v not in (0, 1) for row in vals for v in row):
        raise ValidationError("source valuations must be binary")
    copies = 2 if tef1 else 1
    items = tuple(f"g{j + 1}" for j in range(m)) + tuple(
        f"e{i + 1}" + ("ab"[c] if tef1 else "")
        for i in range(n)
        for c in range(copies)
    )
    out_vals = []
    out_imps = []
    for i in range(n):
        vrow = list(vals[i])
        srow = [1] * m
        for owner in range(n):
            for _ in range(copies):
                vrow.append(0 if owner == i else 1)
                srow.append(1 if owner == i else 0)
        out_vals.append(tuple(vrow))
        out_imps.append(tuple(srow))
    return make_instance(tuple(out_vals), tuple(out_imps), items=items)


@dataclass(frozen=True)
class CannedExample:
    name: str
    instance: Instance
    allocation: Allocation | None


def canned(name: str, *, alpha: Fraction = Fraction(1, 2)) -> CannedExample:
    """Bit-exact fixture instances, with a reference allocation when one is
    pinned down by the construction."""
    if name == "bill-joe":
        inst = make_instance(
            valuations=((1, 1), (1, 1)),
            impacts=((10, 10), (1, 1)),
            agents=("bill", "joe"),
        )
        return CannedExample(name, inst, Allocation((frozenset({0, 1}), frozenset())))
    if name == "unaware-nonexistence":
        inst = make_instance(
            valuations=((10, 10), (10, 10)),
            impacts=((0, 0), (1, 1)),
            aware=(False, True),
        )
        return CannedExample(name, inst, Allocation((frozenset(), frozenset({0, 1}))))
    if name == "alpha-nonexistence":
        alpha = Fraction(alpha)
        if not (0 <= alpha < 1):
            raise ValidationError("alpha must lie in [0, 1)")
        p, q = alpha.numerator, alpha.denominator
        inst = make_instance(
            valuations=((1, 1), (1, 1)),
            impacts=((q, q), (p, p)),
        )
        return CannedExample(name, inst, Allocation((frozenset({0, 1}), frozenset())))
    if name == "wsa-nonexistence":
        inst = make_instance(
            valuations=((1, 5, 5), (5, 5, 1)),
            impacts=((1, 1, 0), (0, 1, 1)),
        )
        return CannedExample(name, inst, Allocation((frozenset({0}), frozenset({1, 2}))))
    if name == "tef1-vs-ef1":
        inst = make_instance(
            valuations=((1, 1), (1, 1)),
            impacts=((0, 0), (1, 1)),
        )
        return CannedExample(name, inst, Allocation((frozenset(), frozenset({0, 1}))))
    if name == "sim-unfair":
        inst = make_instance(
            valuations=((1, 1), (1, 1)),
            impacts=((1, 1), (1, 1)),
        )
        return CannedExample(name, inst, Allocation((frozenset({0, 1}), frozenset())))
    if name == "chores-roundrobin":
        # data-only: chores are storable but every checker/allocator rejects them
        inst = make_instance(
            valuations=((-100, -100, -1, -1, -1), (-100, -100, -1, -1, -1)),
            impacts=((1, 1, 0, 0, 0), (1, 1, 1, 1, 1)),
        )
        return CannedExample(
            name, inst, Allocation((frozenset({0, 1}), frozenset({2, 3, 4})))
        )
    raise ValidationError(f"unknown canned instance {name!r}")


CANNED_NAMES = (
    "bill-joe",
    "unaware-nonexistence",
    "alpha-nonexistence",
    "wsa-nonexistence",
    "tef1-vs-ef1",
    "sim-unfair",
    "chores-roundrobin",
)


def gen_random(
    n: int, m: int, v_max: int, s_max: int, w_max: int, seed: int
) -> Instance:
    """Uniform independent integer entries, deterministic per seed; goods mode."""
    if n < 1 or m < 0 or v_max < 0 or s_max < 0 or w_max < 1:
        raise ValidationError("bad random-instance parameters")
    rng = random.Random(seed)
    valuations = tuple(
        tuple(rng.randint(0, v_max) for _ in range(m)) for _ in range(n)
    )
    impacts = tuple(
        tuple(rng.randint(0, s_max) for _ in range(m)) for _ in range(n)
    )
    weights = tuple(rng.randint(1, w_max) for _ in range(n))
    return make_instance(valuations, impacts, weights=weights)


# ---------------------------------------------------------------------------
# source-problem oracles (independent of the gadgets they verify)

def partition_solvable(weights) -> bool:
    """Can the multiset split into two equal-sum halves?  Subset-sum bitset."""
    weights = tuple(weights)
    if len(weights) > ORACLE_WEIGHT_CAP:
        raise ValidationError(f"oracle capped at {ORACLE_WEIGHT_CAP} weights")
    total = sum(weights)
    if total % 2:
        return False
    reachable = 1
    for w in weights:
        reachable |= reachable << w
    return bool((reachable >> (total // 2)) & 1)


def equitable_partition_solvable(weights) -> bool:
    """Is there a half-size subset with half the total sum?  Exhaustive."""
    weights = tuple(weights)
    if len(weights) > ORACLE_WEIGHT_CAP:
        raise ValidationError(f"oracle capped at {ORACLE_WEIGHT_CAP} weights")
    if len(weights) % 2:
        return False
    total = sum(weights)
    if total % 2:
        return False
    half = len(weights) // 2
    return any(
        sum(combo) == total // 2 for combo in combinations(weights, half)
    )


def exact_cover_solvable(universe_size: int, triples) -> bool:
    """Do some pairwise disjoint triples cover the universe exactly?  DFS."""
    triples = tuple(frozenset(tr) for tr in triples)
    if universe_size > 3 * ORACLE_WEIGHT_CAP:
        raise ValidationError(f"oracle capped at universe size {3 * ORACLE_WEIGHT_CAP}")

    def cover(uncovered: frozenset[int]) -> bool:
        if not uncovered:
            return True
        pivot = min(uncovered)
        for tr in triples:
            if pivot in tr and tr <= uncovered:
                if cover(uncovered - tr):
                    return True
        return False

    return cover(frozenset(range(universe_size)))


def ef_allocation_exists(valuations) -> bool:
    """Does a complete envy-free allocation of the items exist?  Exhaustive."""
    vals = tuple(tuple(row) for row in valuations)
    n = len(vals)
    m = len(vals[0]) if n else 0
    if n**m > 10**6:
        raise ValidationError("envy-free oracle capped at a million allocations")
    for owners in product(range(n), repeat=m):
        totals = [[0] * n for _ in range(n)]  # totals[i][j] = v_i of j's bundle
        for g, owner in enumerate(owners):
            for i in range(n):
                totals[i][owner] += vals[i][g]
        if all(
            totals[i][i] >= totals[i][j] for i in range(n) for j in range(n)
        ):
            return True
    return False
