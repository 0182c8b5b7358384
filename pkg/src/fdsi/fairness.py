"""Decision procedures for every fairness notion and awareness mode.

Seven base notions are supported.  For an ordered pair of agents (i, j),
with ``A_i`` and ``A_j`` their bundles and values seen through i's eyes:

* ``ef``     i does not envy j at all: v_i(A_i) >= v_i(A_j).
* ``ef1``    some single item removed from A_j kills the envy.
* ``sef1``   one *universal* removed item works for every observer of j.
* ``wef1``   like ef1 but values are scaled by entitlement weights.
* ``swef1``  the universal-item variant of wef1.
* ``efl``    A_j holds at most one item i values positively, or some removal
             works and that removed item alone is not worth more than A_i.
* ``tef1``   transferring one item from A_j to A_i kills the envy.

An awareness mode can excuse an envious observer: under ``sa`` agent i
tolerates envy toward A_j whenever the bundle would generate strictly less
impact in i's hands (s_i(A_j) < s_j(A_j)); ``alpha`` tightens that to
s_i(A_j) < alpha * s_j(A_j) for a rational alpha in [0, 1]; ``wsa`` instead
bounds proportional value gain by proportional impact gain,
v_i(A_j) * s_i(A_j) <= v_i(A_i) * s_j(A_j).  Agents whose ``aware`` flag is
off never get an override.  The standalone notion ``sa-empty`` demands that
every non-empty bundle strictly impact-dominates all other agents.

All comparisons are exact integer arithmetic (rational thresholds are
applied by cross multiplication).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    Allocation,
    Instance,
    ValidationError,
    bundle_impact,
    bundle_value,
    all_maximizers,
    require_complete,
    require_goods,
)

BASES = ("ef", "ef1", "sef1", "wef1", "swef1", "efl", "tef1")
TARGET_BASES = ("sef1", "swef1")
PAIR_BASES = ("ef", "ef1", "wef1", "efl", "tef1")
SA_EMPTY = "sa-empty"
AWARENESS_MODES = (None, "sa", "alpha", "wsa")


@dataclass(frozen=True)
class Notion:
    """A base fairness notion plus an optional awareness mode.

    ``alpha`` must be given exactly when ``awareness == "alpha"`` and must lie
    in [0, 1].  The standalone notion ``sa-empty`` takes no awareness mode.
    """

    base: str
    awareness: str | None = None
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        if self.base not in BASES + (SA_EMPTY,):
            raise ValidationError(f"unknown notion base {self.base!r}")
        if self.awareness not in AWARENESS_MODES:
            raise ValidationError(f"unknown awareness mode {self.awareness!r}")
        if self.base == SA_EMPTY and self.awareness is not None:
            raise ValidationError("sa-empty takes no awareness modifier")
        if (self.alpha is not None) != (self.awareness == "alpha"):
            raise ValidationError("alpha must be given exactly for alpha awareness")
        if self.alpha is not None:
            alpha = Fraction(self.alpha)
            object.__setattr__(self, "alpha", alpha)
            if not (0 <= alpha <= 1):
                raise ValidationError("alpha must lie in [0, 1]")

    def label(self) -> str:
        if self.base == SA_EMPTY or self.awareness is None:
            return self.base
        if self.awareness == "alpha":
            a = self.alpha
            return f"{a.numerator}/{a.denominator}-sa-{self.base}"
        return f"{self.awareness}-{self.base}"


@dataclass(frozen=True)
class Witness:
    """Minimal evidence for an unfair verdict, re-checkable from the inputs.

    ``item`` is the strongest single-removal candidate examined (or the
    misplaced item for SIM violations)."""

    reason: str
    observer: int | None = None
    target: int | None = None
    item: int | None = None


@dataclass(frozen=True)
class Verdict:
    fair: bool
    witness: Witness | None = None


def is_sim(inst: Instance, alloc: Allocation) -> Verdict:
    """Does the complete allocation maximize total social impact?

    By additivity this holds exactly when every item sits with one of its
    impact maximizers.  The witness names the first misplaced item and an
    agent with strictly larger impact for it.
    """
    require_complete(inst, alloc)
    maxsets = all_maximizers(inst)
    owners = alloc.owners(inst.m)
    for g in range(inst.m):
        owner = owners[g]
        if owner not in maxsets[g]:
            return Verdict(
                fair=False,
                witness=Witness(
                    reason="sim", item=g, observer=min(maxsets[g]), target=owner
                ),
            )
    return Verdict(fair=True)


def _best_removal(inst: Instance, i: int, bundle: frozenset[int]) -> int | None:
    """Item of the bundle worth most to i (lowest index on ties), None if empty."""
    best: int | None = None
    best_v = None
    for g in sorted(bundle):
        v = inst.valuations[i][g]
        if best_v is None or v > best_v:
            best, best_v = g, v
    return best


def _pair_fair(inst: Instance, alloc: Allocation, i: int, j: int, base: str) -> bool:
    if i == j:
        return True
    a_j = alloc.bundles[j]
    own = bundle_value(inst, i, alloc.bundles[i])
    other = bundle_value(inst, i, a_j)
    vals = inst.valuations[i]
    if base == "ef":
        return own >= other
    if base == "ef1":
        return not a_j or own >= other - max(vals[g] for g in a_j)
    if base == "wef1":
        if not a_j:
            return True
        w_i, w_j = inst.weights[i], inst.weights[j]
        return own * w_j >= (other - max(vals[g] for g in a_j)) * w_i
    if base == "efl":
        if sum(1 for g in a_j if vals[g] > 0) <= 1:
            return True
        return any(own >= other - vals[g] and own >= vals[g] for g in a_j)
    if base == "tef1":
        if own >= other:
            return True
        return bool(a_j) and own + 2 * max(vals[g] for g in a_j) >= other
    raise ValidationError(f"{base!r} is not a pairwise base notion")


def pair_fair(inst: Instance, alloc: Allocation, i: int, j: int, base: str) -> bool:
    """Evaluate the base condition for ordered pair (i, j); goods only."""
    if base not in PAIR_BASES:
        raise ValidationError(f"{base!r} is not a pairwise base notion")
    require_goods(inst)
    return _pair_fair(inst, alloc, i, j, base)


def _target_fair(
    inst: Instance,
    alloc: Allocation,
    j: int,
    base: str,
    exempt: frozenset[int] = frozenset(),
) -> bool:
    a_j = alloc.bundles[j]
    if not a_j:
        return True
    observers = [i for i in range(inst.n) if i != j and i not in exempt]
    if not observers:
        return True
    weighted = base == "swef1"
    other = {i: bundle_value(inst, i, a_j) for i in observers}
    own = {i: bundle_value(inst, i, alloc.bundles[i]) for i in observers}
    for g in sorted(a_j):
        ok = True
        for i in observers:
            reduced = other[i] - inst.valuations[i][g]
            if weighted:
                if own[i] * inst.weights[j] < reduced * inst.weights[i]:
                    ok = False
                    break
            elif own[i] < reduced:
                ok = False
                break
        if ok:
            return True
    return False


def target_fair(inst: Instance, alloc: Allocation, j: int, base: str) -> bool:
    """Is there one universal removal item for target j that satisfies every observer?"""
    if base not in TARGET_BASES:
        raise ValidationError(f"{base!r} is not a target-based notion")
    require_goods(inst)
    return _target_fair(inst, alloc, j, base)


def sa_override(
    inst: Instance,
    alloc: Allocation,
    i: int,
    j: int,
    notion: Notion,
    *,
    strict: bool = True,
) -> bool:
    """Does awareness excuse observer i from the base condition toward j?

    Always false for agents whose ``aware`` flag is off and for notions
    without an awareness mode.  ``strict=False`` relaxes the strict impact
    comparison of the ``sa`` and ``alpha`` modes to non-strict (under which
    every impact-maximizing allocation passes trivially); ``wsa`` is
    non-strict by definition and is unaffected.
    """
    if notion.awareness is None or not inst.aware[i]:
        return False
    s_i = bundle_impact(inst, i, alloc.bundles[j])
    s_j = bundle_impact(inst, j, alloc.bundles[j])
    if notion.awareness == "sa":
        return s_i < s_j if strict else s_i <= s_j
    if notion.awareness == "alpha":
        p, q = notion.alpha.numerator, notion.alpha.denominator
        return s_i * q < p * s_j if strict else s_i * q <= p * s_j
    if notion.awareness == "wsa":
        v_other = bundle_value(inst, i, alloc.bundles[j])
        v_own = bundle_value(inst, i, alloc.bundles[i])
        return v_other * s_i <= v_own * s_j
    raise ValidationError(f"unknown awareness mode {notion.awareness!r}")


def check(inst: Instance, alloc: Allocation, notion: Notion) -> Verdict:
    """Full verdict for any notion and awareness mode.

    Pairwise bases: fair iff for every ordered pair (i, j) the base condition
    holds or the override applies.  Target bases (sef1/swef1): observers with
    an override toward target j are exempt from j's universal-item
    requirement; the remaining observers must share one removal item.  The
    witness is the first failing pair in lexicographic (observer, target)
    order.
    """
    if notion.base == SA_EMPTY:
        return is_sa_empty(inst, alloc)
    require_goods(inst)
    n = inst.n
    label = notion.label()
    if notion.base in TARGET_BASES:
        failing: list[tuple[int, int]] = []
        for j in range(n):
            exempt = frozenset(
                i
                for i in range(n)
                if i != j and sa_override(inst, alloc, i, j, notion)
            )
            if not _target_fair(inst, alloc, j, notion.base, exempt):
                failing.extend(
                    (i, j) for i in range(n) if i != j and i not in exempt
                )
        if failing:
            i, j = min(failing)
            return Verdict(
                fair=False,
                witness=Witness(
                    reason=label,
                    observer=i,
                    target=j,
                    item=_best_removal(inst, i, alloc.bundles[j]),
                ),
            )
        return Verdict(fair=True)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if _pair_fair(inst, alloc, i, j, notion.base):
                continue
            if sa_override(inst, alloc, i, j, notion):
                continue
            return Verdict(
                fair=False,
                witness=Witness(
                    reason=label,
                    observer=i,
                    target=j,
                    item=_best_removal(inst, i, alloc.bundles[j]),
                ),
            )
    return Verdict(fair=True)


def is_sa_empty(inst: Instance, alloc: Allocation) -> Verdict:
    """Every non-empty bundle must strictly impact-dominate all other agents.

    Fair iff for each ordered pair (i, j) with i != j either A_j is empty or
    s_i(A_j) < s_j(A_j).
    """
    for i in range(inst.n):
        for j in range(inst.n):
            if i == j or not alloc.bundles[j]:
                continue
            s_i = bundle_impact(inst, i, alloc.bundles[j])
            s_j = bundle_impact(inst, j, alloc.bundles[j])
            if s_i >= s_j:
                return Verdict(
                    fair=False,
                    witness=Witness(reason=SA_EMPTY, observer=i, target=j),
                )
    return Verdict(fair=True)
