"""Strict JSON serialization for instances and allocations, plus notion specs.

File formats (canonical field order, integers only, no floats):

Instance file::

    {
      "agents": [{"id": "a1", "weight": 1, "aware": true}, ...],
      "items": ["g1", ...],
      "valuations": [[...], ...],   # one row per agent
      "impacts": [[...], ...]
    }

``weight`` defaults to 1 and ``aware`` to true; unknown keys are rejected.

Allocation file::

    {"bundles": {"a1": ["g1"], ...}}

Agents may be omitted (empty bundle); bundles must be disjoint.

A notion spec is a base name from {ef, ef1, sef1, wef1, swef1, efl, tef1,
sa-empty}, optionally prefixed with ``sa-`` or ``wsa-`` (so ``sa-ef1``); the
alpha mode is selected via an explicit rational like ``1/2``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .fairness import BASES, SA_EMPTY, Notion
from .model import Allocation, Instance, ValidationError, make_instance

_AGENT_KEYS = {"id", "weight", "aware"}
_INSTANCE_KEYS = {"agents", "items", "valuations", "impacts"}
_ALLOCATION_KEYS = {"bundles"}


def _require_int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{what} must be an integer")
    return value


def instance_to_obj(inst: Instance) -> dict:
    return {
        "agents": [
            {"id": inst.agents[i], "weight": inst.weights[i], "aware": inst.aware[i]}
            for i in range(inst.n)
        ],
        "items": list(inst.items),
        "valuations": [list(row) for row in inst.valuations],
        "impacts": [list(row) for row in inst.impacts],
    }


def instance_from_obj(obj) -> Instance:
    if not isinstance(obj, dict):
        raise ValidationError("instance file must be a JSON object")
    unknown = set(obj) - _INSTANCE_KEYS
    if unknown:
        raise ValidationError(f"unknown instance keys: {sorted(unknown)}")
    missing = _INSTANCE_KEYS - set(obj)
    if missing:
        raise ValidationError(f"missing instance keys: {sorted(missing)}")
    if not isinstance(obj["agents"], list):
        raise ValidationError("agents must be a list")
    ids: list[str] = []
    weights: list[int] = []
    aware: list[bool] = []
    for entry in obj["agents"]:
        if not isinstance(entry, dict):
            raise ValidationError("each agent must be an object")
        bad = set(entry) - _AGENT_KEYS
        if bad:
            raise ValidationError(f"unknown agent keys: {sorted(bad)}")
        if "id" not in entry or not isinstance(entry["id"], str):
            raise ValidationError("each agent needs a string id")
        ids.append(entry["id"])
        weights.append(_require_int(entry.get("weight", 1), "agent weight"))
        flag = entry.get("aware", True)
        if not isinstance(flag, bool):
            raise ValidationError("agent aware flag must be a boolean")
        aware.append(flag)
    if not isinstance(obj["items"], list) or any(
        not isinstance(x, str) for x in obj["items"]
    ):
        raise ValidationError("items must be a list of strings")
    for key in ("valuations", "impacts"):
        matrix = obj[key]
        if not isinstance(matrix, list) or any(
            not isinstance(row, list) for row in matrix
        ):
            raise ValidationError(f"{key} must be a list of rows")
        for row in matrix:
            for x in row:
                _require_int(x, f"{key} entry")
    return make_instance(
        tuple(tuple(row) for row in obj["valuations"]),
        tuple(tuple(row) for row in obj["impacts"]),
        weights=tuple(weights),
        aware=tuple(aware),
        agents=tuple(ids),
        items=tuple(obj["items"]),
    )


def allocation_to_obj(inst: Instance, alloc: Allocation) -> dict:
    return {
        "bundles": {
            inst.agents[i]: [inst.items[g] for g in sorted(alloc.bundles[i])]
            for i in range(inst.n)
        }
    }


def allocation_from_obj(inst: Instance, obj) -> Allocation:
    if not isinstance(obj, dict):
        raise ValidationError("allocation file must be a JSON object")
    unknown = set(obj) - _ALLOCATION_KEYS
    if unknown:
        raise ValidationError(f"unknown allocation keys: {sorted(unknown)}")
    if "bundles" not in obj or not isinstance(obj["bundles"], dict):
        raise ValidationError("allocation file needs a bundles object")
    agent_index = {a: i for i, a in enumerate(inst.agents)}
    item_index = {g: j for j, g in enumerate(inst.items)}
    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    seen: set[int] = set()
    for agent_id, member_list in obj["bundles"].items():
        if agent_id not in agent_index:
            raise ValidationError(f"unknown agent id {agent_id!r}")
        if not isinstance(member_list, list):
            raise ValidationError(f"bundle of {agent_id!r} must be a list")
        for item_id in member_list:
            if item_id not in item_index:
                raise ValidationError(f"unknown item id {item_id!r}")
            g = item_index[item_id]
            if g in seen:
                raise ValidationError(f"item {item_id!r} appears in two bundles")
            seen.add(g)
            bundles[agent_index[agent_id]].add(g)
    return Allocation(bundles=tuple(frozenset(b) for b in bundles))


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_instance(path: str | Path) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc
    return instance_from_obj(obj)


def load_allocation(inst: Instance, path: str | Path) -> Allocation:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc
    return allocation_from_obj(inst, obj)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(instance_to_obj(inst)), encoding="utf-8")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` exactly; floats are rejected."""
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational {text!r}: expected p or p/q") from exc


def parse_notion_spec(
    text: str,
    *,
    sa: bool = False,
    alpha: Fraction | None = None,
    wsa: bool = False,
) -> Notion:
    """Resolve a notion spec string plus optional modifier flags.

    The string may carry the modifier itself (``sa-ef1``, ``wsa-efl``); the
    flags mirror the command-line modifiers and are mutually exclusive with
    each other and with an in-string prefix.
    """
    text = text.strip().lower()
    base = text
    prefix: str | None = None
    if text != SA_EMPTY:
        if text.startswith("sa-"):
            prefix, base = "sa", text[3:]
        elif text.startswith("wsa-"):
            prefix, base = "wsa", text[4:]
    modifiers = [m for m, on in (("sa", sa), ("alpha", alpha is not None), ("wsa", wsa)) if on]
    if prefix is not None:
        modifiers.append(prefix)
    if len(modifiers) > 1:
        raise ValidationError("awareness modifiers are mutually exclusive")
    if base not in BASES + (SA_EMPTY,):
        raise ValidationError(f"unknown notion base {base!r}")
    if not modifiers:
        return Notion(base)
    mode = modifiers[0]
    if mode == "alpha":
        return Notion(base, "alpha", Fraction(alpha))
    return Notion(base, mode)
