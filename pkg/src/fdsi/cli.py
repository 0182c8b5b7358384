"""Command-line front end.

Subcommands: ``check`` (verdict for an allocation), ``solve`` (find an
allocation), ``gen`` (write gadget/canned/random instances), ``brute``
(oracle scan).  Exit codes: 0 fair/found, 1 unfair/none, 2 validation error,
3 resource budget exceeded.  All randomness is seeded explicitly and output
is deterministic; the FDSI_STATE_BUDGET environment variable overrides the
default state budget of the exact solver.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import allocators, generators, sa_empty, search, serialize
from .fairness import SA_EMPTY, Notion, Verdict, check as check_notion, is_sim
from .model import (
    Allocation,
    BudgetExceededError,
    Instance,
    ValidationError,
    is_complete,
    validate_allocation,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


def _witness_obj(inst: Instance, verdict: Verdict):
    w = verdict.witness
    if w is None:
        return None
    out = {"reason": w.reason}
    if w.observer is not None:
        out["observer"] = inst.agents[w.observer]
    if w.target is not None:
        out["target"] = inst.agents[w.target]
    if w.item is not None:
        out["item"] = inst.items[w.item]
    return out


def _notion_from_args(args) -> Notion:
    alpha = serialize.parse_rational(args.alpha) if args.alpha else None
    return serialize.parse_notion_spec(
        args.notion, sa=args.sa, alpha=alpha, wsa=args.wsa
    )


def _add_notion_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sa", action="store_true", help="awareness override")
    parser.add_argument("--alpha", metavar="P/Q", help="alpha-scaled awareness")
    parser.add_argument("--wsa", action="store_true", help="proportional awareness")


def _cmd_check(args) -> int:
    inst = serialize.load_instance(args.instance)
    alloc = serialize.load_allocation(inst, args.allocation)
    errors = validate_allocation(inst, alloc)
    if errors:
        raise ValidationError("; ".join(errors))
    if not is_complete(inst, alloc):
        raise ValidationError("allocation does not cover every item")
    notion = _notion_from_args(args)
    sim = is_sim(inst, alloc)
    verdict = check_notion(inst, alloc, notion)
    print(
        serialize.dumps(
            {
                "sim": sim.fair,
                "fair": verdict.fair,
                "witness": _witness_obj(inst, verdict),
            }
        ),
        end="",
    )
    ok = verdict.fair and (sim.fair or not args.require_sim)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _satisfies(inst: Instance, alloc: Allocation, notion: Notion) -> bool:
    return is_sim(inst, alloc).fair and check_notion(inst, alloc, notion).fair


def _solve_auto(inst: Instance, notion: Notion, args) -> Allocation | None:
    """Route to the cheapest solver that decides the notion.

    Awareness without relaxation gets the polynomial allocators, a mixed or
    absent awareness gets the exact state search, and the relaxed overrides
    (alpha, wsa) fall back to the brute-force oracle.  Every polynomial
    candidate is verified against the requested notion before being trusted.
    """
    if notion.base == SA_EMPTY:
        return sa_empty.solve_sa_empty(inst, node_budget=args.node_budget)
    if notion.awareness in ("alpha", "wsa"):
        return search.brute_force_solve(inst, notion, cap=args.brute_cap)
    if notion.awareness == "sa":
        candidate = None
        if all(inst.aware):
            if notion.base == "efl":
                candidate = allocators.sa_efl_allocate(inst)
            elif notion.base in ("wef1", "swef1"):
                candidate = allocators.sa_weighted_picking(inst)
            elif notion.base in ("ef1", "sef1", "tef1"):
                candidate = allocators.sa_weighted_picking(
                    inst, weights=(1,) * inst.n
                )
            # base "ef" has no existence guarantee even with awareness
        elif notion.base == "ef1":
            candidate = allocators.two_agent_mixed_fast_path(inst)
        if candidate is not None and _satisfies(inst, candidate, notion):
            return candidate
    return search.exact_solve(
        inst, notion, state_budget=args.state_budget, threads=args.threads
    )


def _cmd_solve(args) -> int:
    inst = serialize.load_instance(args.instance)
    notion = _notion_from_args(args)
    method = args.method
    if method == "auto":
        alloc = _solve_auto(inst, notion, args)
    elif method in ("picking", "efl"):
        alloc = (
            allocators.sa_weighted_picking(inst)
            if method == "picking"
            else allocators.sa_efl_allocate(inst)
        )
        if not _satisfies(inst, alloc, notion):
            raise ValidationError(
                f"method {method} does not certify {notion.label()} on this "
                "instance; use the exact or brute method"
            )
    elif method == "exact":
        alloc = search.exact_solve(
            inst, notion, state_budget=args.state_budget, threads=args.threads
        )
    elif method == "brute":
        alloc = search.brute_force_solve(
            inst, notion, require_sim=args.require_sim, cap=args.brute_cap
        )
    elif method == "sa-empty":
        if notion.base != SA_EMPTY:
            raise ValidationError("method sa-empty only solves the sa-empty notion")
        alloc = sa_empty.solve_sa_empty(inst, node_budget=args.node_budget)
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown method {method!r}")
    if alloc is None:
        return EXIT_NEGATIVE
    print(serialize.dumps(serialize.allocation_to_obj(inst, alloc)), end="")
    return EXIT_OK


def _parse_weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad weight list {text!r}") from exc


def _parse_triples(text: str) -> tuple[frozenset[int], ...]:
    try:
        return tuple(
            frozenset(int(u) for u in chunk.split(","))
            for chunk in text.split(";")
            if chunk
        )
    except ValueError as exc:
        raise ValidationError(f"bad triple list {text!r}") from exc


def _parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    try:
        return tuple(
            tuple(int(v) for v in row.split(","))
            for row in text.split(";")
            if row
        )
    except ValueError as exc:
        raise ValidationError(f"bad matrix {text!r}") from exc


def _cmd_gen(args) -> int:
    allocation = None
    if args.generator == "partition-ef1":
        inst = generators.gen_partition_ef1(_parse_weights(args.weights))
    elif args.generator == "mixed":
        inst = generators.gen_mixed_awareness(_parse_weights(args.weights))
    elif args.generator == "alpha":
        inst = generators.gen_alpha_sa(
            _parse_weights(args.weights), serialize.parse_rational(args.alpha)
        )
    elif args.generator == "wsa":
        inst = generators.gen_wsa(_parse_weights(args.weights))
    elif args.generator == "x3c":
        src = generators.RX3CInput(
            universe_size=args.universe, triples=_parse_triples(args.triples)
        )
        inst = generators.gen_x3c_sa_empty(src, strict=args.strict)
    elif args.generator == "ef-embedding":
        inst = generators.gen_ef_embedding(
            _parse_matrix(args.valuations), tef1=args.tef1
        )
    elif args.generator == "example":
        alpha = (
            serialize.parse_rational(args.alpha) if args.alpha else Fraction(1, 2)
        )
        example = generators.canned(args.name, alpha=alpha)
        inst, allocation = example.instance, example.allocation
    elif args.generator == "random":
        inst = generators.gen_random(
            args.agents, args.items, args.v_max, args.s_max, args.w_max, args.seed
        )
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown generator {args.generator!r}")
    text = serialize.dumps(serialize.instance_to_obj(inst))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    if getattr(args, "allocation_out", None):
        if allocation is None:
            raise ValidationError("this example carries no reference allocation")
        with open(args.allocation_out, "w", encoding="utf-8") as fh:
            fh.write(serialize.dumps(serialize.allocation_to_obj(inst, allocation)))
    return EXIT_OK


def _cmd_brute(args) -> int:
    inst = serialize.load_instance(args.instance)
    if args.notion == "any":
        if args.count:
            total = 0
            cap = args.cap
            if search.sim_allocation_count(inst) > cap:
                raise BudgetExceededError("candidate count exceeds the cap")
            for _ in search.enumerate_sim_allocations(inst):
                total += 1
            print(serialize.dumps({"count": total}), end="")
            return EXIT_OK
        alloc = next(search.enumerate_sim_allocations(inst), None)
    else:
        notion = _notion_from_args(args)
        if args.count:
            cap = args.cap
            if search.sim_allocation_count(inst) > cap:
                raise BudgetExceededError("candidate count exceeds the cap")
            total = sum(
                1
                for alloc in search.enumerate_sim_allocations(inst)
                if check_notion(inst, alloc, notion).fair
            )
            print(serialize.dumps({"count": total}), end="")
            return EXIT_OK
        alloc = search.brute_force_solve(
            inst, notion, require_sim=args.require_sim, cap=args.cap
        )
    if alloc is None:
        return EXIT_NEGATIVE
    print(serialize.dumps(serialize.allocation_to_obj(inst, alloc)), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdsi",
        description="Fair division with social impact: checkers, solvers, gadgets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="verdict for an instance + allocation")
    p_check.add_argument("instance")
    p_check.add_argument("allocation")
    p_check.add_argument("notion")
    _add_notion_flags(p_check)
    p_check.add_argument(
        "--require-sim",
        action="store_true",
        help="also require impact maximization for exit code 0",
    )
    p_check.set_defaults(func=_cmd_check)

    p_solve = sub.add_parser("solve", help="find a fair impact-maximizing allocation")
    p_solve.add_argument("instance")
    p_solve.add_argument("notion")
    _add_notion_flags(p_solve)
    p_solve.add_argument(
        "--method",
        choices=("auto", "picking", "efl", "exact", "brute", "sa-empty"),
        default="auto",
    )
    p_solve.add_argument("--state-budget", type=int, default=None)
    p_solve.add_argument("--brute-cap", type=int, default=search.DEFAULT_BRUTE_CAP)
    p_solve.add_argument("--node-budget", type=int, default=sa_empty.DEFAULT_NODE_BUDGET)
    p_solve.add_argument("--threads", type=int, default=1)
    p_solve.add_argument(
        "--no-require-sim",
        dest="require_sim",
        action="store_false",
        help="brute method only: drop the impact-maximization restriction",
    )
    p_solve.set_defaults(func=_cmd_solve, require_sim=True)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    gen_sub = p_gen.add_subparsers(dest="generator", required=True)
    for name in ("partition-ef1", "mixed", "wsa"):
        g = gen_sub.add_parser(name)
        g.add_argument("--weights", required=True, help="comma-separated integers")
        g.add_argument("-o", "--output")
        g.set_defaults(func=_cmd_gen)
    g = gen_sub.add_parser("alpha")
    g.add_argument("--weights", required=True)
    g.add_argument("--alpha", required=True, help="rational P/Q in (0,1)")
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)
    g = gen_sub.add_parser("x3c")
    g.add_argument("--universe", type=int, required=True)
    g.add_argument("--triples", required=True, help='"0,1,2;3,4,5;..."')
    g.add_argument("--strict", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)
    g = gen_sub.add_parser("ef-embedding")
    g.add_argument("--valuations", required=True, help='binary rows "1,0;0,1"')
    g.add_argument("--tef1", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)
    g = gen_sub.add_parser("example")
    g.add_argument("name", choices=generators.CANNED_NAMES)
    g.add_argument("--alpha", help="rational for the alpha example")
    g.add_argument("--allocation-out", help="write the reference allocation here")
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)
    g = gen_sub.add_parser("random")
    g.add_argument("--agents", type=int, required=True)
    g.add_argument("--items", type=int, required=True)
    g.add_argument("--v-max", type=int, required=True)
    g.add_argument("--s-max", type=int, required=True)
    g.add_argument("--w-max", type=int, default=1)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=_cmd_gen)

    p_brute = sub.add_parser("brute", help="oracle scan over candidate allocations")
    p_brute.add_argument("instance")
    p_brute.add_argument("notion", help='a notion spec or "any"')
    _add_notion_flags(p_brute)
    p_brute.add_argument("--count", action="store_true")
    p_brute.add_argument("--cap", type=int, default=search.DEFAULT_BRUTE_CAP)
    p_brute.add_argument(
        "--no-require-sim", dest="require_sim", action="store_false"
    )
    p_brute.set_defaults(func=_cmd_brute, require_sim=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    raise SystemExit(main())
