import random
from fractions import Fraction

import pytest

from fdsi.fairness import BASES, Notion, check, is_sim, target_fair
from fdsi.generators import canned, gen_partition_ef1, gen_random
from fdsi.model import Allocation, BudgetExceededError, make_instance
from fdsi.search import (
    SearchState,
    UnsupportedNotionError,
    accepting_state,
    brute_force_solve,
    enumerate_sim_allocations,
    exact_solve,
    sim_allocation_count,
    successor_states,
)

from helpers import random_instances


class TestSuccessorStates:
    def test_single_agent_grows_own_cell(self):
        inst = make_instance(((4, 2),), ((1, 1),))
        root = SearchState.initial(1, "ef1", track_flags=False)
        succ = successor_states(inst, root, 0, Notion("ef1"))
        assert len(succ) == 1
        state, assignee = succ[0]
        assert assignee == 0
        assert state.x == (4,)
        assert state.y == (4,)

    def test_update_rule_both_maximize(self):
        inst = make_instance(((3, 0), (5, 0)), ((1, 1), (1, 1)))
        root = SearchState.initial(2, "ef1", track_flags=False)
        succ = successor_states(inst, root, 0, Notion("ef1"))
        assert [assignee for _, assignee in succ] == [0, 1]
        state = dict((a, s) for s, a in succ)[1]
        assert state.x == (0, 3, 0, 5)  # x[0][1] += 3, x[1][1] += 5
        assert state.y == (0, 3, 0, 5)

    def test_unique_maximizer_single_branch(self):
        inst = make_instance(((3, 0), (5, 0)), ((2, 1), (1, 1)))
        root = SearchState.initial(2, "ef1", track_flags=False)
        succ = successor_states(inst, root, 0, Notion("ef1"))
        assert len(succ) == 1 and succ[0][1] == 0

    def test_universal_branching(self):
        inst = make_instance(((3, 0), (5, 0)), ((1, 1), (1, 1)))
        root = SearchState.initial(2, "sef1", track_flags=False)
        succ = successor_states(inst, root, 0, Notion("sef1"))
        # per assignee: keep y, or set the universal removal to this item
        assert len(succ) == 4

    def test_per_observer_branching(self):
        inst = make_instance(((3, 0), (5, 0)), ((1, 1), (1, 1)))
        root = SearchState.initial(2, "efl", track_flags=False)
        succ = successor_states(inst, root, 0, Notion("efl"))
        # 2 assignees x 2 independent observer choices (new values differ from 0)
        assert len(succ) == 8

    def test_flags_follow_strict_impact(self):
        inst = make_instance(((1, 1), (1, 1)), ((3, 0), (1, 0)), aware=(True, True))
        root = SearchState.initial(2, "ef1", track_flags=True)
        succ = successor_states(inst, root, 0, Notion("ef1"))
        assert len(succ) == 1
        state, assignee = succ[0]
        assert assignee == 0
        assert state.flags == (0, 0, 1, 0)  # pair (1, 0) saw a dominated item


class TestAcceptingState:
    def test_single_agent_always_accepts(self):
        state = SearchState.from_matrices(3, [[7]], [[2]])
        for base in BASES:
            st = state if base != "ef" else SearchState(3, 1, (7,), ())
            assert accepting_state(st, Notion(base), (1,))

    def test_ef1_fails_tef1_holds(self):
        state = SearchState.from_matrices(2, [[0, 2], [2, 0]], [[0, 1], [1, 0]])
        assert not accepting_state(state, Notion("ef1"), (1, 1))
        assert accepting_state(state, Notion("tef1"), (1, 1))

    def test_weighted_cross_multiplication(self):
        # x = ((2, 5), (0, 0)), y = ((0, 1), (0, 0)): 2/1 >= 4/2 holds
        state = SearchState.from_matrices(2, [[2, 5], [0, 0]], [[0, 1], [0, 0]])
        assert accepting_state(state, Notion("wef1"), (1, 2))
        assert not accepting_state(state, Notion("wef1"), (1, 1))

    def test_efl_disjuncts(self):
        # tracked item carries the whole bundle value: at most one positive item
        state = SearchState.from_matrices(2, [[0, 9], [0, 0]], [[0, 9], [0, 0]])
        assert accepting_state(state, Notion("efl"), (1, 1))
        state = SearchState.from_matrices(2, [[0, 9], [0, 0]], [[0, 4], [0, 0]])
        assert not accepting_state(state, Notion("efl"), (1, 1))

    def test_flag_exemption(self):
        state = SearchState.from_matrices(
            2, [[0, 9], [0, 0]], [[0, 0], [0, 0]], flags=[[0, 1], [0, 0]]
        )
        assert not accepting_state(state, Notion("ef1"), (1, 1))
        assert accepting_state(state, Notion("ef1"), (1, 1), profile=(True, True))
        assert not accepting_state(state, Notion("ef1"), (1, 1), profile=(False, True))


class TestExactSolve:
    def test_partition_gadget_solvable(self):
        inst = gen_partition_ef1((1, 1, 2))
        alloc = exact_solve(inst, Notion("ef1"))
        assert alloc is not None
        assert is_sim(inst, alloc).fair
        assert check(inst, alloc, Notion("ef1")).fair

    def test_partition_gadget_unsolvable(self):
        inst = gen_partition_ef1((1, 1, 4))
        assert exact_solve(inst, Notion("ef1")) is None
        assert brute_force_solve(inst, Notion("ef1")) is None

    def test_no_items_trivial(self):
        inst = make_instance(((), ()), ((), ()))
        alloc = exact_solve(inst, Notion("ef1"))
        assert alloc == Allocation.empty(2)

    def test_budget_error(self):
        inst = gen_random(3, 6, 5, 3, 1, seed=99)
        with pytest.raises(BudgetExceededError):
            exact_solve(inst, Notion("efl"), state_budget=5)

    def test_state_count_bound(self):
        for seed in range(10):
            inst = gen_random(2, 3, 2, 2, 1, seed=seed)
            nu = max((abs(v) for row in inst.valuations for v in row), default=0)
            n, m = inst.n, inst.m
            bound = (
                (1 + nu * m) ** (n * n)
                * (1 + nu) ** (n * n)
                * (m + 1)
                * 2 ** (n * n)
            )
            stats = {}
            exact_solve(inst, Notion("ef1"), stats=stats)
            assert stats["visited"] <= bound

    def test_alpha_and_wsa_rejected(self):
        inst = gen_random(2, 3, 3, 3, 1, seed=5)
        with pytest.raises(UnsupportedNotionError):
            exact_solve(inst, Notion("ef1", "alpha", Fraction(1, 2)))
        with pytest.raises(UnsupportedNotionError):
            exact_solve(inst, Notion("ef1", "wsa"))
        with pytest.raises(UnsupportedNotionError):
            exact_solve(inst, Notion("sa-empty"))

    def test_threads_bit_identical(self):
        for seed in (3, 7, 11):
            inst = gen_random(3, 6, 4, 3, 2, seed=seed)
            for base in ("ef1", "sef1", "efl", "wef1"):
                one = exact_solve(inst, Notion(base), threads=1)
                four = exact_solve(inst, Notion(base), threads=4)
                assert one == four

    def test_best_first_same_answer(self):
        for seed in range(8):
            inst = gen_random(2, 5, 4, 3, 2, seed=seed)
            for base in ("ef1", "efl", "tef1"):
                a = exact_solve(inst, Notion(base))
                b = exact_solve(inst, Notion(base), best_first=True)
                assert (a is None) == (b is None)
                if b is not None:
                    assert check(inst, b, Notion(base)).fair

    def test_sef1_reconstruction_satisfies_every_target(self):
        hits = 0
        for inst in random_instances(60, 61, 2, 3, 1, 5, 4, 4):
            alloc = exact_solve(inst, Notion("sef1"))
            if alloc is None:
                continue
            hits += 1
            for j in range(inst.n):
                assert target_fair(inst, alloc, j, "sef1")
        assert hits > 20


class TestPathReplay:
    def test_known_solution_path_reaches_an_accepting_state(self):
        # replay a balanced split of the equal-partition embedding through
        # the successor relation and confirm the final state accepts
        inst = gen_partition_ef1((1, 1, 2))
        owners = [0, 1, 1, 1, 0]  # G1 and the heavy item left, rest right
        alloc = Allocation.from_assignment(2, owners)
        assert is_sim(inst, alloc).fair
        assert check(inst, alloc, Notion("ef1")).fair
        state = SearchState.initial(2, "ef1", track_flags=False)
        for g, owner in enumerate(owners):
            successors = successor_states(inst, state, g, Notion("ef1"))
            state = next(s for s, assignee in successors if assignee == owner)
        assert state.layer == inst.m
        assert accepting_state(state, Notion("ef1"), inst.weights)

    def test_unbalanced_path_is_rejected(self):
        inst = gen_partition_ef1((1, 1, 2))
        owners = [0, 1, 0, 0, 0]  # everything small hoarded left
        state = SearchState.initial(2, "ef1", track_flags=False)
        for g, owner in enumerate(owners):
            successors = successor_states(inst, state, g, Notion("ef1"))
            state = next(s for s, assignee in successors if assignee == owner)
        assert not accepting_state(state, Notion("ef1"), inst.weights)


class TestOracles:
    def test_unique_maximizers_single_allocation(self):
        inst = make_instance(((1, 1), (1, 1)), ((2, 0), (1, 1)))
        allocs = list(enumerate_sim_allocations(inst))
        assert len(allocs) == 1

    def test_co_maximized_count(self):
        inst = make_instance(((1, 1, 1), (1, 1, 1)), ((1, 1, 1), (1, 1, 1)))
        assert sim_allocation_count(inst) == 8
        assert len(list(enumerate_sim_allocations(inst))) == 8

    def test_enumeration_is_exactly_the_maximizing_set(self):
        from itertools import product

        for inst in random_instances(15, 71, 1, 3, 0, 4, 3, 3):
            enumerated = {a.bundles for a in enumerate_sim_allocations(inst)}
            full = set()
            for owners in product(range(inst.n), repeat=inst.m):
                alloc = Allocation.from_assignment(inst.n, owners)
                if is_sim(inst, alloc).fair:
                    full.add(alloc.bundles)
            assert enumerated == full

    def test_brute_cap(self):
        inst = make_instance(
            tuple((1,) * 10 for _ in range(3)),
            tuple((1,) * 10 for _ in range(3)),
        )
        with pytest.raises(BudgetExceededError):
            brute_force_solve(inst, Notion("ef1"), cap=100)

    def test_nonexistence_goldens(self):
        bill = canned("bill-joe").instance
        assert brute_force_solve(bill, Notion("ef1")) is None
        unaware = canned("unaware-nonexistence").instance
        assert brute_force_solve(unaware, Notion("ef1", "sa")) is None
        alpha = canned("alpha-nonexistence").instance
        assert (
            brute_force_solve(alpha, Notion("ef1", "alpha", Fraction(1, 2))) is None
        )
        wsa = canned("wsa-nonexistence").instance
        assert brute_force_solve(wsa, Notion("ef1", "wsa")) is None
        assert brute_force_solve(wsa, Notion("ef1", "sa")) is not None

    def test_unaware_example_without_sim_restriction(self):
        # dropping the impact-maximization requirement makes the instance easy
        unaware = canned("unaware-nonexistence").instance
        alloc = brute_force_solve(
            unaware, Notion("ef1", "sa"), require_sim=False
        )
        assert alloc is not None
        assert not is_sim(unaware, alloc).fair


class TestOracleEquivalenceSmoke:
    def test_small_ensemble_all_notions(self):
        rng = random.Random(81)
        for k, inst in enumerate(random_instances(40, 82, 2, 3, 1, 6, 5, 5, 3)):
            profile = tuple(rng.random() < 0.5 for _ in range(inst.n))
            for base in BASES:
                plain_exact = exact_solve(inst, Notion(base))
                plain_brute = brute_force_solve(inst, Notion(base))
                assert (plain_exact is None) == (plain_brute is None), (k, base)
                mixed_exact = exact_solve(inst, Notion(base), profile=profile)
                mixed_brute = brute_force_solve(inst, Notion(base), profile=profile)
                assert (mixed_exact is None) == (mixed_brute is None), (k, base)
