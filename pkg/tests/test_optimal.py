from itertools import combinations

import numpy as np
import pytest

from permcross import (
    CandidateStream,
    Permutation,
    TspInstance,
    cycle_costs,
    derive_inheritance_cycles,
    optimal_crossover,
    random_permutation,
    tour_cost,
)
from permcross.core import walk_cycle
from permcross.optimizing import next_candidate
from permcross import oracle

from conftest import gen


def perm1(*values):
    return Permutation.from_one_based(values)


P6_A = perm1(1, 2, 3, 4, 5, 6)
P6_B = perm1(1, 3, 2, 4, 6, 5)


def delta_1based(i, j):
    # delta(i, j) = 10*i + j over 1-based symbols
    return (i + 1) * 10 + (j + 1)


def integer_grid_instance(n, g):
    coords = g.integers(0, 1000, size=(n, 2)).astype(float)
    diff = coords[:, None, :] - coords[None, :, :]
    matrix = np.rint(np.hypot(diff[..., 0], diff[..., 1]))
    return TspInstance(matrix, coords)


class TestCycleCosts:
    def test_unit_costs_zero_penalty(self):
        e_a, e_b, decomp = derive_inheritance_cycles(P6_A, P6_B)
        for cc in cycle_costs(e_a, e_b, decomp, lambda i, j: 1.0):
            size = len(decomp.cycles[cc.cycle_index])
            assert cc.cost_a == cc.cost_b == size
            assert cc.penalty == 0
            assert cc.cheaper_side == "A"

    def test_hand_sums(self):
        e_a, e_b, decomp = derive_inheritance_cycles(P6_A, P6_B)
        costs = cycle_costs(e_a, e_b, decomp, delta_1based)
        by_symbols = {frozenset(decomp.cycles[c.cycle_index]): c for c in costs}
        cc = by_symbols[frozenset({0, 1, 2})]
        assert cc.cost_a == 69
        assert cc.cost_b == 69
        assert cc.penalty == 0

    def test_matrix_delta_accepted(self):
        e_a, e_b, decomp = derive_inheritance_cycles(P6_A, P6_B)
        matrix = np.fromfunction(lambda i, j: (i + 1) * 10 + (j + 1), (6, 6))
        from_callable = cycle_costs(e_a, e_b, decomp, delta_1based)
        from_matrix = cycle_costs(e_a, e_b, decomp, matrix)
        assert from_callable == from_matrix


class TestCandidateStream:
    @staticmethod
    def stream_for(penalties, frontier_cap=None):
        """Stream over synthetic cycle costs with the given penalties."""
        from permcross.core import CycleDecomposition
        from permcross.optimizing import CycleCost

        m = len(penalties)
        n = 2 * m if m else 2
        cycles = tuple((2 * k, 2 * k + 1) for k in range(m))
        decomp = CycleDecomposition(cycles, n - 2 * m, n)
        costs = [
            CycleCost(k, 0.0, penalties[k], penalties[k], "A")
            for k in range(m)
        ]
        return CandidateStream(costs, decomp, frontier_cap=frontier_cap)

    def test_emission_order_1_2_4(self):
        stream = self.stream_for([1.0, 2.0, 4.0])
        sums = []
        while (item := next_candidate(stream)) is not None:
            sums.append(item[1])
        assert sums == [0, 1, 2, 3, 4, 5, 6, 7]

    def test_all_zero_penalties_each_once(self):
        stream = self.stream_for([0.0] * 4)
        seen = set()
        while (item := next_candidate(stream)) is not None:
            chi, cost = item
            assert cost == 0
            seen.add(chi.chosen)
        assert len(seen) == 16

    def test_empty_decomposition(self):
        stream = self.stream_for([])
        chi, cost = next_candidate(stream)
        assert chi.chosen == frozenset()
        assert cost == 0
        assert next_candidate(stream) is None

    def test_matches_sorted_subset_sums(self):
        g = gen(13)
        for _ in range(20):
            penalties = [float(v) for v in g.integers(0, 50, size=10)]
            stream = self.stream_for(penalties)
            emitted = []
            while (item := next_candidate(stream)) is not None:
                emitted.append(item[1])
            brute = sorted(
                sum(c) for r in range(11) for c in combinations(penalties, r)
            )
            assert emitted == pytest.approx(brute)

    def test_frontier_cap_keeps_prefix_exact(self):
        g = gen(14)
        penalties = [float(v) for v in g.integers(1, 100, size=16)]
        budget = 50
        stream = self.stream_for(penalties, frontier_cap=budget)
        emitted = [next_candidate(stream)[1] for _ in range(budget)]
        brute = sorted(
            sum(c) for r in range(17) for c in combinations(penalties, r)
        )[:budget]
        assert emitted == pytest.approx(brute)


class TestOptimalCrossover:
    def test_identical_parents(self):
        inst = integer_grid_instance(6, gen(1))
        out = optimal_crossover(P6_A, P6_A, inst.matrix)
        assert out.offspring == P6_A
        assert out.trivial
        assert out.cost == pytest.approx(tour_cost(P6_A, inst))

    def test_matches_oracle_on_integer_instances(self):
        count = 0
        for n in range(5, 10):
            for seed in range(8):
                g = gen(10_000 + 100 * n + seed)
                inst = integer_grid_instance(n, g)
                a = random_permutation(n, g)
                b = random_permutation(n, g)
                out = optimal_crossover(a, b, inst.matrix)
                _, best_cost = oracle.optimal_offspring(a, b, inst)
                assert out.cost == best_cost
                assert tour_cost(out.offspring, inst) == best_cost
                count += 1
        assert count == 40

    def test_tied_penalties_still_hit_oracle_minimum(self):
        # both cycles cost the same on either side under this delta, so the
        # stream emits ties; the result must still be the set minimum
        matrix = np.fromfunction(lambda i, j: (i + 1) * 10 + (j + 1), (6, 6))
        np.fill_diagonal(matrix, 0.0)
        out = optimal_crossover(P6_A, P6_B, matrix)
        inst = TspInstance(matrix)
        best = min(
            tour_cost(Permutation(p), inst)
            for p in oracle.enumerate_directed(P6_A, P6_B).offspring
        )
        assert out.cost == best

    def test_cost_equals_tour_cost(self):
        g = gen(15)
        for _ in range(30):
            n = int(g.integers(5, 9))
            inst = integer_grid_instance(n, g)
            a = random_permutation(n, g)
            b = random_permutation(n, g)
            out = optimal_crossover(a, b, inst.matrix)
            assert out.cost == pytest.approx(tour_cost(out.offspring, inst))

    def test_never_exhausts_with_full_budget(self):
        g = gen(16)
        for _ in range(50):
            a = random_permutation(10, g)
            b = random_permutation(10, g)
            _, _, decomp = derive_inheritance_cycles(a, b)
            budget = max(1, 2 ** len(decomp.cycles))
            out = optimal_crossover(a, b, lambda i, j: 1.0, max_candidates=budget)
            assert not out.exhausted

    def test_budget_exhaustion_returns_cheaper_parent(self):
        a, b, matrix = _pair_with_invalid_cheapest()
        out = optimal_crossover(a, b, matrix, max_candidates=1)
        assert out.exhausted
        assert out.trivial
        inst = TspInstance(matrix)
        expected = min(tour_cost(a, inst), tour_cost(b, inst))
        assert out.cost == pytest.approx(expected)
        assert out.offspring.elems in (a.elems, b.elems)

    def test_maximize_flag(self):
        g = gen(17)
        n = 7
        inst = integer_grid_instance(n, g)
        a = random_permutation(n, g)
        b = random_permutation(n, g)
        out = optimal_crossover(a, b, inst.matrix, maximize=True)
        candidates = oracle.enumerate_directed(a, b)
        worst = max(tour_cost(Permutation(p), inst) for p in candidates.offspring)
        assert out.cost == pytest.approx(worst)


def _pair_with_invalid_cheapest():
    """A parent pair plus costs whose cheapest candidate is not a tour."""
    for seed in range(500):
        g = gen(seed)
        n = 7
        a = random_permutation(n, g)
        b = random_permutation(n, g)
        e_a, e_b, decomp = derive_inheritance_cycles(a, b)
        if len(decomp.cycles) != 2:
            continue
        first = decomp.cycles[0]
        succ = list(e_b.succ)
        for s in first:
            succ[s] = e_a.succ[s]
        if walk_cycle(succ) is not None:
            continue
        # Reward exactly that mix: a-edges free on the first cycle, b-edges
        # free on the second, so the invalid mix is the cheapest candidate.
        matrix = np.full((n, n), 5.0)
        np.fill_diagonal(matrix, 0.0)
        for s in first:
            matrix[s, e_a.succ[s]] = 0.0
        for s in decomp.cycles[1]:
            matrix[s, e_b.succ[s]] = 0.0
        costs = cycle_costs(e_a, e_b, decomp, matrix)
        assert [c.cheaper_side for c in costs] == ["A", "B"]
        return a, b, matrix
    raise AssertionError("no suitable pair found")
