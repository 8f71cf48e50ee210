"""Cost-optimal crossover of directed edges.

The total cost of a candidate cycle union decomposes into one term per
cycle (the a-side or b-side edge cost) plus a constant for the shared
edges.  Starting from the all-cheaper-sides choice, every other candidate
adds a subset of non-negative per-cycle penalties, so candidates can be
enumerated lazily in nondecreasing cost with a best-first heap over subset
sums.  The first candidate whose successor map is a single tour is the
cheapest offspring built only from parent edges; it may equal a parent.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterator

from .core import (
    AdjacencyMap,
    CrossoverOutcome,
    CycleDecomposition,
    Permutation,
    walk_cycle,
)
from .directed import ChiSelection, derive_inheritance_cycles

DEFAULT_CANDIDATE_BUDGET = 10**6

DeltaLike = Callable[[int, int], float]


def _as_delta(delta) -> DeltaLike:
    if callable(delta):
        return delta
    matrix = delta

    def lookup(i: int, j: int) -> float:
        return float(matrix[i][j])

    return lookup


@dataclass(frozen=True)
class CycleCost:
    """Edge-cost summary of one inheritance cycle.

    ``cost_a``/``cost_b`` sum the cost of the cycle's a-side respectively
    b-side successor edges; ``penalty`` is the price of flipping the cycle
    away from its cheaper side.  Ties go to side A.
    """

    cycle_index: int
    cost_a: float
    cost_b: float
    penalty: float
    cheaper_side: str

    def __post_init__(self):
        if self.penalty < 0:
            raise ValueError("penalty must be non-negative")
        if self.cheaper_side not in ("A", "B"):
            raise ValueError("cheaper_side must be 'A' or 'B'")


def cycle_costs(
    e_a: AdjacencyMap,
    e_b: AdjacencyMap,
    decomposition: CycleDecomposition,
    delta,
) -> list[CycleCost]:
    """Per-cycle side costs.  Shared (fixed-point) edges are excluded: they
    contribute the same constant to every candidate."""
    d = _as_delta(delta)
    succ_a = e_a.succ
    succ_b = e_b.succ
    out = []
    for idx, cyc in enumerate(decomposition.cycles):
        ca = sum(d(i, succ_a[i]) for i in cyc)
        cb = sum(d(i, succ_b[i]) for i in cyc)
        out.append(
            CycleCost(idx, ca, cb, abs(ca - cb), "A" if ca <= cb else "B")
        )
    return out


def shared_edge_cost(
    e_a: AdjacencyMap, decomposition: CycleDecomposition, delta
) -> float:
    """Cost of the edges shared by both parents (the decomposition's fixed
    points); constant across all candidates."""
    d = _as_delta(delta)
    in_cycle = set()
    for cyc in decomposition.cycles:
        in_cycle.update(cyc)
    return sum(
        d(i, e_a.succ[i]) for i in range(decomposition.n) if i not in in_cycle
    )


class CandidateStream:
    """Lazy best-first enumeration of cycle unions in nondecreasing cost.

    Penalties are sorted ascending; heap states are strictly increasing
    index tuples of flipped penalties, expanded by extending with the next
    index or replacing the last index with the next.  Each of the 2^m
    subsets is emitted exactly once; zero-penalty ties resolve
    lexicographically on the flip tuple, keeping runs deterministic.

    ``frontier_cap`` bounds heap memory: beyond 2*cap entries the heap is
    pruned back to the cap smallest, which cannot drop any of the first
    cap emissions.
    """

    def __init__(
        self,
        costs: list[CycleCost],
        decomposition: CycleDecomposition,
        shared_cost: float = 0.0,
        frontier_cap: int | None = None,
    ):
        if len(costs) != len(decomposition.cycles):
            raise ValueError("one CycleCost per listed cycle required")
        self._decomposition = decomposition
        order = sorted(range(len(costs)), key=lambda k: (costs[k].penalty, k))
        self._order = order
        self._penalties = [costs[k].penalty for k in order]
        self._base_chosen = frozenset(
            c.cycle_index for c in costs if c.cheaper_side == "A"
        )
        self.base_cost = shared_cost + sum(min(c.cost_a, c.cost_b) for c in costs)
        self._heap: list[tuple[float, tuple[int, ...]]] = []
        self._emitted = 0
        self._limit = 1 << len(costs)
        self._cap = frontier_cap
        self._last_sum = 0.0

    @property
    def emitted(self) -> int:
        return self._emitted

    def next_candidate(self) -> tuple[ChiSelection, float] | None:
        """Next (selection, total cost) in nondecreasing cost order, or
        None once all 2^m subsets have been emitted."""
        if self._emitted == 0:
            self._emitted = 1
            if self._penalties:
                heapq.heappush(self._heap, (self._penalties[0], (0,)))
            return self._selection(()), self.base_cost
        if self._emitted >= self._limit or not self._heap:
            return None
        flip_sum, flips = heapq.heappop(self._heap)
        self._emitted += 1
        assert flip_sum >= self._last_sum, "candidate costs went backwards"
        self._last_sum = flip_sum
        last = flips[-1]
        nxt = last + 1
        if nxt < len(self._penalties):
            heapq.heappush(
                self._heap, (flip_sum + self._penalties[nxt], flips + (nxt,))
            )
            heapq.heappush(
                self._heap,
                (
                    flip_sum - self._penalties[last] + self._penalties[nxt],
                    flips[:-1] + (nxt,),
                ),
            )
            if self._cap is not None and len(self._heap) > 2 * self._cap:
                self._heap = heapq.nsmallest(self._cap, self._heap)
                heapq.heapify(self._heap)
        return self._selection(flips), self.base_cost + flip_sum

    def __iter__(self) -> Iterator[tuple[ChiSelection, float]]:
        while (item := self.next_candidate()) is not None:
            yield item

    def _selection(self, flips: tuple[int, ...]) -> ChiSelection:
        chosen = set(self._base_chosen)
        for pos in flips:
            chosen ^= {self._order[pos]}
        return ChiSelection(frozenset(chosen), self._decomposition)


def next_candidate(stream: CandidateStream):
    """Module-level alias for CandidateStream.next_candidate."""
    return stream.next_candidate()


def optimal_crossover(
    a: Permutation,
    b: Permutation,
    delta,
    *,
    max_candidates: int = DEFAULT_CANDIDATE_BUDGET,
    maximize: bool = False,
) -> CrossoverOutcome:
    """Cheapest (or with ``maximize``, most valuable) offspring built only
    from parent edges, for an additive edge cost ``delta``.

    Walks candidates in cost order and returns the first one forming a
    tour; the parents themselves are candidates, so with an exhaustive
    budget this cannot fail.  When ``max_candidates`` runs out first, the
    cheaper parent is returned flagged trivial and exhausted.  The
    enumeration is deterministic; no randomness is involved.
    """
    if max_candidates < 1:
        raise ValueError("max_candidates must be >= 1")
    d = _as_delta(delta)
    sign = 1.0
    if maximize:
        raw = d
        d = lambda i, j: -raw(i, j)  # noqa: E731
        sign = -1.0
    e_a, e_b, decomp = derive_inheritance_cycles(a, b)
    costs = cycle_costs(e_a, e_b, decomp, d)
    shared = shared_edge_cost(e_a, decomp, d)
    stream = CandidateStream(costs, decomp, shared, frontier_cap=max_candidates)
    succ_a = list(e_a.succ)
    succ_b = list(e_b.succ)
    cycle_syms = decomp.cycles
    trials = 0
    while trials < max_candidates:
        item = stream.next_candidate()
        if item is None:
            break
        chi, cost = item
        trials += 1
        succ = list(succ_b)
        for k in chi.chosen:
            for s in cycle_syms[k]:
                succ[s] = succ_a[s]
        path = walk_cycle(succ)
        if path is not None:
            trivial = succ == succ_a or succ == succ_b
            return CrossoverOutcome(
                Permutation(tuple(path)), trials, trivial, cost=sign * cost
            )
    # Budget exhausted before any candidate formed a tour: fall back to the
    # cheaper parent and count the outcome as trivial.
    total_a = shared + sum(c.cost_a for c in costs)
    total_b = shared + sum(c.cost_b for c in costs)
    parent, total = (a, total_a) if total_a <= total_b else (b, total_b)
    return CrossoverOutcome(
        Permutation(parent.elems),
        max(trials, 1),
        True,
        cost=sign * total,
        exhausted=True,
    )
