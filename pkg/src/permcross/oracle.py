"""Brute-force enumeration of valid offspring, for small sizes.

Ground truth for the operator modules: everything here is written
independently of them, on purpose, down to recomputing successor maps and
cycle structure from scratch.  All routines are exponential and guarded by
hard size limits.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Permutation
from .errors import SizeMismatchError
from .tsp import TspInstance, tour_cost

MAX_DIRECTED_N = 16
MAX_DIRECTED_CYCLES = 24
MAX_UNDIRECTED_N = 10


@dataclass(frozen=True)
class OffspringSet:
    """Canonical offspring tours with their generation counts.

    Directed tours are canonicalised by starting the path at symbol 0;
    undirected tours additionally orient so the second symbol is the
    smaller of symbol 0's two neighbours.  ``counts[i]`` is the number of
    generating selections (cycle unions / exchanged-cycle subsets) for
    ``offspring[i]``.
    """

    offspring: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.offspring)

    def __contains__(self, path) -> bool:
        return tuple(path) in set(self.offspring)

    def to_dict(self) -> dict[tuple[int, ...], int]:
        return dict(zip(self.offspring, self.counts))

    def paths(self) -> set[tuple[int, ...]]:
        return set(self.offspring)


def _succ_of(path: tuple[int, ...]) -> list[int]:
    n = len(path)
    succ = [0] * n
    for i in range(n):
        succ[path[i]] = path[(i + 1) % n]
    return succ


def _single_cycle_path(succ: list[int]) -> tuple[int, ...] | None:
    n = len(succ)
    path = [0] * n
    cur = 0
    for i in range(n):
        path[i] = cur
        cur = succ[cur]
        if cur == 0:
            return tuple(path) if i == n - 1 else None
    return None


def enumerate_directed(a: Permutation, b: Permutation) -> OffspringSet:
    """All tours whose directed edges each occur in a parent.

    Iterates every union of inheritance cycles and keeps the mixes that
    form a single cycle.  The empty and full unions reproduce the parents,
    so the result always contains both.
    """
    if a.n != b.n:
        raise SizeMismatchError(f"parent sizes differ: {a.n} vs {b.n}")
    n = a.n
    if n > MAX_DIRECTED_N:
        raise ValueError(f"refusing n={n} > {MAX_DIRECTED_N}")
    succ_a = _succ_of(a.elems)
    succ_b = _succ_of(b.elems)
    pred_a = [0] * n
    for i, v in enumerate(succ_a):
        pred_a[v] = i
    seen = [False] * n
    cycle_list: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        cur = pred_a[succ_b[start]]
        while cur != start:
            orbit.append(cur)
            seen[cur] = True
            cur = pred_a[succ_b[cur]]
        if len(orbit) > 1:
            cycle_list.append(orbit)
    m = len(cycle_list)
    if m > MAX_DIRECTED_CYCLES:
        raise ValueError(f"refusing m={m} > {MAX_DIRECTED_CYCLES} cycles")
    counts: dict[tuple[int, ...], int] = {}
    for mask in range(1 << m):
        succ = list(succ_b)
        for k in range(m):
            if mask >> k & 1:
                for s in cycle_list[k]:
                    succ[s] = succ_a[s]
        path = _single_cycle_path(succ)
        if path is not None:
            counts[path] = counts.get(path, 0) + 1
    ordered = sorted(counts)
    return OffspringSet(tuple(ordered), tuple(counts[p] for p in ordered))


def _undirected_edge_set(path: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    n = len(path)
    return frozenset(
        (path[i], path[(i + 1) % n]) if path[i] < path[(i + 1) % n]
        else (path[(i + 1) % n], path[i])
        for i in range(n)
    )


def canonical_undirected(path) -> tuple[int, ...]:
    """Rotate so symbol 0 leads, orient so the second symbol is the smaller
    of its two ring neighbours."""
    path = tuple(path)
    i = path.index(0)
    rotated = path[i:] + path[:i]
    if rotated[1] > rotated[-1]:
        rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
    return rotated


def enumerate_undirected(
    a: Permutation, b: Permutation, respectful: bool = True
) -> OffspringSet:
    """All Hamiltonian cycles of the parents' undirected union graph; with
    ``respectful`` only those containing every shared edge.  This is the
    definitional offspring set for undirected transmission and a superset
    of the directed one."""
    if a.n != b.n:
        raise SizeMismatchError(f"parent sizes differ: {a.n} vs {b.n}")
    n = a.n
    if n < 3:
        raise ValueError("undirected enumeration needs n >= 3")
    if n > MAX_UNDIRECTED_N:
        raise ValueError(f"refusing n={n} > {MAX_UNDIRECTED_N}")
    edges_a = _undirected_edge_set(a.elems)
    edges_b = _undirected_edge_set(b.elems)
    shared = edges_a & edges_b
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(edges_a | edges_b):
        nbrs[u].append(v)
        nbrs[v].append(u)
    found: list[tuple[int, ...]] = []
    path = [0]
    visited = [False] * n
    visited[0] = True

    def extend():
        cur = path[-1]
        if len(path) == n:
            if 0 in nbrs[cur] and path[1] < path[-1]:
                found.append(tuple(path))
            return
        for nxt in nbrs[cur]:
            if not visited[nxt]:
                visited[nxt] = True
                path.append(nxt)
                extend()
                path.pop()
                visited[nxt] = False

    extend()
    kept = []
    for tour in found:
        if respectful and not shared <= _undirected_edge_set(tour):
            continue
        kept.append(tour)
    kept.sort()
    return OffspringSet(tuple(kept), tuple(1 for _ in kept))


def optimal_offspring(
    a: Permutation, b: Permutation, inst: TspInstance
) -> tuple[Permutation, float]:
    """Cheapest member of the directed offspring set, ties broken by
    canonical tour order.  The gold standard for the optimising operator."""
    if inst.n != a.n:
        raise SizeMismatchError(f"instance size {inst.n} vs parent size {a.n}")
    candidates = enumerate_directed(a, b)
    best = min(
        candidates.offspring,
        key=lambda path: (tour_cost(Permutation(path), inst), path),
    )
    return Permutation(best), tour_cost(Permutation(best), inst)
