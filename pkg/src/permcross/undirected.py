"""Crossover of undirected tour edges.

Both parents' edges are pooled into a labelled union multigraph.  Its
unshared edges are split into closed walks that strictly alternate parent
labels; swapping the a-side of a random subset of those walks for the
b-side keeps every node at degree two, and the result is accepted when it
forms a single Hamiltonian cycle.  Edges present in both parents can be
taken out of the pool first ("respectful" mode), which forces every
offspring to keep them.

Unlike the directed operator this does not sample valid offspring
uniformly: outcomes deliverable by many different traversals are
over-represented.  A fresh traversal per trial keeps at least the
traversal choice unbiased.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import CrossoverOutcome, Permutation, RngLike, make_rng
from .errors import (
    DecompositionFailedError,
    SizeMismatchError,
    TrialBudgetExhaustedError,
)

A = 0
B = 1

RESTART_LIMIT = 100
READMIT_FACTOR = 64

# A labelled edge key: (u, v, label) with u < v.
EdgeKey = tuple[int, int, int]


def undirected_edges(p: Permutation) -> set[tuple[int, int]]:
    """Normalised undirected edge set of a tour path (u < v per edge)."""
    elems = p.elems
    n = len(elems)
    out = set()
    for i in range(n):
        u, v = elems[i], elems[(i + 1) % n]
        out.add((u, v) if u < v else (v, u))
    return out


@dataclass(frozen=True)
class UnionGraph:
    """Labelled union multigraph of two parent tours.

    ``edges`` holds the unpruned labelled edges; ``pruned_shared`` the
    undirected edges removed because both parents contain them (one copy
    per parent, recorded once per shared adjacency).  After pruning every
    node has equal a-degree and b-degree (2/2, 1/1 or 0/0).
    """

    n: int
    edges: tuple[EdgeKey, ...]
    pruned_shared: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ABCycle:
    """A closed walk of labelled edges strictly alternating parent labels.

    ``edges[i]`` is (u, v, label) walked from u to v; consecutive edges
    share their middle node and the walk closes back on the first node.
    """

    edges: tuple[EdgeKey, ...]

    def __post_init__(self):
        edges = self.edges
        if len(edges) < 2 or len(edges) % 2 != 0:
            raise ValueError("alternating cycle needs an even length >= 2")
        for i, (u, v, lab) in enumerate(edges):
            nxt = edges[(i + 1) % len(edges)]
            if v != nxt[0]:
                raise ValueError("walk is not closed")
            if lab == nxt[2]:
                raise ValueError("labels do not alternate")

    @property
    def length(self) -> int:
        return len(self.edges)

    def keys(self) -> frozenset[EdgeKey]:
        return frozenset(
            (u, v, lab) if u < v else (v, u, lab) for u, v, lab in self.edges
        )


@dataclass(frozen=True)
class ESet:
    """A union of alternating cycles chosen for exchange."""

    ab_cycles: tuple[ABCycle, ...]

    def keys(self) -> frozenset[EdgeKey]:
        out: set[EdgeKey] = set()
        for cyc in self.ab_cycles:
            out.update(cyc.keys())
        return frozenset(out)


def build_union_graph(
    a: Permutation, b: Permutation, respectful: bool = True
) -> UnionGraph:
    if a.n != b.n:
        raise SizeMismatchError(f"parent sizes differ: {a.n} vs {b.n}")
    n = a.n
    if n < 3:
        raise ValueError("undirected crossover needs n >= 3")
    set_a = undirected_edges(a)
    set_b = undirected_edges(b)
    shared = set_a & set_b if respectful else set()
    edges = [(u, v, A) for (u, v) in sorted(set_a - shared)]
    edges += [(u, v, B) for (u, v) in sorted(set_b - shared)]
    deg = [[0] * n, [0] * n]
    for u, v, lab in edges:
        deg[lab][u] += 1
        deg[lab][v] += 1
    assert all(
        deg[A][u] == deg[B][u] and deg[A][u] <= 2 for u in range(n)
    ), "unbalanced label degrees after pruning"
    return UnionGraph(n, tuple(edges), tuple(sorted(shared)))


def find_ab_cycles(g: UnionGraph, rng: RngLike = None) -> list[ABCycle]:
    """Partition all unpruned edges of ``g`` into alternating cycles.

    Traversal: start at a random node with live edges and follow live edges
    of the alternating label, chosen uniformly.  Whenever the walk arrives
    back at its starting node having used an even number of edges, the
    whole walk is popped as one cycle (it may pass through interior nodes
    more than once).  Equal label degrees guarantee the walk can always
    continue until it closes; if it ever strands edges anyway the whole
    traversal restarts with fresh randomness, and after RESTART_LIMIT
    restarts the failure is surfaced.
    """
    gen, _ = make_rng(rng)
    for _ in range(RESTART_LIMIT):
        result = _try_decompose(g, gen)
        if result is not None:
            return result
    raise DecompositionFailedError(
        f"traversal stranded edges {RESTART_LIMIT} times in a row"
    )


def _try_decompose(g: UnionGraph, gen) -> list[ABCycle] | None:
    n = g.n
    adj: list[list[list[tuple[int, EdgeKey]]]] = [
        [[] for _ in range(n)],
        [[] for _ in range(n)],
    ]
    for key in g.edges:
        u, v, lab = key
        adj[lab][u].append((v, key))
        adj[lab][v].append((u, key))
    remaining = set(g.edges)
    out: list[ABCycle] = []

    def live(node: int, lab: int) -> list[tuple[int, EdgeKey]]:
        return [item for item in adj[lab][node] if item[1] in remaining]

    def pick(options: list[tuple[int, EdgeKey]]) -> tuple[int, EdgeKey]:
        if len(options) == 1:
            return options[0]
        return options[int(gen.integers(len(options)))]

    while remaining:
        starts = sorted({u for u, _, _ in remaining} | {v for _, v, _ in remaining})
        start = starts[int(gen.integers(len(starts)))]
        options = live(start, A) + live(start, B)
        nbr, key = pick(options)
        lab0 = key[2]
        remaining.discard(key)
        nodes = [start, nbr]
        keys = [key]

        while keys:
            cur = nodes[-1]
            if cur == start and len(keys) % 2 == 0:
                out.append(
                    ABCycle(tuple(
                        (nodes[i], nodes[i + 1], keys[i][2])
                        for i in range(len(keys))
                    ))
                )
                break
            need = lab0 ^ (len(keys) % 2)
            options = live(cur, need)
            if not options:
                # Stranded mid-walk: cannot happen with balanced label
                # degrees, so treat it as a failed traversal.
                return None
            nbr, key = pick(options)
            remaining.discard(key)
            nodes.append(nbr)
            keys.append(key)
    return out


def apply_eset(g: UnionGraph, eset: ESet) -> tuple[tuple[int, int], ...]:
    """Edge multiset after the exchange: a-edges outside the chosen cycles,
    b-edges inside them, plus every pruned shared edge.  Always 2-regular
    because each cycle's two sides touch the same nodes."""
    chosen = eset.keys()
    result = [
        (u, v)
        for (u, v, lab) in g.edges
        if (lab == B) == ((u, v, lab) in chosen)
    ]
    result.extend(g.pruned_shared)
    deg = [0] * g.n
    for u, v in result:
        deg[u] += 1
        deg[v] += 1
    assert all(d == 2 for d in deg), "exchange broke 2-regularity"
    return tuple(sorted(result))


def _tour_path(pairs: tuple[tuple[int, int], ...], n: int, gen) -> list[int] | None:
    """Walk a 2-regular edge multiset from node 0; the visited path if it
    is one Hamiltonian cycle, else None.  The first edge out of node 0 is
    picked by coin flip, randomising the orientation of the result."""
    incident: list[list[int]] = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(pairs):
        incident[u].append(eid)
        incident[v].append(eid)
    prev_eid = incident[0][int(gen.integers(2))]
    u, v = pairs[prev_eid]
    cur = v if u == 0 else u
    path = [0]
    while cur != 0:
        path.append(cur)
        if len(path) > n:
            return None
        e1, e2 = incident[cur]
        eid = e2 if e1 == prev_eid else e1
        u, v = pairs[eid]
        cur = v if u == cur else u
        prev_eid = eid
    return path if len(path) == n else None


def crossover(
    a: Permutation,
    b: Permutation,
    rng: RngLike = None,
    *,
    respectful: bool = True,
    avoid_trivial_esets: bool = True,
    max_trials: int | None = None,
) -> CrossoverOutcome:
    """Recombine undirected edges; repeat trials until a Hamiltonian cycle
    forms.  Each trial runs a fresh traversal, draws a uniform subset of
    its alternating cycles (excluding the empty and full subsets while
    ``avoid_trivial_esets`` holds) and tests the exchanged edge set.

    Trivial means the offspring's undirected edge set equals a parent's,
    which also covers a parent tour in reversed orientation.
    """
    g = build_union_graph(a, b, respectful)
    gen, seed = make_rng(rng)
    set_a = undirected_edges(a)
    set_b = undirected_edges(b)
    shared = set(g.pruned_shared)
    if not g.edges:
        # Every edge is shared: the parents are the same undirected tour.
        return CrossoverOutcome(Permutation(a.elems), 1, True, seed, min_ab_cycles=0)
    admit_boundaries = not avoid_trivial_esets
    readmit_after: int | None = None
    min_cycles: int | None = None
    trials = 0
    failures = 0
    while True:
        found = find_ab_cycles(g, gen)
        k = len(found)
        min_cycles = k if min_cycles is None else min(min_cycles, k)
        if readmit_after is None:
            readmit_after = READMIT_FACTOR * max(1, k)
        accepted_draw = True
        bits = gen.integers(0, 2, size=k)
        picked = int(bits.sum())
        if not admit_boundaries and picked in (0, k):
            if k >= 2:
                while picked in (0, k):
                    bits = gen.integers(0, 2, size=k)
                    picked = int(bits.sum())
            else:
                # Single cycle and boundaries excluded: nothing to draw from
                # this traversal; count the trial and retraverse.
                accepted_draw = False
        trials += 1
        if accepted_draw:
            eset = ESet(tuple(found[i] for i in range(k) if bits[i]))
            pairs = apply_eset(g, eset)
            path = _tour_path(pairs, g.n, gen)
            if path is not None:
                offspring = Permutation(tuple(path))
                off_edges = undirected_edges(offspring)
                assert off_edges <= set_a | set_b, "offspring edge not in a parent"
                assert shared <= off_edges, "offspring dropped a shared edge"
                trivial = off_edges == set_a or off_edges == set_b
                return CrossoverOutcome(
                    offspring, trials, trivial, seed, min_ab_cycles=min_cycles
                )
        failures += 1
        if not admit_boundaries and failures >= readmit_after:
            admit_boundaries = True
        if max_trials is not None and trials >= max_trials:
            fallback = CrossoverOutcome(
                Permutation(a.elems),
                trials,
                True,
                seed,
                exhausted=True,
                min_ab_cycles=min_cycles,
            )
            raise TrialBudgetExhaustedError(trials, fallback)
