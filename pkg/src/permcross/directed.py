"""Crossover of directed tour edges.

The inheritance units are the cycles of the bijection obtained by following
one parent's successor edge and then walking the other parent's edge
backwards.  Symbols inside one cycle must take their successor from the
same parent, so a candidate offspring is described by a union of cycles
(the symbols inheriting from parent a).  Candidates are drawn uniformly
and rejected until the mixed successor map forms a single tour; the
accepted offspring is then uniform over every tour whose edges all come
from a parent.  The empty and full unions reproduce the parents, so a
valid candidate always exists.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    AdjacencyMap,
    CrossoverOutcome,
    CycleDecomposition,
    Permutation,
    RngLike,
    cycles,
    make_rng,
    to_adjacency,
    walk_cycle,
)
from .errors import SizeMismatchError, TrialBudgetExhaustedError

# Failed-trial multiplier after which parent-equal candidates are re-admitted
# when the caller asked to avoid them; some parent pairs have no nontrivial
# offspring and would otherwise loop forever.
READMIT_FACTOR = 64


@dataclass(frozen=True)
class ChiSelection:
    """A union of inheritance cycles, by index into a decomposition.

    Symbols in the chosen cycles take their successor from parent a, all
    other symbols from parent b.  Whole cycles only: a selection can never
    split a cycle.
    """

    chosen: frozenset[int]
    decomposition: CycleDecomposition

    def __post_init__(self):
        m = len(self.decomposition.cycles)
        for idx in self.chosen:
            if not 0 <= idx < m:
                raise ValueError(f"cycle index {idx} out of range 0..{m - 1}")

    def symbols(self) -> set[int]:
        out: set[int] = set()
        for idx in self.chosen:
            out.update(self.decomposition.cycles[idx])
        return out

    def complement(self) -> "ChiSelection":
        m = len(self.decomposition.cycles)
        return ChiSelection(frozenset(range(m)) - self.chosen, self.decomposition)


def derive_inheritance_cycles(
    a: Permutation, b: Permutation
) -> tuple[AdjacencyMap, AdjacencyMap, CycleDecomposition]:
    """Successor maps of both parents plus their linked-inheritance cycles.

    The decomposition is that of the bijection sending i to the symbol
    whose a-successor equals i's b-successor.  Its fixed points are exactly
    the symbols where the parents share a directed edge; those are counted
    but not listed.
    """
    if a.n != b.n:
        raise SizeMismatchError(f"parent sizes differ: {a.n} vs {b.n}")
    if a.n < 2:
        raise ValueError("crossover needs n >= 2")
    e_a = to_adjacency(a)
    e_b = to_adjacency(b)
    n = a.n
    pred_a = [0] * n
    for i, v in enumerate(e_a.succ):
        pred_a[v] = i
    pi = tuple(pred_a[e_b.succ[i]] for i in range(n))
    return e_a, e_b, cycles(pi)


def build_candidate(
    e_a: AdjacencyMap, e_b: AdjacencyMap, chi: ChiSelection
) -> AdjacencyMap:
    """Mixed successor map: a-successors on the selected cycles' symbols,
    b-successors elsewhere.  Always a bijection because selections are
    unions of whole cycles (the constructor re-checks this)."""
    if e_a.n != e_b.n or chi.decomposition.n != e_a.n:
        raise SizeMismatchError("selection does not match the successor maps")
    succ = list(e_b.succ)
    succ_a = e_a.succ
    for s in chi.symbols():
        succ[s] = succ_a[s]
    return AdjacencyMap(tuple(succ))


def _check_offspring(succ, succ_a, succ_b):
    # Transmission and respect are guaranteed by construction; keep them
    # checked on every accepted offspring.
    assert all(
        s == sa or s == sb for s, sa, sb in zip(succ, succ_a, succ_b)
    ), "offspring edge not present in either parent"
    assert all(
        s == sa for s, sa, sb in zip(succ, succ_a, succ_b) if sa == sb
    ), "offspring dropped a shared edge"


def crossover(
    a: Permutation,
    b: Permutation,
    rng: RngLike = None,
    *,
    avoid_trivial: bool = True,
    max_trials: int | None = None,
) -> CrossoverOutcome:
    """Recombine directed edges; repeat candidate draws until a tour forms.

    With ``avoid_trivial`` the parent-equal candidates (empty/full cycle
    unions) are excluded before the validity walk; they are re-admitted
    after READMIT_FACTOR * m failed trials, or immediately when no other
    candidate exists, so pairs without a nontrivial recombination fall
    back to a parent copy instead of spinning.  ``max_trials`` raises
    TrialBudgetExhaustedError carrying a parent-copy fallback.
    """
    e_a, e_b, decomp = derive_inheritance_cycles(a, b)
    gen, seed = make_rng(rng)
    m = len(decomp.cycles)
    if m == 0:
        return CrossoverOutcome(Permutation(a.elems), 1, True, seed)
    succ_a = list(e_a.succ)
    succ_b = list(e_b.succ)
    cycle_syms = decomp.cycles
    admit_boundaries = not avoid_trivial or m == 1
    readmit_after = READMIT_FACTOR * m
    trials = 0
    failures = 0
    while True:
        bits = gen.integers(0, 2, size=m)
        picked = int(bits.sum())
        if not admit_boundaries and picked in (0, m):
            continue  # excluded before the validity walk; not a trial
        succ = list(succ_b)
        for k in range(m):
            if bits[k]:
                for s in cycle_syms[k]:
                    succ[s] = succ_a[s]
        trials += 1
        path = walk_cycle(succ)
        if path is not None:
            _check_offspring(succ, succ_a, succ_b)
            trivial = succ == succ_a or succ == succ_b
            return CrossoverOutcome(Permutation(tuple(path)), trials, trivial, seed)
        failures += 1
        if not admit_boundaries and failures >= readmit_after:
            admit_boundaries = True
        if max_trials is not None and trials >= max_trials:
            fallback = CrossoverOutcome(
                Permutation(a.elems), trials, True, seed, exhausted=True
            )
            raise TrialBudgetExhaustedError(trials, fallback)


def crossover_pair(
    a: Permutation,
    b: Permutation,
    rng: RngLike = None,
    *,
    avoid_trivial: bool = True,
    max_trials: int | None = None,
) -> tuple[CrossoverOutcome, CrossoverOutcome]:
    """Like crossover, but candidates are drawn until the selection and its
    complement both form tours, yielding two complementary offspring."""
    e_a, e_b, decomp = derive_inheritance_cycles(a, b)
    gen, seed = make_rng(rng)
    m = len(decomp.cycles)
    if m == 0:
        first = CrossoverOutcome(Permutation(a.elems), 1, True, seed)
        second = CrossoverOutcome(Permutation(a.elems), 1, True, seed)
        return first, second
    succ_a = list(e_a.succ)
    succ_b = list(e_b.succ)
    cycle_syms = decomp.cycles
    admit_boundaries = not avoid_trivial or m == 1
    readmit_after = READMIT_FACTOR * m
    trials = 0
    failures = 0
    while True:
        bits = gen.integers(0, 2, size=m)
        picked = int(bits.sum())
        if not admit_boundaries and picked in (0, m):
            continue
        succ = list(succ_b)
        co_succ = list(succ_b)
        for k in range(m):
            syms = cycle_syms[k]
            if bits[k]:
                for s in syms:
                    succ[s] = succ_a[s]
            else:
                for s in syms:
                    co_succ[s] = succ_a[s]
        trials += 1
        path = walk_cycle(succ)
        co_path = walk_cycle(co_succ) if path is not None else None
        if path is not None and co_path is not None:
            _check_offspring(succ, succ_a, succ_b)
            _check_offspring(co_succ, succ_a, succ_b)
            first = CrossoverOutcome(
                Permutation(tuple(path)),
                trials,
                succ == succ_a or succ == succ_b,
                seed,
            )
            second = CrossoverOutcome(
                Permutation(tuple(co_path)),
                trials,
                co_succ == succ_a or co_succ == succ_b,
                seed,
            )
            return first, second
        failures += 1
        if not admit_boundaries and failures >= readmit_after:
            admit_boundaries = True
        if max_trials is not None and trials >= max_trials:
            fallback = CrossoverOutcome(
                Permutation(a.elems), trials, True, seed, exhausted=True
            )
            raise TrialBudgetExhaustedError(trials, fallback)
