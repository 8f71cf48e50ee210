"""Cyclic-permutation arithmetic and tour representations.

Symbols are 0-based ints everywhere inside the package; text and wire
formats use 1-based symbols and convert at the boundary.  A tour is held
either as a path (the visiting order, which is rotation-redundant: n paths
describe the same tour) or as a successor map (exactly one bijection per
tour; a bijection is a tour iff it consists of a single cycle).

Composition is left-to-right: ``compose(a, b)(i) == b(a(i))``.
"""
from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import MultipleCyclesError, SizeMismatchError

RngLike = Union[np.random.Generator, int, None]


def make_rng(rng: RngLike = None) -> tuple[np.random.Generator, int | None]:
    """Normalise an RNG argument to a Generator plus a recordable seed.

    An int seeds a fresh PCG64 stream and is echoed back; None draws a
    fresh 63-bit seed so the caller can still reproduce the run.  Anything
    else (normally a Generator) is passed through unchanged; seed
    provenance is then the caller's concern, so the echoed seed is None.
    """
    if rng is None:
        seed = secrets.randbits(63)
        return np.random.Generator(np.random.PCG64(seed)), seed
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        return np.random.Generator(np.random.PCG64(seed)), seed
    return rng, None


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0..n-1} in path form: ``elems[i]`` is the symbol
    visited at position i.  Interpreted cyclically, position n wraps to 0."""

    elems: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(int(v) for v in self.elems)
        object.__setattr__(self, "elems", elems)
        n = len(elems)
        if n == 0:
            raise ValueError("empty permutation")
        seen = [False] * n
        for v in elems:
            if not 0 <= v < n:
                raise ValueError(f"symbol {v} out of range 0..{n - 1}")
            if seen[v]:
                raise ValueError(f"duplicate symbol {v}")
            seen[v] = True

    @property
    def n(self) -> int:
        return len(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __call__(self, i: int) -> int:
        return self.elems[i]

    @classmethod
    def from_one_based(cls, values: Sequence[int]) -> "Permutation":
        return cls(tuple(int(v) - 1 for v in values))

    def to_one_based(self) -> list[int]:
        return [v + 1 for v in self.elems]


@dataclass(frozen=True)
class AdjacencyMap:
    """A bijection mapping each symbol to its successor in a tour.

    Unlike the path form this has no starting-point redundancy, but only
    single-cycle bijections correspond to tours: among all bijections on n
    symbols, a fraction 1/n do.
    """

    succ: tuple[int, ...]

    def __post_init__(self):
        succ = tuple(int(v) for v in self.succ)
        object.__setattr__(self, "succ", succ)
        n = len(succ)
        if n == 0:
            raise ValueError("empty successor map")
        seen = [False] * n
        for v in succ:
            if not 0 <= v < n:
                raise ValueError(f"successor {v} out of range 0..{n - 1}")
            if seen[v]:
                raise ValueError(f"successor {v} appears twice")
            seen[v] = True

    @property
    def n(self) -> int:
        return len(self.succ)

    def __call__(self, i: int) -> int:
        return self.succ[i]

    def is_single_cycle(self) -> bool:
        return walk_cycle(self.succ) is not None


@dataclass(frozen=True)
class CycleDecomposition:
    """Non-singleton cycles of a bijection, in canonical form.

    Each cycle is stored in orbit order starting from its smallest symbol;
    cycles are sorted by that smallest symbol.  Fixed points are counted
    but not listed (they carry no inheritance choice).
    """

    cycles: tuple[tuple[int, ...], ...]
    singleton_count: int
    n: int

    def __post_init__(self):
        covered = self.singleton_count
        seen: set[int] = set()
        for cyc in self.cycles:
            if len(cyc) < 2:
                raise ValueError("listed cycles must have size >= 2")
            if seen & set(cyc):
                raise ValueError("cycles are not disjoint")
            seen.update(cyc)
            covered += len(cyc)
        if covered != self.n:
            raise ValueError(
                f"cycles plus singletons cover {covered} of {self.n} symbols"
            )


@dataclass(frozen=True)
class CrossoverOutcome:
    """Result of one crossover call.

    ``trials`` counts candidate draws that went through a validity check.
    ``trivial`` is true when the offspring's successor map (undirected
    operators: edge set) equals a parent's.  ``seed`` echoes the integer
    seed when the operator was given one (or drew one itself); it is None
    when the caller supplied its own Generator.  ``cost`` is filled by the
    optimising operator, ``exhausted`` marks fallback outcomes produced
    after a trial or candidate budget ran out, and ``min_ab_cycles`` is the
    smallest alternating-cycle count seen by the undirected operator.
    """

    offspring: Permutation
    trials: int
    trivial: bool
    seed: int | None = None
    cost: float | None = None
    exhausted: bool = False
    min_ab_cycles: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(tuple(range(n)))


def rotation(n: int) -> Permutation:
    """The map i -> i+1 (mod n), i.e. the successor map of the identity path."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(tuple((i + 1) % n for i in range(n)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Left-to-right composition: result(i) = b(a(i))."""
    if a.n != b.n:
        raise SizeMismatchError(f"cannot compose sizes {a.n} and {b.n}")
    be = b.elems
    return Permutation(tuple(be[v] for v in a.elems))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.n
    for i, v in enumerate(a.elems):
        inv[v] = i
    return Permutation(tuple(inv))


def to_adjacency(sigma: Permutation) -> AdjacencyMap:
    """Successor map of a tour path, including the wraparound edge.

    Equivalent to conjugating the rotation map by the path permutation;
    consequently every rotation of the same path yields the same map.
    """
    elems = sigma.elems
    n = len(elems)
    succ = [0] * n
    for i in range(n):
        succ[elems[i]] = elems[(i + 1) % n]
    return AdjacencyMap(tuple(succ))


def from_adjacency(e: AdjacencyMap) -> Permutation:
    """Path form of a successor map, starting the walk at symbol 0.

    Raises MultipleCyclesError when the walk closes early, i.e. the map
    does not describe a tour.
    """
    succ = e.succ
    n = len(succ)
    path = [0] * n
    cur = 0
    for i in range(n):
        path[i] = cur
        cur = succ[cur]
        if cur == 0:
            if i == n - 1:
                return Permutation(tuple(path))
            raise MultipleCyclesError(i + 1, n)
    raise MultipleCyclesError(n, n)  # unreachable for a bijection


def walk_cycle(succ: Sequence[int]) -> list[int] | None:
    """Walk ``succ`` from symbol 0; the visited path if it is a single
    cycle, else None.  Used as the validity check for candidate tours."""
    n = len(succ)
    path = [0] * n
    cur = 0
    for i in range(n):
        path[i] = cur
        cur = succ[cur]
        if cur == 0:
            return path if i == n - 1 else None
    return None


def cycles(pi) -> CycleDecomposition:
    """Cycle decomposition of a bijection.

    Accepts a Permutation, an AdjacencyMap, or a plain sequence mapping
    index to image.  Scanning symbols in ascending order makes each orbit
    start at its smallest element, giving the canonical form for free.
    """
    if isinstance(pi, Permutation):
        mapping = pi.elems
    elif isinstance(pi, AdjacencyMap):
        mapping = pi.succ
    else:
        mapping = tuple(int(v) for v in pi)
    n = len(mapping)
    seen = [False] * n
    found: list[tuple[int, ...]] = []
    singletons = 0
    for start in range(n):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        cur = mapping[start]
        while cur != start:
            orbit.append(cur)
            seen[cur] = True
            cur = mapping[cur]
        if len(orbit) == 1:
            singletons += 1
        else:
            found.append(tuple(orbit))
    return CycleDecomposition(tuple(found), singletons, n)


def random_permutation(n: int, rng: RngLike = None) -> Permutation:
    """Uniformly random permutation of {0..n-1} (unbiased shuffle)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen, _ = make_rng(rng)
    return Permutation(tuple(int(v) for v in gen.permutation(n)))


def mutate_swaps(p: Permutation, k: int, rng: RngLike = None) -> Permutation:
    """Apply k independent transpositions of path positions.

    Each transposition swaps the symbols at two distinct uniformly-random
    positions; successive swaps are drawn independently and may overlap or
    cancel each other.
    """
    if k < 0:
        raise ValueError("swap count must be >= 0")
    if k == 0:
        return p
    n = p.n
    if n < 2:
        raise ValueError("need n >= 2 to swap positions")
    gen, _ = make_rng(rng)
    elems = list(p.elems)
    for _ in range(k):
        i = int(gen.integers(n))
        j = int(gen.integers(n - 1))
        if j >= i:
            j += 1
        elems[i], elems[j] = elems[j], elems[i]
    return Permutation(tuple(elems))
