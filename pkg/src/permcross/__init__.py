"""Edge-transmitting crossover of cyclic permutations.

Operators: directed (uniform over all valid offspring), undirected
(transmissive, optionally respectful of shared edges) and optimal
(cheapest valid offspring for an additive edge cost).  Backed by
brute-force oracles for small sizes and a benchmark harness; exposed over
HTTP (permcross.service) and a CLI (permcross.cli).
"""

from .core import (
    AdjacencyMap,
    CrossoverOutcome,
    CycleDecomposition,
    Permutation,
    compose,
    cycles,
    from_adjacency,
    identity,
    inverse,
    make_rng,
    mutate_swaps,
    random_permutation,
    rotation,
    to_adjacency,
)
from .directed import (
    ChiSelection,
    build_candidate,
    crossover,
    crossover_pair,
    derive_inheritance_cycles,
)
from .errors import (
    DecompositionFailedError,
    MultipleCyclesError,
    ParseError,
    PermcrossError,
    SizeMismatchError,
    TrialBudgetExhaustedError,
)
from .optimizing import CandidateStream, CycleCost, cycle_costs, optimal_crossover
from .tsp import TspInstance, random_euclidean_instance, tour_cost
from .undirected import (
    ABCycle,
    ESet,
    UnionGraph,
    apply_eset,
    build_union_graph,
    find_ab_cycles,
)
from .undirected import crossover as undirected_crossover

__version__ = "0.1.0"

__all__ = [
    "ABCycle",
    "AdjacencyMap",
    "CandidateStream",
    "ChiSelection",
    "CrossoverOutcome",
    "CycleCost",
    "CycleDecomposition",
    "DecompositionFailedError",
    "ESet",
    "MultipleCyclesError",
    "ParseError",
    "PermcrossError",
    "Permutation",
    "SizeMismatchError",
    "TrialBudgetExhaustedError",
    "TspInstance",
    "UnionGraph",
    "apply_eset",
    "build_candidate",
    "build_union_graph",
    "compose",
    "crossover",
    "crossover_pair",
    "cycle_costs",
    "cycles",
    "derive_inheritance_cycles",
    "find_ab_cycles",
    "from_adjacency",
    "identity",
    "inverse",
    "make_rng",
    "mutate_swaps",
    "optimal_crossover",
    "random_euclidean_instance",
    "random_permutation",
    "rotation",
    "to_adjacency",
    "tour_cost",
    "undirected_crossover",
    "__version__",
]
