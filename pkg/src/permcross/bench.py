"""Batch crossover experiments and their summary statistics.

Measurement protocol per batch item: draw parent a fresh at random, derive
parent b by a fixed number of random position swaps (or draw it fresh too,
for independent parents), run one crossover and record the trial count and
whether the outcome differed from both parents.  Parent-equal candidates
are admitted during measurement so that pairs with no nontrivial
recombination do not bias the statistics.

Each batch item runs on its own RNG stream spawned deterministically from
the config seed, so records are bit-identical across runs and independent
of execution order.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import directed, optimizing, undirected
from .core import mutate_swaps, random_permutation
from .errors import TrialBudgetExhaustedError
from .tsp import TspInstance, random_euclidean_instance

MODES = ("directed", "undirected", "optimal")
RANDOM_PARENTS = "random"

STATS_COLUMNS = ("mode", "n", "swaps", "batch", "seed", "mean_trials", "fraction_nontrivial")
CUMULATIVE_COLUMNS = ("mode", "n", "swaps", "N", "fraction")

# Sentinel mixed into cell seeds for independent random parents.
_RANDOM_SWAPS_CODE = 0xFFFFFFFF


@dataclass(frozen=True)
class ExperimentConfig:
    """One data point: a batch of crossovers at fixed mode, size and
    dissimilarity.  ``swaps=None`` means independent random parents."""

    mode: str
    n: int
    swaps: int | None
    batch: int
    seed: int
    max_trials: int | None = None
    width: float = 1.0
    height: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.swaps is not None and self.swaps < 0:
            raise ValueError("swaps must be >= 0 or None")
        if self.n < (3 if self.mode == "undirected" else 2):
            raise ValueError(f"n too small for mode {self.mode}")
        if self.mode == "optimal" and (self.width <= 0 or self.height <= 0):
            raise ValueError("instance dimensions must be positive")

    @property
    def swaps_label(self) -> str:
        return RANDOM_PARENTS if self.swaps is None else str(self.swaps)


@dataclass(frozen=True)
class StatRecord:
    config: ExperimentConfig
    mean_trials: float
    fraction_nontrivial: float
    trivial_count: int
    max_trials_observed: int
    cumulative: tuple[tuple[int, float], ...]
    trial_counts: tuple[int, ...] | None = None
    trivial_flags: tuple[bool, ...] | None = None
    min_ab_cycles: int | None = None


@dataclass(frozen=True)
class VarietyEstimate:
    """Conservative lower bound on the number of distinct possible
    offspring: 2^(fewest alternating cycles seen) spread over the worst
    trial count."""

    min_ab_cycles: int
    max_trials: int
    lower_bound: float


@dataclass(frozen=True)
class FitReport:
    """Per-size worst-case dissimilarity and trial count, with zero-
    intercept linear fits of both against problem size."""

    mode: str
    rows: tuple[tuple[int, int, float], ...]  # (n, argmax swaps, max mean trials)
    argmax_swaps_slope: float
    argmax_swaps_r2: float
    peak_trials_slope: float
    peak_trials_r2: float


def cell_seed(base_seed: int, n: int, swaps: int | None) -> int:
    """Deterministic per-cell seed for grid runs; stable across platforms."""
    code = _RANDOM_SWAPS_CODE if swaps is None else int(swaps)
    ss = np.random.SeedSequence([int(base_seed), int(n), code])
    hi, lo = ss.generate_state(2, dtype=np.uint32)
    return int(hi) << 32 | int(lo)


def run_batch(
    cfg: ExperimentConfig,
    instance: TspInstance | None = None,
    keep_raw: bool = False,
) -> StatRecord:
    """Run ``cfg.batch`` independent crossovers and aggregate.

    Optimal mode costs come from ``instance`` when given (its size must
    match), otherwise from a random Euclidean instance derived from the
    config seed.  Trial-budget errors are recorded as trivial outcomes at
    the budget, matching how capped runs are scored.
    """
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.batch + 1)
    inst = instance
    if cfg.mode == "optimal":
        if inst is None:
            inst = random_euclidean_instance(
                cfg.n, cfg.width, cfg.height,
                np.random.Generator(np.random.PCG64(streams[-1])),
            )
        if inst.n != cfg.n:
            raise ValueError(f"instance size {inst.n} does not match n={cfg.n}")
    trials: list[int] = []
    trivial: list[bool] = []
    min_cycles: int | None = None
    for stream in streams[: cfg.batch]:
        gen = np.random.Generator(np.random.PCG64(stream))
        parent_a = random_permutation(cfg.n, gen)
        if cfg.swaps is None:
            parent_b = random_permutation(cfg.n, gen)
        else:
            parent_b = mutate_swaps(parent_a, cfg.swaps, gen)
        try:
            if cfg.mode == "directed":
                out = directed.crossover(
                    parent_a, parent_b, gen,
                    avoid_trivial=False, max_trials=cfg.max_trials,
                )
            elif cfg.mode == "undirected":
                out = undirected.crossover(
                    parent_a, parent_b, gen,
                    respectful=True, avoid_trivial_esets=False,
                    max_trials=cfg.max_trials,
                )
            else:
                out = optimizing.optimal_crossover(
                    parent_a, parent_b, inst.matrix,
                    max_candidates=cfg.max_trials or optimizing.DEFAULT_CANDIDATE_BUDGET,
                )
        except TrialBudgetExhaustedError as exc:
            out = exc.fallback
        trials.append(out.trials)
        trivial.append(out.trivial)
        if out.min_ab_cycles is not None:
            min_cycles = (
                out.min_ab_cycles
                if min_cycles is None
                else min(min_cycles, out.min_ab_cycles)
            )
    curve = cumulative_curve(trials, trivial)
    nontrivial = sum(1 for t in trivial if not t)
    return StatRecord(
        config=cfg,
        mean_trials=float(np.mean(trials)),
        fraction_nontrivial=nontrivial / cfg.batch,
        trivial_count=cfg.batch - nontrivial,
        max_trials_observed=max(trials),
        cumulative=curve,
        trial_counts=tuple(trials) if keep_raw else None,
        trivial_flags=tuple(trivial) if keep_raw else None,
        min_ab_cycles=min_cycles,
    )


def cumulative_curve(
    trial_counts: Sequence[int], trivial_flags: Sequence[bool]
) -> tuple[tuple[int, float], ...]:
    """For each trial cap N up to the maximum observed, the fraction of
    crossovers that finished with a nontrivial outcome within N trials.
    Nondecreasing; its last value equals the nontrivial fraction."""
    if not trial_counts:
        raise ValueError("no raw data")
    total = len(trial_counts)
    highest = max(trial_counts)
    finished = np.zeros(highest + 1, dtype=np.int64)
    for t, triv in zip(trial_counts, trivial_flags):
        if not triv:
            finished[t] += 1
    fractions = np.cumsum(finished)[1:] / total
    return tuple((i + 1, float(f)) for i, f in enumerate(fractions))


def fit_through_origin(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of y = s*x and its uncentered r^2."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    slope = float((xs * ys).sum() / (xs * xs).sum())
    residual = ys - slope * xs
    total = float((ys * ys).sum())
    r2 = 1.0 if total == 0 else 1.0 - float((residual * residual).sum()) / total
    return slope, r2


def sweep_and_fit(
    mode: str,
    n_values: Sequence[int],
    swap_values: Sequence[int],
    batch: int,
    seed: int,
    max_trials: int | None = None,
) -> FitReport:
    """For each size, find the swap level maximising mean trials, then fit
    both the worst-case swap level and the worst-case mean trials against
    size with zero-intercept regressions."""
    if not n_values or not swap_values:
        raise ValueError("empty grid")
    rows: list[tuple[int, int, float]] = []
    for n in n_values:
        best_swaps = None
        best_mean = -1.0
        for swaps in swap_values:
            cfg = ExperimentConfig(
                mode=mode, n=n, swaps=swaps, batch=batch,
                seed=cell_seed(seed, n, swaps), max_trials=max_trials,
            )
            record = run_batch(cfg)
            if record.mean_trials > best_mean:
                best_mean = record.mean_trials
                best_swaps = swaps
        rows.append((n, best_swaps, best_mean))
    ns = [r[0] for r in rows]
    swaps_slope, swaps_r2 = fit_through_origin(ns, [r[1] for r in rows])
    peak_slope, peak_r2 = fit_through_origin(ns, [r[2] for r in rows])
    return FitReport(
        mode=mode,
        rows=tuple(rows),
        argmax_swaps_slope=swaps_slope,
        argmax_swaps_r2=swaps_r2,
        peak_trials_slope=peak_slope,
        peak_trials_r2=peak_r2,
    )


def ab_cycle_variety_estimate(record: StatRecord) -> VarietyEstimate:
    if record.min_ab_cycles is None:
        raise ValueError("record has no alternating-cycle counts "
                         "(undirected batches record them)")
    bound = 2.0 ** record.min_ab_cycles / max(1, record.max_trials_observed)
    return VarietyEstimate(
        min_ab_cycles=record.min_ab_cycles,
        max_trials=record.max_trials_observed,
        lower_bound=bound,
    )


def write_stats_csv(records: Sequence[StatRecord], path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(STATS_COLUMNS)
        for rec in records:
            cfg = rec.config
            writer.writerow([
                cfg.mode, cfg.n, cfg.swaps_label, cfg.batch, cfg.seed,
                repr(rec.mean_trials), repr(rec.fraction_nontrivial),
            ])


def write_cumulative_csv(records: Sequence[StatRecord], path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(CUMULATIVE_COLUMNS)
        for rec in records:
            cfg = rec.config
            for cap, fraction in rec.cumulative:
                writer.writerow([cfg.mode, cfg.n, cfg.swaps_label, cap, repr(fraction)])
