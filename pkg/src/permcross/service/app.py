"""FastAPI facade over the crossover engine.

Thin and stateless: every endpoint converts the 1-based wire format,
delegates to the library and converts back.  Domain errors map to
HTTP 400 with a machine-readable ``detail.code``; exhausted trial budgets
are not errors but flagged fallback outcomes, so clients can both use the
fallback and signal the condition.
"""
from __future__ import annotations

import secrets

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import bench, directed, oracle, optimizing, undirected
from ..core import Permutation
from ..errors import SizeMismatchError, TrialBudgetExhaustedError
from ..tsp import TspInstance, euclidean_matrix
from .schemas import (
    BenchRequest,
    BenchResponse,
    CumulativePoint,
    HealthResponse,
    InstancePayload,
    OptimalInfo,
    OracleRequest,
    OracleResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
    XoverPairRequest,
    XoverPairResponse,
    XoverRequest,
    XoverResponse,
)


def _fail(code: str, message: str, status: int = 400):
    raise HTTPException(status_code=status, detail={"code": code, "message": message})


def _perm(values: list[int], name: str) -> Permutation:
    try:
        return Permutation.from_one_based(values)
    except ValueError as exc:
        _fail("invalid_permutation", f"{name}: {exc}")


def _parents(parent_a: list[int], parent_b: list[int]) -> tuple[Permutation, Permutation]:
    a = _perm(parent_a, "parent_a")
    b = _perm(parent_b, "parent_b")
    if a.n != b.n:
        _fail("size_mismatch", f"parent sizes differ: {a.n} vs {b.n}")
    return a, b


def _instance(payload: InstancePayload, n: int) -> TspInstance:
    try:
        if payload.coords is not None:
            coords = np.array(payload.coords, dtype=float)
            inst = TspInstance(euclidean_matrix(coords), coords)
        else:
            inst = TspInstance(np.array(payload.matrix, dtype=float))
    except ValueError as exc:
        _fail("invalid_instance", str(exc))
    if inst.n != n:
        _fail("size_mismatch", f"instance size {inst.n} vs permutation size {n}")
    return inst


def _seed(seed: int | None) -> int:
    return secrets.randbits(63) if seed is None else seed


def _outcome_response(mode: str, out) -> XoverResponse:
    return XoverResponse(
        mode=mode,
        offspring=out.offspring.to_one_based(),
        trials=out.trials,
        trivial=out.trivial,
        seed=out.seed,
        cost=out.cost,
        exhausted=out.exhausted,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="permcross",
        description="Edge-transmitting crossover of cyclic permutations",
        version="0.1.0",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.post("/xover", response_model=XoverResponse)
    def xover(req: XoverRequest) -> XoverResponse:
        a, b = _parents(req.parent_a, req.parent_b)
        seed = _seed(req.seed)
        try:
            if req.mode == "directed":
                out = directed.crossover(
                    a, b, seed,
                    avoid_trivial=req.avoid_trivial, max_trials=req.max_trials,
                )
            elif req.mode == "undirected":
                out = undirected.crossover(
                    a, b, seed,
                    respectful=req.respectful,
                    avoid_trivial_esets=req.avoid_trivial,
                    max_trials=req.max_trials,
                )
            else:
                if req.instance is None:
                    _fail("missing_instance", "optimal mode needs an instance")
                inst = _instance(req.instance, a.n)
                out = optimizing.optimal_crossover(
                    a, b, inst.matrix,
                    max_candidates=req.max_candidates
                    or optimizing.DEFAULT_CANDIDATE_BUDGET,
                )
        except TrialBudgetExhaustedError as exc:
            out = exc.fallback
        except (SizeMismatchError, ValueError) as exc:
            _fail("invalid_request", str(exc))
        resp = _outcome_response(req.mode, out)
        if req.mode == "optimal":
            resp.seed = req.seed
        return resp

    @app.post("/xover/pair", response_model=XoverPairResponse)
    def xover_pair(req: XoverPairRequest) -> XoverPairResponse:
        a, b = _parents(req.parent_a, req.parent_b)
        seed = _seed(req.seed)
        try:
            first, second = directed.crossover_pair(
                a, b, seed,
                avoid_trivial=req.avoid_trivial, max_trials=req.max_trials,
            )
        except TrialBudgetExhaustedError as exc:
            first = second = exc.fallback
        except ValueError as exc:
            _fail("invalid_request", str(exc))
        return XoverPairResponse(
            first=_outcome_response("directed", first),
            second=_outcome_response("directed", second),
        )

    @app.post("/oracle", response_model=OracleResponse)
    def run_oracle(req: OracleRequest) -> OracleResponse:
        a, b = _parents(req.parent_a, req.parent_b)
        try:
            if req.mode == "directed":
                offspring_set = oracle.enumerate_directed(a, b)
            else:
                offspring_set = oracle.enumerate_undirected(a, b, req.respectful)
        except ValueError as exc:
            _fail("oracle_refused", str(exc))
        optimal = None
        if req.instance is not None and req.mode == "directed":
            inst = _instance(req.instance, a.n)
            tour, cost = oracle.optimal_offspring(a, b, inst)
            optimal = OptimalInfo(tour=tour.to_one_based(), cost=cost)
        return OracleResponse(
            mode=req.mode,
            offspring=[[v + 1 for v in path] for path in offspring_set.offspring],
            counts=list(offspring_set.counts),
            optimal=optimal,
        )

    @app.post("/bench/run", response_model=BenchResponse)
    def bench_run(req: BenchRequest) -> BenchResponse:
        swaps = None if req.swaps == "random" else int(req.swaps)
        instance = None
        try:
            cfg = bench.ExperimentConfig(
                mode=req.mode, n=req.n, swaps=swaps, batch=req.batch,
                seed=req.seed, max_trials=req.max_trials,
                width=req.width, height=req.height,
            )
            if req.instance is not None:
                instance = _instance(req.instance, req.n)
            record = bench.run_batch(cfg, instance=instance, keep_raw=req.include_raw)
        except ValueError as exc:
            _fail("invalid_config", str(exc))
        return BenchResponse(
            mode=req.mode,
            n=req.n,
            swaps=req.swaps,
            batch=req.batch,
            seed=req.seed,
            mean_trials=record.mean_trials,
            fraction_nontrivial=record.fraction_nontrivial,
            trivial_count=record.trivial_count,
            max_trials_observed=record.max_trials_observed,
            min_ab_cycles=record.min_ab_cycles,
            cumulative=[
                CumulativePoint(trials=t, fraction=f) for t, f in record.cumulative
            ],
            trial_counts=list(record.trial_counts) if record.trial_counts else None,
        )

    @app.post("/bench/sweep", response_model=SweepResponse)
    def bench_sweep(req: SweepRequest) -> SweepResponse:
        try:
            report = bench.sweep_and_fit(
                req.mode, req.n_values, req.swap_values,
                req.batch, req.seed, req.max_trials,
            )
        except ValueError as exc:
            _fail("invalid_config", str(exc))
        return SweepResponse(
            mode=report.mode,
            rows=[
                SweepRow(n=n, best_swaps=s, max_mean_trials=m)
                for n, s, m in report.rows
            ],
            argmax_swaps_slope=report.argmax_swaps_slope,
            argmax_swaps_r2=report.argmax_swaps_r2,
            peak_trials_slope=report.peak_trials_slope,
            peak_trials_r2=report.peak_trials_r2,
        )

    return app


app = create_app()
