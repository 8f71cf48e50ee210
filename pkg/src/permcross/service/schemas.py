"""Pydantic request/response models for the HTTP service.

Permutations travel as 1-based symbol lists; all randomness is controlled
by explicit integer seeds so identical requests give identical responses.
"""
from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, Field, model_validator

Mode = Literal["directed", "undirected", "optimal"]


class InstancePayload(BaseModel):
    """Inline edge-cost instance: either coordinates or a full matrix."""

    coords: list[tuple[float, float]] | None = None
    matrix: list[list[float]] | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.coords is None) == (self.matrix is None):
            raise ValueError("provide exactly one of coords or matrix")
        return self


class XoverRequest(BaseModel):
    mode: Mode = "directed"
    parent_a: list[int]
    parent_b: list[int]
    seed: int | None = Field(default=None, ge=0)
    avoid_trivial: bool = True
    respectful: bool = True
    max_trials: int | None = Field(default=None, ge=1)
    max_candidates: int | None = Field(default=None, ge=1)
    instance: InstancePayload | None = None


class XoverResponse(BaseModel):
    mode: Mode
    offspring: list[int]
    trials: int
    trivial: bool
    seed: int | None
    cost: float | None = None
    exhausted: bool = False


class XoverPairRequest(BaseModel):
    parent_a: list[int]
    parent_b: list[int]
    seed: int | None = Field(default=None, ge=0)
    avoid_trivial: bool = True
    max_trials: int | None = Field(default=None, ge=1)


class XoverPairResponse(BaseModel):
    first: XoverResponse
    second: XoverResponse


class OracleRequest(BaseModel):
    mode: Literal["directed", "undirected"] = "directed"
    parent_a: list[int]
    parent_b: list[int]
    respectful: bool = True
    instance: InstancePayload | None = None


class OptimalInfo(BaseModel):
    tour: list[int]
    cost: float


class OracleResponse(BaseModel):
    mode: str
    offspring: list[list[int]]
    counts: list[int]
    optimal: OptimalInfo | None = None


class BenchRequest(BaseModel):
    mode: Mode = "directed"
    n: int = Field(ge=2)
    swaps: Union[int, Literal["random"]] = "random"
    batch: int = Field(ge=1)
    seed: int = Field(ge=0)
    max_trials: int | None = Field(default=None, ge=1)
    width: float = 1.0
    height: float = 1.0
    instance: InstancePayload | None = None
    include_raw: bool = False


class CumulativePoint(BaseModel):
    trials: int
    fraction: float


class BenchResponse(BaseModel):
    mode: Mode
    n: int
    swaps: Union[int, Literal["random"]]
    batch: int
    seed: int
    mean_trials: float
    fraction_nontrivial: float
    trivial_count: int
    max_trials_observed: int
    min_ab_cycles: int | None = None
    cumulative: list[CumulativePoint]
    trial_counts: list[int] | None = None


class SweepRequest(BaseModel):
    mode: Mode = "directed"
    n_values: list[int] = Field(min_length=1)
    swap_values: list[int] = Field(min_length=1)
    batch: int = Field(ge=1)
    seed: int = Field(ge=0)
    max_trials: int | None = Field(default=None, ge=1)


class SweepRow(BaseModel):
    n: int
    best_swaps: int
    max_mean_trials: float


class SweepResponse(BaseModel):
    mode: Mode
    rows: list[SweepRow]
    argmax_swaps_slope: float
    argmax_swaps_r2: float
    peak_trials_slope: float
    peak_trials_r2: float


class HealthResponse(BaseModel):
    status: str = "ok"
