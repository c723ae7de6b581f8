"""Synthetic score landscapes: a controllable stand-in for a frozen model.

A landscape scores a demo set P on a query q as

    AGG_{i in P} A[i, q]  +  lam * pairmean_{i<j in P} B[i, j]  +  sigma * eta

where A holds per-demo base utilities drawn uniform in [0.2, 0.6] (optionally
with one planted high-value demo on a fraction of query columns), B is a
symmetric zero-diagonal interaction matrix uniform in [-1, 1], and eta is
deterministic pseudo-noise in [-1, 1] keyed by (canonical demo set, query,
seed).  With lam = sigma = 0 and AGG = sum the landscape is exactly modular,
which makes greedy provably optimal and usable as a correctness oracle.

Demo ids occupy [0, n_demos); the dedicated query block occupies
[n_demos, n_demos + n_queries).  Any id may serve as a query (pool members
act as validation queries in the split protocol and in loocv mode), so A has
one column per global id; demo members must come from the demo block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from ._hash import MASK64, TAG_BASE, TAG_PAIR, TAG_PLANT, shuffled_indices
from .core import DemoSet, SampleId, Utility
from .errors import ConfigError, IndexOutOfRange
from .oracle import Evaluator

BASE_LO = 0.2
BASE_HI = 0.6

AGGREGATORS = ("sum", "mean")


@dataclass(frozen=True)
class PlantedSpec:
    """One demo raised to high_value on a seeded fraction of query columns."""

    demo_index: int
    gamma: float
    high_value: float = 0.9


@dataclass(frozen=True)
class LandscapeParams:
    n_demos: int
    n_queries: int
    seed: int
    aggregator: str = "sum"
    interaction_scale: float = 0.0
    noise_scale: float = 0.0
    planted: PlantedSpec | None = None

    def __post_init__(self) -> None:
        if self.n_demos < 1 or self.n_queries < 1:
            raise ConfigError("landscape needs at least one demo and one query")
        if self.aggregator not in AGGREGATORS:
            raise ConfigError(f"aggregator must be one of {AGGREGATORS}")
        if self.interaction_scale < 0 or self.noise_scale < 0:
            raise ConfigError("interaction_scale and noise_scale must be >= 0")
        if self.planted is not None:
            p = self.planted
            if not 0 <= p.demo_index < self.n_demos:
                raise ConfigError(f"planted demo_index {p.demo_index} out of range")
            if not 0 < p.gamma <= 1:
                raise ConfigError("planted gamma must be in (0, 1]")
            if p.high_value <= BASE_HI:
                raise ConfigError(
                    f"planted high_value must exceed the base upper bound {BASE_HI}"
                )


def planted_column_count(gamma: float, n_queries: int) -> int:
    """ceil(gamma * n_queries) with a tiny epsilon so exact products stay exact."""
    return max(1, math.ceil(gamma * n_queries - 1e-9))


class SyntheticEvaluator(Evaluator):
    """Seeded landscape evaluator; pure and bit-reproducible across backends."""

    source_metric = "synthetic"

    def __init__(self, params: LandscapeParams):
        super().__init__()
        self.params = params
        self._seed = params.seed & MASK64
        nd, nq = params.n_demos, params.n_queries
        base = kernels.hash_matrix_u01(self._seed, TAG_BASE, nd, nd + nq)
        A = BASE_LO + (BASE_HI - BASE_LO) * base
        planted_cols: tuple[int, ...] = ()
        if params.planted is not None:
            count = planted_column_count(params.planted.gamma, nq)
            cols = [nd + c for c in shuffled_indices(nq, self._seed, TAG_PLANT)[:count]]
            A[params.planted.demo_index, cols] = params.planted.high_value
            planted_cols = tuple(sorted(cols))
        pair = kernels.hash_matrix_u01(self._seed, TAG_PAIR, nd, nd)
        B = np.zeros((nd, nd), dtype=np.float64)
        iu = np.triu_indices(nd, k=1)
        B[iu] = -1.0 + 2.0 * pair[iu]
        B += B.T
        A.setflags(write=False)
        B.setflags(write=False)
        self._A = A
        self._B = B
        self.planted_query_ids = planted_cols

    @property
    def demo_ids(self) -> tuple[SampleId, ...]:
        return tuple(range(self.params.n_demos))

    @property
    def query_ids(self) -> tuple[SampleId, ...]:
        nd = self.params.n_demos
        return tuple(range(nd, nd + self.params.n_queries))

    @property
    def base_matrix(self) -> np.ndarray:
        """Read-only base matrix A: demo rows, one column per global id."""
        return self._A

    @property
    def interaction_matrix(self) -> np.ndarray:
        """Read-only symmetric interaction matrix B."""
        return self._B

    def _check(self, demos: DemoSet, queries: Sequence[SampleId]) -> None:
        nd = self.params.n_demos
        hi = nd + self.params.n_queries
        for d in demos:
            if not 0 <= d < nd:
                raise IndexOutOfRange(f"demo id {d} outside demo block [0, {nd})")
        for q in queries:
            if not 0 <= q < hi:
                raise IndexOutOfRange(f"query id {q} outside id range [0, {hi})")

    def _values(self, demos: DemoSet, queries: Sequence[SampleId]) -> np.ndarray:
        p = self.params
        return kernels.batch_scores(
            self._A,
            self._B,
            np.asarray(demos.members, dtype=np.int64),
            np.asarray(queries, dtype=np.int64),
            p.interaction_scale,
            p.noise_scale,
            p.aggregator == "mean",
            self._seed,
        )

    def _value(self, demos: DemoSet, query: SampleId) -> float:
        return float(self._values(demos, (query,))[0])


def synth_evaluate(params: LandscapeParams, demos: DemoSet, query: SampleId) -> Utility:
    """One-off landscape evaluation; build a SyntheticEvaluator for bulk use."""
    return SyntheticEvaluator(params).evaluate(demos, query)
