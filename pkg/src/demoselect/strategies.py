"""The five demonstration-selection strategies.

Holdout modes:
  fixed  - every candidate set is scored on the same frozen query set (the
           split-the-pool protocol).
  loocv  - a set P is scored on (candidates - P) plus any extra queries, so
           the query set shrinks as P grows.

All tie-breaks are first-in-candidate-order; candidate order is the split's
draw order, which is seeded and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .core import (
    DemoSet,
    EMPTY_SET,
    SampleId,
    Utility,
    canonicalize,
    enumerate_subsets,
    subset_count,
)
from .errors import (
    BadK,
    ConfigError,
    DimensionMismatch,
    EmptyPool,
    EmptyQuerySet,
    OverlapError,
    ZeroVector,
)
from .oracle import Evaluator, aggregate_heldout_score, brute_force_best

HOLDOUT_MODES = ("fixed", "loocv")


@dataclass(frozen=True)
class Holdout:
    """Query-set policy for scoring candidate sets during selection.

    In fixed mode query_ids is the frozen validation query set.  In loocv
    mode query_ids holds extra always-included queries (possibly none) that
    are appended to the unchosen candidates.
    """

    mode: str = "fixed"
    query_ids: tuple[SampleId, ...] = ()

    def __post_init__(self) -> None:
        if self.mode not in HOLDOUT_MODES:
            raise ConfigError(f"holdout mode must be one of {HOLDOUT_MODES}")
        if self.mode == "fixed" and not self.query_ids:
            raise EmptyQuerySet("fixed holdout needs a non-empty query set")


@dataclass(frozen=True)
class TraceStep:
    step: int
    kind: str  # accepted | rejected
    candidate: SampleId | None
    utility: float
    members: tuple[SampleId, ...]

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "kind": self.kind,
            "candidate": self.candidate,
            "utility": self.utility,
            "members": list(self.members),
        }


@dataclass
class SelectionResult:
    strategy: str
    holdout_mode: str
    chosen: DemoSet
    validation_utility: Utility
    trace: list[TraceStep]
    oracle_calls: int
    search_set_evals: int

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "holdout_mode": self.holdout_mode,
            "chosen": list(self.chosen.members),
            "validation_utility": self.validation_utility.value,
            "source_metric": self.validation_utility.source_metric,
            "oracle_calls": self.oracle_calls,
            "search_set_evals": self.search_set_evals,
            "trace": [t.to_dict() for t in self.trace],
        }

    def accepted_utilities(self) -> list[float]:
        return [t.utility for t in self.trace if t.kind == "accepted"]


def _queries_for(
    holdout: Holdout, candidates: Sequence[SampleId], demos: DemoSet
) -> list[SampleId]:
    if holdout.mode == "fixed":
        return list(holdout.query_ids)
    return [c for c in candidates if c not in demos] + list(holdout.query_ids)


def _check_candidates(candidates: Sequence[SampleId], holdout: Holdout) -> list[SampleId]:
    cands = list(candidates)
    if len(set(cands)) != len(cands):
        raise ConfigError("candidate ids must be distinct")
    if holdout.mode == "fixed":
        overlap = [c for c in cands if c in holdout.query_ids]
        if overlap:
            raise OverlapError(
                f"fixed holdout queries overlap candidates: {overlap}"
            )
    return cands


def select_top_k(
    oracle: Evaluator,
    candidates: Sequence[SampleId],
    holdout: Holdout,
    k: int,
    sweep_loop: bool = False,
) -> SelectionResult:
    """Rank singletons by aggregate score and keep the best K.

    Default scores every singleton once and sorts.  sweep_loop=True instead
    re-runs the argmax over the shrinking candidate pool K times, which in
    loocv mode changes the scores slightly (the two readings coincide in
    fixed mode).
    """
    cands = _check_candidates(candidates, holdout)
    n = len(cands)
    if not 1 <= k <= n:
        raise BadK(f"K must be in [1, {n}], got {k}")
    calls_before = oracle.call_count
    trace: list[TraceStep] = []
    picked: list[SampleId] = []
    if not sweep_loop:
        scores = [
            aggregate_heldout_score(
                oracle, DemoSet((x,)), _queries_for(holdout, cands, DemoSet((x,)))
            )
            for x in cands
        ]
        set_evals = n
        order = sorted(range(n), key=lambda i: -scores[i].value)
        for step, idx in enumerate(order[:k], start=1):
            picked.append(cands[idx])
            trace.append(
                TraceStep(
                    step,
                    "accepted",
                    cands[idx],
                    scores[idx].value,
                    tuple(sorted(picked)),
                )
            )
        top_utility = scores[order[0]]
    else:
        set_evals = 0
        remaining = list(cands)
        top_utility = None
        for step in range(1, k + 1):
            best_i = None
            best_u = None
            for i, x in enumerate(remaining):
                singleton = DemoSet((x,))
                qs = (
                    list(holdout.query_ids)
                    if holdout.mode == "fixed"
                    else [c for c in remaining if c != x] + list(holdout.query_ids)
                )
                u = aggregate_heldout_score(oracle, singleton, qs)
                set_evals += 1
                if best_u is None or u.value > best_u.value:
                    best_i, best_u = i, u
            x = remaining.pop(best_i)
            picked.append(x)
            if top_utility is None:
                top_utility = best_u
            trace.append(
                TraceStep(step, "accepted", x, best_u.value, tuple(sorted(picked)))
            )
    chosen = canonicalize(picked)
    if k == 1:
        validation = top_utility
    else:
        validation = aggregate_heldout_score(
            oracle, chosen, _queries_for(holdout, cands, chosen)
        )
    return SelectionResult(
        strategy="topk",
        holdout_mode=holdout.mode,
        chosen=chosen,
        validation_utility=validation,
        trace=trace,
        oracle_calls=oracle.call_count - calls_before,
        search_set_evals=set_evals,
    )


def select_greedy(
    oracle: Evaluator,
    candidates: Sequence[SampleId],
    holdout: Holdout,
    fair_loocv_compare: bool = False,
) -> SelectionResult:
    """Grow the set by best marginal candidate; stop when the score drops.

    The first element is always accepted.  Afterwards the step winner is
    accepted while a_new >= a_ori (ties continue) and the search halts on the
    first strict decrease.  In loocv mode a_ori and a_new are computed over
    different query sets, following the literal objective;
    fair_loocv_compare=True re-scores the incumbent set on the shrunken query
    set before comparing (off by default).
    """
    cands = _check_candidates(candidates, holdout)
    if not cands:
        raise EmptyPool("greedy needs at least one candidate")
    calls_before = oracle.call_count
    chosen_set = EMPTY_SET
    remaining = list(cands)
    a_ori: Utility | None = None
    trace: list[TraceStep] = []
    set_evals = 0
    step = 0
    while remaining:
        step += 1
        if holdout.mode == "loocv" and not holdout.query_ids:
            # Adding one more member would leave no queries to score on.
            if len(cands) - len(chosen_set) - 1 == 0:
                break
        best_x = None
        best_u = None
        for x in remaining:
            trial = chosen_set.with_member(x)
            u = aggregate_heldout_score(
                oracle, trial, _queries_for(holdout, cands, trial)
            )
            set_evals += 1
            if best_u is None or u.value > best_u.value:
                best_x, best_u = x, u
        if a_ori is not None:
            baseline = a_ori.value
            if fair_loocv_compare and holdout.mode == "loocv":
                shrunk = _queries_for(
                    holdout, cands, chosen_set.with_member(best_x)
                )
                baseline = aggregate_heldout_score(oracle, chosen_set, shrunk).value
                set_evals += 1
            if best_u.value < baseline:
                trace.append(
                    TraceStep(
                        step,
                        "rejected",
                        best_x,
                        best_u.value,
                        chosen_set.with_member(best_x).members,
                    )
                )
                break
        chosen_set = chosen_set.with_member(best_x)
        remaining.remove(best_x)
        a_ori = best_u
        trace.append(
            TraceStep(step, "accepted", best_x, best_u.value, chosen_set.members)
        )
    if a_ori is None:
        raise EmptyQuerySet(
            "greedy could not score any candidate (loocv with a single candidate "
            "and no extra queries)"
        )
    return SelectionResult(
        strategy="greedy",
        holdout_mode=holdout.mode,
        chosen=chosen_set,
        validation_utility=a_ori,
        trace=trace,
        oracle_calls=oracle.call_count - calls_before,
        search_set_evals=set_evals,
    )


@dataclass
class RandomBaseline:
    """Utility distribution over every enumerated candidate subset."""

    mean_utility: Utility
    sets: list[DemoSet]
    utilities: list[float]
    oracle_calls: int
    search_set_evals: int

    def to_dict(self) -> dict:
        return {
            "strategy": "random",
            "mean_utility": self.mean_utility.value,
            "source_metric": self.mean_utility.source_metric,
            "subsets": len(self.sets),
            "oracle_calls": self.oracle_calls,
            "search_set_evals": self.search_set_evals,
            "utilities": self.utilities,
        }


def select_random_baseline(
    oracle: Evaluator,
    candidates: Sequence[SampleId],
    holdout: Holdout,
    max_size: int | None = None,
) -> RandomBaseline:
    """Unweighted mean utility over all enumerated subsets, plus the distribution."""
    cands = _check_candidates(candidates, holdout)
    if not cands:
        raise EmptyPool("random baseline needs at least one candidate")
    calls_before = oracle.call_count
    sets: list[DemoSet] = []
    values: list[float] = []
    for subset in enumerate_subsets(cands, max_size):
        qs = _queries_for(holdout, cands, subset)
        u = aggregate_heldout_score(oracle, subset, qs)
        sets.append(subset)
        values.append(u.value)
    total = 0.0
    for v in values:
        total += v
    return RandomBaseline(
        mean_utility=Utility(total / len(values), oracle.source_metric),
        sets=sets,
        utilities=values,
        oracle_calls=oracle.call_count - calls_before,
        search_set_evals=len(sets),
    )


def select_exhaustive(
    oracle: Evaluator,
    candidates: Sequence[SampleId],
    holdout: Holdout,
    max_size: int | None = None,
) -> SelectionResult:
    """Upper-bound strategy: score every subset, keep the best."""
    cands = _check_candidates(candidates, holdout)
    if not cands:
        raise EmptyPool("exhaustive search needs at least one candidate")
    calls_before = oracle.call_count
    if holdout.mode == "fixed":
        best_set, best_u = brute_force_best(
            oracle, cands, list(holdout.query_ids), max_size
        )
        set_evals = subset_count(len(cands), max_size)
    else:
        best_set = None
        best_u = None
        set_evals = 0
        for subset in enumerate_subsets(cands, max_size):
            qs = _queries_for(holdout, cands, subset)
            u = aggregate_heldout_score(oracle, subset, qs)
            set_evals += 1
            if best_u is None or u.value > best_u.value:
                best_set, best_u = subset, u
    trace = [TraceStep(1, "accepted", None, best_u.value, best_set.members)]
    return SelectionResult(
        strategy="exhaustive",
        holdout_mode=holdout.mode,
        chosen=best_set,
        validation_utility=best_u,
        trace=trace,
        oracle_calls=oracle.call_count - calls_before,
        search_set_evals=set_evals,
    )


def select_nearest_neighbor(
    features: Mapping[SampleId, Sequence[float]],
    query_feature: Sequence[float],
    k: int,
) -> DemoSet:
    """Top-K candidates by cosine similarity to the query feature.

    Sample-level baseline: never consults labels and makes zero oracle
    calls.  Tie-break is the mapping's iteration order.
    """
    ids = list(features.keys())
    n = len(ids)
    if not 1 <= k <= n:
        raise BadK(f"K must be in [1, {n}], got {k}")
    query = np.asarray(query_feature, dtype=np.float64)
    if query.ndim != 1:
        raise DimensionMismatch("query feature must be a 1-D vector")
    dim = query.size
    mat = np.empty((n, dim), dtype=np.float64)
    for i, sid in enumerate(ids):
        vec = np.asarray(features[sid], dtype=np.float64)
        if vec.shape != (dim,):
            raise DimensionMismatch(
                f"feature for id {sid} has dimension {vec.size}, expected {dim}"
            )
        mat[i] = vec
    if float(np.dot(query, query)) == 0.0:
        raise ZeroVector("query feature has zero norm")
    norms = np.einsum("ij,ij->i", mat, mat)
    zero_rows = [ids[i] for i in np.flatnonzero(norms == 0.0)]
    if zero_rows:
        raise ZeroVector(f"features with zero norm for ids {zero_rows}")
    scores = kernels.cosine_scores(mat, query)
    order = sorted(range(n), key=lambda i: -float(scores[i]))
    return canonicalize(ids[i] for i in order[:k])
