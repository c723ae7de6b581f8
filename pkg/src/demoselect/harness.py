"""Experiment orchestration: seeded runs, reports, audits, and analyses.

A run executes every (seed, strategy) cell: build the seeded split, run the
strategy against a fresh evaluator, score the chosen set on the test
queries, and record exact call counts.  Reports are deterministic: the same
config produces byte-identical JSON.

Aggregate rows use the fold-left mean and the sample standard deviation
(n - 1 denominator): std = sqrt(sum((x - mean)^2) / (n - 1)).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .core import DemoSet, SampleId, enumerate_subsets, make_split, subset_count
from .errors import (
    ChosenSetNotEnumerated,
    ConfigError,
    EmptyInput,
    MissingEntry,
)
from .external import ExternalConfig, ExternalEvaluator
from .landscape import LandscapeParams, PlantedSpec, SyntheticEvaluator
from .manifest import SamplePool, ingest_manifest
from .oracle import (
    Evaluator,
    OneShotMatrixEvaluator,
    SubsetTableEvaluator,
    aggregate_heldout_score,
    load_one_shot_matrix,
    load_subset_table,
)
from .strategies import (
    Holdout,
    SelectionResult,
    select_exhaustive,
    select_greedy,
    select_nearest_neighbor,
    select_random_baseline,
    select_top_k,
)

log = logging.getLogger("demoselect.harness")

REPORT_FORMAT_VERSION = 1

STRATEGY_NAMES = ("topk", "greedy", "random", "exhaustive", "nn")

ORACLE_BACKENDS = ("synthetic", "matrix", "table", "external")


@dataclass(frozen=True)
class StrategySpec:
    name: str
    k: int | None = None
    max_size: int | None = None
    holdout: str = "fixed"
    queries: str | None = None  # validation | test
    sweep_loop: bool = False
    fair_loocv: bool = False

    def __post_init__(self) -> None:
        if self.name not in STRATEGY_NAMES:
            raise ConfigError(f"unknown strategy {self.name!r}")
        if self.name == "topk" and (self.k is None or self.k < 1):
            raise ConfigError("topk needs k >= 1")
        if self.name == "nn" and self.k is not None and self.k < 1:
            raise ConfigError("nn needs k >= 1")
        if self.holdout not in ("fixed", "loocv"):
            raise ConfigError(f"unknown holdout mode {self.holdout!r}")
        if self.queries not in (None, "validation", "test"):
            raise ConfigError("strategy queries must be 'validation' or 'test'")

    @property
    def effective_queries(self) -> str:
        if self.queries is not None:
            return self.queries
        # Random and Oracle* run directly on the test queries; the search
        # strategies select on validation. nn retrieves per test query.
        return "test" if self.name in ("random", "exhaustive", "nn") else "validation"

    @property
    def label(self) -> str:
        if self.name == "topk":
            return f"top{self.k}"
        if self.name == "nn":
            return f"nn{self.k or 1}"
        return self.name

    def to_dict(self) -> dict:
        out: dict = {"name": self.name}
        if self.k is not None:
            out["k"] = self.k
        if self.max_size is not None:
            out["max_size"] = self.max_size
        if self.holdout != "fixed":
            out["holdout"] = self.holdout
        if self.queries is not None:
            out["queries"] = self.queries
        if self.sweep_loop:
            out["sweep_loop"] = True
        if self.fair_loocv:
            out["fair_loocv"] = True
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "StrategySpec":
        if not isinstance(d, Mapping) or "name" not in d:
            raise ConfigError(f"strategy entry {d!r} needs a name")
        allowed = {"name", "k", "max_size", "holdout", "queries", "sweep_loop", "fair_loocv"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError(f"unknown strategy options {sorted(unknown)}")
        return cls(
            name=d["name"],
            k=d.get("k"),
            max_size=d.get("max_size"),
            holdout=d.get("holdout", "fixed"),
            queries=d.get("queries"),
            sweep_loop=bool(d.get("sweep_loop", False)),
            fair_loocv=bool(d.get("fair_loocv", False)),
        )


@dataclass(frozen=True)
class OracleSpec:
    backend: str
    params: LandscapeParams | None = None
    path: str | None = None
    command: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.backend not in ORACLE_BACKENDS:
            raise ConfigError(f"unknown oracle backend {self.backend!r}")
        if self.backend == "synthetic" and self.params is None:
            raise ConfigError("synthetic oracle needs landscape params")
        if self.backend in ("matrix", "table") and not self.path:
            raise ConfigError(f"{self.backend} oracle needs a file path")
        if self.backend == "external" and not self.command:
            raise ConfigError("external oracle needs a command")

    def to_dict(self) -> dict:
        out: dict = {"backend": self.backend}
        if self.params is not None:
            p = self.params
            out["params"] = {
                "n_demos": p.n_demos,
                "n_queries": p.n_queries,
                "seed": p.seed,
                "aggregator": p.aggregator,
                "interaction_scale": p.interaction_scale,
                "noise_scale": p.noise_scale,
            }
            if p.planted is not None:
                out["params"]["planted"] = {
                    "demo_index": p.planted.demo_index,
                    "gamma": p.planted.gamma,
                    "high_value": p.planted.high_value,
                }
        if self.path is not None:
            out["path"] = self.path
        if self.command is not None:
            out["command"] = list(self.command)
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "OracleSpec":
        if not isinstance(d, Mapping) or "backend" not in d:
            raise ConfigError("oracle spec needs a backend")
        params = None
        try:
            if d.get("params") is not None:
                p = d["params"]
                planted = None
                if p.get("planted") is not None:
                    planted = PlantedSpec(
                        demo_index=p["planted"]["demo_index"],
                        gamma=p["planted"]["gamma"],
                        high_value=p["planted"].get("high_value", 0.9),
                    )
                params = LandscapeParams(
                    n_demos=p["n_demos"],
                    n_queries=p["n_queries"],
                    seed=p.get("seed", 0),
                    aggregator=p.get("aggregator", "sum"),
                    interaction_scale=p.get("interaction_scale", 0.0),
                    noise_scale=p.get("noise_scale", 0.0),
                    planted=planted,
                )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad landscape params: {exc}") from None
        command = tuple(d["command"]) if d.get("command") is not None else None
        return cls(
            backend=d["backend"],
            params=params,
            path=d.get("path"),
            command=command,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    oracle: OracleSpec
    n_prime: int
    seeds: tuple[int, ...]
    strategies: tuple[StrategySpec, ...]
    test_queries: tuple[SampleId, ...]
    validation_queries: tuple[SampleId, ...] | str = "heldout"
    pool: tuple[SampleId, ...] | None = None
    manifest: str | None = None

    def __post_init__(self) -> None:
        if not self.seeds:
            raise ConfigError("config needs at least one seed")
        if not self.strategies:
            raise ConfigError("config needs at least one strategy")
        if not self.test_queries:
            raise ConfigError("config needs test queries")
        if isinstance(self.validation_queries, str) and self.validation_queries != "heldout":
            raise ConfigError("validation_queries must be a list or 'heldout'")
        if self.n_prime < 1:
            raise ConfigError("n_prime must be >= 1")

    def to_dict(self) -> dict:
        out: dict = {
            "oracle": self.oracle.to_dict(),
            "n_prime": self.n_prime,
            "seeds": list(self.seeds),
            "strategies": [s.to_dict() for s in self.strategies],
            "test_queries": list(self.test_queries),
        }
        if isinstance(self.validation_queries, str):
            out["validation_queries"] = self.validation_queries
        else:
            out["validation_queries"] = list(self.validation_queries)
        if self.pool is not None:
            out["pool"] = list(self.pool)
        if self.manifest is not None:
            out["manifest"] = self.manifest
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExperimentConfig":
        if not isinstance(d, Mapping):
            raise ConfigError("config must be a JSON object")
        allowed = {
            "oracle",
            "n_prime",
            "seeds",
            "strategies",
            "test_queries",
            "validation_queries",
            "pool",
            "manifest",
        }
        unknown = set(d) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            oracle = OracleSpec.from_dict(d["oracle"])
            strategies = tuple(StrategySpec.from_dict(s) for s in d["strategies"])
            vq = d.get("validation_queries", "heldout")
            if not isinstance(vq, str):
                vq = tuple(vq)
            return cls(
                oracle=oracle,
                n_prime=d["n_prime"],
                seeds=tuple(d["seeds"]),
                strategies=strategies,
                test_queries=tuple(d["test_queries"]),
                validation_queries=vq,
                pool=tuple(d["pool"]) if d.get("pool") is not None else None,
                manifest=d.get("manifest"),
            )
        except KeyError as exc:
            raise ConfigError(f"config missing required key {exc}") from None

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: bad JSON: {exc}") from None
    return ExperimentConfig.from_dict(doc)


@dataclass
class RunContext:
    """Resolved, loaded resources an experiment executes against."""

    config: ExperimentConfig
    pool: tuple[SampleId, ...]
    evaluator_factory: Callable[[], Evaluator]
    sample_pool: SamplePool | None

    def close(self) -> None:
        pass


def build_context(config: ExperimentConfig, base_dir: str | Path = ".") -> RunContext:
    """Load oracle data and the manifest, and derive the candidate pool."""
    base = Path(base_dir)
    spec = config.oracle
    sample_pool = None
    if config.manifest is not None:
        sample_pool = ingest_manifest(base / config.manifest)

    if spec.backend == "synthetic":
        params = spec.params
        shared = SyntheticEvaluator(params)

        def factory() -> Evaluator:
            return SyntheticEvaluator(params)

        derived_pool = shared.demo_ids
    elif spec.backend == "matrix":
        matrix = load_one_shot_matrix(base / spec.path)

        def factory() -> Evaluator:
            return OneShotMatrixEvaluator(matrix)

        derived_pool = matrix.demo_ids
    elif spec.backend == "table":
        table = load_subset_table(base / spec.path)

        def factory() -> Evaluator:
            return SubsetTableEvaluator(table)

        derived_pool = table.member_ids
    else:
        command = spec.command

        def factory() -> Evaluator:
            return ExternalEvaluator(ExternalConfig(command=command, cwd=str(base)))

        derived_pool = None

    if config.pool is not None:
        pool = config.pool
    elif sample_pool is not None:
        pool = sample_pool.ids
    elif derived_pool is not None:
        pool = derived_pool
    else:
        raise ConfigError(
            "external oracle needs an explicit pool or a manifest to derive it from"
        )
    if len(pool) < 2:
        raise ConfigError("pool needs at least two samples to split")
    if config.n_prime >= len(pool):
        raise ConfigError(
            f"n_prime {config.n_prime} must be smaller than the pool ({len(pool)})"
        )
    overlap = sorted(set(pool) & set(config.test_queries))
    if overlap:
        raise ConfigError(f"test queries {overlap} overlap the candidate pool")
    return RunContext(
        config=config,
        pool=tuple(pool),
        evaluator_factory=factory,
        sample_pool=sample_pool,
    )


def run_cell(
    context: RunContext, strategy: StrategySpec, seed: int
) -> tuple[dict, "SelectionResult | RandomBaseline | None"]:
    """Execute one (strategy, seed) cell; returns the row and the full detail."""
    config = context.config
    split = make_split(context.pool, config.n_prime, seed)
    candidates = split.candidate_ids
    if config.validation_queries == "heldout":
        validation_ids = split.heldout_ids
    else:
        validation_ids = tuple(config.validation_queries)
    query_ids = (
        validation_ids
        if strategy.effective_queries == "validation"
        else config.test_queries
    )
    evaluator = context.evaluator_factory()
    log.info("running %s on seed %d", strategy.label, seed)
    row: dict = {
        "strategy": strategy.label,
        "seed": seed,
        "holdout": strategy.holdout,
        "queries": strategy.effective_queries,
    }
    result: SelectionResult | None = None
    detail: SelectionResult | RandomBaseline | None = None
    try:
        if strategy.name == "nn":
            row.update(_run_nn_cell(context, strategy, evaluator, candidates))
        else:
            holdout = Holdout(strategy.holdout, tuple(query_ids))
            if strategy.name == "topk":
                result = select_top_k(
                    evaluator, candidates, holdout, strategy.k, strategy.sweep_loop
                )
            elif strategy.name == "greedy":
                result = select_greedy(
                    evaluator, candidates, holdout, strategy.fair_loocv
                )
            elif strategy.name == "exhaustive":
                result = select_exhaustive(
                    evaluator, candidates, holdout, strategy.max_size
                )
            else:  # random
                baseline = select_random_baseline(
                    evaluator, candidates, holdout, strategy.max_size
                )
                detail = baseline
                row.update(
                    {
                        "validation_utility": baseline.mean_utility.value,
                        "test_utility": (
                            baseline.mean_utility.value
                            if strategy.effective_queries == "test"
                            else None
                        ),
                        "chosen": None,
                        "search_set_evals": baseline.search_set_evals,
                        "oracle_calls": baseline.oracle_calls,
                        "test_eval_calls": 0,
                    }
                )
            if result is not None:
                detail = result
                if strategy.effective_queries == "test":
                    test_utility = result.validation_utility.value
                    test_calls = 0
                else:
                    before = evaluator.call_count
                    test_utility = aggregate_heldout_score(
                        evaluator, result.chosen, config.test_queries
                    ).value
                    test_calls = evaluator.call_count - before
                row.update(
                    {
                        "validation_utility": result.validation_utility.value,
                        "test_utility": test_utility,
                        "chosen": list(result.chosen.members),
                        "search_set_evals": result.search_set_evals,
                        "oracle_calls": result.oracle_calls,
                        "test_eval_calls": test_calls,
                    }
                )
    finally:
        closer = getattr(evaluator, "close", None)
        if closer is not None:
            closer()
    return row, detail


def _run_nn_cell(
    context: RunContext,
    strategy: StrategySpec,
    evaluator: Evaluator,
    candidates: tuple[SampleId, ...],
) -> dict:
    chosen_map = nn_choices(context, strategy, candidates)
    total = 0.0
    calls_before = evaluator.call_count
    for q in context.config.test_queries:
        total += evaluator.evaluate(chosen_map[q], q).value
    return {
        "validation_utility": None,
        "test_utility": total / len(context.config.test_queries),
        "chosen": None,
        "search_set_evals": 0,
        "oracle_calls": 0,
        "test_eval_calls": evaluator.call_count - calls_before,
    }


def nn_choices(
    context: RunContext,
    strategy: StrategySpec,
    candidates: tuple[SampleId, ...],
) -> dict[SampleId, DemoSet]:
    """Per-test-query nearest-neighbor demo sets from manifest features."""
    if context.sample_pool is None:
        raise ConfigError("nn strategy needs a manifest with features")
    features = context.sample_pool.features
    missing = [c for c in candidates if c not in features]
    if missing:
        raise MissingEntry(f"no features for candidate ids {missing}")
    cand_feats = {c: features[c] for c in candidates}
    k = strategy.k or 1
    chosen: dict[SampleId, DemoSet] = {}
    for q in context.config.test_queries:
        if q not in features:
            raise MissingEntry(f"no feature for test query {q}")
        chosen[q] = select_nearest_neighbor(cand_feats, features[q], k)
    return chosen


def fold_mean(values: Sequence[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def sample_std(values: Sequence[float]) -> float | None:
    """Sample standard deviation (n - 1); None when fewer than two values."""
    n = len(values)
    if n < 2:
        return None
    mean = fold_mean(values)
    acc = 0.0
    for v in values:
        acc += (v - mean) * (v - mean)
    return math.sqrt(acc / (n - 1))


GREEDY_BOUND = "N'(N'+1)/2"
TOPK_BOUND = "N'"
EXHAUSTIVE_BOUND = "2^N'-1"


def _strategy_bound(spec: StrategySpec, n_prime: int) -> tuple[int, str]:
    if spec.name == "topk":
        if spec.sweep_loop:
            bound = sum(n_prime - i for i in range(spec.k))
            return bound, "sum_{i<K}(N'-i)"
        return n_prime, TOPK_BOUND
    if spec.name == "greedy":
        return n_prime * (n_prime + 1) // 2, GREEDY_BOUND
    if spec.name in ("exhaustive", "random"):
        count = subset_count(n_prime, spec.max_size)
        formula = EXHAUSTIVE_BOUND if spec.max_size is None else "sum C(N',k<=cap)"
        return count, formula
    return 0, "0"


def audit_rows(
    strategies: Sequence[StrategySpec], rows: Sequence[dict], n_prime: int
) -> list[dict]:
    """Compare measured search set-evaluations against the complexity bounds."""
    audit = []
    for spec in strategies:
        measured = [
            r["search_set_evals"] for r in rows if r["strategy"] == spec.label
        ]
        bound, formula = _strategy_bound(spec, n_prime)
        worst = max(measured) if measured else 0
        audit.append(
            {
                "strategy": spec.label,
                "n_prime": n_prime,
                "measured_max_set_evals": worst,
                "bound": bound,
                "formula": formula,
                "within_bound": worst <= bound,
            }
        )
    return audit


@dataclass
class Report:
    config_hash: str
    n_prime: int
    rows: list[dict]
    aggregates: list[dict]
    audit: list[dict]

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "config_hash": self.config_hash,
            "n_prime": self.n_prime,
            "rows": self.rows,
            "aggregates": self.aggregates,
            "audit": self.audit,
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), indent=2) + "\n").encode("utf-8")

    def render_text(self) -> str:
        lines = []
        header = f"{'strategy':<12} {'validation':<16} {'test':<16} {'set-evals':<10}"
        lines.append(header)
        lines.append("-" * len(header))
        for agg in self.aggregates:
            lines.append(
                f"{agg['strategy']:<12} "
                f"{_fmt_cell(agg['validation_mean'], agg['validation_std']):<16} "
                f"{_fmt_cell(agg['test_mean'], agg['test_std']):<16} "
                f"{agg['max_set_evals']:<10}"
            )
        lines.append("")
        lines.append(f"{'strategy':<12} {'measured':<10} {'bound':<10} {'formula':<18} ok")
        for a in self.audit:
            lines.append(
                f"{a['strategy']:<12} {a['measured_max_set_evals']:<10} "
                f"{a['bound']:<10} {a['formula']:<18} "
                f"{'yes' if a['within_bound'] else 'EXCEEDED'}"
            )
        return "\n".join(lines) + "\n"


def _fmt_cell(mean: float | None, std: float | None) -> str:
    if mean is None:
        return "-"
    if std is None:
        return f"{mean:.2f}"
    return f"{mean:.2f}±{std:.2f}"


def _run_cell_named(
    context: RunContext, strategy: StrategySpec, seed: int
) -> tuple[dict, SelectionResult | None]:
    from .errors import DemoselectError

    try:
        return run_cell(context, strategy, seed)
    except DemoselectError as exc:
        exc.args = (f"[seed {seed}, strategy {strategy.label}] {exc}",)
        raise


def run_experiment(
    config: ExperimentConfig, base_dir: str | Path = ".", jobs: int = 1
) -> Report:
    """Run every (seed, strategy) cell and assemble the deterministic report."""
    context = build_context(config, base_dir)
    cells = [
        (strategy, seed) for strategy in config.strategies for seed in config.seeds
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(lambda cell: _run_cell_named(context, cell[0], cell[1]), cells)
            )
    else:
        results = [_run_cell_named(context, strategy, seed) for strategy, seed in cells]
    rows = [row for row, _ in results]

    aggregates = []
    for strategy in config.strategies:
        strat_rows = [r for r in rows if r["strategy"] == strategy.label]
        val = [r["validation_utility"] for r in strat_rows if r["validation_utility"] is not None]
        test = [r["test_utility"] for r in strat_rows if r["test_utility"] is not None]
        aggregates.append(
            {
                "strategy": strategy.label,
                "seeds": len(strat_rows),
                "validation_mean": fold_mean(val) if val else None,
                "validation_std": sample_std(val) if val else None,
                "test_mean": fold_mean(test) if test else None,
                "test_std": sample_std(test) if test else None,
                "max_set_evals": max(r["search_set_evals"] for r in strat_rows),
            }
        )

    audit = audit_rows(config.strategies, rows, config.n_prime)
    return Report(
        config_hash=config.config_hash(),
        n_prime=config.n_prime,
        rows=rows,
        aggregates=aggregates,
        audit=audit,
    )


def audit_calls(report: Report) -> list[dict]:
    """The report's measured-vs-bound complexity audit table."""
    return report.audit


@dataclass
class CoincidenceResult:
    task_best: DemoSet
    fraction: float
    per_query_best: dict[SampleId, DemoSet]

    def to_dict(self) -> dict:
        return {
            "task_best": list(self.task_best.members),
            "fraction": self.fraction,
            "per_query_best": {
                str(q): list(s.members) for q, s in self.per_query_best.items()
            },
        }


def coincidence_analysis(
    oracle: Evaluator,
    candidate_sets: Sequence[DemoSet],
    test_queries: Sequence[SampleId],
) -> CoincidenceResult:
    """Share of queries whose individually best set is the task-level best."""
    sets = list(candidate_sets)
    queries = list(test_queries)
    if not sets or not queries:
        raise EmptyInput("coincidence analysis needs candidate sets and queries")
    values = [oracle.evaluate_values(s, queries) for s in sets]
    per_query_best: dict[SampleId, DemoSet] = {}
    for j, q in enumerate(queries):
        best_i = 0
        for i in range(1, len(sets)):
            if float(values[i][j]) > float(values[best_i][j]):
                best_i = i
        per_query_best[q] = sets[best_i]
    best_task = 0
    best_mean = fold_mean([float(v) for v in values[0]])
    for i in range(1, len(sets)):
        mean = fold_mean([float(v) for v in values[i]])
        if mean > best_mean:
            best_task, best_mean = i, mean
    task_best = sets[best_task]
    hits = sum(1 for q in queries if per_query_best[q] == task_best)
    return CoincidenceResult(
        task_best=task_best,
        fraction=hits / len(queries),
        per_query_best=per_query_best,
    )


@dataclass
class RankHistogram:
    """Per-query rank of the chosen set among all sets; rank 1 is worst."""

    n_sets: int
    counts: list[int]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_dict(self) -> dict:
        return {"n_sets": self.n_sets, "counts": self.counts}


def rank_frequency(
    oracle: Evaluator,
    chosen_per_query: Mapping[SampleId, DemoSet],
    all_sets: Sequence[DemoSet],
    test_queries: Sequence[SampleId],
) -> RankHistogram:
    """Histogram of chosen-set ranks; ties share the lower rank."""
    sets = list(all_sets)
    queries = list(test_queries)
    if not sets or not queries:
        raise EmptyInput("rank frequency needs candidate sets and queries")
    index = {s: i for i, s in enumerate(sets)}
    for q in queries:
        if q not in chosen_per_query:
            raise EmptyInput(f"no chosen set recorded for query {q}")
        if chosen_per_query[q] not in index:
            raise ChosenSetNotEnumerated(
                f"chosen set {chosen_per_query[q]} for query {q} is not enumerated"
            )
    counts = [0] * len(sets)
    for q in queries:
        values = [float(v) for v in _column(oracle, sets, q)]
        chosen_value = values[index[chosen_per_query[q]]]
        rank = 1 + sum(1 for v in values if v < chosen_value)
        counts[rank - 1] += 1
    return RankHistogram(n_sets=len(sets), counts=counts)


def _column(oracle: Evaluator, sets: Sequence[DemoSet], query: SampleId) -> list[float]:
    return [oracle.evaluate(s, query).value for s in sets]


def singleton_sets(ids: Sequence[SampleId]) -> list[DemoSet]:
    return [DemoSet((i,)) for i in ids]


def all_subset_sets(
    ids: Sequence[SampleId], max_size: int | None = None
) -> list[DemoSet]:
    return list(enumerate_subsets(ids, max_size))
