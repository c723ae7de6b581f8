"""Command-line frontend: gen / select / compare / analyze / audit.

Exit codes: 0 success, 1 usage or config error, 2 data or parse error,
3 oracle or protocol failure.  DEMOSELECT_LOG in {error, info, debug}
controls logging verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
from pathlib import Path

from .core import DemoSet, enumerate_subsets
from .errors import ConfigError, DataError, DemoselectError
from .harness import (
    ExperimentConfig,
    OracleSpec,
    StrategySpec,
    all_subset_sets,
    build_context,
    coincidence_analysis,
    load_config,
    nn_choices,
    rank_frequency,
    run_cell,
    run_experiment,
    singleton_sets,
)
from .landscape import LandscapeParams, PlantedSpec, SyntheticEvaluator
from .oracle import OneShotMatrix, save_one_shot_matrix, save_subset_table
from .strategies import SelectionResult

log = logging.getLogger("demoselect")


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="demoselect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="materialize a synthetic landscape as files")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--n-demos", type=int, default=6)
    gen.add_argument("--n-queries", type=int, default=10)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--agg", choices=("sum", "mean"), default="sum")
    gen.add_argument("--lambda", dest="lam", type=float, default=0.0)
    gen.add_argument("--sigma", type=float, default=0.0)
    gen.add_argument("--planted-gamma", type=float, default=None)
    gen.add_argument("--planted-high", type=float, default=0.9)
    gen.add_argument("--planted-demo", type=int, default=0)
    gen.add_argument(
        "--table-max-size",
        type=int,
        default=None,
        help="cap subset size in the emitted table (default: uncapped up to 10 demos)",
    )

    select = sub.add_parser("select", help="run one selection strategy")
    select.add_argument("--config", help="experiment config JSON")
    select.add_argument("--oracle", choices=("matrix", "table", "synthetic", "external"))
    select.add_argument("--matrix", help="one-shot matrix CSV path")
    select.add_argument("--table", help="subset table JSONL path")
    select.add_argument("--landscape", help="landscape params JSON path")
    select.add_argument("--external-cmd", help="external evaluator command line")
    select.add_argument("--manifest", help="sample manifest JSON path")
    select.add_argument("--pool", help="comma-separated pool ids")
    select.add_argument("--n-prime", type=int)
    select.add_argument("--validation-queries", help="comma-separated ids or 'heldout'")
    select.add_argument("--test-queries", help="comma-separated ids")
    select.add_argument(
        "--strategy",
        required=True,
        choices=("topk", "greedy", "random", "exhaustive", "nn"),
    )
    select.add_argument("--k", type=int)
    select.add_argument("--max-size", type=int)
    select.add_argument("--holdout", choices=("fixed", "loocv"), default="fixed")
    select.add_argument("--seed", type=int, default=None, help="split seed")
    select.add_argument("--out", help="write the selection JSON here")

    compare = sub.add_parser("compare", help="run the full experiment grid")
    compare.add_argument("--config", required=True)
    compare.add_argument("--out", required=True, help="output directory")
    compare.add_argument("--jobs", type=int, default=1)

    analyze = sub.add_parser("analyze", help="coincidence and rank-frequency analyses")
    analyze.add_argument("--config", required=True)
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument("--seed", type=int, default=None, help="split seed (default: first)")
    analyze.add_argument(
        "--sets", choices=("singletons", "subsets"), default="singletons"
    )
    analyze.add_argument("--max-size", type=int)
    analyze.add_argument("--strategy", default="greedy", help="task-level strategy label")

    audit = sub.add_parser("audit", help="complexity audit of measured oracle calls")
    audit.add_argument("--config")
    audit.add_argument("--report", help="reuse an existing report.json")
    audit.add_argument("--out", required=True, help="output directory")
    audit.add_argument("--jobs", type=int, default=1)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("DEMOSELECT_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(
        level=levels.get(level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _out_dir(raw: str) -> Path:
    path = Path(raw)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {path}: {exc}") from None
    return path


def _cmd_gen(args) -> int:
    out = _out_dir(args.out)
    planted = None
    if args.planted_gamma is not None:
        planted = PlantedSpec(
            demo_index=args.planted_demo,
            gamma=args.planted_gamma,
            high_value=args.planted_high,
        )
    params = LandscapeParams(
        n_demos=args.n_demos,
        n_queries=args.n_queries,
        seed=args.seed,
        aggregator=args.agg,
        interaction_scale=args.lam,
        noise_scale=args.sigma,
        planted=planted,
    )
    evaluator = SyntheticEvaluator(params)
    demo_ids = evaluator.demo_ids
    query_ids = evaluator.query_ids

    spec = OracleSpec(backend="synthetic", params=params)
    _write_json(out / "landscape.json", spec.to_dict()["params"])

    matrix_values = [
        [float(v) for v in evaluator.evaluate_values(DemoSet((d,)), query_ids)]
        for d in demo_ids
    ]
    import numpy as np

    matrix = OneShotMatrix(demo_ids, query_ids, np.array(matrix_values))
    save_one_shot_matrix(matrix, out / "matrix.csv")

    cap = args.table_max_size
    if cap is None and len(demo_ids) > 10:
        cap = 3
    table_rows = []
    for subset in enumerate_subsets(demo_ids, cap):
        values = evaluator.evaluate_values(subset, query_ids)
        for q, v in zip(query_ids, values):
            table_rows.append((subset, q, float(v)))
    save_subset_table(table_rows, out / "table.jsonl")

    # Features: demo rows carry their query-block utility profile, query rows
    # are one-hot columns, so cosine retrieval ranks demos by one-shot utility.
    with (out / "features.csv").open("w", encoding="utf-8") as fh:
        profile = evaluator.base_matrix[:, len(demo_ids) :]
        for i, d in enumerate(demo_ids):
            fh.write(",".join([str(d), *[repr(float(v)) for v in profile[i]]]) + "\n")
        for j, q in enumerate(query_ids):
            one_hot = ["1.0" if t == j else "0.0" for t in range(len(query_ids))]
            fh.write(",".join([str(q), *one_hot]) + "\n")

    _write_json(
        out / "manifest.json",
        {
            "version": 1,
            "samples": [{"id": d, "feature_row": d} for d in demo_ids],
            "features": "features.csv",
        },
    )

    half = (len(query_ids) + 1) // 2
    validation = list(query_ids[:half])
    test = list(query_ids[half:]) or validation
    config = ExperimentConfig(
        oracle=spec,
        n_prime=min(6, len(demo_ids) - 1),
        seeds=(0, 1, 2),
        strategies=(
            StrategySpec(name="random"),
            StrategySpec(name="exhaustive"),
            StrategySpec(name="topk", k=1),
            StrategySpec(name="greedy"),
        ),
        test_queries=tuple(test),
        validation_queries=tuple(validation),
        pool=demo_ids,
        manifest="manifest.json",
    )
    _write_json(out / "config.json", config.to_dict())
    for name in ("landscape.json", "matrix.csv", "table.jsonl", "features.csv", "manifest.json", "config.json"):
        print(out / name)
    return 0


def _ids_arg(raw: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"{flag} must be a comma-separated id list") from None


def _select_config(args, parser: _Parser) -> ExperimentConfig:
    if args.config:
        return load_config(args.config)
    if not args.oracle:
        parser.error("either --config or --oracle is required")
    if args.oracle == "matrix":
        if not args.matrix:
            parser.error("--oracle matrix requires --matrix")
        oracle = OracleSpec(backend="matrix", path=args.matrix)
    elif args.oracle == "table":
        if not args.table:
            parser.error("--oracle table requires --table")
        oracle = OracleSpec(backend="table", path=args.table)
    elif args.oracle == "synthetic":
        if not args.landscape:
            parser.error("--oracle synthetic requires --landscape")
        with open(args.landscape, encoding="utf-8") as fh:
            oracle = OracleSpec.from_dict({"backend": "synthetic", "params": json.load(fh)})
    else:
        if not args.external_cmd:
            parser.error("--oracle external requires --external-cmd")
        oracle = OracleSpec(
            backend="external", command=tuple(shlex.split(args.external_cmd))
        )
    if not args.test_queries:
        parser.error("--test-queries is required without --config")
    validation: tuple[int, ...] | str = "heldout"
    if args.validation_queries and args.validation_queries != "heldout":
        validation = _ids_arg(args.validation_queries, "--validation-queries")
    pool = _ids_arg(args.pool, "--pool") if args.pool else None
    strategy = _strategy_from_args(args, parser)
    return ExperimentConfig(
        oracle=oracle,
        n_prime=args.n_prime or 6,
        seeds=(args.seed if args.seed is not None else 0,),
        strategies=(strategy,),
        test_queries=_ids_arg(args.test_queries, "--test-queries"),
        validation_queries=validation,
        pool=pool,
        manifest=args.manifest,
    )


def _strategy_from_args(args, parser: _Parser) -> StrategySpec:
    if args.strategy == "topk" and args.k is None:
        parser.error("--strategy topk requires --k")
    return StrategySpec(
        name=args.strategy,
        k=args.k,
        max_size=args.max_size,
        holdout=args.holdout,
    )


def _cmd_select(args, parser: _Parser) -> int:
    config = _select_config(args, parser)
    base_dir = Path(args.config).parent if args.config else Path(".")
    strategy = _strategy_from_args(args, parser)
    seed = args.seed if args.seed is not None else config.seeds[0]
    config = ExperimentConfig(
        oracle=config.oracle,
        n_prime=config.n_prime if args.n_prime is None else args.n_prime,
        seeds=(seed,),
        strategies=(strategy,),
        test_queries=config.test_queries,
        validation_queries=config.validation_queries,
        pool=config.pool,
        manifest=config.manifest,
    )
    context = build_context(config, base_dir)
    row, result = run_cell(context, strategy, seed)
    chosen = row["chosen"]
    print(f"strategy:            {row['strategy']} (seed {seed}, {strategy.holdout} holdout)")
    print(f"chosen ids:          {chosen if chosen is not None else '(per-query / n.a.)'}")
    if row["validation_utility"] is not None:
        print(f"validation utility:  {row['validation_utility']:.6f}")
    if row["test_utility"] is not None:
        print(f"test utility:        {row['test_utility']:.6f}")
    print(f"search set-evals:    {row['search_set_evals']}")
    print(f"oracle calls:        {row['oracle_calls']} (+{row['test_eval_calls']} test scoring)")
    payload = {"row": row, "selection": result.to_dict() if result else None}
    if args.out:
        out_path = Path(args.out)
        if out_path.parent != Path(""):
            out_path.parent.mkdir(parents=True, exist_ok=True)
        _write_json(out_path, payload)
        print(f"wrote {out_path}")
    else:
        print(json.dumps(payload))
    return 0


def _cmd_compare(args) -> int:
    config = load_config(args.config)
    out = _out_dir(args.out)
    report = run_experiment(config, Path(args.config).parent, jobs=args.jobs)
    (out / "report.json").write_bytes(report.to_json_bytes())
    sys.stdout.write(report.render_text())
    print(f"wrote {out / 'report.json'}")
    return 0


def _cmd_analyze(args) -> int:
    config = load_config(args.config)
    out = _out_dir(args.out)
    base_dir = Path(args.config).parent
    context = build_context(config, base_dir)
    seed = args.seed if args.seed is not None else config.seeds[0]
    from .core import make_split

    split = make_split(context.pool, config.n_prime, seed)
    candidates = split.candidate_ids
    if args.sets == "singletons":
        sets = singleton_sets(candidates)
    else:
        sets = all_subset_sets(candidates, args.max_size)

    evaluator = context.evaluator_factory()
    coincidence = coincidence_analysis(evaluator, sets, config.test_queries)

    strategy_spec = None
    for spec in config.strategies:
        if spec.label == args.strategy or spec.name == args.strategy:
            strategy_spec = spec
            break
    if strategy_spec is None:
        raise ConfigError(f"strategy {args.strategy!r} is not in the config")
    row, result = run_cell(context, strategy_spec, seed)
    analysis: dict = {
        "seed": seed,
        "candidate_sets": len(sets),
        "coincidence": coincidence.to_dict(),
    }
    if isinstance(result, SelectionResult) and result.chosen in set(sets):
        chosen_map = {q: result.chosen for q in config.test_queries}
        hist = rank_frequency(evaluator, chosen_map, sets, config.test_queries)
        analysis["task_level"] = {
            "strategy": strategy_spec.label,
            "chosen": list(result.chosen.members),
            "rank_histogram": hist.to_dict(),
        }
    if context.sample_pool is not None and context.sample_pool.features:
        nn_spec = StrategySpec(name="nn", k=1)
        chosen_map = nn_choices(context, nn_spec, candidates)
        usable = all(s in set(sets) for s in chosen_map.values())
        if usable:
            hist = rank_frequency(evaluator, chosen_map, sets, config.test_queries)
            hits = sum(
                1
                for q in config.test_queries
                if chosen_map[q] == coincidence.per_query_best[q]
            )
            analysis["sample_level"] = {
                "strategy": "nn1",
                "rank_histogram": hist.to_dict(),
                "best_fraction": hits / len(config.test_queries),
            }
    _write_json(out / "analysis.json", analysis)
    print(f"task-level best set: {coincidence.task_best}")
    print(f"coincidence fraction: {coincidence.fraction:.4f}")
    if "sample_level" in analysis:
        print(f"sample-level best fraction: {analysis['sample_level']['best_fraction']:.4f}")
    print(f"wrote {out / 'analysis.json'}")
    return 0


def _cmd_audit(args, parser: _Parser) -> int:
    out = _out_dir(args.out)
    if args.report:
        try:
            doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
        except OSError as exc:
            raise DataError(f"{args.report}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.report}: bad JSON: {exc}") from None
        audit = doc.get("audit")
        if not isinstance(audit, list):
            raise DataError(f"{args.report}: no audit block found")
    elif args.config:
        config = load_config(args.config)
        report = run_experiment(config, Path(args.config).parent, jobs=args.jobs)
        audit = report.audit
    else:
        parser.error("audit needs --config or --report")
    _write_json(out / "audit.json", audit)
    print(f"{'strategy':<12} {'measured':<10} {'bound':<10} {'formula':<18} ok")
    for a in audit:
        print(
            f"{a['strategy']:<12} {a['measured_max_set_evals']:<10} "
            f"{a['bound']:<10} {a['formula']:<18} "
            f"{'yes' if a['within_bound'] else 'EXCEEDED'}"
        )
    print(f"wrote {out / 'audit.json'}")
    return 0


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "select":
            return _cmd_select(args, parser)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "audit":
            return _cmd_audit(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except DemoselectError as exc:
        log.debug("command failed", exc_info=True)
        print(f"demoselect: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"demoselect: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except Exception as exc:  # keep every exit on a documented code
        log.debug("internal error", exc_info=True)
        print(f"demoselect: internal error: {exc!r}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
