"""Evaluator contract plus tabulated backends and the exhaustive searcher.

An Evaluator is the seam where a real frozen model would attach: it maps a
(demo set, query id) pair to a canonical higher-is-better Utility and keeps a
monotone call counter.  Everything model-specific lives behind this contract.
"""

from __future__ import annotations

import csv
import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DemoSet,
    SampleId,
    Utility,
    enumerate_subsets,
)
from .errors import (
    CardinalityUnsupported,
    EmptyDemoSet,
    EmptyPool,
    EmptyQuerySet,
    MissingEntry,
    OverlapError,
    ParseError,
)


class Evaluator:
    """Pure (demos, query) -> Utility mapping with a thread-safe call counter."""

    source_metric = "external"

    def __init__(self) -> None:
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return self._calls

    def _count(self, n: int) -> None:
        with self._lock:
            self._calls += n

    def evaluate(self, demos: DemoSet, query: SampleId) -> Utility:
        if len(demos) == 0:
            raise EmptyDemoSet("cannot evaluate an empty demonstration set")
        self._check(demos, (query,))
        self._count(1)
        return Utility(self._value(demos, query), self.source_metric)

    def evaluate_values(
        self, demos: DemoSet, queries: Sequence[SampleId]
    ) -> Sequence[float]:
        """Batch counterpart of evaluate(); counts len(queries) oracle calls."""
        if len(demos) == 0:
            raise EmptyDemoSet("cannot evaluate an empty demonstration set")
        self._check(demos, queries)
        self._count(len(queries))
        return self._values(demos, queries)

    def _check(self, demos: DemoSet, queries: Sequence[SampleId]) -> None:
        pass

    def _values(self, demos: DemoSet, queries: Sequence[SampleId]) -> Sequence[float]:
        return [self._value(demos, q) for q in queries]

    def _value(self, demos: DemoSet, query: SampleId) -> float:
        raise NotImplementedError


def aggregate_heldout_score(
    oracle: Evaluator, demos: DemoSet, queries: Sequence[SampleId]
) -> Utility:
    """Mean utility of a demo set over a query set.

    The mean (rather than the raw sum) keeps scores comparable across query
    sets of different sizes; the argmax over sets is unchanged for any fixed
    query set.  Makes exactly len(queries) oracle calls.
    """
    qs = list(queries)
    if not qs:
        raise EmptyQuerySet("aggregate score needs at least one query")
    overlap = [q for q in qs if q in demos]
    if overlap:
        raise OverlapError(f"query ids {overlap} also appear in the demo set")
    values = oracle.evaluate_values(demos, qs)
    total = 0.0
    for v in values:
        total += float(v)
    return Utility(total / len(qs), oracle.source_metric)


def brute_force_best(
    oracle: Evaluator,
    candidates: Sequence[SampleId],
    queries: Sequence[SampleId],
    max_size: int | None = None,
) -> tuple[DemoSet, Utility]:
    """Exhaustively score every candidate subset; first-best wins ties.

    Enumeration order (ascending size, then lexicographic) is the tie-break
    order.  Total oracle calls: (number of subsets) * len(queries).
    """
    cands = list(candidates)
    qs = list(queries)
    overlap = sorted(set(cands) & set(qs))
    if overlap:
        raise OverlapError(f"candidate ids {overlap} also appear in the query set")
    best: tuple[DemoSet, Utility] | None = None
    for subset in enumerate_subsets(cands, max_size):
        utility = aggregate_heldout_score(oracle, subset, qs)
        if best is None or utility.value > best[1].value:
            best = (subset, utility)
    if best is None:
        raise EmptyPool("no candidates to enumerate")
    return best


@dataclass(frozen=True)
class OneShotMatrix:
    """Precomputed one-shot utilities: demo rows by query columns."""

    demo_ids: tuple[SampleId, ...]
    query_ids: tuple[SampleId, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(set(self.demo_ids)) != len(self.demo_ids):
            raise ParseError("duplicate demo ids in one-shot matrix")
        if len(set(self.query_ids)) != len(self.query_ids):
            raise ParseError("duplicate query ids in one-shot matrix")
        if self.values.shape != (len(self.demo_ids), len(self.query_ids)):
            raise ParseError("one-shot matrix shape does not match its ids")
        if not np.all(np.isfinite(self.values)):
            raise ParseError("one-shot matrix contains non-finite values")
        object.__setattr__(self, "_row", {d: i for i, d in enumerate(self.demo_ids)})
        object.__setattr__(self, "_col", {q: j for j, q in enumerate(self.query_ids)})
        self.values.setflags(write=False)

    def value(self, demo: SampleId, query: SampleId) -> float:
        row = self._row.get(demo)
        col = self._col.get(query)
        if row is None:
            raise MissingEntry(f"demo id {demo} not present in one-shot matrix")
        if col is None:
            raise MissingEntry(f"query id {query} not present in one-shot matrix")
        return float(self.values[row, col])


class OneShotMatrixEvaluator(Evaluator):
    """Tabulated one-shot backend; only singleton demo sets are evaluable."""

    def __init__(self, matrix: OneShotMatrix):
        super().__init__()
        self.matrix = matrix

    def _check(self, demos: DemoSet, queries: Sequence[SampleId]) -> None:
        if len(demos) != 1:
            raise CardinalityUnsupported(
                f"one-shot matrix supports |demos| = 1, got {len(demos)}"
            )

    def _value(self, demos: DemoSet, query: SampleId) -> float:
        return self.matrix.value(demos.members[0], query)


@dataclass(frozen=True)
class SubsetTable:
    """Exhaustively precomputed set scores keyed by (canonical set, query)."""

    entries: dict[tuple[tuple[SampleId, ...], SampleId], float]

    def value(self, demos: DemoSet, query: SampleId) -> float:
        key = (demos.members, query)
        try:
            return self.entries[key]
        except KeyError:
            raise MissingEntry(
                f"no subset-table entry for set {demos} and query {query}"
            ) from None

    @property
    def member_ids(self) -> tuple[SampleId, ...]:
        ids: set[SampleId] = set()
        for members, _ in self.entries:
            ids.update(members)
        return tuple(sorted(ids))


class SubsetTableEvaluator(Evaluator):
    """Tabulated subset backend; missing keys are an error, never a default."""

    def __init__(self, table: SubsetTable):
        super().__init__()
        self.table = table

    def _value(self, demos: DemoSet, query: SampleId) -> float:
        return self.table.value(demos, query)


def tabulated_evaluate(
    backend: OneShotMatrix | SubsetTable, demos: DemoSet, query: SampleId
) -> Utility:
    """One-off lookup against a tabulated backend, returned verbatim."""
    if isinstance(backend, OneShotMatrix):
        return OneShotMatrixEvaluator(backend).evaluate(demos, query)
    if isinstance(backend, SubsetTable):
        return SubsetTableEvaluator(backend).evaluate(demos, query)
    raise TypeError(f"expected OneShotMatrix or SubsetTable, got {type(backend)!r}")


MATRIX_HEADER = "demo\\query"


def load_one_shot_matrix(path: str | Path) -> OneShotMatrix:
    """Parse the one-shot matrix CSV (header cell 'demo\\query', utility cells)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty matrix file")
    header = rows[0]
    if not header or header[0] != MATRIX_HEADER:
        raise ParseError(f"{path}: first header cell must be '{MATRIX_HEADER}'")
    try:
        query_ids = tuple(int(c) for c in header[1:])
    except ValueError as exc:
        raise ParseError(f"{path}: bad query id in header: {exc}") from None
    if not query_ids:
        raise ParseError(f"{path}: matrix has no query columns")
    demo_ids = []
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(query_ids) + 1:
            raise ParseError(
                f"{path}:{lineno}: expected {len(query_ids) + 1} cells, got {len(row)}"
            )
        try:
            demo_ids.append(int(row[0]))
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in values[-1]):
            raise ParseError(f"{path}:{lineno}: non-finite utility")
    if not demo_ids:
        raise ParseError(f"{path}: matrix has no demo rows")
    return OneShotMatrix(
        tuple(demo_ids), query_ids, np.array(values, dtype=np.float64)
    )


def save_one_shot_matrix(matrix: OneShotMatrix, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([MATRIX_HEADER, *[str(q) for q in matrix.query_ids]])
        for i, demo in enumerate(matrix.demo_ids):
            writer.writerow([str(demo), *[repr(float(v)) for v in matrix.values[i]]])


def load_subset_table(path: str | Path) -> SubsetTable:
    """Parse the subset-table JSONL ({"set":[...],"query":id,"utility":num})."""
    path = Path(path)
    entries: dict[tuple[tuple[SampleId, ...], SampleId], float] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: bad JSON: {exc}") from None
            if (
                not isinstance(obj, dict)
                or not isinstance(obj.get("set"), list)
                or not isinstance(obj.get("query"), int)
                or isinstance(obj.get("query"), bool)
                or not isinstance(obj.get("utility"), (int, float))
                or isinstance(obj.get("utility"), bool)
            ):
                raise ParseError(f"{path}:{lineno}: expected set/query/utility fields")
            members = obj["set"]
            if not all(isinstance(m, int) and not isinstance(m, bool) for m in members):
                raise ParseError(f"{path}:{lineno}: set members must be integers")
            if any(a >= b for a, b in zip(members, members[1:])) or not members:
                raise ParseError(
                    f"{path}:{lineno}: set must be non-empty and strictly ascending"
                )
            utility = float(obj["utility"])
            if not math.isfinite(utility):
                raise ParseError(f"{path}:{lineno}: non-finite utility")
            key = (tuple(members), obj["query"])
            if key in entries:
                raise ParseError(f"{path}:{lineno}: duplicate entry for {key}")
            entries[key] = utility
    return SubsetTable(entries)


def save_subset_table(
    rows: Iterable[tuple[DemoSet, SampleId, float]], path: str | Path
) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for demos, query, utility in rows:
            fh.write(
                json.dumps(
                    {"set": list(demos.members), "query": query, "utility": utility},
                    separators=(", ", ": "),
                )
                + "\n"
            )
