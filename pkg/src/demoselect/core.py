"""Domain types and pool operations shared by every other module.

Demonstration sets are unordered: features are fused by order-free pooling,
so the canonical representation is a strictly ascending tuple of sample ids.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import BadSplit, NonFinite, PoolTooLarge
from ._hash import TAG_SPLIT, shuffled_indices

SampleId = int

# Uncapped enumeration is 2^n - 1 subsets; past this the pool is refused.
MAX_ENUMERABLE_POOL = 24


@dataclass(frozen=True)
class Sample:
    """One labeled demonstration candidate."""

    id: SampleId
    label_ref: str | None = None
    feature_ref: int | None = None


@dataclass(frozen=True, order=True)
class DemoSet:
    """Canonical unordered demonstration set (sorted unique member ids)."""

    members: tuple[SampleId, ...]

    def __post_init__(self) -> None:
        if any(m < 0 for m in self.members):
            raise ValueError("sample ids must be non-negative")
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise ValueError(
                "DemoSet members must be strictly ascending; use canonicalize()"
            )

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SampleId]:
        return iter(self.members)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def with_member(self, sample: SampleId) -> "DemoSet":
        return canonicalize((*self.members, sample))

    def __str__(self) -> str:
        return "{" + ",".join(str(m) for m in self.members) + "}"


EMPTY_SET = DemoSet(())


def canonicalize(ids: Iterable[SampleId]) -> DemoSet:
    """Sorted, deduplicated DemoSet; any permutation yields the same value."""
    return DemoSet(tuple(sorted(set(ids))))


def enumerate_subsets(
    ids: Iterable[SampleId], max_size: int | None = None
) -> Iterator[DemoSet]:
    """Yield every non-empty subset of ids, ascending size then lexicographic.

    The order is the package-wide tie-break order for subset searches.
    """
    pool = canonicalize(ids).members
    n = len(pool)
    if n > MAX_ENUMERABLE_POOL:
        raise PoolTooLarge(f"pool of {n} exceeds enumeration limit {MAX_ENUMERABLE_POOL}")
    cap = n if max_size is None else max_size
    if cap < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    cap = min(cap, n)
    for size in range(1, cap + 1):
        for combo in itertools.combinations(pool, size):
            yield DemoSet(combo)


def subset_count(n: int, max_size: int | None = None) -> int:
    """Number of subsets enumerate_subsets yields for a pool of n ids."""
    cap = n if max_size is None else min(max_size, n)
    return sum(math.comb(n, k) for k in range(1, cap + 1))


@dataclass(frozen=True)
class SplitSpec:
    """Seeded partition of a pool into candidate and heldout ids.

    candidate_ids keep their draw order; downstream tie-breaking follows it.
    heldout_ids keep the original pool order.
    """

    pool_ids: tuple[SampleId, ...]
    candidate_ids: tuple[SampleId, ...]
    heldout_ids: tuple[SampleId, ...]
    seed: int


def make_split(pool: Iterable[SampleId], n_prime: int, seed: int) -> SplitSpec:
    """Draw a deterministic n_prime-subset of the pool as candidates."""
    pool_ids = tuple(pool)
    n = len(pool_ids)
    if len(set(pool_ids)) != n:
        raise BadSplit("pool ids must be distinct")
    if not 1 <= n_prime < n:
        raise BadSplit(f"n_prime must be in [1, {n - 1}], got {n_prime}")
    order = shuffled_indices(n, seed, TAG_SPLIT)
    chosen = order[:n_prime]
    chosen_positions = set(chosen)
    candidates = tuple(pool_ids[i] for i in chosen)
    heldout = tuple(pool_ids[i] for i in range(n) if i not in chosen_positions)
    return SplitSpec(pool_ids, candidates, heldout, seed)


@dataclass(frozen=True)
class Utility:
    """Canonical higher-is-better score.

    Losses are negated at the oracle boundary, so comparing .value always
    means "larger is better" regardless of the source metric.
    """

    value: float
    source_metric: str = "external"
    orientation: str = field(default="higher_better", init=False)

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise NonFinite(f"utility value must be finite, got {self.value!r}")
