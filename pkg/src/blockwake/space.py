"""Discrete parameter grids, points, objective plumbing, and the memo cache.

A point is a plain tuple of level indices, one per parameter.  All evaluation
goes through :func:`evaluate`, which memoizes per run so that overlapping
block searches turn repeated work into shared structure instead of redundancy.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Protocol, Sequence

from .errors import (
    CacheCapacityError,
    ConfigError,
    DomainError,
    EvaluationError,
)

Point = tuple[int, ...]


@dataclass(frozen=True)
class Parameter:
    """One discrete design parameter with an ordered set of level labels."""

    id: int
    name: str
    levels: tuple[str, ...]

    def __post_init__(self):
        if len(self.levels) < 1:
            raise ConfigError(f"parameter {self.name!r} needs at least one level")
        if len(set(self.levels)) != len(self.levels):
            raise ConfigError(f"parameter {self.name!r} has duplicate level labels")

    @property
    def cardinality(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class ParameterSpace:
    """An ordered finite grid: the cartesian product of all parameter levels."""

    params: tuple[Parameter, ...]

    def __post_init__(self):
        if len(self.params) < 1:
            raise ConfigError("a parameter space needs at least one parameter")

    @property
    def m(self) -> int:
        return len(self.params)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(p.cardinality for p in self.params)

    @property
    def size(self) -> int:
        # exact: python ints never overflow
        out = 1
        for p in self.params:
            out *= p.cardinality
        return out

    def validate_point(self, point: Point) -> None:
        if len(point) != self.m:
            raise DomainError(
                f"point has {len(point)} coordinates, space has {self.m} parameters"
            )
        for i, (c, p) in enumerate(zip(point, self.params)):
            if not 0 <= c < p.cardinality:
                raise DomainError(
                    f"coordinate {i} = {c} outside [0, {p.cardinality}) for {p.name!r}"
                )

    def iter_points(self) -> Iterator[Point]:
        """Yield every point in lexicographic coordinate order."""
        import itertools

        yield from itertools.product(*(range(c) for c in self.cardinalities))


def uniform_space(m: int, levels: int | Sequence[int]) -> ParameterSpace:
    """Build a space of ``m`` parameters with the given level count(s)."""
    if isinstance(levels, int):
        cards = [levels] * m
    else:
        cards = list(levels)
        if len(cards) != m:
            raise ConfigError(f"need {m} level counts, got {len(cards)}")
    params = tuple(
        Parameter(i, f"p{i}", tuple(str(j) for j in range(card)))
        for i, card in enumerate(cards)
    )
    return ParameterSpace(params)


def point_to_str(point: Point) -> str:
    """Serialize a point as comma-separated level indices."""
    return ",".join(str(c) for c in point)


def point_from_str(text: str) -> Point:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse point {text!r}: {exc}") from None


class Objective(Protocol):
    """Anything evaluable at a point.  Implementations must be deterministic."""

    def value(self, point: Point) -> float: ...


@dataclass
class MemoCache:
    """Point -> objective value store.  A point is evaluated at most once.

    ``hits + misses`` equals the number of requests seen; ``misses`` equals the
    number of distinct points stored.  A full cache rejects new insertions with
    an error instead of evicting, because eviction would silently break the
    commonality accounting.

    One search run drives one cache from a single logical thread.  Distinct
    runs may proceed in parallel with independent caches; sharing a read-mostly
    cache across runs is sound only because insertions are idempotent (a point
    always maps to the same value).
    """

    capacity: int | None = None
    entries: dict[Point, float] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def dump_csv(self, path) -> None:
        """Write entries as CSV with columns ``coords,value`` (sorted)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["coords", "value"])
            for point in sorted(self.entries):
                writer.writerow([point_to_str(point), repr(self.entries[point])])


def evaluate(
    space: ParameterSpace,
    landscape: Objective,
    point: Point,
    cache: MemoCache,
) -> float:
    """Memoized objective evaluation.

    Repeat requests for the same point are served from the cache without
    invoking the landscape.  Non-finite landscape values are rejected.
    """
    space.validate_point(point)
    point = tuple(point)
    if point in cache.entries:
        cache.hits += 1
        return cache.entries[point]
    if cache.capacity is not None and len(cache.entries) >= cache.capacity:
        raise CacheCapacityError(
            f"cache capacity {cache.capacity} reached; refusing to evict"
        )
    value = landscape.value(point)
    if not math.isfinite(value):
        raise EvaluationError(
            f"objective returned non-finite value {value!r} at point {point_to_str(point)}",
            point=point,
        )
    cache.misses += 1
    cache.entries[point] = float(value)
    return cache.entries[point]


class CombinedValue(NamedTuple):
    value: float
    clamped: bool


@dataclass(frozen=True)
class ObjectiveSpec:
    """How raw objectives are scaled to [0, 1] and weighted into one value."""

    kind: str = "single"  # "single" | "bi"
    bounds: tuple[tuple[float, float], ...] = ()
    weights: tuple[float, ...] = (0.5, 0.5)

    def __post_init__(self):
        if self.kind not in ("single", "bi"):
            raise ConfigError(f"unknown objective kind {self.kind!r}")
        for lo, hi in self.bounds:
            if not hi > lo:
                raise ConfigError(f"degenerate objective bounds ({lo}, {hi})")
        if self.kind == "bi":
            if len(self.bounds) != 2:
                raise ConfigError("bi-objective spec needs bounds for both objectives")
            if len(self.weights) != 2 or any(w < 0 for w in self.weights):
                raise ConfigError("bi-objective spec needs two non-negative weights")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ConfigError("objective weights must sum to 1")


def combine_bi_objective(f1: float, f2: float, spec: ObjectiveSpec) -> CombinedValue:
    """Scale both raw objectives to [0, 1] and combine by the spec weights.

    Raw values outside the declared bounds are clamped (and the clamp is
    flagged) so the combined value always stays in [0, 1].
    """
    if spec.kind != "bi":
        raise ConfigError("combine_bi_objective needs a bi-objective spec")
    clamped = False
    scaled = []
    for f, (lo, hi) in zip((f1, f2), spec.bounds):
        s = (f - lo) / (hi - lo)
        if s < 0.0:
            s, clamped = 0.0, True
        elif s > 1.0:
            s, clamped = 1.0, True
        scaled.append(s)
    value = spec.weights[0] * scaled[0] + spec.weights[1] * scaled[1]
    return CombinedValue(value, clamped)
