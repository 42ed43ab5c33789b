"""Overlapping block coordinate descent with exhaustive within-block search.

One run is strictly sequential (Gauss-Seidel): each active block is searched
over its full level product while every other parameter stays frozen, the
block argmin becomes the next iterate, and parameters shared with the next
block are simply searched again there, so they pass no values of their own.
Every evaluation goes through the memo cache, so overlap redundancy costs
nothing beyond a lookup.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PlanError
from .plan import SweepPlan
from .space import MemoCache, Objective, ParameterSpace, Point, evaluate


@dataclass
class SearchState:
    """Mutable per-run state: the iterate plus the bookkeeping the
    search-wake indicators need."""

    current: Point
    current_value: float
    iteration: int = 0
    last_visit: dict[int, int] = field(default_factory=dict)
    move_history: list[tuple[int, ...]] = field(default_factory=list)


@dataclass(frozen=True)
class TraceRecord:
    cycle: int
    iteration: int
    block: tuple[int, ...]
    point: Point
    value: float
    evals_cum: int


@dataclass
class SearchTrace:
    """Per-iteration record of one block coordinate descent run."""

    records: list[TraceRecord]
    ordering: tuple[int, ...]
    plan_name: str
    plan_label: str
    seed: int | None
    initial_point: Point
    initial_value: float
    cycle_lengths: tuple[int, ...]

    @property
    def final_value(self) -> float:
        return self.records[-1].value if self.records else self.initial_value

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.records]

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        return [r.block for r in self.records]


def initial_point(
    space: ParameterSpace,
    policy: str = "mid",
    seed: int | None = None,
    coords: Point | None = None,
) -> Point:
    """Build a start point: explicit coordinates, mid levels, or seeded random."""
    if policy == "fixed":
        point = tuple(coords) if coords is not None else (0,) * space.m
        space.validate_point(point)
        return point
    if policy == "mid":
        return tuple(c // 2 for c in space.cardinalities)
    if policy == "random":
        rng = np.random.default_rng(seed)
        return tuple(int(rng.integers(0, c)) for c in space.cardinalities)
    raise DomainError(f"unknown initialization policy {policy!r}")


def run_search(
    space: ParameterSpace,
    landscape: Objective,
    plan: SweepPlan,
    ordering: tuple[int, ...],
    init: Point,
    cache: MemoCache | None = None,
    seed: int | None = None,
) -> SearchTrace:
    """Execute the plan block by block and record the full trace.

    ``ordering`` maps circular-arrangement positions to parameter indices, so
    the same plan can be replayed over many parameter-to-position assignments.
    Argmin ties go to the lexicographically smallest coordinate vector read in
    ordering position order.
    """
    m = space.m
    if plan.m != m:
        raise PlanError(f"plan is for {plan.m} positions, space has {m}")
    if sorted(ordering) != list(range(m)):
        raise DomainError(f"ordering must be a permutation of 0..{m - 1}")
    if cache is None:
        cache = MemoCache()
    space.validate_point(init)

    coords = list(init)
    value = evaluate(space, landscape, tuple(coords), cache)
    state = SearchState(current=tuple(coords), current_value=value)

    records: list[TraceRecord] = []
    k = 0
    for cycle_idx, cycle in enumerate(plan.cycles, start=1):
        for block in cycle.blocks:
            if not block.members:
                raise PlanError("empty active block")
            k += 1
            positions = block.members  # ascending
            active = [ordering[p] for p in positions]
            best_value = None
            best_combo = None
            # product over ascending positions with ascending levels enumerates
            # candidates in lexicographic position order, so the first strict
            # minimum is the tie-break winner
            for combo in itertools.product(
                *(range(space.params[q].cardinality) for q in active)
            ):
                for q, lv in zip(active, combo):
                    coords[q] = lv
                cand = evaluate(space, landscape, tuple(coords), cache)
                if best_value is None or cand < best_value:
                    best_value = cand
                    best_combo = combo
            for q, lv in zip(active, best_combo):
                coords[q] = lv
            state.current = tuple(coords)
            state.current_value = best_value
            state.iteration = k
            for p in positions:
                state.last_visit[p] = k
            state.move_history.append(positions)
            records.append(
                TraceRecord(
                    cycle=cycle_idx,
                    iteration=k,
                    block=positions,
                    point=state.current,
                    value=best_value,
                    evals_cum=cache.misses,
                )
            )
    return SearchTrace(
        records=records,
        ordering=tuple(ordering),
        plan_name=plan.name,
        plan_label=plan.label,
        seed=seed,
        initial_point=tuple(init),
        initial_value=value,
        cycle_lengths=tuple(len(c.blocks) for c in plan.cycles),
    )


def write_trace_csv(trace: SearchTrace, path) -> None:
    """Columns ``cycle,iter,block,point,f,evals_cum``; block and point are
    semicolon-separated integers."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cycle", "iter", "block", "point", "f", "evals_cum"])
        for r in trace.records:
            writer.writerow(
                [
                    r.cycle,
                    r.iteration,
                    ";".join(str(p) for p in r.block),
                    ";".join(str(c) for c in r.point),
                    repr(r.value),
                    r.evals_cum,
                ]
            )


def read_trace_csv(path) -> list[TraceRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(
                TraceRecord(
                    cycle=int(row["cycle"]),
                    iteration=int(row["iter"]),
                    block=tuple(int(t) for t in row["block"].split(";")),
                    point=tuple(int(t) for t in row["point"].split(";")),
                    value=float(row["f"]),
                    evals_cum=int(row["evals_cum"]),
                )
            )
    return records
