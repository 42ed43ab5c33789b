"""Synthetic landscapes, a brute-force oracle, and the experiment harness.

The landscapes stand in for an expensive simulator: deterministic, seedable
black boxes over a discrete grid.  The harness replays a set of sweep plans
over a shared list of random parameter orderings (isolating the effect of the
search structure from the parameter-to-position assignment), aggregates
quality and efficiency per iteration, and correlates structure indicators
with outcomes across plans.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest

from .engine import initial_point, run_search
from .errors import BudgetError, ConfigError, PlanError
from .indicators import IndicatorVariants, compute_indicators
from .plan import SweepPlan, assemble_plan
from .space import (
    MemoCache,
    ObjectiveSpec,
    ParameterSpace,
    Point,
    combine_bi_objective,
)

LANDSCAPE_KINDS = ("separable-convex", "trap", "seeded-random", "conflict-pair")

DEFAULT_BUDGET = 1_000_000


def _noise01(seed: int, point: Point) -> float:
    """Stable hash noise in [0, 1): identical across platforms and runs."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed).to_bytes(8, "little", signed=True))
    h.update(b"|")
    h.update(",".join(str(c) for c in point).encode())
    return int.from_bytes(h.digest(), "little") / 2.0**64


def _l1(a: Point, b: Point) -> int:
    return sum(abs(x - y) for x, y in zip(a, b))


def _farthest_point(space: ParameterSpace, origin: Point) -> Point:
    """Per coordinate, the level farthest from the origin (larger level on ties)."""
    out = []
    for c, card in zip(origin, space.cardinalities):
        far = max(range(card), key=lambda lv: (abs(lv - c), lv))
        out.append(far)
    return tuple(out)


class SeparableConvexLandscape:
    """Sum of per-parameter convex terms; coordinate descent solves it exactly.

    value(x) = floor + sum_i w_i * (x_i - t_i)^2 with seeded integer targets
    t and positive weights w.  The floor keeps values strictly positive so the
    reciprocal quality form stays defined.
    """

    kind = "separable-convex"
    n_objectives = 1

    def __init__(self, space: ParameterSpace, seed: int = 0, floor: float = 0.125):
        self.space = space
        self.seed = int(seed)
        self.floor = float(floor)
        rng = np.random.default_rng(self.seed)
        self.targets = tuple(int(rng.integers(0, c)) for c in space.cardinalities)
        self.weights = tuple(float(w) for w in rng.uniform(0.5, 1.5, space.m))

    def value(self, point: Point) -> float:
        acc = self.floor
        for x, t, w in zip(point, self.targets, self.weights):
            d = x - t
            acc += w * d * d
        return acc

    def raw_values(self, point: Point) -> tuple[float, ...]:
        return (self.value(point),)

    def analytic_bounds(self):
        hi = self.floor
        for t, w, card in zip(self.targets, self.weights, self.space.cardinalities):
            span = max(t, card - 1 - t)
            hi += w * span * span
        return ((self.floor, hi),)

    def global_minimum(self) -> tuple[Point, float]:
        return self.targets, self.floor

    def describe(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "floor": self.floor}


class TrapLandscape:
    """Multi-basin landscape with two construction-guaranteed local minima.

    The value is the lower envelope of weighted cone basins
    depth_b + sum_i w_bi * |x_i - a_bi|.  Anchor 0 is the unique global
    minimum.  Anchor 1 sits at the far corner from it; its depth is chosen
    below the largest value any single-coordinate move can shave off the
    basin-0 distance there, so no single-coordinate move escapes it.  The
    small depth gap keeps the wrong basin competitive early on, so block
    searches genuinely get trapped and untrapped depending on which slices
    of parameters go active together.  Extra seeded basins add ruggedness;
    they are placed far enough from anchor 1 to leave its guarantee intact.
    """

    kind = "trap"
    n_objectives = 1

    def __init__(
        self,
        space: ParameterSpace,
        seed: int = 0,
        n_basins: int = 5,
        slope: float = 1.0,
        depth_gap_factor: float = 0.3,
        base_depth: float = 0.05,
    ):
        if not 0.0 < depth_gap_factor < 1.0:
            raise ConfigError("depth_gap_factor must lie strictly between 0 and 1")
        if n_basins < 2:
            raise ConfigError("a trap needs at least two basins")
        self.space = space
        self.seed = int(seed)
        self.n_basins = int(n_basins)
        self.slope = float(slope)
        self.depth_gap_factor = float(depth_gap_factor)
        self.base_depth = float(base_depth)

        rng = np.random.default_rng(self.seed)
        cards = space.cardinalities
        spans = [c - 1 for c in cards]

        def draw_point():
            return tuple(int(rng.integers(0, c)) for c in cards)

        def draw_weights():
            return tuple(self.slope * float(w) for w in rng.uniform(0.5, 1.5, space.m))

        def wdist(weights, a, b):
            return sum(w * abs(x - y) for w, x, y in zip(weights, a, b))

        built = None
        for _attempt in range(64):
            p0 = draw_point()
            w0 = draw_weights()
            p1 = _farthest_point(space, p0)
            dist01 = wdist(w0, p0, p1)
            # the most a single-coordinate move from p1 can cut basin-0 distance
            max_step0 = max(w * s for w, s in zip(w0, spans))
            if dist01 > max_step0:
                built = (p0, w0, p1, dist01, max_step0)
                break
        if built is None:
            raise ConfigError(
                "trap cannot place two single-move local minima in this space; "
                "use more parameters"
            )
        p0, w0, p1, dist01, max_step0 = built
        depth1 = self.base_depth + self.depth_gap_factor * (dist01 - max_step0)
        anchors = [p0, p1]
        weights = [w0, draw_weights()]
        depths = [self.base_depth, depth1]
        # extra basins sit between the two depths, far enough from anchor 1
        # (in its own metric) that they cannot undercut its neighborhood
        for _ in range(self.n_basins - 2):
            depth = self.base_depth + (depth1 - self.base_depth) * (
                0.4 + 0.4 * float(rng.random())
            )
            wt = draw_weights()
            max_step_t = max(w * s for w, s in zip(wt, spans))
            placed = False
            for _attempt in range(64):
                cand = draw_point()
                if cand in anchors:
                    continue
                if wdist(wt, cand, p1) > (depth1 - depth) + max_step_t:
                    anchors.append(cand)
                    weights.append(wt)
                    depths.append(depth)
                    placed = True
                    break
            if not placed:
                break  # keep the guaranteed pair; skip the extra basin
        self.anchors = tuple(anchors)
        self.basin_weights = tuple(weights)
        self.depths = tuple(depths)

    def value(self, point: Point) -> float:
        best = math.inf
        for anchor, wts, depth in zip(self.anchors, self.basin_weights, self.depths):
            acc = depth
            for w, x, a in zip(wts, point, anchor):
                acc += w * abs(x - a)
            if acc < best:
                best = acc
        return best

    def raw_values(self, point: Point) -> tuple[float, ...]:
        return (self.value(point),)

    def analytic_bounds(self):
        return None

    def guaranteed_minima(self) -> tuple[Point, Point]:
        """The two anchors that are local minima by construction."""
        return self.anchors[0], self.anchors[1]

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "n_basins": self.n_basins,
            "slope": self.slope,
            "depth_gap_factor": self.depth_gap_factor,
            "base_depth": self.base_depth,
        }


class SeededRandomLandscape:
    """Rugged landscape: hash noise blended with a smooth separable bowl.

    value(x) = floor + (1 - smoothness) * noise(x) + smoothness * bowl(x),
    with the bowl rescaled to [0, 1].  smoothness 0 is pure noise.
    """

    kind = "seeded-random"
    n_objectives = 1

    def __init__(
        self,
        space: ParameterSpace,
        seed: int = 0,
        smoothness: float = 0.5,
        floor: float = 0.05,
    ):
        if not 0.0 <= smoothness <= 1.0:
            raise ConfigError("smoothness must lie in [0, 1]")
        self.space = space
        self.seed = int(seed)
        self.smoothness = float(smoothness)
        self.floor = float(floor)
        rng = np.random.default_rng(self.seed)
        self.targets = tuple(int(rng.integers(0, c)) for c in space.cardinalities)
        self.weights = tuple(float(w) for w in rng.uniform(0.5, 1.5, space.m))
        hi = 0.0
        for t, w, card in zip(self.targets, self.weights, space.cardinalities):
            span = max(t, card - 1 - t)
            hi += w * span * span
        self._bowl_scale = hi if hi > 0 else 1.0

    def _bowl(self, point: Point) -> float:
        acc = 0.0
        for x, t, w in zip(point, self.targets, self.weights):
            d = x - t
            acc += w * d * d
        return acc / self._bowl_scale

    def value(self, point: Point) -> float:
        noise = _noise01(self.seed, point)
        return (
            self.floor
            + (1.0 - self.smoothness) * noise
            + self.smoothness * self._bowl(point)
        )

    def raw_values(self, point: Point) -> tuple[float, ...]:
        return (self.value(point),)

    def analytic_bounds(self):
        return None

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "smoothness": self.smoothness,
            "floor": self.floor,
        }


class ConflictPairLandscape:
    """Two separable quadratics whose per-coordinate minima disagree on a
    seeded subset of parameters, scaled to [0, 1] and weighted 1:1.

    The disagreement makes the combined objective non-convex along the
    conflicting coordinates, without any simulator.  Bounds for the 0-1
    scaling default to the exact analytic grid bounds of each raw objective.
    """

    kind = "conflict-pair"
    n_objectives = 2

    def __init__(
        self,
        space: ParameterSpace,
        seed: int = 0,
        n_conflicts: int | None = None,
        bounds: tuple[tuple[float, float], tuple[float, float]] | None = None,
        weights: tuple[float, float] = (0.5, 0.5),
    ):
        self.space = space
        self.seed = int(seed)
        rng = np.random.default_rng(self.seed)
        m = space.m
        eligible = [i for i, c in enumerate(space.cardinalities) if c >= 2]
        if not eligible:
            raise ConfigError("conflict pair needs at least one multi-level parameter")
        if n_conflicts is None:
            n_conflicts = max(1, math.ceil(m / 2))
        if not 1 <= n_conflicts <= len(eligible):
            raise ConfigError(
                f"n_conflicts must lie in [1, {len(eligible)}], got {n_conflicts}"
            )
        self.n_conflicts = int(n_conflicts)
        self.targets1 = tuple(int(rng.integers(0, c)) for c in space.cardinalities)
        conflict_idx = rng.choice(len(eligible), size=self.n_conflicts, replace=False)
        self.conflicts = tuple(sorted(eligible[int(i)] for i in conflict_idx))
        far = _farthest_point(space, self.targets1)
        t2 = list(self.targets1)
        for i in self.conflicts:
            t2[i] = far[i] if far[i] != self.targets1[i] else (self.targets1[i] + 1)
        self.targets2 = tuple(t2)
        self.weights1 = tuple(float(w) for w in rng.uniform(0.5, 1.5, m))
        self.weights2 = tuple(float(w) for w in rng.uniform(0.5, 1.5, m))
        if bounds is None:
            bounds = (
                self._quad_bounds(self.targets1, self.weights1),
                self._quad_bounds(self.targets2, self.weights2),
            )
        self.objective_spec = ObjectiveSpec(kind="bi", bounds=bounds, weights=weights)

    def _quad_bounds(self, targets, weights) -> tuple[float, float]:
        hi = 0.0
        for t, w, card in zip(targets, weights, self.space.cardinalities):
            span = max(t, card - 1 - t)
            hi += w * span * span
        return (0.0, hi)

    @staticmethod
    def _quad(point, targets, weights) -> float:
        acc = 0.0
        for x, t, w in zip(point, targets, weights):
            d = x - t
            acc += w * d * d
        return acc

    def raw_values(self, point: Point) -> tuple[float, float]:
        return (
            self._quad(point, self.targets1, self.weights1),
            self._quad(point, self.targets2, self.weights2),
        )

    def value(self, point: Point) -> float:
        f1, f2 = self.raw_values(point)
        return combine_bi_objective(f1, f2, self.objective_spec).value

    def analytic_bounds(self):
        return tuple(self.objective_spec.bounds)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "n_conflicts": self.n_conflicts,
            "bounds": [list(b) for b in self.objective_spec.bounds],
        }


_KIND_ALIASES = {
    "separable-convex": "separable-convex",
    "separable": "separable-convex",
    "trap": "trap",
    "seeded-random": "seeded-random",
    "random": "seeded-random",
    "conflict-pair": "conflict-pair",
    "conflict": "conflict-pair",
}

_KIND_CLASSES = {
    "separable-convex": SeparableConvexLandscape,
    "trap": TrapLandscape,
    "seeded-random": SeededRandomLandscape,
    "conflict-pair": ConflictPairLandscape,
}


def make_landscape(kind: str, space: ParameterSpace, seed: int = 0, **constants):
    """Factory for the built-in landscape kinds (aliases accepted)."""
    canonical = _KIND_ALIASES.get(kind)
    if canonical is None:
        raise ConfigError(
            f"unknown landscape kind {kind!r}; choose from {LANDSCAPE_KINDS}"
        )
    return _KIND_CLASSES[canonical](space, seed=seed, **constants)


def oracle_bounds(space: ParameterSpace, landscape, budget: int = DEFAULT_BUDGET):
    """Exact per-objective raw bounds from full enumeration (budget-guarded)."""
    if space.size > budget:
        raise BudgetError(
            f"full enumeration needs {space.size} evaluations, budget is {budget}",
            required=space.size,
            budget=budget,
        )
    lows = [math.inf] * landscape.n_objectives
    highs = [-math.inf] * landscape.n_objectives
    for point in space.iter_points():
        for i, raw in enumerate(landscape.raw_values(point)):
            lows[i] = min(lows[i], raw)
            highs[i] = max(highs[i], raw)
    return tuple((lo, hi) for lo, hi in zip(lows, highs))


@dataclass
class BruteForceResult:
    min_point: Point
    min_value: float
    evaluations: int
    hist_counts: list[int]
    hist_edges: list[float]
    value_bounds: tuple[float, float]
    raw_bounds: tuple[tuple[float, float], ...]


def brute_force(
    space: ParameterSpace,
    landscape,
    budget: int = DEFAULT_BUDGET,
    bins: int = 50,
) -> BruteForceResult:
    """Enumerate the whole grid: exact global minimum, value histogram, and the
    normalization bounds a 0-1 scaling needs.

    Ties on the minimum go to the lexicographically smallest point.  Refuses
    (with the required budget) rather than start an enumeration that will not
    finish.
    """
    total = space.size
    if total > budget:
        raise BudgetError(
            f"full enumeration needs {total} evaluations, budget is {budget}",
            required=total,
            budget=budget,
        )
    values = np.empty(total, dtype=float)
    best_value = math.inf
    best_point: Point | None = None
    track_raw = landscape.n_objectives > 1
    lows = [math.inf] * landscape.n_objectives
    highs = [-math.inf] * landscape.n_objectives
    for idx, point in enumerate(space.iter_points()):
        if track_raw:
            raws = landscape.raw_values(point)
            for i, raw in enumerate(raws):
                if raw < lows[i]:
                    lows[i] = raw
                if raw > highs[i]:
                    highs[i] = raw
        v = landscape.value(point)
        values[idx] = v
        if v < best_value:  # enumeration is lexicographic, first win is lex-min
            best_value = v
            best_point = point
    counts, edges = np.histogram(values, bins=bins)
    vmin = float(values.min())
    vmax = float(values.max())
    if not track_raw:
        lows, highs = [vmin], [vmax]
    return BruteForceResult(
        min_point=best_point,
        min_value=float(best_value),
        evaluations=total,
        hist_counts=[int(c) for c in counts],
        hist_edges=[float(e) for e in edges],
        value_bounds=(vmin, vmax),
        raw_bounds=tuple((float(lo), float(hi)) for lo, hi in zip(lows, highs)),
    )


def random_orderings(m: int, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Reproducible parameter orderings, shared across all plans of a run."""
    if count < 1:
        raise ConfigError("ordering count must be at least 1")
    rng = np.random.default_rng(seed)
    return [tuple(int(x) for x in rng.permutation(m)) for _ in range(count)]


@dataclass(frozen=True)
class PlanEntry:
    """One line of an experiment manifest: structure name, cycles, recombination."""

    name: str
    cycles: int = 1
    recomb: str = "none"


def parse_plan_file(text: str) -> list[PlanEntry]:
    """Parse ``name,cycles,recomb`` records (structure names may contain
    commas, so the two trailing fields are split from the right)."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.rsplit(",", 2)
        if len(parts) != 3:
            raise ConfigError(f"plan file line {lineno}: expected name,cycles,recomb")
        name, cycles, recomb = (p.strip() for p in parts)
        try:
            n_cycles = int(cycles)
        except ValueError:
            raise ConfigError(f"plan file line {lineno}: bad cycle count {cycles!r}")
        entries.append(PlanEntry(name=name, cycles=n_cycles, recomb=recomb))
    if not entries:
        raise ConfigError("plan file holds no plans")
    return entries


_FINAL_KEYS = (
    "log_SQ_max",
    "log_SE",
    "log_NSS",
    "GCR",
    "log_CV",
    "log_CF",
    "log_CCF",
    "FSW",
    "NSM",
    "URR",
    "log_IRUIF",
)


def _cell_payload(space, landscape, plan, ordering, init, variants):
    return (space, landscape, plan, ordering, init, variants)


def _run_cell(payload):
    """One (plan, ordering) cell: search with a fresh cache plus indicators."""
    space, landscape, plan, ordering, init, variants = payload
    cache = MemoCache()
    trace = run_search(space, landscape, plan, ordering, init, cache)
    ind = compute_indicators(trace, space, variants)
    rows = ind.rows
    last = rows[-1]
    ledger = ind.ledger

    def _nan(v):
        return math.nan if v is None else v

    finals = {
        "log_SQ_max": math.log(last.sq_max) if last.sq_max is not None else math.nan,
        "log_SE": _nan(last.se_log),
        "log_NSS": ledger.log_nss[-1],
        "GCR": last.gcr,
        "log_CV": math.log(last.cv) if last.cv > 0 else -math.inf,
        "log_CF": last.log_cf,
        "log_CCF": last.log_ccf,
        "FSW": last.fsw,
        "NSM": _nan(last.nsm),
        "URR": _nan(last.urr),
        "log_IRUIF": _nan(last.log_iruif),
    }
    first_cycle_len = trace.cycle_lengths[0]
    nsm_all = [r.nsm for r in rows if r.nsm is not None]
    nsm_late = [
        r.nsm for r in rows if r.nsm is not None and r.iteration > first_cycle_len
    ]
    return {
        "final_value": trace.final_value,
        "sq_min": [r.sq_min for r in rows],
        "log_sq_max": [
            math.log(r.sq_max) if r.sq_max is not None else math.nan for r in rows
        ],
        "log_se": [_nan(r.se_log) for r in rows],
        "finals": finals,
        "nsm_mean": float(np.mean(nsm_all)) if nsm_all else math.nan,
        "nsm_after_first_cycle_mean": (
            float(np.mean(nsm_late)) if nsm_late else math.nan
        ),
        "evaluations": cache.misses,
    }


@dataclass
class PlanAggregate:
    entry: PlanEntry
    label: str
    n_blocks: int
    ok_count: int
    mean_sq_min: list[float]
    mean_log_sq_max: list[float]
    mean_log_se: list[float]
    final_values: list[float]
    final_means: dict[str, float]
    nsm_mean: float
    nsm_after_first_cycle_mean: float
    hist_counts: list[int] = field(default_factory=list)
    hist_edges: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class CorrelationEntry:
    indicator: str
    r_quality: float | None
    r_efficiency: float | None


@dataclass
class Comparison:
    base_label: str
    recomb_label: str
    mean_final_base: float
    mean_final_recomb: float
    recomb_better: int
    recomb_worse: int
    ties: int
    sign_test_p: float
    nsm_after_first_cycle_base: float
    nsm_after_first_cycle_recomb: float


@dataclass
class ExperimentReport:
    config: dict
    plans: list[PlanAggregate]
    comparisons: list[Comparison]
    correlations: list[CorrelationEntry]
    errors: list[dict]


def _nanmean(values) -> float:
    arr = np.asarray(list(values), dtype=float)
    finite = arr[~np.isnan(arr)]
    return float(finite.mean()) if finite.size else math.nan


def _nanmean_columns(matrix) -> list[float]:
    out = []
    for col in np.asarray(matrix, dtype=float).T:
        finite = col[~np.isnan(col)]
        out.append(float(finite.mean()) if finite.size else math.nan)
    return out


def pearson(xs, ys) -> float | None:
    """Pearson coefficient over the finite pairs; None when fewer than three
    pairs remain or either side has zero variance."""
    pairs = [
        (x, y)
        for x, y in zip(xs, ys)
        if x is not None and y is not None and math.isfinite(x) and math.isfinite(y)
    ]
    if len(pairs) < 3:
        return None
    ax = np.array([p[0] for p in pairs], dtype=float)
    ay = np.array([p[1] for p in pairs], dtype=float)
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(dx @ dy) / (math.sqrt(sxx) * math.sqrt(syy))
    return max(-1.0, min(1.0, r))


def correlate(samples: dict, targets: tuple[str, str] = ("log_SQ_max", "log_SE")):
    """Correlate every non-target series in ``samples`` against both targets.

    ``samples`` maps series names to equally long lists (one value per plan).
    """
    q_key, e_key = targets
    out = []
    for name in samples:
        if name in targets:
            continue
        out.append(
            CorrelationEntry(
                indicator=name,
                r_quality=pearson(samples[name], samples.get(q_key, [])),
                r_efficiency=pearson(samples[name], samples.get(e_key, [])),
            )
        )
    return out


def _sign_test(base_finals, recomb_finals):
    better = worse = ties = 0
    for b, r in zip(base_finals, recomb_finals):
        if r < b:
            better += 1
        elif r > b:
            worse += 1
        else:
            ties += 1
    n = better + worse
    p = float(binomtest(better, n, 0.5).pvalue) if n > 0 else 1.0
    return better, worse, ties, p


def run_experiment(
    space: ParameterSpace,
    landscape,
    entries: list[PlanEntry],
    orderings: list[tuple[int, ...]],
    init_policy: str = "mid",
    seed: int = 0,
    variants: IndicatorVariants | None = None,
    bins: int = 20,
    jobs: int = 1,
) -> ExperimentReport:
    """Run every plan over every ordering and aggregate the protocol outputs.

    A failing (plan, ordering) cell is recorded and skipped; it does not abort
    the experiment.  Results are independent of ``jobs``.
    """
    variants = variants or IndicatorVariants()
    plans: list[SweepPlan] = [
        assemble_plan(e.name, space.m, e.cycles, e.recomb) for e in entries
    ]
    labels = [p.label for p in plans]
    if len(set(labels)) != len(labels):
        raise PlanError(f"duplicate plan labels in the experiment: {labels}")

    if init_policy == "random":
        init_rng = np.random.default_rng([seed, 7])
        inits = [
            tuple(int(init_rng.integers(0, c)) for c in space.cardinalities)
            for _ in orderings
        ]
    else:
        point = initial_point(space, init_policy)
        inits = [point] * len(orderings)

    cells = {}
    errors: list[dict] = []
    payloads = []
    keys = []
    for pi, plan in enumerate(plans):
        for oi, ordering in enumerate(orderings):
            keys.append((pi, oi))
            payloads.append(
                _cell_payload(space, landscape, plan, ordering, inits[oi], variants)
            )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell_safe, payloads))
    else:
        results = [_run_cell_safe(p) for p in payloads]
    for key, result in zip(keys, results):
        if isinstance(result, str):
            pi, oi = key
            errors.append({"plan": labels[pi], "ordering": oi, "error": result})
        else:
            cells[key] = result

    aggregates: list[PlanAggregate] = []
    for pi, (entry, plan) in enumerate(zip(entries, plans)):
        ok = [cells[(pi, oi)] for oi in range(len(orderings)) if (pi, oi) in cells]
        if not ok:
            aggregates.append(
                PlanAggregate(
                    entry=entry,
                    label=plan.label,
                    n_blocks=plan.n_blocks,
                    ok_count=0,
                    mean_sq_min=[],
                    mean_log_sq_max=[],
                    mean_log_se=[],
                    final_values=[],
                    final_means={k: math.nan for k in _FINAL_KEYS},
                    nsm_mean=math.nan,
                    nsm_after_first_cycle_mean=math.nan,
                )
            )
            continue
        sq_min = np.array([c["sq_min"] for c in ok], dtype=float)
        log_sq_max = np.array([c["log_sq_max"] for c in ok], dtype=float)
        log_se = np.array([c["log_se"] for c in ok], dtype=float)
        final_means = {
            k: _nanmean([c["finals"][k] for c in ok]) for k in _FINAL_KEYS
        }
        aggregates.append(
            PlanAggregate(
                entry=entry,
                label=plan.label,
                n_blocks=plan.n_blocks,
                ok_count=len(ok),
                mean_sq_min=[float(v) for v in sq_min.mean(axis=0)],
                mean_log_sq_max=_nanmean_columns(log_sq_max),
                mean_log_se=_nanmean_columns(log_se),
                final_values=[float(c["final_value"]) for c in ok],
                final_means=final_means,
                nsm_mean=_nanmean([c["nsm_mean"] for c in ok]),
                nsm_after_first_cycle_mean=_nanmean(
                    [c["nsm_after_first_cycle_mean"] for c in ok]
                ),
            )
        )

    # shared histogram edges across plans so the distributions are comparable
    all_finals = [v for agg in aggregates for v in agg.final_values]
    if all_finals:
        lo, hi = min(all_finals), max(all_finals)
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        edges = np.linspace(lo, hi, bins + 1)
        for agg in aggregates:
            if agg.final_values:
                counts, _ = np.histogram(agg.final_values, bins=edges)
                agg.hist_counts = [int(c) for c in counts]
                agg.hist_edges = [float(e) for e in edges]

    comparisons: list[Comparison] = []
    by_struct: dict[tuple[str, int], dict[str, int]] = {}
    for pi, entry in enumerate(entries):
        by_struct.setdefault((entry.name, entry.cycles), {})[entry.recomb] = pi
    for (name, cycles), group in sorted(by_struct.items()):
        if "none" not in group:
            continue
        bi = group["none"]
        for recomb in ("A", "B"):
            if recomb not in group:
                continue
            ri = group[recomb]
            paired = [
                (cells[(bi, oi)]["final_value"], cells[(ri, oi)]["final_value"])
                for oi in range(len(orderings))
                if (bi, oi) in cells and (ri, oi) in cells
            ]
            if not paired:
                continue
            base_vals = [p[0] for p in paired]
            rec_vals = [p[1] for p in paired]
            better, worse, ties, p_value = _sign_test(base_vals, rec_vals)
            comparisons.append(
                Comparison(
                    base_label=aggregates[bi].label,
                    recomb_label=aggregates[ri].label,
                    mean_final_base=float(np.mean(base_vals)),
                    mean_final_recomb=float(np.mean(rec_vals)),
                    recomb_better=better,
                    recomb_worse=worse,
                    ties=ties,
                    sign_test_p=p_value,
                    nsm_after_first_cycle_base=aggregates[bi].nsm_after_first_cycle_mean,
                    nsm_after_first_cycle_recomb=aggregates[
                        ri
                    ].nsm_after_first_cycle_mean,
                )
            )

    samples = {"log_SQ_max": [], "log_SE": []}
    for key in _FINAL_KEYS:
        if key in ("log_SQ_max", "log_SE"):
            continue
        samples[key] = []
    for agg in aggregates:
        for key in _FINAL_KEYS:
            target = samples[key]
            target.append(agg.final_means.get(key, math.nan))
    correlations = correlate(samples)

    config = {
        "m": space.m,
        "levels": list(space.cardinalities),
        "landscape": landscape.describe(),
        "orderings": len(orderings),
        "seed": seed,
        "init": init_policy,
        "variants": variants.flags(),
        "bins": bins,
        "plans": [
            {"name": e.name, "cycles": e.cycles, "recomb": e.recomb} for e in entries
        ],
    }
    return ExperimentReport(
        config=config,
        plans=aggregates,
        comparisons=comparisons,
        correlations=correlations,
        errors=errors,
    )


def _run_cell_safe(payload):
    try:
        return _run_cell(payload)
    except Exception as exc:  # recorded per cell, experiment continues
        return f"{type(exc).__name__}: {exc}"
