"""Search-structure indicators computed incrementally over a trace.

Size-like quantities (block sizes, overlap sizes, their running products) are
kept as exact arbitrary-precision integers with natural-log mirrors; flow
quantities are accumulated in log domain so long runs never overflow.

Quantities, per iteration k (blocks counted across the whole run, cycle
boundaries included as ordinary adjacencies):

* ABS   active block size: product of level counts over the block's parameters
* LOS   local overlap size: same product over the intersection with the
        previous block; 0 when the blocks are disjoint (a bottleneck)
* GSS   running product of ABS;  TOS: running product of LOS;  NSS = GSS - TOS
* GCR   TOS / NSS;  CV = NSS * GCR (equals TOS identically)
* LCR   LOS / (ABS_prev * ABS_cur); 1 by convention at k = 1
* CF    cube root of the running product of LCR * ABS; a zero LCR anywhere
        forces CF to 0 from that iteration on
* CCF   running sum of CF (log-domain accumulation); never decreases
* SASW / AASW / FSW   search-wake ages: a parameter's age is
        k - (last iteration whose block contained it) + 1, never-visited
        parameters count from 0; FSW = m / SASW is the wake freshness
* NSM   novelty of the move into block k: moves are position-wise pairs of
        the ascending members of consecutive blocks; novelty against a past
        move is the mean of the distinct involved block sizes minus the
        shared pair count, minimized over history and divided by m
* URR   usefulness of recombination, default sqrt(FSW * NSM)
* SQ/SE search quality (minimization form f(x*), maximization form 1/f(x*))
        and efficiency SQ_max / NSS (log domain)
* IRUIF CCF * URR^2 (log domain), pointwise by default
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DegenerateStructureError
from .space import ParameterSpace

URR_VARIANTS = ("sqrt", "product", "exponential")


@dataclass(frozen=True)
class IndicatorVariants:
    """Formula variants where the underlying definitions conflict.

    ``lcr_table_orientation`` reports LCR as (ABS_prev * ABS_cur) / LOS instead
    of the default overlap-over-total; the flow CF always uses the default
    orientation, since only that one lets small overlaps depress it.
    ``urr`` selects sqrt(FSW*NSM) (default), the plain product, or the
    exponential form K^((FSW+NSM)/2) with K the total iteration count.
    ``iruif_cumulative`` accumulates CCF*URR^2 instead of reporting it
    pointwise.
    """

    lcr_table_orientation: bool = False
    urr: str = "sqrt"
    iruif_cumulative: bool = False

    def __post_init__(self):
        if self.urr not in URR_VARIANTS:
            raise ConfigError(f"unknown URR variant {self.urr!r}")

    def flags(self) -> str:
        lcr = "ss_over_los" if self.lcr_table_orientation else "los_over_ss"
        iruif = "cumulative" if self.iruif_cumulative else "pointwise"
        return f"lcr={lcr};urr={self.urr};iruif={iruif}"


@dataclass
class SizeLedger:
    """Exact integer size accounting with log-domain mirrors."""

    abs_sizes: list[int] = field(default_factory=list)
    los_sizes: list[int | None] = field(default_factory=list)  # None at k=1
    gss: list[int] = field(default_factory=list)
    tos: list[int] = field(default_factory=list)
    nss: list[int] = field(default_factory=list)
    log_abs: list[float] = field(default_factory=list)
    log_gss: list[float] = field(default_factory=list)
    log_tos: list[float] = field(default_factory=list)
    log_nss: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class IndicatorRow:
    iteration: int
    sq_min: float
    sq_max: float | None
    se_log: float | None
    gcr: float
    cv: int
    lcr: float | None
    log_cf: float
    log_ccf: float
    sasw: int
    aasw: float
    fsw: float
    nsm: float | None
    urr: float | None
    log_iruif: float | None
    flags: str


@dataclass
class IndicatorTrace:
    rows: list[IndicatorRow]
    ledger: SizeLedger
    variants: IndicatorVariants


def active_block_size(members, space: ParameterSpace, ordering) -> int:
    """Product of level counts over the block's parameters (exact integer)."""
    out = 1
    for pos in members:
        out *= space.params[ordering[pos]].cardinality
    return out


def local_overlap_size(prev_members, cur_members, space: ParameterSpace, ordering) -> int:
    """Level product over the shared positions of two consecutive blocks.

    Disjoint blocks give 0, not the empty product 1: an absent overlap is a
    bottleneck and must annihilate the downstream running products.
    """
    shared = set(prev_members) & set(cur_members)
    if not shared:
        return 0
    out = 1
    for pos in shared:
        out *= space.params[ordering[pos]].cardinality
    return out


def _move_pairs(prev_members, cur_members) -> frozenset:
    """Position-wise pairs of the ascending member lists, up to the shorter
    length.  Pairs are unordered, so traversing the same adjacency in the
    opposite verse is the same move."""
    prev_sorted = sorted(prev_members)
    cur_sorted = sorted(cur_members)
    n = min(len(prev_sorted), len(cur_sorted))
    return frozenset(
        (min(a, b), max(a, b)) for a, b in zip(prev_sorted[:n], cur_sorted[:n])
    )


class IndicatorEngine:
    """Single-pass indicator computation; feed one (block, value) per call."""

    def __init__(
        self,
        space: ParameterSpace,
        ordering,
        variants: IndicatorVariants | None = None,
        total_iterations: int | None = None,
    ):
        self.space = space
        self.ordering = tuple(ordering)
        self.variants = variants or IndicatorVariants()
        self.total_iterations = total_iterations
        if self.variants.urr == "exponential" and total_iterations is None:
            raise ConfigError("exponential URR needs the total iteration count")
        self.ledger = SizeLedger()
        self.k = 0
        self._prev_members: tuple[int, ...] | None = None
        self._gss = 1
        self._tos = 1  # neutral boundary: no predecessor pair at k = 1
        self._sum_log_flow = 0.0  # running sum of log(LCR * ABS)
        self._log_ccf = -math.inf
        self._log_iruif_cum = -math.inf
        self._last_visit: dict[int, int] = {}
        self._member_counts: list[int] = []
        self._moves: list[tuple[int, frozenset]] = []  # (iteration, pair set)

    def update(self, members, value: float) -> IndicatorRow:
        members = tuple(sorted(members))
        self.k += 1
        k = self.k
        m = self.space.m

        abs_k = active_block_size(members, self.space, self.ordering)
        log_abs_k = math.log(abs_k)
        if k == 1:
            los_k: int | None = None
            lcr_default = 1.0  # no predecessor block
            log_lcr = 0.0
        else:
            los_k = local_overlap_size(
                self._prev_members, members, self.space, self.ordering
            )
            abs_prev = self.ledger.abs_sizes[-1]
            pair_size = abs_prev * abs_k
            lcr_default = los_k / pair_size
            log_lcr = (
                math.log(los_k) - math.log(pair_size) if los_k > 0 else -math.inf
            )
            self._tos *= los_k
        self._gss *= abs_k
        gss, tos = self._gss, self._tos
        nss = gss - tos
        if nss <= 0:
            raise DegenerateStructureError(
                f"net search size {nss} at iteration {k}; commonality is undefined"
            )

        self.ledger.abs_sizes.append(abs_k)
        self.ledger.los_sizes.append(los_k)
        self.ledger.gss.append(gss)
        self.ledger.tos.append(tos)
        self.ledger.nss.append(nss)
        self.ledger.log_abs.append(log_abs_k)
        self.ledger.log_gss.append(math.log(gss))
        self.ledger.log_tos.append(math.log(tos) if tos > 0 else -math.inf)
        self.ledger.log_nss.append(math.log(nss))

        gcr = tos / nss
        cv_frac = Fraction(tos, nss) * nss
        cv = int(cv_frac)

        if self.variants.lcr_table_orientation and k > 1:
            lcr_reported = (
                (self.ledger.abs_sizes[-2] * abs_k) / los_k if los_k else None
            )
        else:
            lcr_reported = lcr_default

        # flow: CF^3 is the running product of LCR * ABS; zero sticks
        self._sum_log_flow += log_lcr + log_abs_k
        log_cf = self._sum_log_flow / 3.0
        self._log_ccf = float(np.logaddexp(self._log_ccf, log_cf))
        log_ccf = self._log_ccf

        # search wake
        for pos in members:
            self._last_visit[pos] = k
        sasw = sum(k - self._last_visit.get(pos, 0) + 1 for pos in range(m))
        aasw = sasw / m
        fsw = m / sasw

        # move novelty
        self._member_counts.append(len(members))
        if k == 1:
            nsm = None
        else:
            pairs = _move_pairs(self._prev_members, members)
            if not self._moves:
                nsm = 1.0  # first move: nothing to repeat
            else:
                best = None
                for j, past_pairs in self._moves:
                    involved = {j - 1, j, k - 1, k}
                    mean_size = sum(
                        self._member_counts[i - 1] for i in involved
                    ) / len(involved)
                    en = mean_size - len(pairs & past_pairs)
                    if best is None or en < best:
                        best = en
                nsm = best / m
            self._moves.append((k, pairs))

        if nsm is None:
            urr = None
        elif self.variants.urr == "sqrt":
            urr = math.sqrt(fsw * nsm)
        elif self.variants.urr == "product":
            urr = fsw * nsm
        else:
            urr = self.total_iterations ** ((fsw + nsm) / 2.0)

        if urr is None:
            log_iruif = None
        else:
            log_urr = math.log(urr) if urr > 0 else -math.inf
            pointwise = log_ccf + 2.0 * log_urr
            if self.variants.iruif_cumulative:
                self._log_iruif_cum = float(
                    np.logaddexp(self._log_iruif_cum, pointwise)
                )
                log_iruif = self._log_iruif_cum
            else:
                log_iruif = pointwise

        sq_min = value
        sq_max = 1.0 / value if value > 0 else None
        se_log = (
            math.log(sq_max) - self.ledger.log_nss[-1] if sq_max is not None else None
        )

        self._prev_members = members
        return IndicatorRow(
            iteration=k,
            sq_min=sq_min,
            sq_max=sq_max,
            se_log=se_log,
            gcr=gcr,
            cv=cv,
            lcr=lcr_reported,
            log_cf=log_cf,
            log_ccf=log_ccf,
            sasw=sasw,
            aasw=aasw,
            fsw=fsw,
            nsm=nsm,
            urr=urr,
            log_iruif=log_iruif,
            flags=self.variants.flags(),
        )


def compute_indicators(
    trace,
    space: ParameterSpace,
    variants: IndicatorVariants | None = None,
) -> IndicatorTrace:
    """Run the incremental engine over a finished search trace."""
    variants = variants or IndicatorVariants()
    engine = IndicatorEngine(
        space,
        trace.ordering,
        variants,
        total_iterations=len(trace.records),
    )
    rows = [engine.update(rec.block, rec.value) for rec in trace.records]
    return IndicatorTrace(rows=rows, ledger=engine.ledger, variants=variants)


_CSV_HEADER = [
    "iter",
    "SQ_min",
    "SQ_max",
    "SE_log",
    "GCR",
    "CV",
    "LCR",
    "logCF",
    "logCCF",
    "SASW",
    "AASW",
    "FSW",
    "NSM",
    "URR",
    "logIRUIF",
    "variant_flags",
]


def _fmt(v) -> str:
    if v is None:
        return ""  # undefined, never 0
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_indicators_csv(indicator_trace: IndicatorTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for r in indicator_trace.rows:
            writer.writerow(
                [
                    r.iteration,
                    _fmt(r.sq_min),
                    _fmt(r.sq_max),
                    _fmt(r.se_log),
                    _fmt(r.gcr),
                    _fmt(r.cv),
                    _fmt(r.lcr),
                    _fmt(r.log_cf),
                    _fmt(r.log_ccf),
                    _fmt(r.sasw),
                    _fmt(r.aasw),
                    _fmt(r.fsw),
                    _fmt(r.nsm),
                    _fmt(r.urr),
                    _fmt(r.log_iruif),
                    r.flags,
                ]
            )
