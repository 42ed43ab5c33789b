"""Independent naive reimplementations used as oracles by the test suite.

Everything here recomputes from scratch, shares no running state with the
package's incremental code paths, and prefers exact rational arithmetic, so a
transcription slip on either side shows up as a mismatch.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def naive_run_search(space, landscape, plan, ordering, init):
    """Block descent that re-enumerates every block without any caching.

    Returns a list of (members, point, value) records.
    """
    coords = list(init)
    records = []
    for cycle in plan.cycles:
        for block in cycle.blocks:
            positions = block.members
            active = [ordering[p] for p in positions]
            best = None
            for combo in itertools.product(
                *(range(space.params[q].cardinality) for q in active)
            ):
                trial = list(coords)
                for q, lv in zip(active, combo):
                    trial[q] = lv
                val = landscape.value(tuple(trial))
                if best is None or val < best[0]:
                    best = (val, combo)
            for q, lv in zip(active, best[1]):
                coords[q] = lv
            records.append((positions, tuple(coords), best[0]))
    return records


def _log_frac(frac: Fraction) -> float:
    if frac == 0:
        return -math.inf
    return math.log(frac.numerator) - math.log(frac.denominator)


def _logsumexp(values) -> float:
    finite = [v for v in values if v != -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(sum(math.exp(v - top) for v in finite))


def _block_abs(members, space, ordering) -> int:
    out = 1
    for pos in members:
        out *= space.params[ordering[pos]].cardinality
    return out


def _block_los(prev, cur, space, ordering) -> int:
    shared = set(prev) & set(cur)
    if not shared:
        return 0
    out = 1
    for pos in shared:
        out *= space.params[ordering[pos]].cardinality
    return out


def naive_indicator_rows(blocks, values, space, ordering, urr_variant="sqrt",
                         iruif_cumulative=False):
    """From-scratch recomputation of every indicator at every iteration.

    ``blocks`` is the per-iteration member tuples, ``values`` the recorded
    objective values.  Returns a list of dicts keyed like the incremental
    rows.
    """
    m = space.m
    K = len(blocks)
    rows = []
    for k in range(1, K + 1):
        sub = blocks[:k]
        abss = [_block_abs(b, space, ordering) for b in sub]
        loss = [None] + [
            _block_los(sub[i - 1], sub[i], space, ordering) for i in range(1, k)
        ]
        gss = 1
        for a in abss:
            gss *= a
        tos = 1
        for l in loss[1:]:
            tos *= l
        nss = gss - tos

        lcrs = [Fraction(1)]
        for i in range(1, k):
            lcrs.append(Fraction(loss[i], abss[i - 1] * abss[i]))

        flow = Fraction(1)
        for i in range(k):
            flow *= lcrs[i] * abss[i]
        log_cf_list = []
        for j in range(1, k + 1):
            fl = Fraction(1)
            for i in range(j):
                fl *= lcrs[i] * abss[i]
            log_cf_list.append(_log_frac(fl) / 3.0)
        log_cf = log_cf_list[-1]
        log_ccf = _logsumexp(log_cf_list)

        last_visit = {}
        for i, b in enumerate(sub, start=1):
            for pos in b:
                last_visit[pos] = i
        sasw = sum(k - last_visit.get(pos, 0) + 1 for pos in range(m))
        aasw = sasw / m
        fsw = m / sasw

        def pairs_of(i):  # move into block i (1-based, i >= 2)
            a = sorted(sub[i - 2])
            b = sorted(sub[i - 1])
            n = min(len(a), len(b))
            return frozenset(
                (min(x, y), max(x, y)) for x, y in zip(a[:n], b[:n])
            )

        if k == 1:
            nsm = None
        elif k == 2:
            nsm = 1.0
        else:
            cur_pairs = pairs_of(k)
            best = None
            for j in range(2, k):
                past = pairs_of(j)
                involved = {j - 1, j, k - 1, k}
                mean_size = sum(len(sub[i - 1]) for i in involved) / len(involved)
                en = mean_size - len(cur_pairs & past)
                if best is None or en < best:
                    best = en
            nsm = best / m

        if nsm is None:
            urr = None
        elif urr_variant == "sqrt":
            urr = math.sqrt(fsw * nsm)
        elif urr_variant == "product":
            urr = fsw * nsm
        else:
            urr = K ** ((fsw + nsm) / 2.0)

        if urr is None:
            log_iruif = None
        else:
            log_urr = math.log(urr) if urr > 0 else -math.inf
            pointwise_k = log_ccf + 2.0 * log_urr
            if iruif_cumulative:
                terms = [pointwise_k]
                for j in range(2, k):
                    jrow = rows[j - 1]
                    if jrow["urr"] is not None:
                        ju = jrow["urr"]
                        jlu = math.log(ju) if ju > 0 else -math.inf
                        terms.append(jrow["log_ccf"] + 2.0 * jlu)
                log_iruif = _logsumexp(terms)
            else:
                log_iruif = pointwise_k

        value = values[k - 1]
        sq_min = value
        sq_max = 1.0 / value if value > 0 else None
        se_log = (
            math.log(sq_max) - _log_frac(Fraction(nss)) if sq_max is not None else None
        )
        rows.append(
            {
                "iteration": k,
                "abs": abss[-1],
                "los": loss[-1],
                "gss": gss,
                "tos": tos,
                "nss": nss,
                "gcr": float(Fraction(tos, nss)),
                "cv": tos,
                "lcr": float(lcrs[-1]),
                "log_cf": log_cf,
                "log_ccf": log_ccf,
                "sasw": sasw,
                "aasw": aasw,
                "fsw": fsw,
                "nsm": nsm,
                "urr": urr,
                "log_iruif": log_iruif,
                "sq_min": sq_min,
                "sq_max": sq_max,
                "se_log": se_log,
            }
        )
    return rows


def random_structure(rng: np.random.Generator, m: int):
    """A seeded, expansion-valid structure spec plus cycle/recombination picks."""
    n_sizes = int(rng.integers(1, 4))
    sizes = [int(rng.integers(1, min(5, m) + 1)) for _ in range(n_sizes)]
    max_overlap = min(sizes) - 1
    n_overlaps = int(rng.integers(1, 4))
    overlaps = [int(rng.integers(0, max_overlap + 1)) for _ in range(n_overlaps)]
    truncated = bool(rng.random() < 0.2) and max(sizes) < m
    prefix = "T-" if truncated else ""
    name = (
        prefix
        + "B"
        + ",".join(str(s) for s in sizes)
        + "-O"
        + ",".join(str(o) for o in overlaps)
    )
    cycles = int(rng.integers(1, 7))
    recomb = ["none", "A", "B"][int(rng.integers(0, 3))]
    return name, cycles, recomb
