"""The full experiment protocol at desk scale.

Replays a set of sweep structures over the same shared random parameter
orderings (so structure effects are isolated from parameter assignment),
aggregates per-iteration quality and efficiency, correlates the structure
indicators with final quality across plans, and runs the paired comparison of
recombined vs non-recombined repetition on a trap landscape.

The protocol's reference ordering count is 590; this demo uses the fast mode
(59) so it finishes in seconds.  Pass --full for 590.

Run:  python3 demos/05_experiment_protocol.py [--full]
"""

import sys

from blockwake import (
    PlanEntry,
    make_landscape,
    random_orderings,
    run_experiment,
    uniform_space,
)

M = 10
ORDERINGS = 590 if "--full" in sys.argv[1:] else 59

space = uniform_space(M, 3)
landscape = make_landscape("trap", space, seed=0)
entries = [
    PlanEntry("B7-O6", 1, "none"),
    PlanEntry("B6,8,6-O5", 1, "none"),
    PlanEntry("B5-O4", 1, "none"),
    PlanEntry("B2-O1", 1, "none"),
    PlanEntry("B5-O0", 6, "none"),
    PlanEntry("B5-O0", 6, "A"),
    PlanEntry("B5-O0", 6, "B"),
    PlanEntry("B3-O0", 6, "B"),
    PlanEntry("T-B4-O1", 6, "B"),
]
orderings = random_orderings(M, ORDERINGS, seed=0)

print(f"running {len(entries)} plans x {ORDERINGS} shared orderings ...")
report = run_experiment(space, landscape, entries, orderings, seed=0)

print(f"\n{'plan':22s} {'blocks':>6} {'mean final f':>13} {'mean logSQ':>11} {'late NSM':>9}")
for agg in report.plans:
    mean_final = sum(agg.final_values) / len(agg.final_values)
    print(f"{agg.label:22s} {agg.n_blocks:>6} {mean_final:>13.4f} "
          f"{agg.final_means['log_SQ_max']:>11.3f} "
          f"{agg.nsm_after_first_cycle_mean:>9.3f}")

print("\ncorrelation of final indicators with quality/efficiency across plans:")
print(f"{'indicator':>12} {'r vs logSQ':>11} {'r vs logSE':>11}")
for entry in report.correlations:
    rq = f"{entry.r_quality:+.3f}" if entry.r_quality is not None else "   --"
    re_ = f"{entry.r_efficiency:+.3f}" if entry.r_efficiency is not None else "   --"
    print(f"{entry.indicator:>12} {rq:>11} {re_:>11}")

print("\nrecombined vs non-recombined repetition (paired by ordering):")
for comp in report.comparisons:
    print(f"  {comp.recomb_label} vs {comp.base_label}:")
    print(f"    mean final f {comp.mean_final_recomb:.4f} vs {comp.mean_final_base:.4f}")
    print(f"    better on {comp.recomb_better}, worse on {comp.recomb_worse}, "
          f"ties {comp.ties}; sign-test p = {comp.sign_test_p:.4g}")
    print(f"    novelty after cycle 1: {comp.nsm_after_first_cycle_recomb:.3f} vs "
          f"{comp.nsm_after_first_cycle_base:.3f}")
