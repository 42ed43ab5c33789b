"""Deterministic file output for experiment and oracle results.

Every file is rendered fully in memory and written atomically, so a failed
run never leaves truncated CSVs behind, and rerunning an identical
configuration overwrites byte-identical files (no timestamps in bodies).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

from .bench import BruteForceResult, ExperimentReport


def write_text_atomic(path, content: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return repr(v)
    return str(v)


def _csv(rows) -> str:
    return "\n".join(",".join(_fmt(v) for v in row) for row in rows) + "\n"


def _json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
    return obj


def plan_file_key(label: str) -> str:
    """File-name key for a plan label (commas in structure names -> dots)."""
    return label.replace(",", ".")


def render_report_files(report: ExperimentReport) -> dict[str, str]:
    """Render the whole report directory as {relative name: content}."""
    files: dict[str, str] = {}

    plan_summaries = []
    for agg in report.plans:
        key = plan_file_key(agg.label)
        means_name = f"means_{key}.csv"
        hist_name = f"hist_{key}.csv"
        rows = [["iter", "mean_SQ_min", "mean_log_SQ_max", "mean_log_SE"]]
        for i in range(len(agg.mean_sq_min)):
            rows.append(
                [
                    i + 1,
                    agg.mean_sq_min[i],
                    agg.mean_log_sq_max[i],
                    agg.mean_log_se[i],
                ]
            )
        files[means_name] = _csv(rows)
        rows = [["bin_left", "bin_right", "count"]]
        for i, count in enumerate(agg.hist_counts):
            rows.append([agg.hist_edges[i], agg.hist_edges[i + 1], count])
        files[hist_name] = _csv(rows)
        plan_summaries.append(
            {
                "label": agg.label,
                "name": agg.entry.name,
                "cycles": agg.entry.cycles,
                "recomb": agg.entry.recomb,
                "n_blocks": agg.n_blocks,
                "ok_count": agg.ok_count,
                "mean_final_value": (
                    sum(agg.final_values) / len(agg.final_values)
                    if agg.final_values
                    else None
                ),
                "final_means": agg.final_means,
                "nsm_mean": agg.nsm_mean,
                "nsm_after_first_cycle_mean": agg.nsm_after_first_cycle_mean,
                "means_file": means_name,
                "hist_file": hist_name,
            }
        )

    rows = [["indicator", "r_log_SQ_max", "r_log_SE"]]
    for entry in report.correlations:
        rows.append([entry.indicator, entry.r_quality, entry.r_efficiency])
    files["correlations.csv"] = _csv(rows)

    files["report.json"] = _json(
        {
            "config": report.config,
            "plans": plan_summaries,
            "comparisons": [
                {
                    "base": c.base_label,
                    "recomb": c.recomb_label,
                    "mean_final_base": c.mean_final_base,
                    "mean_final_recomb": c.mean_final_recomb,
                    "recomb_better": c.recomb_better,
                    "recomb_worse": c.recomb_worse,
                    "ties": c.ties,
                    "sign_test_p": c.sign_test_p,
                    "nsm_after_first_cycle_base": c.nsm_after_first_cycle_base,
                    "nsm_after_first_cycle_recomb": c.nsm_after_first_cycle_recomb,
                }
                for c in report.comparisons
            ],
            "correlations": [
                {
                    "indicator": e.indicator,
                    "r_log_SQ_max": e.r_quality,
                    "r_log_SE": e.r_efficiency,
                }
                for e in report.correlations
            ],
            "errors": report.errors,
        }
    )
    return files


def write_report(report: ExperimentReport, outdir) -> list[str]:
    """Write the report directory; returns the written file names."""
    outdir = Path(outdir)
    files = render_report_files(report)
    for name in sorted(files):
        write_text_atomic(outdir / name, files[name])
    return sorted(files)


def render_brute_files(result: BruteForceResult) -> dict[str, str]:
    rows = [["bin_left", "bin_right", "count"]]
    for i, count in enumerate(result.hist_counts):
        rows.append([result.hist_edges[i], result.hist_edges[i + 1], count])
    summary = {
        "min_point": list(result.min_point),
        "min_value": result.min_value,
        "evaluations": result.evaluations,
        "value_bounds": list(result.value_bounds),
        "raw_bounds": [list(b) for b in result.raw_bounds],
        "hist_file": "hist.csv",
    }
    return {"brute.json": _json(summary), "hist.csv": _csv(rows)}


def write_brute(result: BruteForceResult, outdir) -> list[str]:
    outdir = Path(outdir)
    files = render_brute_files(result)
    for name in sorted(files):
        write_text_atomic(outdir / name, files[name])
    return sorted(files)
