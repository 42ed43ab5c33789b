"""Command-line front end.

Subcommands
    plan parse NAME                      structure name -> JSON spec
    plan expand NAME --m M [...]         expanded cycles and blocks as JSON
    search run --plan NAME [...]         one search run -> trace/indicator CSVs
    bench brute [...]                    full enumeration -> minimum + histogram
    exp run --plans FILE [...]           the multi-plan experiment protocol
    indicators compute --trace FILE      indicators for a stored trace

Exit codes: 0 success, 2 usage, 3 invalid structure or plan, 4 enumeration
budget refused, 5 bad configuration, 6 evaluation failure, 1 anything else.
Errors print one machine-parsable line: ``blockwake: error: <kind>: <detail>``.
The environment variable ``BLOCKWAKE_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bench, reporting
from .engine import SearchTrace, initial_point, read_trace_csv, run_search, write_trace_csv
from .errors import (
    BlockwakeError,
    BudgetError,
    CacheCapacityError,
    ConfigError,
    DegenerateStructureError,
    DomainError,
    EvaluationError,
    PlanError,
    StructureParseError,
    StructureValidationError,
)
from .indicators import IndicatorVariants, compute_indicators, write_indicators_csv
from .plan import assemble_plan, parse_structure_name, plan_to_dict
from .space import MemoCache, uniform_space

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PLAN = 3
EXIT_BUDGET = 4
EXIT_CONFIG = 5
EXIT_EVAL = 6
EXIT_OTHER = 1

_ERROR_KINDS = (
    (BudgetError, EXIT_BUDGET, "budget"),
    (StructureParseError, EXIT_PLAN, "structure-parse"),
    (StructureValidationError, EXIT_PLAN, "structure-validation"),
    (PlanError, EXIT_PLAN, "plan"),
    (EvaluationError, EXIT_EVAL, "evaluation"),
    (CacheCapacityError, EXIT_CONFIG, "cache-capacity"),
    (DegenerateStructureError, EXIT_CONFIG, "degenerate-structure"),
    (DomainError, EXIT_CONFIG, "domain"),
    (ConfigError, EXIT_CONFIG, "config"),
    (BlockwakeError, EXIT_OTHER, "error"),
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line machine-parsable usage errors
        print(f"blockwake: error: usage: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    raw = os.environ.get("BLOCKWAKE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"BLOCKWAKE_SEED must be an integer, got {raw!r}")


def _parse_levels(text: str, m: int) -> list[int]:
    try:
        parts = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad --levels value {text!r}")
    if len(parts) == 1:
        return parts * m
    if len(parts) != m:
        raise ConfigError(f"--levels needs 1 or {m} entries, got {len(parts)}")
    return parts


def _parse_landscape(spec: str, space, seed: int):
    kind, _, rest = spec.partition(":")
    constants = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ConfigError(f"bad landscape constant {item!r}")
            try:
                constants[key.strip()] = int(value)
            except ValueError:
                try:
                    constants[key.strip()] = float(value)
                except ValueError:
                    raise ConfigError(f"bad landscape constant value {value!r}")
    try:
        return bench.make_landscape(kind.strip(), space, seed=seed, **constants)
    except TypeError as exc:
        raise ConfigError(f"bad landscape constants for {kind!r}: {exc}")


def _parse_variants(text: str | None) -> IndicatorVariants:
    if not text:
        return IndicatorVariants()
    lcr_table = False
    urr = "sqrt"
    iruif_cum = False
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if key == "lcr":
            if value not in ("default", "los_over_ss", "table", "ss_over_los"):
                raise ConfigError(f"unknown LCR variant {value!r}")
            lcr_table = value in ("table", "ss_over_los")
        elif key == "urr":
            if value not in ("sqrt", "product", "exponential"):
                raise ConfigError(f"unknown URR variant {value!r}")
            urr = value
        elif key == "iruif":
            if value not in ("pointwise", "point", "cumulative"):
                raise ConfigError(f"unknown IRUIF variant {value!r}")
            iruif_cum = value == "cumulative"
        else:
            raise ConfigError(f"unknown indicator variant {item!r}")
    return IndicatorVariants(
        lcr_table_orientation=lcr_table, urr=urr, iruif_cumulative=iruif_cum
    )


def _parse_ordering(text: str | None, m: int) -> tuple[int, ...]:
    if not text:
        return tuple(range(m))
    try:
        ordering = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ConfigError(f"bad --ordering value {text!r}")
    if sorted(ordering) != list(range(m)):
        raise ConfigError(f"--ordering must be a permutation of 0..{m - 1}")
    return ordering


def build_parser() -> _Parser:
    parser = _Parser(prog="blockwake", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="inspect search structures")
    plan_sub = p_plan.add_subparsers(dest="plan_command", required=True)
    pp = plan_sub.add_parser("parse", help="parse a structure name")
    pp.add_argument("name")
    pe = plan_sub.add_parser("expand", help="expand a structure into blocks")
    pe.add_argument("name")
    pe.add_argument("--m", type=int, required=True)
    pe.add_argument("--cycles", type=int, default=1)
    pe.add_argument("--recomb", choices=("none", "A", "B"), default="none")

    p_search = sub.add_parser("search", help="run block coordinate descent")
    search_sub = p_search.add_subparsers(dest="search_command", required=True)
    sr = search_sub.add_parser("run", help="one search run")
    sr.add_argument("--plan", required=True, dest="plan_name")
    sr.add_argument("--m", type=int, required=True)
    sr.add_argument("--levels", default="3")
    sr.add_argument("--cycles", type=int, default=1)
    sr.add_argument("--recomb", choices=("none", "A", "B"), default="none")
    sr.add_argument("--landscape", default="trap")
    sr.add_argument("--seed", type=int, default=None)
    sr.add_argument("--init", choices=("fixed", "mid", "random"), default="mid")
    sr.add_argument("--ordering", default=None)
    sr.add_argument("--variants", default=None)
    sr.add_argument("--dump-cache", action="store_true")
    sr.add_argument("--out", required=True)

    p_bench = sub.add_parser("bench", help="oracle utilities")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)
    bb = bench_sub.add_parser("brute", help="enumerate the whole grid")
    bb.add_argument("--m", type=int, required=True)
    bb.add_argument("--levels", default="3")
    bb.add_argument("--landscape", default="trap")
    bb.add_argument("--seed", type=int, default=None)
    bb.add_argument("--budget", type=int, default=bench.DEFAULT_BUDGET)
    bb.add_argument("--bins", type=int, default=50)
    bb.add_argument("--out", required=True)

    p_exp = sub.add_parser("exp", help="experiment protocol")
    exp_sub = p_exp.add_subparsers(dest="exp_command", required=True)
    er = exp_sub.add_parser("run", help="run plans over shared orderings")
    er.add_argument("--plans", required=True, help="file of name,cycles,recomb lines")
    er.add_argument("--m", type=int, required=True)
    er.add_argument("--levels", default="3")
    er.add_argument("--landscape", default="trap")
    er.add_argument("--orderings", type=int, default=590)
    er.add_argument("--seed", type=int, default=None)
    er.add_argument("--init", choices=("fixed", "mid", "random"), default="mid")
    er.add_argument("--variants", default=None)
    er.add_argument("--bins", type=int, default=20)
    er.add_argument("--jobs", type=int, default=1)
    er.add_argument("--out", required=True)

    p_ind = sub.add_parser("indicators", help="indicator computation")
    ind_sub = p_ind.add_subparsers(dest="indicators_command", required=True)
    ic = ind_sub.add_parser("compute", help="indicators for a stored trace")
    ic.add_argument("--trace", required=True)
    ic.add_argument("--meta", default=None, help="trace meta.json (default: sibling)")
    ic.add_argument("--m", type=int, default=None)
    ic.add_argument("--levels", default=None)
    ic.add_argument("--ordering", default=None)
    ic.add_argument("--variants", default=None)
    ic.add_argument("--out", required=True)

    return parser


def _cmd_plan_parse(args) -> int:
    spec = parse_structure_name(args.name)
    print(
        json.dumps(
            {
                "sizes": list(spec.sizes),
                "overlaps": list(spec.overlaps),
                "truncated": spec.truncated,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_plan_expand(args) -> int:
    plan = assemble_plan(args.name, args.m, args.cycles, args.recomb)
    print(json.dumps(plan_to_dict(plan), sort_keys=True))
    return EXIT_OK


def _cmd_search_run(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    levels = _parse_levels(args.levels, args.m)
    space = uniform_space(args.m, levels)
    plan = assemble_plan(args.plan_name, args.m, args.cycles, args.recomb)
    landscape = _parse_landscape(args.landscape, space, seed)
    ordering = _parse_ordering(args.ordering, args.m)
    variants = _parse_variants(args.variants)
    init = initial_point(space, args.init, seed=seed)
    cache = MemoCache()
    trace = run_search(space, landscape, plan, ordering, init, cache, seed=seed)
    indicator_trace = compute_indicators(trace, space, variants)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    meta = {
        "plan": plan.name,
        "label": plan.label,
        "m": args.m,
        "levels": levels,
        "cycles": args.cycles,
        "recomb": args.recomb,
        "ordering": list(ordering),
        "seed": seed,
        "init_policy": args.init,
        "initial_point": list(trace.initial_point),
        "initial_value": trace.initial_value,
        "final_point": list(trace.records[-1].point),
        "final_value": trace.final_value,
        "evaluations": cache.misses,
        "landscape": landscape.describe(),
        "variants": variants.flags(),
    }
    reporting.write_text_atomic(
        outdir / "meta.json", json.dumps(meta, sort_keys=True, indent=2) + "\n"
    )
    write_trace_csv(trace, outdir / "trace.csv")
    write_indicators_csv(indicator_trace, outdir / "indicators.csv")
    if args.dump_cache:
        cache.dump_csv(outdir / "cache.csv")
    print(f"wrote {outdir}/trace.csv ({len(trace.records)} iterations, "
          f"final f={trace.final_value!r}, {cache.misses} evaluations)")
    return EXIT_OK


def _cmd_bench_brute(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    levels = _parse_levels(args.levels, args.m)
    space = uniform_space(args.m, levels)
    landscape = _parse_landscape(args.landscape, space, seed)
    result = bench.brute_force(space, landscape, budget=args.budget, bins=args.bins)
    reporting.write_brute(result, args.out)
    print(
        f"wrote {args.out}/brute.json (minimum f={result.min_value!r} "
        f"over {result.evaluations} points)"
    )
    return EXIT_OK


def _cmd_exp_run(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    levels = _parse_levels(args.levels, args.m)
    space = uniform_space(args.m, levels)
    landscape = _parse_landscape(args.landscape, space, seed)
    entries = bench.parse_plan_file(Path(args.plans).read_text())
    orderings = bench.random_orderings(space.m, args.orderings, seed)
    variants = _parse_variants(args.variants)
    report = bench.run_experiment(
        space,
        landscape,
        entries,
        orderings,
        init_policy=args.init,
        seed=seed,
        variants=variants,
        bins=args.bins,
        jobs=args.jobs,
    )
    files = reporting.write_report(report, args.out)
    print(f"wrote {len(files)} files to {args.out} "
          f"({len(report.plans)} plans x {len(orderings)} orderings, "
          f"{len(report.errors)} failed cells)")
    return EXIT_OK


def _cmd_indicators_compute(args) -> int:
    trace_path = Path(args.trace)
    records = read_trace_csv(trace_path)
    if not records:
        raise ConfigError(f"trace {trace_path} holds no records")
    meta = None
    meta_path = Path(args.meta) if args.meta else trace_path.parent / "meta.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
    if args.m is not None and args.levels is not None:
        m = args.m
        levels = _parse_levels(args.levels, m)
        ordering = _parse_ordering(args.ordering, m)
    elif meta is not None:
        m = meta["m"]
        levels = meta["levels"]
        ordering = tuple(meta["ordering"])
    else:
        raise ConfigError(
            "need --m and --levels (plus optional --ordering) when no meta.json "
            "sits next to the trace"
        )
    space = uniform_space(m, levels)
    trace = SearchTrace(
        records=records,
        ordering=ordering,
        plan_name=meta["plan"] if meta else "unknown",
        plan_label=meta["label"] if meta else "unknown",
        seed=meta.get("seed") if meta else None,
        initial_point=tuple(meta["initial_point"]) if meta else records[0].point,
        initial_value=meta["initial_value"] if meta else math.nan,
        cycle_lengths=(),
    )
    variants = _parse_variants(args.variants)
    indicator_trace = compute_indicators(trace, space, variants)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_indicators_csv(indicator_trace, out)
    print(f"wrote {out} ({len(indicator_trace.rows)} rows)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "plan" and args.plan_command == "parse":
            return _cmd_plan_parse(args)
        if args.command == "plan" and args.plan_command == "expand":
            return _cmd_plan_expand(args)
        if args.command == "search":
            return _cmd_search_run(args)
        if args.command == "bench":
            return _cmd_bench_brute(args)
        if args.command == "exp":
            return _cmd_exp_run(args)
        if args.command == "indicators":
            return _cmd_indicators_compute(args)
        parser.error(f"unknown command {args.command!r}")
    except SystemExit as exc:
        return int(exc.code or 0)
    except BlockwakeError as exc:
        for klass, code, kind in _ERROR_KINDS:
            if isinstance(exc, klass):
                print(f"blockwake: error: {kind}: {exc}", file=sys.stderr)
                return code
        print(f"blockwake: error: error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except OSError as exc:
        print(f"blockwake: error: io: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"blockwake: error: io: bad JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
