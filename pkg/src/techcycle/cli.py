"""Command-line interface.

Subcommands: validate, fit, cycles, crossover, simulate, report.
Exit codes: 0 success (including benign empty results), 2 input error,
3 insufficient data for the requested estimate.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import report as report_mod
from .config import (
    ReferenceConfig,
    default_data_dir,
    load_reference,
    parse_window_spec,
    read_kv_file,
)
from .cycle import aggregate_cycles, crossover_year, cycle_metrics, detect_events, disruption_period
from .errors import (
    DomainError,
    InsufficientDataError,
    TechCycleError,
    WindowError,
)
from .growth import fit_substitution
from .synthlab import generate_scenario, recovery_experiment, scenario_from_mapping

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InsufficientDataError, WindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except (TechCycleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="techcycle",
        description="Technology substitution fits and lifecycle analytics "
        "over per-format revenue data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_flags(p):
        data_dir = default_data_dir()
        p.add_argument("--data", default=str(data_dir / "riaa_revenue.csv"),
                       help="revenue CSV (default: bundled dataset)")
        p.add_argument("--cpi", default=str(data_dir / "cpi.csv"),
                       help="CPI CSV 'year,index' (default: bundled)")
        p.add_argument("--groups", default=str(data_dir / "groups.cfg"),
                       help="technology grouping config (default: bundled)")
        p.add_argument("--base-year", type=int, default=2018,
                       help="constant-dollar base year (default 2018)")

    def add_format_flag(p):
        p.add_argument("--format", choices=("text", "csv", "json"), default="text",
                       help="output format (default text)")

    p = sub.add_parser("validate", help="parse and sanity-check a dataset")
    add_data_flags(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("fit", help="fit the substitution exponent for one pair")
    add_data_flags(p)
    add_format_flag(p)
    p.add_argument("--old", required=True, help="established technology")
    p.add_argument("--new", required=True, help="disruptive technology")
    p.add_argument("--window", default="auto", help="Y1:Y2 or 'auto' (default)")
    p.add_argument("--tolerance", type=float, default=0.05,
                   help="half-width of the proportional-regime band (default 0.05)")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("cycles", help="lifecycle table for every technology")
    add_data_flags(p)
    add_format_flag(p)
    p.add_argument("--config", default=None,
                   help="reference config for begin-year overrides "
                        "(default: bundled reference.cfg)")
    p.add_argument("--end-threshold", type=float, default=None,
                   help="end-of-revenues threshold as a fraction of peak")
    p.set_defaults(handler=cmd_cycles)

    p = sub.add_parser("crossover", help="first year a disruptor takes half the pair")
    add_data_flags(p)
    add_format_flag(p)
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--end-threshold", type=float, default=0.01)
    p.set_defaults(handler=cmd_crossover)

    p = sub.add_parser("simulate", help="run a synthetic dual-logistic scenario")
    add_format_flag(p)
    p.add_argument("--scenario", required=True, help="scenario config file")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--early-fraction", type=float, default=0.1,
                   help="early-window cutoff as a fraction of capacity (default 0.1)")
    p.add_argument("--window", default=None, help="explicit fit window Y1:Y2")
    p.add_argument("--out", default=None, help="directory for generated series CSV")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("report", help="write the full analysis tables and plot series")
    add_data_flags(p)
    add_format_flag(p)
    p.add_argument("--config", default=None,
                   help="reference config (default: bundled reference.cfg)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=cmd_report)

    return parser


def _load_reference_or_default(path: str | None) -> ReferenceConfig:
    if path is not None:
        return load_reference(path)
    return load_reference(default_data_dir() / "reference.cfg")


def _emit(args, mapping: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(mapping, indent=2))
    elif args.format == "csv":
        print(report_mod.mapping_to_csv(mapping), end="")
    else:
        print(text, end="")


def cmd_validate(args) -> int:
    dataset = report_mod.load_dataset(args.data, args.cpi, args.groups, args.base_year)
    formats = sorted({r.format for r in dataset.records})
    grouped = {fmt for g in dataset.groups for fmt in g.formats}
    ungrouped = [fmt for fmt in formats if fmt not in grouped]
    print(f"records: {len(dataset.records)}")
    print(f"formats: {len(formats)}")
    print(f"years: {min(r.year for r in dataset.records)}-{max(r.year for r in dataset.records)}")
    print(f"technologies: {', '.join(s for s in dataset.series)}")
    for name, series in dataset.series.items():
        gaps = series.gap_years
        if gaps:
            print(f"note: {name} has gap years {gaps}")
    if ungrouped:
        print(f"note: formats in no group: {', '.join(ungrouped)}")
    print("ok")
    return EXIT_OK


def cmd_fit(args) -> int:
    dataset = report_mod.load_dataset(args.data, args.cpi, args.groups, args.base_year)
    window = parse_window_spec(args.window)
    fit = fit_substitution(
        dataset.series_for(args.new),
        dataset.series_for(args.old),
        window=window,
        tolerance=args.tolerance,
    )
    label = f"{args.new} vs {args.old}"
    _emit(args, report_mod.fit_to_mapping(fit, label), report_mod.render_fit_text(fit, label))
    return EXIT_OK


def cmd_cycles(args) -> int:
    dataset = report_mod.load_dataset(args.data, args.cpi, args.groups, args.base_year)
    ref = _load_reference_or_default(args.config)
    threshold = args.end_threshold if args.end_threshold is not None else ref.end_threshold_rel
    summaries = []
    for group in dataset.groups:
        events = detect_events(
            dataset.series[group.name],
            end_threshold_rel=threshold,
            a_override=ref.a_overrides.get(group.name),
        )
        summaries.append(cycle_metrics(events))
    aggregate = aggregate_cycles(summaries)
    mapping = {
        "rows": report_mod.table4_to_rows(summaries),
        "aggregate": report_mod.aggregate_to_mapping(aggregate),
    }
    _emit(args, mapping, report_mod.render_table4_text(summaries, aggregate))
    return EXIT_OK


def cmd_crossover(args) -> int:
    dataset = report_mod.load_dataset(args.data, args.cpi, args.groups, args.base_year)
    established = dataset.series_for(args.old)
    disruptive = dataset.series_for(args.new)
    try:
        result = crossover_year(established, disruptive)
    except DomainError:
        result = None  # no comparable year at all
    mapping: dict = {"established": args.old, "disruptive": args.new}
    if result is None:
        mapping["crossover_year"] = None
        _emit(args, mapping, "no crossover in data\n")
        return EXIT_OK
    mapping["crossover_year"] = result.year
    mapping["established_share_pct"] = result.established_share
    mapping["crossover_at_boundary"] = result.boundary
    lines = [
        f"crossover year: {result.year}"
        + (" (already in force at first comparable year)" if result.boundary else ""),
        f"established share: {result.established_share:.2f}%",
    ]
    events = detect_events(established, end_threshold_rel=args.end_threshold)
    if events.m_year is not None and events.z_year is not None:
        dp = disruption_period(events)
        mapping["disruption_period_years"] = dp
        mapping["end_censored"] = events.censored
        lines.append(
            f"disruption period: {dp} years (peak {events.m_year}, "
            f"end {events.z_year}{'*' if events.censored else ''})"
        )
    _emit(args, mapping, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = scenario_from_mapping(read_kv_file(args.scenario))
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    window = parse_window_spec(args.window) if args.window else None
    result = recovery_experiment(scenario, early_fraction=args.early_fraction, window=window)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for series in generate_scenario(scenario):
            rows = ["year,level"]
            rows += [f"{year},{value!r}" for year, value in series.points.items()]
            (out / f"{series.technology}.csv").write_text(
                "\n".join(rows) + "\n", encoding="utf-8"
            )
    mapping = {
        "b_theoretical": result.b_theoretical,
        "b_fitted": result.b_fitted,
        "abs_gap": result.abs_gap,
        "window_first": result.window_used[0],
        "window_last": result.window_used[1],
        "saturation_level": result.saturation_level,
        "seed": scenario.seed,
    }
    text = (
        f"theoretical exponent (rate ratio): {result.b_theoretical:.4f}\n"
        f"fitted exponent:                   {result.b_fitted:.4f}\n"
        f"absolute gap:                      {result.abs_gap:.4f}\n"
        f"window: {result.window_used[0]}-{result.window_used[1]}   "
        f"max level/capacity in window: {result.saturation_level:.4f}\n"
    )
    _emit(args, mapping, text)
    return EXIT_OK


def cmd_report(args) -> int:
    dataset = report_mod.load_dataset(args.data, args.cpi, args.groups, args.base_year)
    ref = _load_reference_or_default(args.config)
    market = report_mod.build_report(dataset, ref)
    written = report_mod.write_report(market, dataset, args.out, args.format)
    for path in written:
        print(f"wrote {path}")
    if market.dp_mean is not None:
        print(f"mean disruption period: {market.dp_mean:.2f} years")
    agg = market.table4_aggregate
    if agg.mean_up_share is not None and agg.mean_down_share is not None:
        print(
            f"cycle asymmetry: up wave {agg.mean_up_share:.2f}% of cycle, "
            f"down wave {agg.mean_down_share:.2f}%"
        )
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
