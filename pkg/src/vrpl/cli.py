"""Command-line interface.

Subcommands::

    sweep-error    error-upload leakage over error and protection grids
    sweep-qoe      QoE over streamed-radius and error grids
    sweep-leakage  QoE-upload leakage over streamed-radius and error grids
    trace          trace pipeline: predict, aggregate, sweep, report
    resource       capability and streamed-radius from a resource budget
    validate       resolve and echo the scenario, checking every field

Common flags: ``--config`` (JSON scenario), ``--out`` (output directory),
``--format`` (csv or json tables), ``--seed`` and ``--grid`` overrides.
The ``VRPL_THREADS`` environment variable caps sweep parallelism.

Exit codes: 0 success, 2 configuration error, 3 data error,
4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .aggregate import AggregateReport, build_report
from .config import (
    ConfigError,
    Scenario,
    load_config,
    parse_grid_override,
    resolve_scenario,
)
from .leakage import (
    PrivacyRequirement,
    QoeInconsistencyError,
    leak_prob_from_error,
    leak_prob_from_qoe,
)
from .qoe import classify, qoe
from .resources import capability, mc_avg_rate, sfov_radius
from .tables import write_csv, write_json
from .traces import TraceFormatError, generate_synthetic_traces, load_traces, predict_all

#: Samples for the optional channel-rate estimate in ``resource``.
MC_RATE_SAMPLES = 200_000

#: Tolerance for the self-checks guarding emitted reports.
SELF_CHECK_TOL = 1e-9


class InternalInconsistencyError(RuntimeError):
    """An emitted report failed a structural self-check."""


def thread_count() -> int | None:
    """Worker cap from VRPL_THREADS; None means single-threaded."""
    raw = os.environ.get("VRPL_THREADS")
    if raw is None or not raw.strip():
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"VRPL_THREADS: not an integer: {raw!r}") from None
    if n < 1:
        raise ConfigError(f"VRPL_THREADS: must be >= 1, got {n}")
    return n


def _load_scenario(args: argparse.Namespace) -> Scenario:
    doc = load_config(args.config) if args.config else {}
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.grid is not None:
        overrides["grids"] = parse_grid_override(args.grid)
    return resolve_scenario(doc, overrides)


def _emit_table(args: argparse.Namespace, name: str, header: list[str], rows: list[list]) -> Path:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        path = out_dir / f"{name}.json"
        write_json(path, {"columns": header, "rows": rows})
    else:
        path = out_dir / f"{name}.csv"
        write_csv(path, header, rows)
    print(f"wrote {path}")
    return path


def cmd_sweep_error(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    rows = []
    for eps in scenario.grids["epsilon"]:
        for e in scenario.grids["error"]:
            res = leak_prob_from_error(e, eps)
            rows.append([e, eps, res.probability, res.zone_kind.value, res.zone_measure])
    _emit_table(args, "error_sweep", ["e_rad", "epsilon_rad", "leak_prob", "zone_kind", "zone_measure"], rows)
    return 0


def cmd_sweep_qoe(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    rows = []
    for r_sv in scenario.grids["r_sv"]:
        for e in scenario.grids["error"]:
            rows.append([r_sv, e, qoe(scenario.r_fov, r_sv, e), classify(scenario.r_fov, r_sv, e).value])
    _emit_table(args, "qoe_sweep", ["r_sv_rad", "e_rad", "qoe", "case"], rows)
    return 0


def cmd_sweep_leakage(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    rows = []
    for r_sv in scenario.grids["r_sv"]:
        for e in scenario.grids["error"]:
            q = qoe(scenario.r_fov, r_sv, e)
            res = leak_prob_from_qoe(q, scenario.r_fov, r_sv, scenario.epsilon)
            rows.append(
                [
                    r_sv,
                    e,
                    q,
                    res.case.value if res.case is not None else "",
                    res.probability,
                    res.zone_kind.value,
                    res.zone_measure,
                ]
            )
    _emit_table(
        args,
        "leakage_sweep",
        ["r_sv_rad", "e_rad", "qoe", "case", "leak_prob", "zone_kind", "zone_measure"],
        rows,
    )
    return 0


def _report_to_dict(report: AggregateReport) -> dict:
    return {
        "n_samples": report.n_samples,
        "r_fov_rad": report.r_fov,
        "epsilon_rad": report.epsilon,
        "mean_error_subset_rad": report.mean_error_subset,
        "gamma_tradeoff": report.gamma_tradeoff,
        "gamma_consist": report.gamma_consist,
        "regions": {
            name: list(getattr(report.regions, name)) for name in ("i1", "d2", "c", "i2", "d1")
        },
        "points": [
            {
                "r_sv_rad": p.r_sv,
                "case_ratios": {case.value: ratio for case, ratio in p.case_ratios.items()},
                "leakage_components": {
                    case.value: comp for case, comp in p.leakage_components.items()
                },
                "leakage_total": p.leakage_total,
                "mean_qoe": p.mean_qoe,
            }
            for p in report.points
        ],
    }


def _check_report(report: AggregateReport) -> None:
    """Structural self-checks on an aggregate report before emission."""
    for p in report.points:
        ratio_sum = sum(p.case_ratios.values())
        comp_sum = sum(p.leakage_components.values())
        if abs(ratio_sum - 1.0) > SELF_CHECK_TOL:
            raise InternalInconsistencyError(
                f"case ratios at r_sv={p.r_sv!r} sum to {ratio_sum!r}, expected 1"
            )
        if abs(comp_sum - p.leakage_total) > SELF_CHECK_TOL:
            raise InternalInconsistencyError(
                f"leakage components at r_sv={p.r_sv!r} sum to {comp_sum!r}, "
                f"expected total {p.leakage_total!r}"
            )
        if not 0.0 <= p.leakage_total <= 1.0 or not 0.0 <= p.mean_qoe <= 1.0:
            raise InternalInconsistencyError(
                f"averages at r_sv={p.r_sv!r} left [0, 1]: "
                f"leakage {p.leakage_total!r}, qoe {p.mean_qoe!r}"
            )


def cmd_trace(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    if scenario.traces_csv is not None:
        traces = load_traces(scenario.traces_csv)
    elif scenario.synthetic is not None:
        spec = scenario.synthetic
        traces = generate_synthetic_traces(
            spec.model, spec.n_traces, spec.duration, spec.rate, scenario.seed
        )
    else:
        raise ConfigError("config: trace pipeline needs traces_csv or a synthetic block")
    errors = predict_all(traces, scenario.windowing, scenario.predictor)
    req = (
        PrivacyRequirement(scenario.epsilon, scenario.max_leak_prob)
        if scenario.max_leak_prob is not None
        else None
    )
    report = build_report(
        errors,
        scenario.r_fov,
        scenario.epsilon,
        scenario.grids["r_sv"],
        req=req,
        workers=thread_count(),
    )
    _check_report(report)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    write_json(report_path, _report_to_dict(report))
    print(f"wrote {report_path}")

    case_order = sorted({case for p in report.points for case in p.case_ratios}, key=lambda c: c.value)
    header = (
        ["r_sv_rad"]
        + [f"ratio_{c.value}" for c in case_order]
        + [f"leak_{c.value}" for c in case_order]
        + ["leak_total", "mean_qoe"]
    )
    rows = []
    for p in report.points:
        rows.append(
            [p.r_sv]
            + [p.case_ratios.get(c, 0.0) for c in case_order]
            + [p.leakage_components.get(c, 0.0) for c in case_order]
            + [p.leakage_total, p.mean_qoe]
        )
    _emit_table(args, "aggregate_sweep", header, rows)

    fig_rows = []
    for p in report.points:
        fig_rows.append(["avg_leakage_vs_r_sv", "total", p.r_sv, p.leakage_total])
        for c, comp in p.leakage_components.items():
            fig_rows.append(["avg_leakage_vs_r_sv", f"component:{c.value}", p.r_sv, comp])
        for c, ratio in p.case_ratios.items():
            fig_rows.append(["case_ratio_vs_r_sv", c.value, p.r_sv, ratio])
        fig_rows.append(["mean_qoe_vs_r_sv", "mean_qoe", p.r_sv, p.mean_qoe])
    fig_path = out_dir / "figures.csv"
    write_csv(fig_path, ["figure", "series", "x", "y"], fig_rows)
    print(f"wrote {fig_path}")
    return 0


def cmd_resource(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    if scenario.resource is None or scenario.tile is None:
        raise ConfigError("config.resources: required for the resource subcommand")
    cfg, tile = scenario.resource, scenario.tile
    cap = capability(cfg, tile)
    doc = {
        "tile_compute_bits": tile.compute_bits,
        "tile_transmit_bits": tile.transmit_bits,
        "compute_rate_bit_s": cfg.compute_rate,
        "avg_data_rate_bit_s": cfg.avg_data_rate,
        "capability": cap,
        "r_sv_rad": sfov_radius(cap).value,
    }
    if scenario.channel is not None:
        est = mc_avg_rate(scenario.channel, MC_RATE_SAMPLES, scenario.seed)
        cap_est = capability(dataclasses.replace(cfg, avg_data_rate=est), tile)
        doc["channel_avg_rate_bit_s"] = est
        doc["capability_with_channel_rate"] = cap_est
        doc["r_sv_rad_with_channel_rate"] = sfov_radius(cap_est).value
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "resource_summary.json"
    write_json(path, doc)
    print(f"wrote {path}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    summary = {
        "r_fov_rad": scenario.r_fov,
        "epsilon_rad": scenario.epsilon,
        "max_leak_prob": scenario.max_leak_prob,
        "seed": scenario.seed,
        "predictor": scenario.predictor.value,
        "windowing": {
            "t_obw": scenario.windowing.t_obw,
            "t_cc": scenario.windowing.t_cc,
            "t_pdw": scenario.windowing.t_pdw,
            "sample_rate_hz": scenario.windowing.sample_rate,
            "passive_prefix": scenario.windowing.passive_prefix,
        },
        "grid_sizes": {name: len(grid) for name, grid in scenario.grids.items()},
        "traces_csv": scenario.traces_csv,
        "synthetic": None
        if scenario.synthetic is None
        else {
            "model": type(scenario.synthetic.model).__name__,
            "n_traces": scenario.synthetic.n_traces,
            "duration_s": scenario.synthetic.duration,
            "rate_hz": scenario.synthetic.rate,
        },
        "has_resources": scenario.resource is not None,
        "has_channel": scenario.channel is not None,
        "r_sv_rad": scenario.r_sv,
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vrpl",
        description="Viewpoint-privacy leakage analysis for proactive VR streaming",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "sweep-error": (cmd_sweep_error, "error-upload leakage over error/protection grids"),
        "sweep-qoe": (cmd_sweep_qoe, "QoE over streamed-radius and error grids"),
        "sweep-leakage": (cmd_sweep_leakage, "QoE-upload leakage over streamed-radius and error grids"),
        "trace": (cmd_trace, "trace pipeline: predict, aggregate, sweep, report"),
        "resource": (cmd_resource, "capability and streamed radius from a resource budget"),
        "validate": (cmd_validate, "resolve and echo the scenario"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON scenario file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="table format")
        p.add_argument("--seed", type=int, help="RNG seed override")
        p.add_argument("--grid", help="grid override, e.g. error=0:3.14159:100,r_sv=0:3.14159:50")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QoeInconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 4
    except TraceFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
