"""Command line front end.

Subcommands: ``callflow`` (message catalogs and cost polynomials),
``compare`` (signaling-time table for both architectures), ``attach-sim``
(DES attach-time comparison), ``mobility`` (scenario runs per policy),
``sweep`` (paired policy comparison across seeds). All randomness flows
from explicit --seeds; identical invocations produce byte-identical
delimited outputs. Exit codes: 0 success, 2 usage error, 3 configuration
error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .callflows import (
    CALLFLOW_RECORD_HEADER,
    CallflowVariant,
    build_callflow,
    callflow_records,
)
from .costs import (
    CostParams,
    ParameterError,
    comparison_csv,
    comparison_text,
    compare_report,
    improvement,
    reference_csv,
    symbolic_cost,
)
from .engine import (
    ArrivalProcess,
    Workload,
    export_trace_jsonl,
    mean_completion,
    run_callflow,
    stats_csv,
)
from .mobility import (
    HandoverPolicyConfig,
    PolicyKind,
    handover_csv,
    mobility_csv,
    rank_correlation,
    run_mobility,
    summary_csv,
)
from .scenario import ScenarioError, load_scenario

USAGE_ERROR = 2
CONFIG_ERROR = 3
RUNTIME_ERROR = 4

VARIANT_NAMES = {v.value: v for v in CallflowVariant}
POLICY_NAMES = {k.value: k for k in PolicyKind}


def _parse_seeds(text: str) -> list[int]:
    """Parse '1,2,5' and '1-10' style seed lists."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ParameterError("seed list is empty")
    return seeds


def _cost_params(args) -> CostParams:
    return CostParams(alpha=args.alpha, beta=args.beta, m=args.m)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_cost_flags(p):
    p.add_argument("--alpha", type=float, default=1.0, help="transfer time per bit per hop, ms (default 1)")
    p.add_argument("--beta", type=float, default=4.0, help="processing time per step, ms (default 4)")
    p.add_argument("--m", type=float, default=1.0, help="average message length, bits (default 1)")


def _add_common_flags(p, seeds_default="1"):
    p.add_argument("--out", default="sigran-out", help="output directory (default sigran-out)")
    p.add_argument("--seeds", default=seeds_default, help=f"comma/range seed list (default {seeds_default})")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def cmd_callflow(args) -> int:
    variant = VARIANT_NAMES[args.variant]
    cf = build_callflow(variant)
    poly = symbolic_cost(cf)
    print(f"callflow: {variant.value} ({len(cf.messages)} messages)")
    print(CALLFLOW_RECORD_HEADER)
    for line in callflow_records(cf):
        print(line)
    print(f"polynomial: ({poly.tx_hops}, {poly.proc_steps})  [{poly}]")
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"callflow_{variant.value}.tsv"
        path.write_text(
            CALLFLOW_RECORD_HEADER + "\n" + "\n".join(callflow_records(cf)) + "\n"
        )
        print(f"wrote {path}")
    return 0


def cmd_compare(args) -> int:
    params = _cost_params(args)
    table = compare_report(params)
    print(comparison_text(table))
    out = _out_dir(args)
    (out / "compare.csv").write_text(comparison_csv(table))
    (out / "compare_reference.csv").write_text(reference_csv())
    print(f"wrote {out / 'compare.csv'}")
    print(f"wrote {out / 'compare_reference.csv'}")
    if not args.no_figures:
        from .figures import save_compare_figure

        save_compare_figure(table, out / "compare.png")
        print(f"wrote {out / 'compare.png'}")
    return 0


def _arrival_from_args(args) -> ArrivalProcess:
    if args.arrival == "simultaneous":
        return ArrivalProcess.simultaneous()
    if args.arrival == "interval":
        return ArrivalProcess.interval(args.arrival_param)
    return ArrivalProcess.random_uniform(args.arrival_param)


def cmd_attach_sim(args) -> int:
    params = _cost_params(args)
    seeds = _parse_seeds(args.seeds)
    arrival = _arrival_from_args(args)
    out = _out_dir(args)

    variants = (CallflowVariant.THREEGPP_REGISTRATION, CallflowVariant.PROPOSED_REGISTRATION)
    rows = []
    means = {}
    for variant in variants:
        cf = build_callflow(variant)
        per_seed = []
        for seed in seeds:
            w = Workload(ue_count=args.ue_count, arrival=arrival, base_stations=args.base_stations)
            stats = run_callflow(cf, params, w, seed=seed)
            m = mean_completion(stats)
            per_seed.append(m)
            rows.append((variant.value, seed, args.ue_count, arrival.kind, m))
            if args.export_traces:
                (out / f"trace_{variant.value}_seed{seed}.jsonl").write_text(
                    export_trace_jsonl(stats.trace)
                )
            if args.export_stats:
                (out / f"attach_{variant.value}_seed{seed}.csv").write_text(stats_csv(stats))
        means[variant.value] = sum(per_seed) / len(per_seed)

    base = means[CallflowVariant.THREEGPP_REGISTRATION.value]
    prop = means[CallflowVariant.PROPOSED_REGISTRATION.value]
    reduction = improvement(base, prop)

    lines = ["variant,seed,ue_count,arrival,mean_completion_ms"]
    for r in rows:
        lines.append(f"{r[0]},{r[1]},{r[2]},{r[3]},{r[4]!r}")
    (out / "attach_sim.csv").write_text("\n".join(lines) + "\n")
    (out / "attach_summary.csv").write_text(
        "variant,mean_ms\n"
        + f"{CallflowVariant.THREEGPP_REGISTRATION.value},{base!r}\n"
        + f"{CallflowVariant.PROPOSED_REGISTRATION.value},{prop!r}\n"
        + f"reduction,{reduction!r}\n"
    )
    print(f"mean attach time, standard RAN:    {base:.6g} ms")
    print(f"mean attach time, centralized RAN: {prop:.6g} ms")
    print(f"reduction: {reduction * 100:.4g}%")
    print(f"wrote {out / 'attach_sim.csv'}")
    print(f"wrote {out / 'attach_summary.csv'}")
    if not args.no_figures:
        from .figures import save_attach_figure

        save_attach_figure(
            {"standard": base, "centralized": prop}, out / "attach_sim.png"
        )
        print(f"wrote {out / 'attach_sim.png'}")
    return 0


def _policy_config(scenario, kind: PolicyKind) -> HandoverPolicyConfig:
    return HandoverPolicyConfig(
        kind,
        hysteresis_db=scenario.policy.hysteresis_db,
        time_to_trigger_ms=scenario.policy.time_to_trigger_ms,
        similarity_window_db=scenario.policy.similarity_window_db,
    )


def cmd_mobility(args) -> int:
    scenario = load_scenario(args.scenario)
    seeds = _parse_seeds(args.seeds)
    policies = [POLICY_NAMES[p] for p in (args.policy or list(POLICY_NAMES))]
    out = _out_dir(args)

    runs = []
    series = {}
    for kind in policies:
        cfg = _policy_config(scenario, kind)
        for seed in seeds:
            stats = run_mobility(scenario, cfg, seed=seed, duration_s=args.duration, tick_ms=args.tick)
            runs.append(stats)
            tag = f"{kind.value}_seed{seed}"
            (out / f"mobility_{tag}.csv").write_text(mobility_csv(stats))
            (out / f"handovers_{tag}.csv").write_text(handover_csv(stats))
            t = [k * stats.tick_ms / 1000.0 for k in range(len(stats.system_throughput_bps))]
            series[tag] = (t, [v / 1e6 for v in stats.system_throughput_bps])
            print(
                f"{kind.value} seed {seed}: {stats.handover_count} handovers, "
                f"mean system throughput {stats.mean_system_throughput_bps / 1e6:.4g} Mbps"
            )
    (out / "mobility_summary.csv").write_text(summary_csv(runs))
    print(f"wrote {out / 'mobility_summary.csv'}")
    if not args.no_figures:
        from .figures import save_mobility_figure

        save_mobility_figure(series, out / "mobility.png")
        print(f"wrote {out / 'mobility.png'}")
    return 0


SWEEP_CSV_COLUMNS = (
    "seed",
    "handovers_distributed",
    "handovers_centralized",
    "mean_throughput_distributed_bps",
    "mean_throughput_centralized_bps",
    "gain_bps",
)


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    seeds = _parse_seeds(args.seeds)
    out = _out_dir(args)

    rows = []
    for seed in seeds:
        d = run_mobility(
            scenario,
            _policy_config(scenario, PolicyKind.DISTRIBUTED_A3),
            seed=seed,
            duration_s=args.duration,
            tick_ms=args.tick,
        )
        c = run_mobility(
            scenario,
            _policy_config(scenario, PolicyKind.CENTRALIZED_LOAD_AWARE),
            seed=seed,
            duration_s=args.duration,
            tick_ms=args.tick,
        )
        gain = c.mean_system_throughput_bps - d.mean_system_throughput_bps
        rows.append(
            (
                seed,
                d.handover_count,
                c.handover_count,
                d.mean_system_throughput_bps,
                c.mean_system_throughput_bps,
                gain,
            )
        )
        print(
            f"seed {seed}: handovers {d.handover_count}, gain {gain / 1e6:+.4g} Mbps "
            f"(centralized {c.mean_system_throughput_bps / 1e6:.4g}, "
            f"distributed {d.mean_system_throughput_bps / 1e6:.4g})"
        )

    lines = [",".join(SWEEP_CSV_COLUMNS)]
    for r in rows:
        lines.append(f"{r[0]},{r[1]},{r[2]},{r[3]!r},{r[4]!r},{r[5]!r}")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")

    dominated = all(r[5] >= 0 for r in rows)
    print(f"centralized >= distributed in every pair: {dominated}")
    if len(rows) >= 2:
        rho = rank_correlation([r[1] for r in rows], [r[5] for r in rows])
        print(f"spearman(handovers, gain): {rho:.4f}")
    print(f"wrote {out / 'sweep.csv'}")
    if not args.no_figures:
        from .figures import save_sweep_figure

        save_sweep_figure(
            [r[1] for r in rows], [r[5] / 1e6 for r in rows], out / "sweep.png"
        )
        print(f"wrote {out / 'sweep.png'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigran",
        description="Signaling-cost and mobility experiments comparing the "
        "standard 5G RAN with a centralized control-plane variant.",
    )
    parser.add_argument("--version", action="version", version=f"sigran {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("callflow", help="print a canonical callflow and its cost polynomial")
    p.add_argument("variant", choices=sorted(VARIANT_NAMES))
    p.add_argument("--out", default=None, help="also write the record file to this directory")
    p.set_defaults(func=cmd_callflow)

    p = sub.add_parser("compare", help="signaling-time comparison table for both architectures")
    _add_cost_flags(p)
    p.add_argument("--out", default="sigran-out")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("attach-sim", help="DES attach-time comparison of the registration variants")
    _add_cost_flags(p)
    _add_common_flags(p)
    p.add_argument("--ue-count", type=int, default=1)
    p.add_argument("--base-stations", type=int, default=1)
    p.add_argument(
        "--arrival", choices=("simultaneous", "interval", "random"), default="simultaneous"
    )
    p.add_argument(
        "--arrival-param",
        type=float,
        default=0.0,
        help="interval or window length in ms for non-simultaneous arrivals",
    )
    p.add_argument("--export-traces", action="store_true", help="write per-run event traces (JSONL)")
    p.add_argument("--export-stats", action="store_true", help="write per-run per-UE stats CSVs")
    p.set_defaults(func=cmd_attach_sim)

    p = sub.add_parser("mobility", help="run a mobility scenario under one or more policies")
    _add_common_flags(p)
    p.add_argument("--scenario", default="paper-fig7", help="builtin name or path to a scenario file")
    p.add_argument(
        "--policy",
        action="append",
        choices=sorted(POLICY_NAMES),
        help="policy to run (repeatable; default: both)",
    )
    p.add_argument("--duration", type=float, default=None, help="override duration (s)")
    p.add_argument("--tick", type=float, default=None, help="override tick (ms)")
    p.set_defaults(func=cmd_mobility)

    p = sub.add_parser("sweep", help="paired policy comparison across seeds")
    _add_common_flags(p, seeds_default="1-10")
    p.add_argument("--scenario", default="paper-fig7-loaded")
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--tick", type=float, default=None)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return CONFIG_ERROR
    except ParameterError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as e:  # pragma: no cover - defensive
        print(f"runtime error: {e}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
