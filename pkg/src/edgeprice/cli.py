"""Command-line front end: solve one scenario, sweep, trace, or verify."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .bench import load_sweep_spec, run_sweep, run_trial, write_csv, SCHEMES
from .differentiated import DEFAULT_QUANTUM_CYCLES, solve_differentiated
from .protocol import format_trace, run_bargaining, write_trace
from .scenario import ScenarioConfig, load_scenario_config, sample_scenario
from .uniform import solve_uniform
from .verify import run_verify


def _fmt(x: float) -> str:
    return "%.9g" % x


def _scenario_config(args) -> ScenarioConfig:
    config = load_scenario_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def _cmd_run(args) -> int:
    config = _scenario_config(args)
    scenario = sample_scenario(config)
    print(f"scheme={args.scheme}")
    print(f"num_users={scenario.system.num_users}")
    print(f"capacity_cycles={_fmt(scenario.system.cloud_capacity_cycles)}")
    if args.scheme == "local_only":
        result = run_trial(scenario, args.scheme)
        print(f"avg_latency_s={_fmt(result.avg_latency_s)}")
        print(f"revenue_s={_fmt(result.revenue_s)}")
        return 0
    if args.scheme == "uniform":
        outcome = solve_uniform(scenario)
        print(f"price_s_per_cycle={_fmt(outcome.prices[0])}")
    else:
        outcome = solve_differentiated(scenario, quantum=args.quantum)
    print(f"feasible={outcome.feasible}")
    print(f"total_load_cycles={_fmt(outcome.total_load_cycles)}")
    print(f"revenue_s={_fmt(outcome.revenue_s)}")
    for price, d in zip(outcome.prices, outcome.decisions):
        print(f"user {d.user_index}: price={_fmt(price)} offload={d.offload_flag} "
              f"bits={_fmt(d.offloaded_bits)} latency_s={_fmt(d.latency_s)} "
              f"payment_s={_fmt(d.payment_s)} cost_s={_fmt(d.cost_s)}")
    return 0


def _cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.config)
    if args.seed is not None:
        spec = replace(spec, base=replace(spec.base, seed=args.seed))
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    results = run_sweep(spec, quantum=args.quantum)
    write_csv(results, args.out)
    print(f"wrote {len(results)} rows to {args.out}")
    return 0


def _cmd_trace(args) -> int:
    config = _scenario_config(args)
    trace = run_bargaining(sample_scenario(config))
    if args.out:
        write_trace(trace, args.out)
        print(f"wrote {sum(1 for _ in trace.messages())} messages to {args.out}")
    else:
        sys.stdout.write(format_trace(trace))
    return 0


def _cmd_verify(args) -> int:
    results = run_verify(seed=args.seed, trials=args.trials)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgeprice",
        description="Price-based computation offloading for a capacity-limited "
                    "edge cloud")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="solve one sampled scenario")
    run_p.add_argument("--config", help="scenario config file")
    run_p.add_argument("--seed", type=int, help="override the config seed")
    run_p.add_argument("--scheme", choices=SCHEMES, default="uniform")
    run_p.add_argument("--quantum", type=float, default=DEFAULT_QUANTUM_CYCLES,
                       help="knapsack weight quantum in cycles")
    run_p.set_defaults(handler=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="Monte Carlo sweep to CSV")
    sweep_p.add_argument("--config", required=True, help="sweep spec file")
    sweep_p.add_argument("--out", required=True, help="CSV output path")
    sweep_p.add_argument("--seed", type=int, help="override the base seed")
    sweep_p.add_argument("--trials", type=int, help="override trials per point")
    sweep_p.add_argument("--quantum", type=float, default=DEFAULT_QUANTUM_CYCLES)
    sweep_p.set_defaults(handler=_cmd_sweep)

    trace_p = sub.add_parser("trace", help="run the bargaining protocol and "
                                           "write its message log")
    trace_p.add_argument("--config", help="scenario config file")
    trace_p.add_argument("--seed", type=int, help="override the config seed")
    trace_p.add_argument("--out", help="log path (stdout when omitted)")
    trace_p.set_defaults(handler=_cmd_trace)

    verify_p = sub.add_parser("verify", help="run the oracle/property checks")
    verify_p.add_argument("--seed", type=int, default=0)
    verify_p.add_argument("--trials", type=int,
                          help="instances per check (defaults per check)")
    verify_p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
