"""Monte Carlo experiment harness: scheme comparison over parameter sweeps.

Each trial samples a fresh scenario and scores three schemes: the uniform
shared price, per-user prices, and an all-local baseline that never
offloads. Scored quantities are the revenue and the mean over users of the
equilibrium task latency. Sweeps vary either the cloud cycle capacity or the
number of users and write a flat CSV.

Seeding: a trial at sweep point i with trial index j uses
base_seed + i * 10**6 + j, except capacity sweeps, which drop the point term
so the same user populations recur at every capacity (capacity never enters
sampling, and pairing makes the all-local baseline exactly constant across
points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .differentiated import DEFAULT_QUANTUM_CYCLES, solve_differentiated
from .scenario import (Scenario, ScenarioConfig, config_from_mapping,
                       read_key_values, sample_scenario)
from .uniform import solve_uniform

SCHEME_UNIFORM = "uniform"
SCHEME_DIFFERENTIATED = "differentiated"
SCHEME_LOCAL_ONLY = "local_only"
SCHEMES = (SCHEME_UNIFORM, SCHEME_DIFFERENTIATED, SCHEME_LOCAL_ONLY)

SWEEP_CAPACITY = "capacity_cycles"
SWEEP_NUM_USERS = "num_users"
SWEEP_PARAMS = (SWEEP_CAPACITY, SWEEP_NUM_USERS)

CSV_HEADER = "scheme,sweep_param,sweep_value,seed,avg_latency_s,revenue_s"


@dataclass(frozen=True)
class TrialResult:
    scheme: str
    sweep_param: str
    sweep_value: float
    seed: int
    avg_latency_s: float
    revenue_s: float


@dataclass(frozen=True)
class SweepSpec:
    sweep_param: str
    sweep_values: tuple[float, ...]
    trials: int
    base: ScenarioConfig


def local_only_latency(scenario: Scenario) -> float:
    """Mean over users of the all-local time data_bits * cycles_per_bit / cpu."""
    return math.fsum(u.data_bits * u.cycles_per_bit / u.local_cpu_cps
                     for u in scenario.users) / len(scenario.users)


def run_trial(scenario: Scenario, scheme: str, sweep_param: str = "none",
              sweep_value: float = 0.0, seed: int = 0,
              quantum: float = DEFAULT_QUANTUM_CYCLES) -> TrialResult:
    if scheme == SCHEME_LOCAL_ONLY:
        latency = local_only_latency(scenario)
        revenue = 0.0
    else:
        if scheme == SCHEME_UNIFORM:
            outcome = solve_uniform(scenario)
        elif scheme == SCHEME_DIFFERENTIATED:
            outcome = solve_differentiated(scenario, quantum=quantum)
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
        latency = (math.fsum(d.latency_s for d in outcome.decisions)
                   / len(outcome.decisions))
        revenue = outcome.revenue_s
    return TrialResult(scheme=scheme, sweep_param=sweep_param,
                       sweep_value=sweep_value, seed=seed,
                       avg_latency_s=latency, revenue_s=revenue)


def _validate_spec(spec: SweepSpec) -> None:
    if spec.sweep_param not in SWEEP_PARAMS:
        raise ValueError(f"sweep_param must be one of {SWEEP_PARAMS}, "
                         f"got {spec.sweep_param!r}")
    if not spec.sweep_values:
        raise ValueError("sweep_values must be nonempty")
    for v in spec.sweep_values:
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"sweep value must be finite and > 0 (got {v})")
        if spec.sweep_param == SWEEP_NUM_USERS and v != int(v):
            raise ValueError(f"num_users sweep values must be integral (got {v})")
    if spec.trials < 1:
        raise ValueError(f"trials must be >= 1 (got {spec.trials})")


def trial_seed(spec: SweepSpec, point_index: int, trial_index: int) -> int:
    if spec.sweep_param == SWEEP_CAPACITY:
        return spec.base.seed + trial_index
    return spec.base.seed + point_index * 10**6 + trial_index


def run_sweep(spec: SweepSpec,
              quantum: float = DEFAULT_QUANTUM_CYCLES) -> list[TrialResult]:
    """All (point, trial, scheme) results, deterministic in (spec, base seed)."""
    _validate_spec(spec)
    results: list[TrialResult] = []
    for i, value in enumerate(spec.sweep_values):
        if spec.sweep_param == SWEEP_CAPACITY:
            point_cfg = replace(spec.base, capacity_cycles=value)
        else:
            point_cfg = replace(spec.base, num_users=int(value))
        for j in range(spec.trials):
            seed = trial_seed(spec, i, j)
            scenario = sample_scenario(replace(point_cfg, seed=seed))
            for scheme in SCHEMES:
                results.append(run_trial(scenario, scheme,
                                         sweep_param=spec.sweep_param,
                                         sweep_value=float(value), seed=seed,
                                         quantum=quantum))
    return results


def _fmt(x: float) -> str:
    return "%.17g" % x


def format_csv(results: list[TrialResult]) -> str:
    lines = [CSV_HEADER]
    for r in results:
        lines.append(f"{r.scheme},{r.sweep_param},{_fmt(r.sweep_value)},"
                     f"{r.seed},{_fmt(r.avg_latency_s)},{_fmt(r.revenue_s)}")
    return "\n".join(lines) + "\n"


def write_csv(results: list[TrialResult], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(results))


def read_csv(path: str) -> list[TrialResult]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing header {CSV_HEADER!r}")
    out = []
    for line in lines[1:]:
        scheme, param, value, seed, latency, revenue = line.split(",")
        out.append(TrialResult(scheme=scheme, sweep_param=param,
                               sweep_value=float(value), seed=int(seed),
                               avg_latency_s=float(latency),
                               revenue_s=float(revenue)))
    return out


_SWEEP_KEYS = {"sweep_param", "sweep_values", "trials"}


def load_sweep_spec(path: str) -> SweepSpec:
    """Sweep config file: sweep_param, sweep_values (comma separated), trials,
    plus any scenario config keys for the base instance."""
    mapping = read_key_values(path)
    missing = _SWEEP_KEYS - mapping.keys()
    if missing:
        raise ValueError(f"{path}: missing sweep keys {sorted(missing)}")
    values = tuple(float(v) for v in mapping["sweep_values"].split(",") if v.strip())
    base_keys = {k: v for k, v in mapping.items() if k not in _SWEEP_KEYS}
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = base_keys.keys() - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    spec = SweepSpec(sweep_param=mapping["sweep_param"], sweep_values=values,
                     trials=int(mapping["trials"]),
                     base=config_from_mapping(base_keys))
    _validate_spec(spec)
    return spec
