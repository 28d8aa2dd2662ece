"""Randomized oracle and property checks, runnable from the command line.

Every check draws fresh instances from a seeded stream, compares the fast
path against an independent reference (grid scan, dense price grid, subset
enumeration, exhaustive candidate evaluation), and reports one pass/fail
line. The acceptance test suite runs the same checks at pinned trial counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .differentiated import (solve_differentiated, solve_knapsack_bruteforce,
                             solve_knapsack_dp, build_knapsack, KnapsackInstance)
from .follower import best_response, best_response_oracle
from .kinetics import (local_time, offload_time, scenario_kinetics, task_latency,
                       user_cost)
from .protocol import run_bargaining
from .scenario import Scenario, ScenarioConfig, sample_scenario
from .uniform import solve_uniform, solve_uniform_exhaustive


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def random_scenario_config(rng: np.random.Generator, max_users: int = 12,
                           min_users: int = 1) -> ScenarioConfig:
    """Default distributions with randomized size, seed and capacity.

    The capacity spans from far below one user's demand to well above the
    total demand, so feasible, binding and infeasible regimes all occur.
    """
    return ScenarioConfig(
        num_users=int(rng.integers(min_users, max_users + 1)),
        seed=int(rng.integers(0, 2**63)),
        capacity_cycles=float(10.0 ** rng.uniform(8.0, 10.8)),
    )


def _sample(rng: np.random.Generator, max_users: int = 12,
            min_users: int = 1) -> Scenario:
    return sample_scenario(random_scenario_config(rng, max_users, min_users))


def _random_price(rng: np.random.Generator, threshold: float) -> float:
    mode = int(rng.integers(0, 4))
    if mode == 0:
        return 0.0
    if mode == 1:
        return threshold  # exactly at the tie
    if mode == 2:
        return float(rng.uniform(0.0, threshold))
    return float(rng.uniform(threshold, 4.0 * threshold))


def check_follower_oracle(seed: int = 0, pairs: int = 1000,
                          grid_points: int = 100_000) -> CheckResult:
    """Fast decision never loses to a grid scan; support is exactly {0, balance}."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        scenario = _sample(rng, max_users=8)
        kin_all = scenario_kinetics(scenario)
        k = int(rng.integers(0, len(scenario.users)))
        user, kin = scenario.users[k], kin_all[k]
        price = _random_price(rng, 1.0 / user.local_cpu_cps)
        decision = best_response(kin, user, price)
        if decision.offloaded_bits not in (0.0, kin.balance_bits):
            return CheckResult("follower_oracle", False,
                               f"offload size off the {{0, balance}} support: "
                               f"{decision.offloaded_bits}")
        grid_ell = best_response_oracle(kin, user, price, grid_points)
        grid_cost = user_cost(kin, user, grid_ell, price)
        excess = (decision.cost_s - grid_cost) / (1.0 + abs(grid_cost))
        worst = max(worst, excess)
        if excess > 1e-9:
            return CheckResult("follower_oracle", False,
                               f"decision cost exceeds grid cost by {excess:.3e} "
                               f"relative")
    return CheckResult("follower_oracle", True,
                       f"{pairs} (user, price) pairs vs {grid_points}-point grid, "
                       f"worst relative excess {worst:.3e}")


def grid_revenue_max(scenario: Scenario, kin_all, grid_points: int) -> float:
    """Best revenue over a dense shared-price grid on (0, 2 * max threshold]."""
    inv_cpu = np.array([1.0 / u.local_cpu_cps for u in scenario.users])
    demand = np.array([k.balance_bits * u.cycles_per_bit
                       for k, u in zip(kin_all, scenario.users)])
    top = 2.0 * float(inv_cpu.max())
    prices = np.linspace(top / grid_points, top, grid_points)
    offload = prices[None, :] <= inv_cpu[:, None]
    load = demand @ offload
    revenue = np.where(load <= scenario.system.cloud_capacity_cycles,
                       prices * load, 0.0)
    return float(revenue.max())


def check_uniform_grid_optimality(seed: int = 0, scenarios: int = 1000,
                                  grid_points: int = 10_000,
                                  max_users: int = 12) -> CheckResult:
    """No shared price on a dense grid beats the candidate-set search."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(scenarios):
        scenario = _sample(rng, max_users=max_users)
        kin_all = scenario_kinetics(scenario)
        solved = solve_uniform(scenario, kin_all).revenue_s
        grid_best = grid_revenue_max(scenario, kin_all, grid_points)
        excess = (grid_best - solved) / (1.0 + solved)
        worst = max(worst, excess)
        if excess > 1e-9:
            return CheckResult("uniform_grid_optimality", False,
                               f"grid price beats the solver by {excess:.3e} "
                               f"relative")
    return CheckResult("uniform_grid_optimality", True,
                       f"{scenarios} scenarios x {grid_points}-point price grid, "
                       f"worst relative excess {worst:.3e}")


def check_bargaining_equivalence(seed: int = 0,
                                 scenarios: int = 1000) -> CheckResult:
    """Early-exit search == exhaustive scoring == protocol replay, exactly."""
    rng = np.random.default_rng(seed)
    for _ in range(scenarios):
        scenario = _sample(rng)
        kin_all = scenario_kinetics(scenario)
        fast = solve_uniform(scenario, kin_all)
        full = solve_uniform_exhaustive(scenario, kin_all)
        if fast != full:
            return CheckResult("bargaining_equivalence", False,
                               "early exit diverged from exhaustive scoring")
        trace = run_bargaining(scenario)
        if trace.final != fast:
            return CheckResult("bargaining_equivalence", False,
                               "protocol replay diverged from the direct solver")
    return CheckResult("bargaining_equivalence", True,
                       f"{scenarios} scenarios, all outcomes identical "
                       f"field for field")


def random_knapsack(rng: np.random.Generator,
                    max_items: int = 20) -> KnapsackInstance:
    """Instance built from a sampled scenario, with a randomized quantum."""
    scenario = _sample(rng, max_users=max_items)
    inst = build_knapsack(scenario, scenario_kinetics(scenario))
    quantum = float(10.0 ** rng.integers(5, 8))
    return replace(inst, quantum=quantum)


def snap_weights_up(inst: KnapsackInstance) -> KnapsackInstance:
    snapped = tuple(inst.quantum * math.ceil(w / inst.quantum)
                    for w in inst.weights)
    return replace(inst, weights=snapped)


def check_knapsack_oracle(seed: int = 0, instances: int = 500,
                          max_items: int = 20) -> CheckResult:
    """DP vs subset enumeration: exact on grid weights, bounded off-grid."""
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        inst = random_knapsack(rng, max_items)

        grid_inst = snap_weights_up(inst)
        dp = solve_knapsack_dp(grid_inst)
        bf = solve_knapsack_bruteforce(grid_inst)
        if dp.total_value != bf.total_value:
            return CheckResult("knapsack_oracle", False,
                               f"grid-weight mismatch: dp {dp.total_value!r} vs "
                               f"enumeration {bf.total_value!r}")

        dp = solve_knapsack_dp(inst)
        bf = solve_knapsack_bruteforce(inst)
        slack = 1e-12 * (1.0 + abs(bf.total_value))
        if dp.total_value < bf.total_value - dp.value_bound - slack:
            return CheckResult("knapsack_oracle", False,
                               f"dp fell {bf.total_value - dp.total_value:.3e} "
                               f"below enumeration, bound {dp.value_bound:.3e}")
        if dp.total_weight > inst.capacity:
            return CheckResult("knapsack_oracle", False,
                               "dp selection violates the raw capacity")
    return CheckResult("knapsack_oracle", True,
                       f"{instances} instances up to {max_items} items: grid "
                       f"weights exact, raw weights within the reported bound")


def check_revenue_dominance(seed: int = 0, scenarios: int = 1000,
                            max_users: int = 20) -> CheckResult:
    """Per-user pricing never earns less than the shared price (exact solve)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(scenarios):
        scenario = _sample(rng, max_users=max_users)
        kin_all = scenario_kinetics(scenario)
        uniform = solve_uniform(scenario, kin_all).revenue_s
        per_user = solve_differentiated(scenario, kin_all).revenue_s
        short = (uniform - per_user) / (1.0 + uniform)
        worst = max(worst, short)
        if short > 1e-12:
            return CheckResult("revenue_dominance", False,
                               f"per-user pricing fell {short:.3e} relative "
                               f"below the shared price")
    return CheckResult("revenue_dominance", True,
                       f"{scenarios} scenarios, worst relative shortfall "
                       f"{worst:.3e}")


def check_cost_model(seed: int = 0, users: int = 10_000) -> CheckResult:
    """Branch continuity, cost = latency + payment, and the balance identity."""
    rng = np.random.default_rng(seed)
    done = 0
    while done < users:
        scenario = _sample(rng, max_users=50, min_users=10)
        kin_all = scenario_kinetics(scenario)
        for user, kin in zip(scenario.users, kin_all):
            m = kin.balance_bits
            price = _random_price(rng, 1.0 / user.local_cpu_cps)

            at_break = user_cost(kin, user, m, price)
            second_branch = (kin.beta_s_per_bit * m
                             + price * (m * user.cycles_per_bit))
            if abs(at_break - second_branch) > 1e-9 * abs(at_break):
                return CheckResult("cost_model", False,
                                   f"branch mismatch at the balance point: "
                                   f"{at_break!r} vs {second_branch!r}")

            for ell in (0.0, 0.5 * m, m, 0.5 * (m + user.data_bits),
                        user.data_bits):
                total = user_cost(kin, user, ell, price)
                rebuilt = (task_latency(kin, user, ell)
                           + price * (ell * user.cycles_per_bit))
                if abs(total - rebuilt) > 1e-12 * (1.0 + abs(total)):
                    return CheckResult("cost_model", False,
                                       f"cost != latency + payment at ell={ell}")

            gap = abs(local_time(user, m) - offload_time(kin, user, m))
            if gap > 1e-9 * local_time(user, m):
                return CheckResult("cost_model", False,
                                   f"paths differ at the balance point by {gap}")
            done += 1
            if done >= users:
                break
    return CheckResult("cost_model", True,
                       f"{users} users: branch continuity, cost identity and "
                       f"balance equality all within tolerance")


ALL_CHECKS = (
    check_follower_oracle,
    check_uniform_grid_optimality,
    check_bargaining_equivalence,
    check_knapsack_oracle,
    check_revenue_dominance,
    check_cost_model,
)

# CLI defaults; the acceptance suite pins the full counts.
_DEFAULT_COUNTS = {
    "check_follower_oracle": {"pairs": 200},
    "check_uniform_grid_optimality": {"scenarios": 100},
    "check_bargaining_equivalence": {"scenarios": 200},
    "check_knapsack_oracle": {"instances": 100},
    "check_revenue_dominance": {"scenarios": 200},
    "check_cost_model": {"users": 2000},
}


def run_verify(seed: int = 0, trials: int | None = None) -> list[CheckResult]:
    """Run every check; ``trials`` overrides each check's instance count."""
    results = []
    for check in ALL_CHECKS:
        kwargs = dict(_DEFAULT_COUNTS[check.__name__])
        if trials is not None:
            kwargs = {key: trials for key in kwargs}
        results.append(check(seed=seed, **kwargs))
    return results
