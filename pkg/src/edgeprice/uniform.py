"""Seller-side uniform pricing: one shared price for every user.

The revenue-optimal shared price lies in the finite candidate set
{1/local_cpu_cps}: pushing a price upward inside a gap between candidates
keeps every offload decision fixed while scaling revenue up, so interior
prices are never optimal. The solver walks candidates from the most
expensive down, stopping at the first one whose induced load exceeds the
cloud capacity (load only grows as the price falls).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .follower import OffloadDecision, best_response
from .kinetics import UserKinetics, scenario_kinetics
from .scenario import Scenario, validate_scenario

# Distinguished "nobody offloads" price, strictly above every 1/local_cpu_cps.
NO_OFFLOAD_PRICE = math.inf


@dataclass(frozen=True)
class PriceOutcome:
    """A pricing solution, shared by the uniform and per-user schemes."""

    prices: tuple[float, ...]              # per user, s/cycle
    decisions: tuple[OffloadDecision, ...]
    total_load_cycles: float               # sum of offloaded_bits * cycles_per_bit
    revenue_s: float                       # sum of payments; 0 when infeasible
    feasible: bool                         # load within cloud capacity


def _require_valid(scenario: Scenario) -> None:
    problems = validate_scenario(scenario)
    if problems:
        raise ValueError("invalid scenario: " + "; ".join(problems))


def candidate_prices(scenario: Scenario) -> list[float]:
    """Deduplicated {1/local_cpu_cps}, ascending."""
    return sorted({1.0 / u.local_cpu_cps for u in scenario.users})


def evaluate_price(scenario: Scenario, kin_all: tuple[UserKinetics, ...],
                   price: float) -> PriceOutcome:
    """Best responses of every user at one shared price, plus the seller view.

    If the induced load exceeds the capacity the outcome is marked
    infeasible and its revenue reported as zero.
    """
    users = scenario.users
    decisions = tuple(
        best_response(kin_all[k], users[k], price, user_index=k)
        for k in range(len(users))
    )
    load = math.fsum(d.offloaded_bits * u.cycles_per_bit
                     for d, u in zip(decisions, users))
    feasible = load <= scenario.system.cloud_capacity_cycles
    revenue = math.fsum(d.payment_s for d in decisions) if feasible else 0.0
    return PriceOutcome(
        prices=(price,) * len(users),
        decisions=decisions,
        total_load_cycles=load,
        revenue_s=revenue,
        feasible=feasible,
    )


def solve_uniform(scenario: Scenario,
                  kin_all: tuple[UserKinetics, ...] | None = None) -> PriceOutcome:
    """Descending-candidate search with early exit at the first infeasible price.

    Load is nondecreasing as the price falls, so everything below the first
    infeasible candidate is infeasible too; that candidate scores zero and
    the search stops. Revenue ties break toward the larger price. If no
    candidate is feasible the no-offload outcome is returned.
    """
    _require_valid(scenario)
    if kin_all is None:
        kin_all = scenario_kinetics(scenario)
    best: PriceOutcome | None = None
    for price in reversed(candidate_prices(scenario)):
        outcome = evaluate_price(scenario, kin_all, price)
        if not outcome.feasible:
            break
        if best is None or outcome.revenue_s > best.revenue_s:
            best = outcome
    if best is None or best.revenue_s <= 0.0:
        return evaluate_price(scenario, kin_all, NO_OFFLOAD_PRICE)
    return best


def solve_uniform_exhaustive(scenario: Scenario,
                             kin_all: tuple[UserKinetics, ...] | None = None
                             ) -> PriceOutcome:
    """Reference solver: score every candidate (infeasible ones as zero).

    Exists to check the early-exit search against; same tie-breaking.
    """
    _require_valid(scenario)
    if kin_all is None:
        kin_all = scenario_kinetics(scenario)
    best: PriceOutcome | None = None
    for price in reversed(candidate_prices(scenario)):
        outcome = evaluate_price(scenario, kin_all, price)
        if not outcome.feasible:
            continue
        if best is None or outcome.revenue_s > best.revenue_s:
            best = outcome
    if best is None or best.revenue_s <= 0.0:
        return evaluate_price(scenario, kin_all, NO_OFFLOAD_PRICE)
    return best
