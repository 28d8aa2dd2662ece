"""User-side decision: the cost-minimizing offload size for an announced price.

The cost is piecewise linear in the offload size with a kink at the balance
point, so the minimizer is bang-bang: offload the balance size when the price
is at most 1/local_cpu_cps (seconds per cycle the user's own CPU would spend),
otherwise offload nothing. The tie at exactly 1/local_cpu_cps resolves to
offloading, which is what lets the seller price right at that threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinetics import UserKinetics, task_latency, user_cost
from .scenario import UserProfile


@dataclass(frozen=True)
class OffloadDecision:
    user_index: int
    offloaded_bits: float
    offload_flag: int      # 1 = offload balance_bits, 0 = all-local
    cost_s: float
    latency_s: float
    payment_s: float


def best_response(kin: UserKinetics, user: UserProfile, price: float,
                  user_index: int = 0) -> OffloadDecision:
    """Threshold policy: offload balance_bits iff price <= 1/local_cpu_cps."""
    if not price >= 0.0:
        raise ValueError(f"price must be >= 0 (got {price})")
    flag = 1 if price <= 1.0 / user.local_cpu_cps else 0
    ell = kin.balance_bits * flag
    payment = price * (ell * user.cycles_per_bit) if flag else 0.0
    return OffloadDecision(
        user_index=user_index,
        offloaded_bits=ell,
        offload_flag=flag,
        cost_s=user_cost(kin, user, ell, price),
        latency_s=task_latency(kin, user, ell),
        payment_s=payment,
    )


def best_response_oracle(kin: UserKinetics, user: UserProfile, price: float,
                         grid_points: int) -> float:
    """Cost argmin over a uniform offload-size grid; ties go to larger sizes.

    Deliberately shares no logic with best_response: the cost is rebuilt
    from the raw timing formulas and scanned exhaustively. Test-only.
    """
    if grid_points < 1000:
        raise ValueError(f"grid_points must be >= 1000 (got {grid_points})")
    ell = np.linspace(0.0, user.data_bits, grid_points)
    local = (user.data_bits - ell) * user.cycles_per_bit / user.local_cpu_cps
    offload = kin.beta_s_per_bit * ell
    payment = np.where(ell > 0.0, price * (ell * user.cycles_per_bit), 0.0)
    cost = np.maximum(local, offload) + payment
    idx = (grid_points - 1) - int(np.argmin(cost[::-1]))
    return float(ell[idx])
