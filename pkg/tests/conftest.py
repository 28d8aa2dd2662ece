"""Shared builders for hand-sized instances.

Two styles: synthetic profile/kinetics pairs with chosen coefficients
(bypassing the channel model), and "inverted" real scenarios where the
channel gain is solved backwards from a target per-bit offload coefficient,
so worked examples flow through the full sampling-free pipeline.
"""

from __future__ import annotations

import math

import pytest

from edgeprice import (Scenario, SystemParams, UserKinetics, UserProfile,
                       dbm_to_watts)

NOISE_W_PER_HZ = dbm_to_watts(-174.0)


def make_profile(data_bits=8e5, cycles_per_bit=1000.0, local_cpu_cps=1e9,
                 output_ratio=0.2, uplink_power_w=0.1, downlink_power_w=1.0,
                 channel_gain_linear=1e-4) -> UserProfile:
    return UserProfile(data_bits=data_bits, cycles_per_bit=cycles_per_bit,
                       local_cpu_cps=local_cpu_cps, output_ratio=output_ratio,
                       uplink_power_w=uplink_power_w,
                       downlink_power_w=downlink_power_w,
                       channel_gain_linear=channel_gain_linear)


def make_kinetics(profile: UserProfile, beta: float,
                  uplink_rate=1e6, downlink_rate=1e6,
                  cloud_share=5e10) -> UserKinetics:
    """Kinetics with a chosen beta; balance_bits stays consistent with it."""
    balance = (profile.cycles_per_bit * profile.data_bits
               / (beta * profile.local_cpu_cps + profile.cycles_per_bit))
    return UserKinetics(uplink_rate_bps=uplink_rate,
                        downlink_rate_bps=downlink_rate,
                        beta_s_per_bit=beta, balance_bits=balance,
                        cloud_speed_share_cps=cloud_share)


def make_system(num_users: int, capacity: float, bandwidth=1e6,
                cloud_speed=1e11) -> SystemParams:
    return SystemParams(bandwidth_hz=bandwidth, noise_psd_w_per_hz=NOISE_W_PER_HZ,
                        cloud_speed_cps=cloud_speed,
                        cloud_capacity_cycles=capacity, num_users=num_users)


def inverted_profile(system: SystemParams, target_beta: float,
                     cycles_per_bit: float, data_bits: float,
                     local_cpu_cps: float, output_ratio=0.2,
                     power_w=0.1) -> UserProfile:
    """Solve the channel gain so the user's per-bit offload coefficient hits
    ``target_beta`` exactly (uplink and downlink powers kept equal)."""
    w = system.per_user_bandwidth_hz
    residual = target_beta - cycles_per_bit / system.per_user_cloud_speed_cps
    assert residual > 0, "target beta below the cloud execution term"
    rate = (1.0 + output_ratio) / residual
    snr = 2.0 ** (rate / w) - 1.0
    gain = snr * w * system.noise_psd_w_per_hz / power_w
    return UserProfile(data_bits=data_bits, cycles_per_bit=cycles_per_bit,
                       local_cpu_cps=local_cpu_cps, output_ratio=output_ratio,
                       uplink_power_w=power_w, downlink_power_w=power_w,
                       channel_gain_linear=gain)


def balanced_two_user_scenario(capacity: float = 1e9) -> Scenario:
    """Two users whose balance loads are ~4e8 and ~3e8 cycles at CPU speeds
    1e9 and 5e8, the running hand example for the pricing solvers."""
    system = make_system(2, capacity)
    u1 = inverted_profile(system, target_beta=1e-6, cycles_per_bit=1000.0,
                          data_bits=8e5, local_cpu_cps=1e9)
    u2 = inverted_profile(system, target_beta=2e-6, cycles_per_bit=1000.0,
                          data_bits=6e5, local_cpu_cps=5e8)
    return Scenario(system=system, users=(u1, u2))


def balanced_single_user_scenario(capacity: float = 1e9) -> Scenario:
    system = make_system(1, capacity)
    user = inverted_profile(system, target_beta=1e-6, cycles_per_bit=1000.0,
                            data_bits=8e5, local_cpu_cps=1e9)
    return Scenario(system=system, users=(user,))


def rel_close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@pytest.fixture
def two_user_scenario() -> Scenario:
    return balanced_two_user_scenario()


def fsum_mean(values) -> float:
    xs = list(values)
    return math.fsum(xs) / len(xs)
