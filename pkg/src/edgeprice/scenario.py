"""Problem instances: system and per-user parameters, random generation, validation.

All internal arithmetic is in SI base units (bits, seconds, Hz, W, CPU cycles).
dB and dBm quantities exist only at the configuration boundary and are converted
on the way in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

# Decimal kilobyte, consistent with the SI-style Hz/W units used everywhere else.
BITS_PER_KB = 8e3


def dbm_to_watts(dbm: float) -> float:
    """Power in W from a dBm value: 10^((x - 30) / 10)."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    """Dimensionless power ratio from a dB value: 10^(x / 10)."""
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Shared network and cloud parameters for one offloading period."""

    bandwidth_hz: float            # total bandwidth, split equally across users
    noise_psd_w_per_hz: float      # noise power spectral density
    cloud_speed_cps: float         # total cloud computing speed, cycles/s
    cloud_capacity_cycles: float   # cycle budget the cloud may sell per period
    num_users: int

    @property
    def per_user_bandwidth_hz(self) -> float:
        return self.bandwidth_hz / self.num_users

    @property
    def per_user_cloud_speed_cps(self) -> float:
        # Equal split of the cloud speed; derived, never stored.
        return self.cloud_speed_cps / self.num_users


@dataclass(frozen=True)
class UserProfile:
    """One user's task and device parameters."""

    data_bits: float            # input data size to process this period
    cycles_per_bit: float       # CPU cycles per input bit
    local_cpu_cps: float        # local CPU speed, cycles/s
    output_ratio: float         # output bits fed back per offloaded input bit
    uplink_power_w: float
    downlink_power_w: float
    channel_gain_linear: float  # dimensionless power gain


@dataclass(frozen=True)
class Scenario:
    system: SystemParams
    users: tuple[UserProfile, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    """Sampling distributions and shared constants for random scenarios.

    Defaults: 1 MHz total bandwidth, -174 dBm/Hz noise, 100 GHz cloud speed,
    6e9 cycles/period capacity, gains uniform in [-50, -30] dB, local CPU
    speeds on the 0.1..1.0 GHz grid in 0.1 GHz steps, 500..1500 cycles/bit,
    100..500 KB of input data, 0.1 W uplink and 1 W downlink power, output
    ratio 0.2.
    """

    num_users: int = 30
    seed: int = 0
    bandwidth_hz: float = 1e6
    noise_dbm_per_hz: float = -174.0
    cloud_speed_cps: float = 100e9
    capacity_cycles: float = 6e9
    gain_db_min: float = -50.0
    gain_db_max: float = -30.0
    local_cpu_min_cps: float = 1e8
    local_cpu_max_cps: float = 1e9
    local_cpu_step_cps: float = 1e8
    cycles_per_bit_min: float = 500.0
    cycles_per_bit_max: float = 1500.0
    data_kb_min: float = 100.0
    data_kb_max: float = 500.0
    uplink_power_w: float = 0.1
    downlink_power_w: float = 1.0
    output_ratio: float = 0.2


_INT_CONFIG_FIELDS = {"num_users", "seed"}


def config_violations(config: ScenarioConfig) -> list[str]:
    """Invalid-bound and invalid-constant checks; empty list when fine."""
    out = []
    c = config
    if c.num_users < 1:
        out.append(f"num_users must be >= 1 (got {c.num_users})")
    if not 0 <= c.seed < 2**64:
        out.append(f"seed must be an unsigned 64-bit integer (got {c.seed})")
    for name in ("bandwidth_hz", "cloud_speed_cps", "uplink_power_w",
                 "downlink_power_w", "output_ratio", "local_cpu_min_cps",
                 "cycles_per_bit_min", "data_kb_min", "local_cpu_step_cps"):
        v = getattr(c, name)
        if not (math.isfinite(v) and v > 0):
            out.append(f"{name} must be finite and > 0 (got {v})")
    if not (math.isfinite(c.capacity_cycles) and c.capacity_cycles >= 0):
        out.append(f"capacity_cycles must be finite and >= 0 (got {c.capacity_cycles})")
    if not math.isfinite(c.noise_dbm_per_hz):
        out.append(f"noise_dbm_per_hz must be finite (got {c.noise_dbm_per_hz})")
    for lo, hi in (("gain_db_min", "gain_db_max"),
                   ("local_cpu_min_cps", "local_cpu_max_cps"),
                   ("cycles_per_bit_min", "cycles_per_bit_max"),
                   ("data_kb_min", "data_kb_max")):
        if getattr(c, lo) > getattr(c, hi):
            out.append(f"{lo} must be <= {hi}")
    return out


def _local_cpu_grid(config: ScenarioConfig) -> np.ndarray:
    steps = int(round((config.local_cpu_max_cps - config.local_cpu_min_cps)
                      / config.local_cpu_step_cps)) + 1
    grid = config.local_cpu_min_cps + config.local_cpu_step_cps * np.arange(steps)
    return grid[grid <= config.local_cpu_max_cps * (1 + 1e-12)]


def sample_scenario(config: ScenarioConfig) -> Scenario:
    """Draw one scenario from the configured distributions.

    Deterministic in (config, seed). The stream is numpy PCG64 seeded with
    ``config.seed``; draws happen in this fixed order, one vector of length
    num_users each: channel gains (dB), local CPU grid indices, cycles per
    bit, data sizes (KB).
    """
    problems = config_violations(config)
    if problems:
        raise ValueError("invalid scenario config: " + "; ".join(problems))

    rng = np.random.default_rng(config.seed)
    k = config.num_users
    gains_db = rng.uniform(config.gain_db_min, config.gain_db_max, k)
    cpu_grid = _local_cpu_grid(config)
    cpu_idx = rng.integers(0, len(cpu_grid), k)
    cycles = rng.uniform(config.cycles_per_bit_min, config.cycles_per_bit_max, k)
    data_kb = rng.uniform(config.data_kb_min, config.data_kb_max, k)

    users = tuple(
        UserProfile(
            data_bits=float(data_kb[i] * BITS_PER_KB),
            cycles_per_bit=float(cycles[i]),
            local_cpu_cps=float(cpu_grid[cpu_idx[i]]),
            output_ratio=config.output_ratio,
            uplink_power_w=config.uplink_power_w,
            downlink_power_w=config.downlink_power_w,
            channel_gain_linear=db_to_linear(float(gains_db[i])),
        )
        for i in range(k)
    )
    system = SystemParams(
        bandwidth_hz=config.bandwidth_hz,
        noise_psd_w_per_hz=dbm_to_watts(config.noise_dbm_per_hz),
        cloud_speed_cps=config.cloud_speed_cps,
        cloud_capacity_cycles=config.capacity_cycles,
        num_users=k,
    )
    return Scenario(system=system, users=users)


def validate_scenario(scenario: Scenario) -> list[str]:
    """Check every invariant; violations are returned as data, not raised."""
    out = []
    sys_ = scenario.system
    for name in ("bandwidth_hz", "noise_psd_w_per_hz", "cloud_speed_cps"):
        v = getattr(sys_, name)
        if not (math.isfinite(v) and v > 0):
            out.append(f"system: {name} must be finite and > 0 (got {v})")
    if not (math.isfinite(sys_.cloud_capacity_cycles) and sys_.cloud_capacity_cycles >= 0):
        out.append(f"system: cloud_capacity_cycles must be finite and >= 0 "
                   f"(got {sys_.cloud_capacity_cycles})")
    if sys_.num_users < 1:
        out.append(f"system: num_users must be >= 1 (got {sys_.num_users})")
    if len(scenario.users) != sys_.num_users:
        out.append(f"user-list length {len(scenario.users)} does not match "
                   f"num_users {sys_.num_users}")
    for i, u in enumerate(scenario.users):
        for name in ("data_bits", "cycles_per_bit", "local_cpu_cps", "output_ratio",
                     "uplink_power_w", "downlink_power_w", "channel_gain_linear"):
            v = getattr(u, name)
            if not (math.isfinite(v) and v > 0):
                out.append(f"user {i}: {name} must be finite and > 0 (got {v})")
    return out


def read_key_values(path: str) -> dict[str, str]:
    """Parse a plain-text ``key = value`` file; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def config_from_mapping(mapping: dict[str, str]) -> ScenarioConfig:
    """Build a ScenarioConfig from string key/value pairs; unknown keys fail."""
    known = {f.name for f in fields(ScenarioConfig)}
    kwargs: dict[str, object] = {}
    for key, value in mapping.items():
        if key not in known:
            raise ValueError(f"unknown scenario config key: {key!r}")
        if key in _INT_CONFIG_FIELDS:
            kwargs[key] = int(value)
        else:
            kwargs[key] = float(value)
    return ScenarioConfig(**kwargs)


def load_scenario_config(path: str) -> ScenarioConfig:
    return config_from_mapping(read_key_values(path))
