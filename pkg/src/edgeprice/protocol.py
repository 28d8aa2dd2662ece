"""The uniform-pricing bargain replayed as an explicit message exchange.

The cloud broadcasts a candidate price each round; every user agent answers
with (its index, its offload size) computed purely from its own parameters.
The cloud tallies the reported load against its capacity and either moves to
the next lower candidate or terminates. The full exchange is recorded as an
auditable trace whose final outcome must match the direct solver exactly.

Rounds are synchronous and lossless: every report arrives before the next
broadcast. The trace serializes to one message per line for golden-file
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .follower import OffloadDecision, best_response
from .kinetics import UserKinetics, compute_kinetics
from .scenario import Scenario, UserProfile
from .uniform import NO_OFFLOAD_PRICE, PriceOutcome, _require_valid, candidate_prices

PRICE_BROADCAST = "PriceBroadcast"
OFFLOAD_REPORT = "OffloadReport"
TERMINATE = "Terminate"
CLOUD = "cloud"


@dataclass(frozen=True)
class Message:
    kind: str
    round: int
    sender: str
    payload: object   # float price | (user_index, offloaded_bits) | None


@dataclass(frozen=True)
class BargainRound:
    broadcast: Message
    reports: tuple[Message, ...]
    decisions: tuple[OffloadDecision, ...]   # harness ground truth, never sent
    load_cycles: float
    feasible: bool
    revenue_s: float


@dataclass(frozen=True)
class BargainTrace:
    rounds: tuple[BargainRound, ...]
    final: PriceOutcome

    def messages(self) -> Iterator[Message]:
        for rnd in self.rounds:
            yield rnd.broadcast
            yield from rnd.reports
        yield Message(kind=TERMINATE, round=len(self.rounds), sender=CLOUD,
                      payload=None)


class _UserAgent:
    """Holds one user's private parameters; answers price broadcasts."""

    def __init__(self, index: int, user: UserProfile, kin: UserKinetics):
        self.index = index
        self.user = user
        self.kin = kin

    def respond(self, round_index: int, price: float
                ) -> tuple[Message, OffloadDecision]:
        decision = best_response(self.kin, self.user, price,
                                 user_index=self.index)
        report = Message(kind=OFFLOAD_REPORT, round=round_index,
                         sender=f"user_{self.index}",
                         payload=(self.index, decision.offloaded_bits))
        return report, decision


def run_bargaining(scenario: Scenario) -> BargainTrace:
    """Play the descending-price rounds and record every message.

    The cloud knows each user's cycles_per_bit and local_cpu_cps (collected
    up front to form the candidate list); everything else stays on the
    devices. The final outcome is assembled from the winning round's own
    data so it matches solve_uniform field for field.
    """
    _require_valid(scenario)
    agents = [_UserAgent(i, u, compute_kinetics(scenario.system, u))
              for i, u in enumerate(scenario.users)]
    cycles_per_bit = [u.cycles_per_bit for u in scenario.users]
    capacity = scenario.system.cloud_capacity_cycles

    rounds: list[BargainRound] = []
    best: BargainRound | None = None
    for round_index, price in enumerate(reversed(candidate_prices(scenario))):
        broadcast = Message(kind=PRICE_BROADCAST, round=round_index,
                            sender=CLOUD, payload=price)
        replies = [agent.respond(round_index, price) for agent in agents]
        reports = tuple(msg for msg, _ in replies)
        decisions = tuple(dec for _, dec in replies)
        load = math.fsum(msg.payload[1] * cycles_per_bit[msg.payload[0]]
                         for msg in reports)
        feasible = load <= capacity
        revenue = math.fsum(d.payment_s for d in decisions) if feasible else 0.0
        rnd = BargainRound(broadcast=broadcast, reports=reports,
                           decisions=decisions, load_cycles=load,
                           feasible=feasible, revenue_s=revenue)
        rounds.append(rnd)
        if not feasible:
            break
        if best is None or rnd.revenue_s > best.revenue_s:
            best = rnd

    k = len(scenario.users)
    if best is None or best.revenue_s <= 0.0:
        decisions = tuple(
            best_response(agent.kin, agent.user, NO_OFFLOAD_PRICE, user_index=i)
            for i, agent in enumerate(agents))
        final = PriceOutcome(
            prices=(NO_OFFLOAD_PRICE,) * k,
            decisions=decisions,
            total_load_cycles=math.fsum(
                d.offloaded_bits * c for d, c in zip(decisions, cycles_per_bit)),
            revenue_s=math.fsum(d.payment_s for d in decisions),
            feasible=True,
        )
    else:
        final = PriceOutcome(
            prices=(best.broadcast.payload,) * k,
            decisions=best.decisions,
            total_load_cycles=best.load_cycles,
            revenue_s=best.revenue_s,
            feasible=True,
        )
    return BargainTrace(rounds=tuple(rounds), final=final)


def information_audit(trace: BargainTrace) -> list[str]:
    """Flag any message whose payload leaks more than the protocol allows.

    Broadcasts may carry exactly one finite nonnegative price; reports
    exactly (user index, offloaded bits); terminations nothing. Reports must
    reference the price round they answer.
    """
    violations: list[str] = []
    current_round: int | None = None
    for pos, msg in enumerate(trace.messages()):
        where = f"message {pos} ({msg.kind}, round {msg.round})"
        if msg.kind == PRICE_BROADCAST:
            if msg.sender != CLOUD:
                violations.append(f"{where}: broadcast from non-cloud sender "
                                  f"{msg.sender!r}")
            if not (isinstance(msg.payload, float)
                    and msg.payload >= 0.0
                    and not math.isnan(msg.payload)):
                violations.append(f"{where}: broadcast payload must be a single "
                                  f"nonnegative price, got {msg.payload!r}")
            current_round = msg.round
        elif msg.kind == OFFLOAD_REPORT:
            payload = msg.payload
            if (not isinstance(payload, tuple) or len(payload) != 2
                    or not isinstance(payload[0], int)
                    or isinstance(payload[0], bool)
                    or not isinstance(payload[1], float)):
                violations.append(f"{where}: report payload must be "
                                  f"(user index, offloaded bits), got {payload!r}")
                continue
            if msg.sender != f"user_{payload[0]}":
                violations.append(f"{where}: sender {msg.sender!r} does not match "
                                  f"reported index {payload[0]}")
            if not payload[1] >= 0.0:
                violations.append(f"{where}: negative offload report {payload[1]}")
            if msg.round != current_round:
                violations.append(f"{where}: report references round {msg.round}, "
                                  f"current broadcast is {current_round}")
        elif msg.kind == TERMINATE:
            if msg.payload is not None:
                violations.append(f"{where}: terminate must carry no payload, "
                                  f"got {msg.payload!r}")
        else:
            violations.append(f"{where}: unknown message kind {msg.kind!r}")
    return violations


def _fmt(x: float) -> str:
    return "%.17g" % x


def format_trace(trace: BargainTrace) -> str:
    """One message per line: round, kind, sender, payload fields."""
    lines = []
    for msg in trace.messages():
        if msg.kind == PRICE_BROADCAST:
            payload = f"price={_fmt(msg.payload)}"
        elif msg.kind == OFFLOAD_REPORT:
            payload = f"user={msg.payload[0]} bits={_fmt(msg.payload[1])}"
        else:
            payload = "-"
        lines.append(f"{msg.round}\t{msg.kind}\t{msg.sender}\t{payload}")
    return "\n".join(lines) + "\n"


def write_trace(trace: BargainTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_trace(trace))
