"""Monte-Carlo estimation of read-port conflict rates.

Request bits are drawn per cycle as independent biased coins from the
utilization profile; conflict rates are the desk-scale proxy for the
performance impact of a scheme (cycle-accurate IPC is out of scope).
With retry enabled, a canceled slot's request is carried into following
cycles until granted; the underlying coin stream is identical either
way, so retry on/off runs with one seed are directly comparable, as are
different schemes under the same seed (common random numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .construct import UtilizationProfile, mask_occupancy
from .scheme import Classification, SchemeMatrix, classify_scheme

_BLOCK = 1 << 15

CAVEAT = (
    "# conflict rates from synthetic independent-request sampling; "
    "not an IPC estimate"
)


@dataclass(frozen=True)
class SimConfig:
    cycles: int
    seed: int
    profile: UtilizationProfile
    retry: bool = False

    def __post_init__(self) -> None:
        if self.cycles < 1:
            raise ValueError("cycles must be at least 1")


@dataclass(frozen=True)
class SlotStats:
    label: str
    requests: int
    conflicts: int

    @property
    def rate(self) -> float:
        return self.conflicts / self.requests if self.requests else 0.0

    @property
    def halfwidth(self) -> float:
        if not self.requests:
            return 0.0
        p = self.rate
        return 1.96 * math.sqrt(p * (1.0 - p) / self.requests)


@dataclass(frozen=True)
class PortStats:
    port: int
    alu_grants: int
    mem_grants: int
    cycles: int

    @property
    def utilization(self) -> float:
        return (self.alu_grants + self.mem_grants) / self.cycles


@dataclass(frozen=True)
class ConflictReport:
    slots: tuple[SlotStats, ...]
    ports: tuple[PortStats, ...]
    cycles: int
    seed: int
    retry: bool

    @property
    def total_requests(self) -> int:
        return sum(s.requests for s in self.slots)

    @property
    def total_conflicts(self) -> int:
        return sum(s.conflicts for s in self.slots)

    @property
    def aggregate_rate(self) -> float:
        total = self.total_requests
        return self.total_conflicts / total if total else 0.0

    @property
    def aggregate_halfwidth(self) -> float:
        total = self.total_requests
        if not total:
            return 0.0
        p = self.aggregate_rate
        return 1.96 * math.sqrt(p * (1.0 - p) / total)

    def render(self) -> str:
        lines = [
            CAVEAT,
            f"cycles={self.cycles} seed={self.seed} retry={int(self.retry)}",
        ]
        for s in self.slots:
            lines.append(
                f"slot={s.label} requests={s.requests} conflicts={s.conflicts} "
                f"rate={s.rate:.6f} halfwidth={s.halfwidth:.6f}"
            )
        for p in self.ports:
            lines.append(
                f"port={p.port} alu_grants={p.alu_grants} "
                f"mem_grants={p.mem_grants} utilization={p.utilization:.6f}"
            )
        lines.append(
            f"aggregate requests={self.total_requests} "
            f"conflicts={self.total_conflicts} rate={self.aggregate_rate:.6f} "
            f"halfwidth={self.aggregate_halfwidth:.6f}"
        )
        return "\n".join(lines) + "\n"


def _check_profile(scheme: SchemeMatrix, profile: UtilizationProfile) -> None:
    cfg = scheme.config
    if len(profile.alu) != cfg.alu_port_count:
        raise ValueError(
            f"profile has {len(profile.alu)} ALU entries, machine has "
            f"{cfg.alu_port_count}"
        )
    if len(profile.mem) != cfg.slot_count:
        raise ValueError(
            f"profile has {len(profile.mem)} memory entries, machine has "
            f"{cfg.slot_count}"
        )


def simulate(scheme: SchemeMatrix, cfg: SimConfig) -> ConflictReport:
    """Run the request-draw / arbitrate loop and tally conflicts.

    Deterministic for a given seed.  Without retry every cycle is
    independent and the claim cascade runs vectorized over cycle blocks;
    with retry, canceled requests stay pending and the cascade walks
    cycle by cycle.
    """
    _check_profile(scheme, cfg.profile)
    machine = scheme.config
    a_count = machine.alu_port_count
    nslots = machine.slot_count
    nports = machine.retained_ports
    probs = np.array(cfg.profile.alu + cfg.profile.mem, dtype=np.float64)
    rows = [int(r) for r in scheme.rows]
    prio = machine.priority

    requests = [0] * nslots
    conflicts = [0] * nslots
    alu_grants = [0] * nports
    mem_grants = [0] * nports

    rng = np.random.default_rng(cfg.seed)
    port_weights = (1 << np.arange(a_count, dtype=np.int64))
    rows_arr = np.array(rows, dtype=np.int64)

    pending = 0  # retry carry, bitmask over slots
    done = 0
    while done < cfg.cycles:
        nb = min(_BLOCK, cfg.cycles - done)
        draws = rng.random((nb, a_count + nslots)) < probs
        a_bits = draws[:, :a_count]
        k_bits = draws[:, a_count:]
        if not cfg.retry:
            claimed = (a_bits.astype(np.int64) * port_weights).sum(axis=1)
            for p in range(a_count):
                alu_grants[p] += int(a_bits[:, p].sum())
            for j in prio:
                kj = k_bits[:, j]
                avail = rows_arr[j] & ~claimed
                got_port = avail & -avail
                granted = kj & (avail != 0)
                claimed = np.where(granted, claimed | got_port, claimed)
                requests[j] += int(kj.sum())
                conflicts[j] += int((kj & (avail == 0)).sum())
                if rows[j]:
                    for p in range(nports):
                        bit = 1 << p
                        if rows[j] & bit:
                            mem_grants[p] += int(
                                (granted & (got_port == bit)).sum()
                            )
        else:
            a_ints = (a_bits.astype(np.int64) * port_weights).sum(axis=1)
            for c in range(nb):
                claimed = int(a_ints[c])
                ab = claimed
                while ab:
                    b = ab & -ab
                    ab &= ab - 1
                    alu_grants[b.bit_length() - 1] += 1
                mem = pending
                for j in range(nslots):
                    if k_bits[c, j]:
                        mem |= 1 << j
                pending = 0
                for j in prio:
                    if not (mem >> j) & 1:
                        continue
                    requests[j] += 1
                    avail = rows[j] & ~claimed
                    if avail:
                        b = avail & -avail
                        claimed |= b
                        mem_grants[b.bit_length() - 1] += 1
                    else:
                        conflicts[j] += 1
                        pending |= 1 << j
        done += nb

    slot_stats = tuple(
        SlotStats(machine.slots[j].label, requests[j], conflicts[j])
        for j in range(nslots)
    )
    port_stats = tuple(
        PortStats(p, alu_grants[p], mem_grants[p], cfg.cycles)
        for p in range(nports)
    )
    return ConflictReport(slot_stats, port_stats, cfg.cycles, cfg.seed, cfg.retry)


def analytic_conflict_bound(
    scheme: SchemeMatrix, profile: UtilizationProfile
) -> dict[str, float]:
    """First-order per-slot conflict proxy: the occupancy of the slot's
    mask.  Defined only for symmetric schemes, where each slot contends
    with exactly its own mask's ALU traffic."""
    _check_profile(scheme, profile)
    if classify_scheme(scheme) is Classification.GENERAL:
        raise ValueError(
            "analytic bound is defined only for symmetric schemes"
        )
    return {
        slot.label: mask_occupancy(row, profile)
        for slot, row in zip(scheme.config.slots, scheme.rows)
    }


@dataclass(frozen=True)
class PairDelta:
    first: int
    second: int
    delta: float  # rate(first) - rate(second)
    halfwidth: float  # combined, conservative for common random numbers


@dataclass(frozen=True)
class SchemeComparison:
    reports: tuple[ConflictReport, ...]
    labels: tuple[str, ...]
    deltas: tuple[PairDelta, ...]

    def ranking(self) -> tuple[int, ...]:
        order = sorted(
            range(len(self.reports)),
            key=lambda i: (self.reports[i].aggregate_rate, i),
        )
        return tuple(order)

    def render(self) -> str:
        lines = [CAVEAT]
        for label, rep in zip(self.labels, self.reports):
            lines.append(
                f"scheme={label} rate={rep.aggregate_rate:.6f} "
                f"halfwidth={rep.aggregate_halfwidth:.6f} seed={rep.seed}"
            )
        for d in self.deltas:
            lines.append(
                f"delta {self.labels[d.first]}-{self.labels[d.second]}="
                f"{d.delta:+.6f} halfwidth={d.halfwidth:.6f}"
            )
        ranked = " < ".join(self.labels[i] for i in self.ranking())
        lines.append(f"ranking {ranked}")
        return "\n".join(lines) + "\n"


def compare_schemes(
    schemes: list[SchemeMatrix],
    cfg: SimConfig,
    labels: list[str] | None = None,
) -> SchemeComparison:
    """Simulate every scheme on the same coin stream and report pairwise
    aggregate-rate differences."""
    if len(schemes) < 2:
        raise ValueError("need at least two schemes to compare")
    first_cfg = schemes[0].config
    for s in schemes[1:]:
        if s.config != first_cfg:
            raise ValueError("schemes use different machine configurations")
    if labels is None:
        labels = [f"scheme{i}" for i in range(len(schemes))]
    reports = tuple(simulate(s, cfg) for s in schemes)
    deltas = []
    for i in range(len(schemes)):
        for j in range(i + 1, len(schemes)):
            hw = math.hypot(
                reports[i].aggregate_halfwidth, reports[j].aggregate_halfwidth
            )
            deltas.append(
                PairDelta(
                    i,
                    j,
                    reports[i].aggregate_rate - reports[j].aggregate_rate,
                    hw,
                )
            )
    return SchemeComparison(reports, tuple(labels), tuple(deltas))
