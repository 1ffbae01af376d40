"""Construction of efficient uniform symmetric schemes from a utilization
profile.

Three stages: take the per-operand port utilizations as input, pick a
disjoint covering mask set of the requested popcount, then assign masks
to the memory-operand slots.  Both searches are exhaustive at this
problem size and fully deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .scheme import (
    MachineConfig,
    Mask,
    OperandSlot,
    SchemeMatrix,
    SlotKind,
    mask_ports,
)

DEFAULT_CONFIG = MachineConfig()


class ConstructError(ValueError):
    """Constraint violation or malformed profile data."""


@dataclass(frozen=True)
class UtilizationProfile:
    """Per-operand probabilities of requesting a register-file read."""

    alu: tuple[float, ...]  # indexed by ALU read port
    mem: tuple[float, ...]  # indexed by memory slot, row order

    def __post_init__(self) -> None:
        for v in self.alu + self.mem:
            if not 0.0 <= v <= 1.0:
                raise ConstructError(f"utilization {v} outside [0, 1]")


# measured request rates of the modeled machine; ALU operand pairs repeat
# per unit class, memory rates in row order 4.s1 .. 8.s2
DEFAULT_PROFILE = UtilizationProfile(
    alu=(0.134, 0.148, 0.099, 0.119, 0.134, 0.148, 0.099, 0.119),
    mem=(0.210, 0.081, 0.211, 0.081, 0.116, 0.053, 0.116, 0.053, 0.078),
)


def parse_profile(text: str, config: MachineConfig | None = None) -> UtilizationProfile:
    """Parse ``alu <port> <percent>`` / ``mem <unit>.<slot> <percent>`` lines."""
    cfg = config or DEFAULT_CONFIG
    alu = [None] * cfg.alu_port_count
    mem = [None] * cfg.slot_count
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ConstructError(f"line {lineno}: expected 'alu|mem <id> <percent>'")
        kind, ident, value = parts
        try:
            pct = float(value)
        except ValueError:
            raise ConstructError(f"line {lineno}: bad percentage {value!r}") from None
        if kind == "alu":
            try:
                port = int(ident)
            except ValueError:
                raise ConstructError(f"line {lineno}: bad port {ident!r}") from None
            if not 0 <= port < cfg.alu_port_count:
                raise ConstructError(f"line {lineno}: port {port} out of range")
            alu[port] = pct / 100.0
        elif kind == "mem":
            mem[cfg.slot_index(ident)] = pct / 100.0
        else:
            raise ConstructError(f"line {lineno}: unknown entry kind {kind!r}")
    if None in alu or None in mem:
        raise ConstructError("profile is missing alu or mem entries")
    return UtilizationProfile(tuple(alu), tuple(mem))


def serialize_profile(
    profile: UtilizationProfile, config: MachineConfig | None = None
) -> str:
    cfg = config or DEFAULT_CONFIG
    lines = [f"alu {p} {u * 100:.6g}" for p, u in enumerate(profile.alu)]
    lines += [
        f"mem {cfg.slots[j].label} {u * 100:.6g}"
        for j, u in enumerate(profile.mem)
    ]
    return "\n".join(lines) + "\n"


def mask_occupancy(mask: Mask, profile: UtilizationProfile) -> float:
    """Probability mass of ALU reads over the mask's ports (sum of the
    connected ALU operand utilizations)."""
    return sum(
        profile.alu[p] for p in mask_ports(mask) if p < len(profile.alu)
    )


# ------------------------------------------------------------- mask selection


def _partitions(ports: tuple[int, ...], size: int):
    """All partitions of the port set into blocks of the given size."""
    if not ports:
        yield ()
        return
    first = ports[0]
    rest = ports[1:]
    for mates in itertools.combinations(rest, size - 1):
        block = (first,) + mates
        remaining = tuple(p for p in rest if p not in mates)
        for tail in _partitions(remaining, size):
            yield (block,) + tail


def _alu_classes(profile: UtilizationProfile, config: MachineConfig) -> list[int]:
    """Group ALUs by identical per-operand utilization patterns."""
    k = config.alu_operands_per_unit
    patterns: list[tuple[float, ...]] = []
    classes = []
    for a in range(config.alu_count):
        pat = tuple(round(u, 9) for u in profile.alu[a * k : (a + 1) * k])
        if pat not in patterns:
            patterns.append(pat)
        classes.append(patterns.index(pat))
    return classes


def select_masks(
    profile: UtilizationProfile,
    popcount: int,
    config: MachineConfig | None = None,
) -> list[Mask]:
    """Choose the mask set: the port-set partition into blocks of the given
    popcount that minimizes occupancy variance, then peak occupancy, then
    the number of masks confined to a single ALU class, then lexicographic
    order.  Returned masks are sorted by occupancy descending.
    """
    cfg = config or DEFAULT_CONFIG
    ports_total = cfg.retained_ports
    if popcount < 1 or ports_total % popcount != 0:
        raise ConstructError(
            f"popcount {popcount} does not divide {ports_total} ports"
        )
    classes = _alu_classes(profile, cfg)

    def block_mask(block: tuple[int, ...]) -> Mask:
        m = 0
        for p in block:
            m |= 1 << p
        return m

    def one_class(block: tuple[int, ...]) -> bool:
        k = cfg.alu_operands_per_unit
        seen = {
            classes[p // k] for p in block if p // k < len(classes)
        }
        return len(seen) <= 1

    best_key = None
    best_part = None
    for part in _partitions(tuple(range(ports_total)), popcount):
        occs = [mask_occupancy(block_mask(b), profile) for b in part]
        mean = sum(occs) / len(occs)
        variance = sum((o - mean) ** 2 for o in occs) / len(occs)
        key = (
            round(variance, 9),
            round(max(occs), 9),
            sum(1 for b in part if one_class(b)),
            tuple(sorted(part)),
        )
        if best_key is None or key < best_key:
            best_key = key
            best_part = part
    assert best_part is not None
    blocks = sorted(
        best_part,
        key=lambda b: (-round(mask_occupancy(block_mask(b), profile), 9), b),
    )
    return [block_mask(b) for b in blocks]


# ---------------------------------------------------------------- assignment


@dataclass(frozen=True)
class MaskPlan:
    """Masks plus the slot-to-mask assignment that build_scheme realizes."""

    config: MachineConfig
    masks: tuple[Mask, ...]
    occupancy: tuple[float, ...]
    assignment: dict[OperandSlot, Mask]
    slot_mask_index: tuple[int, ...]  # per slot, index into masks

    def groups(self) -> dict[Mask, tuple[OperandSlot, ...]]:
        out: dict[Mask, list[OperandSlot]] = {m: [] for m in self.masks}
        for j, mi in enumerate(self.slot_mask_index):
            out[self.masks[mi]].append(self.config.slots[j])
        return {m: tuple(v) for m, v in out.items()}


def assign_masks(
    masks: list[Mask],
    profile: UtilizationProfile,
    config: MachineConfig | None = None,
) -> MaskPlan:
    """Assign every memory-operand slot one mask.

    Hard constraints: every mask used, group sizes as even as possible,
    same-kind slots on distinct masks of equal occupancy, and the
    load-base slots (the heaviest readers) on the lowest-occupancy masks.
    Among the remaining assignments an exhaustive search minimizes, in
    order: the variance of per-mask memory utilization, the tendency of
    crowded masks to sit on already-busy ports (maximized), the number of
    units whose two operands land on ports of the same ALUs, the expected
    ALU interference sum(occupancy x utilization), and finally the
    lexicographic assignment vector.
    """
    cfg = config or DEFAULT_CONFIG
    n = len(masks)
    if n == 0:
        raise ConstructError("mask list is empty")
    nslots = cfg.slot_count
    if nslots < n:
        raise ConstructError(f"{nslots} slots cannot use {n} masks")
    occs = [round(mask_occupancy(m, profile), 9) for m in masks]
    util = profile.mem
    if len(util) != nslots:
        raise ConstructError("profile does not match the machine configuration")

    by_kind: dict[SlotKind, list[int]] = {}
    for j, slot in enumerate(cfg.slots):
        by_kind.setdefault(slot.kind, []).append(j)
    for kind, members in by_kind.items():
        if len(members) > n:
            raise ConstructError(
                f"infeasible: {len(members)} slots of kind {kind.value} "
                f"but only {n} masks"
            )
    level_sizes: dict[float, int] = {}
    for o in occs:
        level_sizes[o] = level_sizes.get(o, 0) + 1

    # lowest-occupancy levels wide enough to hold every load-base slot
    base_slots = by_kind.get(SlotKind.LOAD_BASE, [])
    allowed_base_levels: set[float] = set()
    room = 0
    for level in sorted(level_sizes):
        if room >= len(base_slots) and allowed_base_levels:
            break
        allowed_base_levels.add(level)
        room += level_sizes[level]

    base_count, extra = divmod(nslots, n)
    balanced = sorted([base_count] * (n - extra) + [base_count + 1] * extra)
    max_size = base_count + (1 if extra else 0)

    def alus_of(mi: int) -> frozenset[int]:
        k = cfg.alu_operands_per_unit
        return frozenset(p // k for p in mask_ports(masks[mi]))

    unit_of = [slot.unit for slot in cfg.slots]

    best_key: tuple | None = None
    best_vec: tuple[int, ...] | None = None

    def evaluate(vec: list[int]) -> tuple:
        u_tot = [0.0] * n
        counts = [0] * n
        for j, mi in enumerate(vec):
            u_tot[mi] += util[j]
            counts[mi] += 1
        mean = sum(u_tot) / n
        variance = sum((u - mean) ** 2 for u in u_tot) / n
        crowd = -sum(counts[i] * occs[i] for i in range(n))
        overlap = 0
        unit_masks: dict[int, list[int]] = {}
        for j, mi in enumerate(vec):
            unit_masks.setdefault(unit_of[j], []).append(mi)
        for mis in unit_masks.values():
            if len(mis) == 2 and alus_of(mis[0]) & alus_of(mis[1]):
                overlap += 1
        interference = sum(occs[i] * u_tot[i] for i in range(n))
        return (
            round(variance, 9),
            round(crowd, 9),
            overlap,
            round(interference, 9),
            tuple(vec),
        )

    def search(j: int, vec: list[int], counts: list[int], kind_level_uniform: bool) -> None:
        nonlocal best_key, best_vec
        if j == nslots:
            if sorted(counts) != balanced:
                return
            key = evaluate(vec)
            if best_key is None or key < best_key:
                best_key = key
                best_vec = key[-1]
            return
        kind = cfg.slots[j].kind
        for mi in range(n):
            if counts[mi] >= max_size:
                continue
            ok = True
            for j2 in by_kind[kind]:
                if j2 < j:
                    if vec[j2] == mi:
                        ok = False
                    elif kind_level_uniform and occs[vec[j2]] != occs[mi]:
                        ok = False
            if kind == SlotKind.LOAD_BASE and occs[mi] not in allowed_base_levels:
                ok = False
            if ok:
                vec.append(mi)
                counts[mi] += 1
                search(j + 1, vec, counts, kind_level_uniform)
                counts[mi] -= 1
                vec.pop()

    search(0, [], [0] * n, True)
    if best_vec is None:
        # equal-occupancy placement can be infeasible for lopsided mask sets
        search(0, [], [0] * n, False)
    if best_vec is None:
        raise ConstructError(
            "infeasible: no assignment satisfies the distinct-mask and "
            "balance constraints"
        )
    assignment = {
        cfg.slots[j]: masks[mi] for j, mi in enumerate(best_vec)
    }
    return MaskPlan(
        cfg, tuple(masks), tuple(occs), assignment, tuple(best_vec)
    )


def build_scheme(plan: MaskPlan) -> SchemeMatrix:
    """Materialize the plan: each slot's row is its assigned mask."""
    rows = tuple(plan.masks[mi] for mi in plan.slot_mask_index)
    return SchemeMatrix(plan.config, rows)
