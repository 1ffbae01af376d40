"""Machine configuration and the port-connection scheme matrix.

A scheme maps each memory-operand slot (load base/index, store-address
base/index, store-data) to the subset of retained register-file read ports
it may use.  Rows are bitmasks over ports; the unique nonzero rows are the
scheme's masks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

Mask = int  # bit p set = functional connection to read port p


class SchemeError(ValueError):
    """Malformed scheme text or inconsistent scheme data."""


class SlotKind(enum.Enum):
    LOAD_BASE = "load_base"
    LOAD_INDEX = "load_index"
    STA_BASE = "sta_base"
    STA_INDEX = "sta_index"
    STD_DATA = "std_data"


@dataclass(frozen=True)
class OperandSlot:
    """One memory-operand read slot of a load/store execution unit."""

    unit: int
    slot: str  # "s1" or "s2"
    kind: SlotKind

    @property
    def label(self) -> str:
        return f"{self.unit}.{self.slot}"


@dataclass(frozen=True)
class MachineConfig:
    """Unit counts, port topology and the static arbitration priority.

    ALU operand i owns read port i exclusively; memory-operand slots share
    the remaining connectivity as described by a scheme matrix.  Priorities
    are static: loads above store-address above store-data, lower unit
    index first, first operand before second.  ``priority_order`` may
    override that default with any permutation of slot indices.
    """

    alu_count: int = 4
    load_count: int = 2
    sta_count: int = 2
    std_count: int = 1
    retained_ports: int = 8
    alu_operands_per_unit: int = 2
    priority_order: tuple[int, ...] | None = None
    slots: tuple[OperandSlot, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if min(self.alu_count, self.load_count, self.sta_count, self.std_count) < 0:
            raise SchemeError("unit counts must be non-negative")
        if self.alu_operands_per_unit < 1:
            raise SchemeError("alu_operands_per_unit must be positive")
        # dedicated ALU ports must exist; extra ports model unreduced baselines
        if self.retained_ports < self.alu_port_count:
            raise SchemeError(
                f"retained_ports={self.retained_ports} is smaller than the "
                f"{self.alu_port_count} dedicated ALU ports"
            )
        slots = []
        unit = self.alu_count
        for _ in range(self.load_count):
            slots.append(OperandSlot(unit, "s1", SlotKind.LOAD_BASE))
            slots.append(OperandSlot(unit, "s2", SlotKind.LOAD_INDEX))
            unit += 1
        for _ in range(self.sta_count):
            slots.append(OperandSlot(unit, "s1", SlotKind.STA_BASE))
            slots.append(OperandSlot(unit, "s2", SlotKind.STA_INDEX))
            unit += 1
        for _ in range(self.std_count):
            slots.append(OperandSlot(unit, "s2", SlotKind.STD_DATA))
            unit += 1
        object.__setattr__(self, "slots", tuple(slots))
        if self.priority_order is not None:
            if sorted(self.priority_order) != list(range(len(slots))):
                raise SchemeError(
                    "priority_order must be a permutation of all slot indices"
                )

    @property
    def alu_port_count(self) -> int:
        return self.alu_count * self.alu_operands_per_unit

    @property
    def slot_count(self) -> int:
        return len(self.slots)

    @property
    def priority(self) -> tuple[int, ...]:
        """Slot indices in descending arbitration priority."""
        if self.priority_order is not None:
            return self.priority_order
        return tuple(range(self.slot_count))

    def slot_index(self, label: str) -> int:
        for i, s in enumerate(self.slots):
            if s.label == label:
                return i
        raise SchemeError(f"unknown operand slot {label!r}")


DEFAULT_CONFIG = MachineConfig()


class Classification(enum.Enum):
    GENERAL = "general"
    SYMMETRIC = "symmetric"
    UNIFORM_SYMMETRIC = "uniform_symmetric"


@dataclass(frozen=True)
class SchemeMatrix:
    """Connection matrix: one port bitmask per memory-operand slot."""

    config: MachineConfig
    rows: tuple[Mask, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.config.slot_count:
            raise SchemeError(
                f"expected {self.config.slot_count} rows, got {len(self.rows)}"
            )
        limit = 1 << self.config.retained_ports
        for i, row in enumerate(self.rows):
            if not 0 <= row < limit:
                raise SchemeError(
                    f"row {self.config.slots[i].label} exceeds port width"
                )

    def row_of(self, label: str) -> Mask:
        return self.rows[self.config.slot_index(label)]

    def connection_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)


def mask_ports(mask: Mask) -> tuple[int, ...]:
    """Ports contained in a mask, ascending."""
    return tuple(p for p in range(mask.bit_length()) if (mask >> p) & 1)


def format_mask(mask: Mask, width: int) -> str:
    return "".join("1" if (mask >> p) & 1 else "0" for p in range(width))


def parse_scheme(text: str, config: MachineConfig | None = None) -> SchemeMatrix:
    """Parse scheme-file text into a SchemeMatrix.

    Grammar: ``ports <P>``, ``slots <M>``, then M rows of
    ``<unit>.<s1|s2>`` followed by P space-separated 0/1 cells.  ``#``
    starts a comment, blank lines are ignored.
    """
    cfg = config or DEFAULT_CONFIG
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if len(lines) < 2:
        raise SchemeError("scheme text is missing the ports/slots header")

    def header(entry: tuple[int, str], key: str) -> int:
        lineno, line = entry
        parts = line.split()
        if len(parts) != 2 or parts[0] != key:
            raise SchemeError(f"line {lineno}: expected '{key} <count>'")
        try:
            return int(parts[1])
        except ValueError:
            raise SchemeError(f"line {lineno}: {key} count is not an integer") from None

    ports = header(lines[0], "ports")
    slots = header(lines[1], "slots")
    if ports != cfg.retained_ports:
        raise SchemeError(
            f"line {lines[0][0]}: scheme has {ports} ports but the machine "
            f"configuration retains {cfg.retained_ports}"
        )
    if slots != cfg.slot_count:
        raise SchemeError(
            f"line {lines[1][0]}: scheme has {slots} slots but the machine "
            f"configuration defines {cfg.slot_count}"
        )
    body = lines[2:]
    if len(body) != slots:
        raise SchemeError(f"expected {slots} matrix rows, found {len(body)}")

    rows = []
    for i, (lineno, line) in enumerate(body):
        parts = line.split()
        expected = cfg.slots[i].label
        if parts[0] != expected:
            raise SchemeError(
                f"line {lineno}: expected row label {expected!r}, got {parts[0]!r}"
            )
        cells = parts[1:]
        if len(cells) != ports:
            raise SchemeError(
                f"line {lineno}: expected {ports} cells, got {len(cells)}"
            )
        row = 0
        for col, cell in enumerate(cells):
            if cell == "1":
                row |= 1 << col
            elif cell != "0":
                raise SchemeError(
                    f"line {lineno}, column {col}: cell must be 0 or 1, got {cell!r}"
                )
        rows.append(row)
    return SchemeMatrix(cfg, tuple(rows))


def serialize_scheme(scheme: SchemeMatrix) -> str:
    """Canonical scheme-file text; parse_scheme round-trips it bit-exactly."""
    cfg = scheme.config
    out = [f"ports {cfg.retained_ports}", f"slots {cfg.slot_count}"]
    for slot, row in zip(cfg.slots, scheme.rows):
        cells = " ".join(
            "1" if (row >> p) & 1 else "0" for p in range(cfg.retained_ports)
        )
        out.append(f"{slot.label} {cells}")
    return "\n".join(out) + "\n"


def extract_masks(scheme: SchemeMatrix) -> frozenset[Mask]:
    """Deduplicated set of nonzero rows (the scheme's masks)."""
    return frozenset(r for r in scheme.rows if r)


def classify_scheme(scheme: SchemeMatrix) -> Classification:
    """general / symmetric / uniform_symmetric per the mask conditions.

    Symmetric: masks pairwise disjoint and jointly covering every retained
    port.  Uniform symmetric additionally requires equal mask popcounts,
    which then necessarily divide the port count.
    """
    masks = sorted(extract_masks(scheme))
    union = 0
    for m in masks:
        if union & m:
            return Classification.GENERAL
        union |= m
    if union != (1 << scheme.config.retained_ports) - 1:
        return Classification.GENERAL
    popcounts = {m.bit_count() for m in masks}
    if len(popcounts) != 1:
        return Classification.SYMMETRIC
    count = popcounts.pop()
    # disjoint equal-size masks covering all ports force divisibility
    assert scheme.config.retained_ports % count == 0
    return Classification.UNIFORM_SYMMETRIC


def validate_scheme(scheme: SchemeMatrix) -> tuple[str, ...]:
    """Semantic problems that parsing deliberately does not reject."""
    problems = []
    for slot, row in zip(scheme.config.slots, scheme.rows):
        if row == 0:
            problems.append(f"slot with no connection: {slot.label}")
    return tuple(problems)
