"""Per-cycle port arbitration and its boolean grant/conflict functions.

Semantics: every requesting ALU operand claims its dedicated port, then
memory-operand slots are visited in static priority order and each claims
the lowest-index free port of its row; a requesting slot that finds every
port of its row claimed is canceled for the cycle.

Each grant-matrix element (does port p read operand o this cycle?) and
each cancel signal is also materialized symbolically as a BooleanFunction
of the request bits, restricted to the variables that can influence it.
The symbolic build follows the claim recurrence; ``truth_table`` and
``conflict_truth_table`` re-derive the same tables by exhaustive
enumeration of ``arbitrate`` and serve as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .minimize import BooleanFunction
from .scheme import MachineConfig, OperandSlot, SchemeMatrix, mask_ports

DEFAULT_SUPPORT_CAP = 20


class SupportCapExceeded(ValueError):
    """Tabulating this element would need too many variables."""


@dataclass(frozen=True)
class RequestVectors:
    """Request bits for one cycle: ALU operands and memory-operand slots."""

    alu_requests: int  # bit i = ALU operand owning read port i requests it
    mem_requests: int  # bit j = memory-operand slot j (row order) requests


@dataclass(frozen=True)
class GrantMatrix:
    """Per-port grant: the operand column reading through each port.

    Columns 0..A-1 are the ALU operands, column A+j is memory slot j.
    Each port carries at most one column and each column appears on at
    most one port.
    """

    config: MachineConfig
    ports: tuple[int | None, ...]

    def column_label(self, column: int) -> str:
        a = self.config.alu_port_count
        if column < a:
            return f"alu{column}"
        return self.config.slots[column - a].label

    def port_of_column(self, column: int) -> int | None:
        for p, c in enumerate(self.ports):
            if c == column:
                return p
        return None


@dataclass(frozen=True)
class ArbitrationOutcome:
    grant: GrantMatrix
    conflicts: frozenset[int]  # slot indices denied every port of their row

    def conflict_slots(self) -> tuple[OperandSlot, ...]:
        slots = self.grant.config.slots
        return tuple(slots[j] for j in sorted(self.conflicts))


def arbitrate(scheme: SchemeMatrix, req: RequestVectors) -> ArbitrationOutcome:
    """Resolve one cycle of port claims; total function over valid widths."""
    cfg = scheme.config
    a_width = cfg.alu_port_count
    if not 0 <= req.alu_requests < (1 << a_width):
        raise ValueError("alu_requests wider than the ALU operand count")
    if not 0 <= req.mem_requests < (1 << cfg.slot_count):
        raise ValueError("mem_requests wider than the slot count")
    ports: list[int | None] = [None] * cfg.retained_ports
    claimed = req.alu_requests
    a = req.alu_requests
    while a:
        b = a & -a
        a &= a - 1
        p = b.bit_length() - 1
        ports[p] = p
    conflicts = []
    mem = req.mem_requests
    rows = scheme.rows
    for j in cfg.priority:
        if not (mem >> j) & 1:
            continue
        avail = rows[j] & ~claimed
        if avail:
            b = avail & -avail
            claimed |= b
            ports[b.bit_length() - 1] = a_width + j
        else:
            conflicts.append(j)
    return ArbitrationOutcome(
        GrantMatrix(cfg, tuple(ports)), frozenset(conflicts)
    )


# ------------------------------------------------------------- support closure


def _resolve_slot(scheme: SchemeMatrix, operand: int | str | OperandSlot) -> int:
    cfg = scheme.config
    if isinstance(operand, OperandSlot):
        return cfg.slot_index(operand.label)
    if isinstance(operand, str):
        return cfg.slot_index(operand)
    # integer: operand column in the grant matrix
    a = cfg.alu_port_count
    if not a <= operand < a + cfg.slot_count:
        raise ValueError(f"column {operand} is not a memory-operand column")
    return operand - a


def support_closure(
    scheme: SchemeMatrix, slot: int, port: int | None = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Ports and higher-priority slots that can influence one element.

    For a grant element only row ports up to the target port matter; for a
    cancel element the whole row does.  The closure then pulls in every
    higher-priority slot touching a needed port, plus that slot's own row
    ports below its highest needed port, until a fixed point.
    """
    cfg = scheme.config
    rows = scheme.rows
    prio = cfg.priority
    rank = {j: i for i, j in enumerate(prio)}
    if port is None:
        needed = set(mask_ports(rows[slot]))
    else:
        needed = {q for q in mask_ports(rows[slot]) if q <= port}
    higher = set()
    changed = True
    while changed:
        changed = False
        for o in prio:
            if rank[o] >= rank[slot] or o in higher:
                continue
            if any((rows[o] >> q) & 1 for q in needed):
                higher.add(o)
                changed = True
        for o in higher:
            touched = [q for q in needed if (rows[o] >> q) & 1]
            top = max(touched)
            for q in mask_ports(rows[o]):
                if q <= top and q not in needed:
                    needed.add(q)
                    changed = True
    return tuple(sorted(needed)), tuple(sorted(higher, key=lambda o: rank[o]))


def _split_ports(
    cfg: MachineConfig, needed: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Needed ports split into ALU-owned (request variables) and free ones
    (ports beyond the ALU block are never ALU-claimed)."""
    a = cfg.alu_port_count
    return (
        tuple(q for q in needed if q < a),
        tuple(q for q in needed if q >= a),
    )


def _variable_names(
    cfg: MachineConfig, aports: tuple[int, ...], slots: tuple[int, ...]
) -> tuple[str, ...]:
    names = [f"alu{q}" for q in aports]
    names += [f"req{cfg.slots[j].label}" for j in slots]
    return tuple(names)


def _symbolic_element(
    scheme: SchemeMatrix, slot: int, port: int | None
) -> BooleanFunction:
    """Build the element's table by running the claim recurrence over
    bit-parallel truth-table columns of the support variables."""
    cfg = scheme.config
    needed, hislots = support_closure(scheme, slot, port)
    aports, freeports = _split_ports(cfg, needed)
    order = hislots + (slot,)
    nvars = len(aports) + len(order)
    names = _variable_names(cfg, aports, order)
    nrows = 1 << nvars
    universe = (1 << nrows) - 1

    def column(var: int) -> int:
        # table column of input variable var: pattern of 2^var, bit-packed
        block = 1 << var
        chunk = ((1 << block) - 1) << block
        period = block * 2
        col = 0
        for start in range(0, nrows, period):
            col |= chunk << start
        return col

    claimed = {q: column(i) for i, q in enumerate(aports)}
    claimed.update({q: 0 for q in freeports})
    base = len(aports)
    result = None
    for pos, o in enumerate(order):
        pending = column(base + pos)
        for q in mask_ports(scheme.rows[o]):
            if q not in claimed:
                continue  # closure guarantees no lower needed port is missing
            take = pending & ~claimed[q]
            claimed[q] |= take
            pending &= ~take
            if o == slot and port == q:
                result = take
        if o == slot and port is None:
            result = pending
    assert result is not None
    return BooleanFunction(names, result & universe)


def grant_function(
    scheme: SchemeMatrix, port: int, operand: int | str | OperandSlot
) -> BooleanFunction:
    """Boolean function of one grant-matrix element over its support.

    ALU columns reduce to their own request bit on the dedicated port and
    constant false elsewhere; unconnected memory elements are constant
    false.
    """
    cfg = scheme.config
    a = cfg.alu_port_count
    if isinstance(operand, int) and 0 <= operand < a:
        if operand == port:
            return BooleanFunction((f"alu{operand}",), 0b10)
        return BooleanFunction((), 0)
    slot = _resolve_slot(scheme, operand)
    if not (scheme.rows[slot] >> port) & 1:
        return BooleanFunction((), 0)
    return _symbolic_element(scheme, slot, port)


def conflict_function(
    scheme: SchemeMatrix, operand: int | str | OperandSlot
) -> BooleanFunction:
    """Boolean cancel signal of one slot: requested but denied every port."""
    slot = _resolve_slot(scheme, operand)
    if scheme.rows[slot] == 0:
        # a connectionless slot cancels whenever it requests
        name = f"req{scheme.config.slots[slot].label}"
        return BooleanFunction((name,), 0b10)
    return _symbolic_element(scheme, slot, None)


# ------------------------------------------------------------------- oracles


def _enumerated_element(
    scheme: SchemeMatrix, slot: int, port: int | None, cap: int
) -> BooleanFunction:
    cfg = scheme.config
    needed, hislots = support_closure(scheme, slot, port)
    aports, _ = _split_ports(cfg, needed)
    order = hislots + (slot,)
    nvars = len(aports) + len(order)
    if nvars > cap:
        raise SupportCapExceeded(
            f"element needs {nvars} variables, cap is {cap}"
        )
    names = _variable_names(cfg, aports, order)
    a_width = cfg.alu_port_count
    table = 0
    for m in range(1 << nvars):
        alu = 0
        for i, q in enumerate(aports):
            if (m >> i) & 1:
                alu |= 1 << q
        mem = 0
        for i, o in enumerate(order):
            if (m >> (len(aports) + i)) & 1:
                mem |= 1 << o
        outcome = arbitrate(scheme, RequestVectors(alu, mem))
        if port is None:
            hit = slot in outcome.conflicts
        else:
            hit = outcome.grant.ports[port] == a_width + slot
        if hit:
            table |= 1 << m
    return BooleanFunction(names, table)


def truth_table(
    scheme: SchemeMatrix,
    port: int,
    operand: int | str | OperandSlot,
    cap: int = DEFAULT_SUPPORT_CAP,
) -> BooleanFunction:
    """Exhaustive tabulation of a grant element straight from arbitrate,
    with every non-support variable held at zero."""
    cfg = scheme.config
    a = cfg.alu_port_count
    if isinstance(operand, int) and 0 <= operand < a:
        return grant_function(scheme, port, operand)
    slot = _resolve_slot(scheme, operand)
    if not (scheme.rows[slot] >> port) & 1:
        return BooleanFunction((), 0)
    return _enumerated_element(scheme, slot, port, cap)


def conflict_truth_table(
    scheme: SchemeMatrix,
    operand: int | str | OperandSlot,
    cap: int = DEFAULT_SUPPORT_CAP,
) -> BooleanFunction:
    """Exhaustive tabulation of a cancel signal straight from arbitrate."""
    slot = _resolve_slot(scheme, operand)
    if scheme.rows[slot] == 0:
        return conflict_function(scheme, operand)
    return _enumerated_element(scheme, slot, None, cap)
