"""Critical-path estimation for the port arbitration logic.

The delay model counts one time quantum per 2-input AND/OR gate and
nothing for negation.  A minimal two-level form becomes a gate tree:
balanced trees inside each term, then an optimal unequal-depth merge at
the root.  An element's depth is the smaller of its MDNF and MCNF trees;
a scheme's depth is the maximum over every grant element and every
per-operand cancel signal, since the arbitration logic must compute both
the port assignments and the cancellations within the cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arbitration import conflict_function, grant_function
from .minimize import (
    BooleanFunction,
    CoverForm,
    FormKind,
    merge_gate_depth,
    minimum_cnf,
    minimum_cover,
    term_gate_depth,
)
from .scheme import OperandSlot, SchemeMatrix, mask_ports

AND_COST = 1  # time quanta per 2-input gate
OR_COST = 1
NOT_COST = 0


def tree_depth(form: CoverForm) -> int:
    """Depth in time quanta of the minimal gate tree for a two-level form."""
    return merge_gate_depth(
        term_gate_depth(t.literal_count) for t in form.terms
    )


def element_depth(f: BooleanFunction) -> int:
    """Minimum of the MDNF and MCNF tree depths."""
    return element_depth_detail(f)[0]


def element_depth_detail(f: BooleanFunction) -> tuple[int, str]:
    """(depth, winning form kind); MDNF wins ties."""
    d_dnf = tree_depth(minimum_cover(f))
    d_cnf = tree_depth(minimum_cnf(f))
    if d_dnf <= d_cnf:
        return d_dnf, FormKind.MDNF
    return d_cnf, FormKind.MCNF


# results keyed on the table alone; names cannot change the depth
_element_cache: dict[tuple[int, int, int], tuple[int, str]] = {}


def _cached_depth(f: BooleanFunction) -> tuple[int, str]:
    key = (f.nvars, f.table, f.dont_care)
    hit = _element_cache.get(key)
    if hit is None:
        hit = element_depth_detail(f)
        _element_cache[key] = hit
    return hit


@dataclass(frozen=True)
class ElementReport:
    """Depth of one arbitration output: a grant (slot, port) or, with
    ``port`` None, a slot's cancel signal."""

    slot: OperandSlot
    port: int | None
    depth: int
    form: str
    support_size: int

    def describe(self) -> str:
        if self.port is None:
            head = f"conflict operand={self.slot.label}"
        else:
            head = f"port={self.port} operand={self.slot.label}"
        return f"{head} depth={self.depth} form={self.form}"


@dataclass(frozen=True)
class CriticalPathReport:
    elements: tuple[ElementReport, ...]
    scheme_depth: int
    witness: ElementReport | None

    def render(self) -> str:
        lines = [e.describe() for e in self.elements]
        if self.witness is None:
            lines.append(f"scheme_depth={self.scheme_depth} witness=none")
        else:
            w = self.witness
            where = "conflict" if w.port is None else f"port{w.port}"
            lines.append(
                f"scheme_depth={self.scheme_depth} "
                f"witness={w.slot.label}@{where}"
            )
        return "\n".join(lines) + "\n"


def scheme_critical_path(scheme: SchemeMatrix) -> CriticalPathReport:
    """Minimize every connected grant element and every cancel signal,
    report per-element depths and the scheme-wide maximum."""
    cfg = scheme.config
    elements = []
    for j, slot in enumerate(cfg.slots):
        for port in mask_ports(scheme.rows[j]):
            fn = grant_function(scheme, port, slot)
            depth, form = _cached_depth(fn)
            elements.append(ElementReport(slot, port, depth, form, fn.nvars))
        fn = conflict_function(scheme, slot)
        depth, form = _cached_depth(fn)
        elements.append(ElementReport(slot, None, depth, form, fn.nvars))
    best: ElementReport | None = None
    for e in elements:
        if best is None or e.depth > best.depth:
            best = e
    return CriticalPathReport(
        tuple(elements),
        best.depth if best else 0,
        best,
    )


@dataclass(frozen=True)
class ThresholdVerdict:
    verdict: str  # "within" or "exceeds"
    margin: int  # threshold minus scheme depth; negative when exceeded

    def describe(self) -> str:
        return f"verdict={self.verdict} margin={self.margin}"


def threshold_compare(
    report: CriticalPathReport, threshold: int
) -> ThresholdVerdict:
    """Compare a scheme's depth against a pipeline-stage budget."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    margin = threshold - report.scheme_depth
    return ThresholdVerdict("within" if margin >= 0 else "exceeds", margin)
