"""Exact two-level boolean minimization (Quine-McCluskey with exact cover).

Functions are truth tables packed into Python integers: bit m of ``table``
is the value at the assignment where variable i equals bit i of m.  Covers
are optimized for gate-tree depth first, then term count, then literal
count, because downstream the only consumer of a minimal form is the
critical-path estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

VARIABLE_CAP = 20  # tabulated input grows as 2^n; refuse beyond this


class MinimizeError(ValueError):
    """Input outside the supported range or malformed PLA text."""


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table over named inputs, with optional don't-care rows."""

    names: tuple[str, ...]
    table: int
    dont_care: int = 0

    def __post_init__(self) -> None:
        n = len(self.names)
        if n > VARIABLE_CAP:
            raise MinimizeError(f"{n} variables exceed the cap of {VARIABLE_CAP}")
        if len(set(self.names)) != n:
            raise MinimizeError("variable names must be unique")
        full = (1 << (1 << n)) - 1
        if not 0 <= self.table <= full:
            raise MinimizeError("table does not fit 2^n rows")
        if not 0 <= self.dont_care <= full:
            raise MinimizeError("dont_care does not fit 2^n rows")
        if self.table & self.dont_care:
            raise MinimizeError("table bits set on don't-care rows")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def care_mask(self) -> int:
        return ((1 << (1 << self.nvars)) - 1) & ~self.dont_care

    def evaluate(self, assignment: int) -> bool:
        return bool((self.table >> assignment) & 1)

    def complement(self) -> "BooleanFunction":
        comp = self.care_mask & ~self.table
        return BooleanFunction(self.names, comp, self.dont_care)

    @classmethod
    def from_minterms(
        cls,
        names: Iterable[str],
        minterms: Iterable[int],
        dont_cares: Iterable[int] = (),
    ) -> "BooleanFunction":
        names = tuple(names)
        table = 0
        for m in minterms:
            table |= 1 << m
        dc = 0
        for m in dont_cares:
            dc |= 1 << m
        return cls(names, table & ~dc, dc)


class Implicant(NamedTuple):
    """Cube over n variables: ``fixed`` marks bound positions, ``value``
    holds their polarities (value bits outside ``fixed`` are zero)."""

    fixed: int
    value: int

    @property
    def literal_count(self) -> int:
        return self.fixed.bit_count()

    def covers(self, assignment: int) -> bool:
        return (assignment & self.fixed) == self.value

    def cube_str(self, nvars: int) -> str:
        out = []
        for i in range(nvars):
            if not (self.fixed >> i) & 1:
                out.append("-")
            else:
                out.append("1" if (self.value >> i) & 1 else "0")
        return "".join(out)


class FormKind:
    MDNF = "MDNF"
    MCNF = "MCNF"


@dataclass(frozen=True)
class CoverForm:
    """Minimal two-level form.  MDNF terms are implicants of the function;
    MCNF terms are implicants of its complement (each one complements to a
    clause), which keeps both forms in one representation."""

    kind: str
    names: tuple[str, ...]
    terms: tuple[Implicant, ...]

    def evaluate(self, assignment: int) -> bool:
        hit = any(t.covers(assignment) for t in self.terms)
        return hit if self.kind == FormKind.MDNF else not hit

    def literal_count(self) -> int:
        return sum(t.literal_count for t in self.terms)

    def describe(self) -> str:
        n = len(self.names)
        cubes = " ".join(t.cube_str(n) for t in self.terms) or "(none)"
        return f"{self.kind}[{cubes}]"


# ----------------------------------------------------------------- depth cost
# One 2-input AND/OR gate costs one time quantum; negation is free.  A term
# of l literals forms a balanced tree of ceil(log2 l) levels; subtrees of
# depths d_i merge into a root of ceil(log2 sum(2^d_i)) levels, which is
# the optimum for 2-input associative combination (Kraft bound).


def _clog2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def term_gate_depth(literal_count: int) -> int:
    """Levels of a balanced 2-input gate tree over the literals."""
    return _clog2(literal_count) if literal_count > 1 else 0


def merge_gate_depth(depths: Iterable[int]) -> int:
    """Minimal root depth combining subtrees of the given depths."""
    total = sum(1 << d for d in depths)
    return _clog2(total) if total else 0


# ------------------------------------------------------------ prime implicants


def prime_implicants(f: BooleanFunction) -> frozenset[Implicant]:
    """Complete prime set via iterated pairwise merging of adjacent cubes."""
    n = f.nvars
    full = (1 << n) - 1
    seed = f.table | f.dont_care
    if seed == 0:
        return frozenset()
    level: dict[int, set[int]] = {full: set()}
    for m in range(1 << n):
        if (seed >> m) & 1:
            level[full].add(m)
    primes: set[Implicant] = set()
    while level:
        nxt: dict[int, set[int]] = {}
        for fixed, values in level.items():
            merged: set[int] = set()
            by_pc: dict[int, set[int]] = {}
            for v in values:
                by_pc.setdefault(v.bit_count(), set()).add(v)
            for pc in sorted(by_pc):
                uppers = by_pc.get(pc + 1, ())
                for v in by_pc[pc]:
                    bits = fixed & ~v
                    while bits:
                        b = bits & -bits
                        bits &= bits - 1
                        if v | b in uppers:
                            nxt.setdefault(fixed & ~b, set()).add(v)
                            merged.add(v)
                            merged.add(v | b)
            for v in values:
                if v not in merged:
                    primes.add(Implicant(fixed, v))
        level = nxt
    if f.dont_care:
        # keep only primes touching a true row
        keep = set()
        for p in primes:
            free = full & ~p.fixed
            sub = free
            found = False
            while True:
                m = p.value | sub
                if (f.table >> m) & 1:
                    found = True
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & free
            if found:
                keep.add(p)
        primes = keep
    return frozenset(primes)


# ---------------------------------------------------------------- exact cover


def _exact_cover(
    nvars: int, on_bits: list[int], primes: list[Implicant]
) -> list[Implicant]:
    """Cover all ON minterms minimizing (tree depth, terms, literals)."""
    index = {m: i for i, m in enumerate(on_bits)}
    nmin = len(on_bits)
    full = (1 << nmin) - 1
    coverage = []
    for p in primes:
        c = 0
        for m in on_bits:
            if p.covers(m):
                c |= 1 << index[m]
        coverage.append(c)

    # essential primes appear in every prime cover
    chosen: list[int] = []
    covered = 0
    changed = True
    while changed:
        changed = False
        for i in range(nmin):
            if (covered >> i) & 1:
                continue
            owners = [j for j, c in enumerate(coverage) if (c >> i) & 1]
            if len(owners) == 1:
                chosen.append(owners[0])
                covered |= coverage[owners[0]]
                changed = True
                break

    candidates = [
        j
        for j in range(len(primes))
        if j not in chosen and coverage[j] & ~covered
    ]
    candidates.sort(
        key=lambda j: (-(coverage[j] & ~covered).bit_count(), primes[j])
    )

    def cost(sel: list[int]) -> tuple[int, int, int]:
        depths = [term_gate_depth(primes[j].literal_count) for j in sel]
        return (
            merge_gate_depth(depths),
            len(sel),
            sum(primes[j].literal_count for j in sel),
        )

    best_cost = None
    best_sel = None

    def search(sel: list[int], covd: int, weight: int) -> None:
        nonlocal best_cost, best_sel
        if covd == full:
            c = cost(sel)
            if best_cost is None or c < best_cost:
                best_cost, best_sel = c, list(sel)
            return
        if best_cost is not None:
            depth_lb = _clog2(weight) if weight else 0
            if depth_lb > best_cost[0]:
                return
            if depth_lb == best_cost[0] and len(sel) + 1 > best_cost[1]:
                return
        i = 0
        while (covd >> i) & 1:
            i += 1
        for j in candidates:
            if (coverage[j] >> i) & 1 and j not in sel:
                sel.append(j)
                w = 1 << term_gate_depth(primes[j].literal_count)
                search(sel, covd | coverage[j], weight + w)
                sel.pop()

    start_weight = sum(
        1 << term_gate_depth(primes[j].literal_count) for j in chosen
    )
    search(list(chosen), covered, start_weight)
    assert best_sel is not None
    return sorted((primes[j] for j in best_sel))


def minimum_cover(
    f: BooleanFunction, primes: frozenset[Implicant] | None = None
) -> CoverForm:
    """Minimum DNF: essential primes first, then exact branch-and-bound."""
    if f.table == 0:
        return CoverForm(FormKind.MDNF, f.names, ())
    if primes is None:
        primes = prime_implicants(f)
    on_bits = [m for m in range(1 << f.nvars) if (f.table >> m) & 1]
    terms = _exact_cover(f.nvars, on_bits, sorted(primes))
    return CoverForm(FormKind.MDNF, f.names, tuple(terms))


def minimum_cnf(f: BooleanFunction) -> CoverForm:
    """Minimum CNF: minimize the complement, store its implicants."""
    comp = f.complement()
    if comp.table == 0:
        return CoverForm(FormKind.MCNF, f.names, ())
    cover = minimum_cover(comp)
    return CoverForm(FormKind.MCNF, f.names, cover.terms)


# ------------------------------------------------------------------ PLA text


def pla_dump(f: BooleanFunction) -> str:
    """Full-table PLA text: .i/.o header, then input-bits and output bit."""
    n = f.nvars
    lines = [f".i {n}", ".o 1"]
    if f.names:
        lines.append(".ilb " + " ".join(f.names))
    for m in range(1 << n):
        bits = "".join("1" if (m >> i) & 1 else "0" for i in range(n))
        if (f.dont_care >> m) & 1:
            out = "-"
        else:
            out = "1" if (f.table >> m) & 1 else "0"
        lines.append(f"{bits} {out}")
    lines.append(".e")
    return "\n".join(lines) + "\n"


def pla_load(text: str) -> BooleanFunction:
    """Parse PLA text (cube input rows allowed) into a BooleanFunction."""
    n = None
    names: tuple[str, ...] | None = None
    table = 0
    dc = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == ".e":
            continue
        if line.startswith(".i "):
            n = int(line.split()[1])
            continue
        if line.startswith(".o "):
            if int(line.split()[1]) != 1:
                raise MinimizeError("only single-output PLA files are supported")
            continue
        if line.startswith(".ilb"):
            names = tuple(line.split()[1:])
            continue
        if line.startswith("."):
            continue
        if n is None:
            raise MinimizeError(f"line {lineno}: cube row before .i header")
        parts = line.split()
        if len(parts) != 2 or len(parts[0]) != n:
            raise MinimizeError(f"line {lineno}: malformed PLA row")
        bits, out = parts
        fixed = 0
        value = 0
        for i, ch in enumerate(bits):
            if ch == "1":
                fixed |= 1 << i
                value |= 1 << i
            elif ch == "0":
                fixed |= 1 << i
            elif ch != "-":
                raise MinimizeError(f"line {lineno}: bad input bit {ch!r}")
        free = ((1 << n) - 1) & ~fixed
        sub = free
        while True:
            m = value | sub
            if out == "1":
                table |= 1 << m
            elif out in ("-", "~"):
                dc |= 1 << m
            elif out != "0":
                raise MinimizeError(f"line {lineno}: bad output bit {out!r}")
            if sub == 0:
                break
            sub = (sub - 1) & free
    if n is None:
        raise MinimizeError("missing .i header")
    if names is None:
        names = tuple(f"x{i}" for i in range(n))
    if len(names) != n:
        raise MinimizeError(".ilb names do not match .i count")
    return BooleanFunction(names, table & ~dc, dc)
