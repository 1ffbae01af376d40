import pytest

from portshare import (
    BooleanFunction,
    FormKind,
    Implicant,
    MinimizeError,
    minimum_cnf,
    minimum_cover,
    pla_dump,
    pla_load,
    prime_implicants,
)

X_AND_Y = BooleanFunction(("x", "y"), 0b1000)
X_OR_Y = BooleanFunction(("x", "y"), 0b1110)
XOR = BooleanFunction(("x", "y"), 0b0110)
MAJORITY = BooleanFunction.from_minterms(("x", "y", "z"), (0b011, 0b101, 0b110, 0b111))


def brute_force_primes(f: BooleanFunction) -> set[Implicant]:
    """Oracle: enumerate every cube, keep maximal implicants."""
    n = f.nvars
    implicants = set()
    for fixed in range(1 << n):
        free = ((1 << n) - 1) & ~fixed
        for bits in range(1 << n):
            value = bits & fixed
            if value != bits:
                continue
            ok = True
            sub = free
            while True:
                m = value | sub
                if not ((f.table | f.dont_care) >> m) & 1:
                    ok = False
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & free
            if ok:
                implicants.add(Implicant(fixed, value))
    primes = set()
    for imp in implicants:
        maximal = True
        for bit in range(n):
            b = 1 << bit
            if imp.fixed & b and Implicant(imp.fixed & ~b, imp.value & ~b) in implicants:
                maximal = False
                break
        if maximal:
            primes.add(imp)
    # drop cubes covering only don't-care rows
    live = set()
    for imp in primes:
        free = ((1 << n) - 1) & ~imp.fixed
        sub = free
        while True:
            if (f.table >> (imp.value | sub)) & 1:
                live.add(imp)
                break
            if sub == 0:
                break
            sub = (sub - 1) & free
    return live


def test_primes_simple_conjunction():
    assert prime_implicants(X_AND_Y) == {Implicant(0b11, 0b11)}


def test_primes_xor_no_merging():
    assert prime_implicants(XOR) == {Implicant(0b11, 0b01), Implicant(0b11, 0b10)}


def test_primes_majority_against_brute_force():
    got = prime_implicants(MAJORITY)
    assert got == brute_force_primes(MAJORITY)
    assert got == {
        Implicant(0b011, 0b011),
        Implicant(0b101, 0b101),
        Implicant(0b110, 0b110),
    }


def test_primes_match_brute_force_randomish():
    for table in (0x8001, 0x7FFE, 0x1234, 0xFACE, 0x0F0F):
        f = BooleanFunction(("a", "b", "c", "d"), table)
        assert prime_implicants(f) == brute_force_primes(f)


def test_cover_majority_all_essential():
    cover = minimum_cover(MAJORITY)
    assert set(cover.terms) == prime_implicants(MAJORITY)


def test_cover_constant_true_universal_cube():
    f = BooleanFunction(("x", "y"), 0b1111)
    cover = minimum_cover(f)
    assert cover.terms == (Implicant(0, 0),)


def test_cover_constant_false_empty():
    f = BooleanFunction(("x", "y"), 0)
    assert minimum_cover(f).terms == ()
    assert not minimum_cover(f).evaluate(0)


def test_cnf_of_disjunction_single_clause():
    cnf = minimum_cnf(X_OR_Y)
    assert cnf.kind == FormKind.MCNF
    assert cnf.terms == (Implicant(0b11, 0b00),)  # complement cube = clause x|y


def test_cnf_of_conjunction_two_unit_clauses():
    cnf = minimum_cnf(X_AND_Y)
    assert set(cnf.terms) == {Implicant(0b01, 0), Implicant(0b10, 0)}


def test_cnf_of_xor():
    cnf = minimum_cnf(XOR)
    assert set(cnf.terms) == {Implicant(0b11, 0b00), Implicant(0b11, 0b11)}
    for m in range(4):
        assert cnf.evaluate(m) == XOR.evaluate(m)


def test_forms_equal_function_exhaustive_n3():
    for table in range(256):
        f = BooleanFunction(("a", "b", "c"), table)
        dnf = minimum_cover(f)
        cnf = minimum_cnf(f)
        for m in range(8):
            want = f.evaluate(m)
            assert dnf.evaluate(m) == want, (table, m)
            assert cnf.evaluate(m) == want, (table, m)


def test_cover_irredundant_and_cheap_n3():
    for table in range(1, 256):
        f = BooleanFunction(("a", "b", "c"), table)
        cover = minimum_cover(f)
        minterm_count = bin(table).count("1")
        assert len(cover.terms) <= minterm_count
        for skip in range(len(cover.terms)):
            kept = cover.terms[:skip] + cover.terms[skip + 1 :]
            covered = 0
            for t in kept:
                for m in range(8):
                    if t.covers(m):
                        covered |= 1 << m
            assert covered & table != table, (table, skip)


def test_cnf_duality_with_complement_cover():
    for table in (0x16, 0x69, 0xC3, 0x01):
        f = BooleanFunction(("a", "b", "c"), table)
        comp = BooleanFunction(("a", "b", "c"), table ^ 0xFF)
        assert len(minimum_cnf(f).terms) == len(minimum_cover(comp).terms)


def test_dont_cares_expand_cubes():
    # ON={3}, DC={1,2}: don't-cares let a single literal cover the ON row
    f = BooleanFunction.from_minterms(("x", "y"), (0b11,), (0b01, 0b10))
    cover = minimum_cover(f)
    assert len(cover.terms) == 1
    assert cover.terms[0].literal_count == 1
    assert cover.evaluate(0b11)


def test_function_validation():
    with pytest.raises(MinimizeError):
        BooleanFunction(("x", "x"), 0)
    with pytest.raises(MinimizeError):
        BooleanFunction(("x",), 0b10000)
    with pytest.raises(MinimizeError):
        BooleanFunction(("x",), 0b01, 0b01)  # table set on a don't-care row
    with pytest.raises(MinimizeError):
        BooleanFunction(tuple(f"v{i}" for i in range(21)), 0)


def test_pla_round_trip():
    f = BooleanFunction.from_minterms(("a", "b", "c"), (1, 4, 6), (0b111,))
    text = pla_dump(f)
    assert ".i 3" in text and ".o 1" in text
    again = pla_load(text)
    assert again == f


def test_pla_cube_rows():
    text = ".i 3\n.o 1\n.ilb a b c\n--1 1\n000 1\n.e\n"
    f = pla_load(text)
    assert f.names == ("a", "b", "c")
    # bit 2 is variable c; any assignment with c set is true, plus all-zero
    expect = {m for m in range(8) if (m >> 2) & 1} | {0}
    assert f.table == sum(1 << m for m in expect)


def test_pla_rejects_malformed():
    with pytest.raises(MinimizeError):
        pla_load("001 1\n")  # row before header
    with pytest.raises(MinimizeError):
        pla_load(".i 2\n.o 1\n0x 1\n")
    with pytest.raises(MinimizeError):
        pla_load(".i 2\n.o 2\n")


def test_cube_str_display():
    imp = Implicant(0b101, 0b001)
    assert imp.cube_str(3) == "1-0"


def test_exhaustive_n2_prime_completeness():
    for table in range(16):
        f = BooleanFunction(("x", "y"), table)
        assert prime_implicants(f) == brute_force_primes(f), table
