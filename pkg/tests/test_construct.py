import itertools

import pytest

from portshare import (
    Classification,
    ConstructError,
    DEFAULT_PROFILE,
    MachineConfig,
    SlotKind,
    UtilizationProfile,
    assign_masks,
    build_scheme,
    classify_scheme,
    load_fixture,
    mask_occupancy,
    mask_ports,
    parse_profile,
    select_masks,
    serialize_profile,
)


def bits(*ports):
    m = 0
    for p in ports:
        m |= 1 << p
    return m


def test_mask_occupancy_values():
    assert mask_occupancy(bits(1, 2), DEFAULT_PROFILE) == pytest.approx(0.247)
    assert mask_occupancy(bits(0, 3), DEFAULT_PROFILE) == pytest.approx(0.253)
    assert mask_occupancy(0, DEFAULT_PROFILE) == 0.0


def test_select_masks_published_pairs():
    masks = select_masks(DEFAULT_PROFILE, 2)
    assert [mask_ports(m) for m in masks] == [(0, 3), (4, 7), (1, 2), (5, 6)]
    occs = [mask_occupancy(m, DEFAULT_PROFILE) for m in masks]
    assert occs == pytest.approx([0.253, 0.253, 0.247, 0.247], abs=5e-4)


def test_select_masks_singletons():
    masks = select_masks(DEFAULT_PROFILE, 1)
    assert sorted(mask_ports(m)[0] for m in masks) == list(range(8))
    # returned in occupancy order, busiest ports first
    assert mask_ports(masks[0]) == (1,)


def test_select_masks_uniform_profile_lexicographic():
    flat = UtilizationProfile((0.1,) * 8, DEFAULT_PROFILE.mem)
    masks = select_masks(flat, 4)
    assert {mask_ports(m) for m in masks} == {(0, 1, 2, 3), (4, 5, 6, 7)}


def test_select_masks_rejects_bad_popcount():
    with pytest.raises(ConstructError):
        select_masks(DEFAULT_PROFILE, 3)
    with pytest.raises(ConstructError):
        select_masks(DEFAULT_PROFILE, 0)


def test_assignment_reproduces_tuned_single_connection_scheme():
    masks = select_masks(DEFAULT_PROFILE, 1)
    plan = assign_masks(masks, DEFAULT_PROFILE)
    scheme = build_scheme(plan)
    assert scheme.rows == load_fixture("uniform1_tuned").rows


def test_assignment_pairs_structure():
    masks = select_masks(DEFAULT_PROFILE, 2)
    plan = assign_masks(masks, DEFAULT_PROFILE)
    low = {m for m, o in zip(plan.masks, plan.occupancy) if o == min(plan.occupancy)}
    assert plan.assignment[plan.config.slots[0]] in low  # first load base
    assert plan.assignment[plan.config.slots[2]] in low  # second load base
    groups = plan.groups()
    kind_groups = sorted(
        tuple(sorted(s.kind.value for s in slots)) for slots in groups.values()
    )
    assert kind_groups == [
        ("load_base", "sta_index"),
        ("load_base", "sta_index"),
        ("load_index", "sta_base"),
        ("load_index", "sta_base", "std_data"),
    ]
    scheme = build_scheme(plan)
    assert set(scheme.rows) == set(load_fixture("uniform2_tuned").rows)
    assert classify_scheme(scheme) is Classification.UNIFORM_SYMMETRIC


def test_assignment_four_connections():
    masks = select_masks(DEFAULT_PROFILE, 4)
    plan = assign_masks(masks, DEFAULT_PROFILE)
    scheme = build_scheme(plan)
    assert classify_scheme(scheme) is Classification.UNIFORM_SYMMETRIC
    assert len(set(scheme.rows)) == 2
    counts = sorted(
        sum(1 for r in scheme.rows if r == m) for m in set(scheme.rows)
    )
    assert counts == [4, 5]


def test_constructed_schemes_are_deterministic():
    for popcount in (1, 2, 4):
        masks = select_masks(DEFAULT_PROFILE, popcount)
        first = build_scheme(assign_masks(masks, DEFAULT_PROFILE))
        second = build_scheme(assign_masks(masks, DEFAULT_PROFILE))
        assert first == second


def brute_force_best_key(masks, profile, cfg):
    """Independent re-search of the full assignment space under the same
    constraints and objective tuple."""
    occs = [round(mask_occupancy(m, profile), 9) for m in masks]
    n = len(masks)
    util = profile.mem
    lowest = min(occs)
    base, extra = divmod(cfg.slot_count, n)
    balanced = sorted([base] * (n - extra) + [base + 1] * extra)
    by_kind = {}
    for j, slot in enumerate(cfg.slots):
        by_kind.setdefault(slot.kind, []).append(j)
    k = cfg.alu_operands_per_unit
    alus = [frozenset(p // k for p in mask_ports(m)) for m in masks]
    best = None
    for vec in itertools.product(range(n), repeat=cfg.slot_count):
        counts = [0] * n
        for mi in vec:
            counts[mi] += 1
        if sorted(counts) != balanced:
            continue
        ok = True
        for members in by_kind.values():
            seen = [vec[j] for j in members]
            if len(set(seen)) != len(seen):
                ok = False
            if len({occs[mi] for mi in seen}) > 1:
                ok = False
        for j in by_kind.get(SlotKind.LOAD_BASE, []):
            if occs[vec[j]] != lowest:
                ok = False
        if not ok:
            continue
        u_tot = [0.0] * n
        for j, mi in enumerate(vec):
            u_tot[mi] += util[j]
        mean = sum(u_tot) / n
        var = sum((u - mean) ** 2 for u in u_tot) / n
        crowd = -sum(counts[i] * occs[i] for i in range(n))
        overlap = 0
        unit_masks = {}
        for j, mi in enumerate(vec):
            unit_masks.setdefault(cfg.slots[j].unit, []).append(mi)
        for mis in unit_masks.values():
            if len(mis) == 2 and alus[mis[0]] & alus[mis[1]]:
                overlap += 1
        inter = sum(occs[i] * u_tot[i] for i in range(n))
        key = (round(var, 9), round(crowd, 9), overlap, round(inter, 9), vec)
        if best is None or key < best:
            best = key
    return best


def test_assignment_optimality_self_oracle():
    cfg = MachineConfig()
    masks = select_masks(DEFAULT_PROFILE, 2)
    plan = assign_masks(masks, DEFAULT_PROFILE)
    best = brute_force_best_key(masks, DEFAULT_PROFILE, cfg)
    assert best is not None
    assert plan.slot_mask_index == best[-1]


def test_single_mask_single_slot():
    cfg = MachineConfig(load_count=0, sta_count=0, std_count=1)
    profile = UtilizationProfile(DEFAULT_PROFILE.alu, (0.5,))
    plan = assign_masks([bits(*range(8))], profile, cfg)
    assert plan.slot_mask_index == (0,)
    scheme = build_scheme(plan)
    assert scheme.rows == (0xFF,)


def test_infeasible_same_kind_overflow():
    cfg = MachineConfig(load_count=3, sta_count=1, std_count=1)
    profile = UtilizationProfile(DEFAULT_PROFILE.alu, (0.1,) * cfg.slot_count)
    masks = select_masks(profile, 4, cfg)
    with pytest.raises(ConstructError) as err:
        assign_masks(masks, profile, cfg)
    assert "load_base" in str(err.value)


def test_profile_round_trip_and_errors():
    text = serialize_profile(DEFAULT_PROFILE)
    again = parse_profile(text)
    assert again.alu == pytest.approx(DEFAULT_PROFILE.alu)
    assert again.mem == pytest.approx(DEFAULT_PROFILE.mem)
    with pytest.raises(ConstructError):
        parse_profile("alu 0\n")
    with pytest.raises(ConstructError):
        parse_profile("alu 99 10\n")
    with pytest.raises(ConstructError):
        parse_profile("mem 4.s1 nan-ish\n")
    with pytest.raises(ConstructError):
        parse_profile(text.replace("alu 0", "foo 0", 1))
    # missing entries
    with pytest.raises(ConstructError):
        parse_profile("alu 0 10\n")


def test_profile_bounds():
    with pytest.raises(ConstructError):
        UtilizationProfile((1.5,) * 8, (0.1,) * 9)
