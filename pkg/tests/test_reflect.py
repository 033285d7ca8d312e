import itertools
from fractions import Fraction

import numpy as np
import pytest

import clocklab as cl
from clocklab.reflect import (ColumnPattern, check_glued_pair, check_identity,
                              check_inequalities, classify_pattern, defect_stats,
                              enumerate_patterns, hosts_blob, pattern_feasible,
                              reflect_pattern)

T4 = (True,) * 4
F4 = (False,) * 4


def _od_problematic():
    return ColumnPattern(h=(F4, T4), v=(F4,), bottom_end="disordered", top_end="ordered")


def test_pattern_validation():
    with pytest.raises(cl.PatternError):
        ColumnPattern(h=(T4, T4), v=(F4,), bottom_end="disordered", top_end="ordered")
    with pytest.raises(cl.PatternError):
        ColumnPattern(h=(F4,), v=(), bottom_end="disordered", top_end="ordered")


def test_reflection_is_periodic_and_restricts_to_source():
    p = ColumnPattern(h=(F4, (True, False, False, True), F4),
                      v=((False, True, False, False), (True, True, False, False)),
                      bottom_end="boundary", top_end="disordered")
    fp = reflect_pattern(p, 8)
    hx, hy = fp.h_planes[1]
    # restriction to the source cell
    assert hx[0, 0] == p.h[1][0] and hx[0, 1] == p.h[1][1]
    assert hy[0, 0] == p.h[1][2] and hy[1, 0] == p.h[1][3]
    assert fp.v_levels[0][0, 0] == p.v[0][0] and fp.v_levels[0][1, 0] == p.v[0][1]
    # invariance under reflections through site lines: period 2 both ways
    for arr in (hx, hy, fp.v_levels[0]):
        assert np.array_equal(arr, np.roll(arr, 2, axis=0))
        assert np.array_equal(arr, np.roll(arr, 2, axis=1))
    # x-bond state depends only on y parity
    assert (hx[:, 0] == hx[0, 0]).all() and (hx[:, 1] == hx[0, 1]).all()


def test_reflection_all_disordered_fixed_point():
    p = ColumnPattern(h=(F4, F4), v=(F4,), bottom_end="disordered", top_end="disordered")
    fp = reflect_pattern(p, 4)
    assert not any(a.any() or b.any() for a, b in fp.h_planes)
    assert not fp.v_levels[0].any()


def test_reflection_orbit_sizes():
    # one ordered vertical on a cell corner reflects to N^2/4 bonds
    p = ColumnPattern(h=(F4, F4), v=((True, False, False, False),),
                      bottom_end="boundary", top_end="disordered")
    fp = reflect_pattern(p, 4)
    assert int(fp.v_levels[0].sum()) == 4
    # one ordered x-bond reflects to N^2/2 (all x, fixed y parity)
    p2 = ColumnPattern(h=(F4, (True, False, False, False), F4),
                       v=(F4, (True,) * 4), bottom_end="disordered",
                       top_end="disordered")
    # the verticals above keep cube 1 frustrated; only plane 1 matters here
    fp2 = reflect_pattern(p2, 4)
    assert int(fp2.h_planes[1][0].sum()) == 8


def test_reflect_requires_even_n():
    with pytest.raises(cl.PatternError):
        reflect_pattern(_od_problematic(), 3)


def test_od_problematic_statistics():
    st = defect_stats(reflect_pattern(_od_problematic(), 4))
    nn = 16
    assert (st.D, st.K, st.Q) == (4 * nn, nn, 0)
    assert st.sum_dX == nn and st.sum_d2X == 0
    assert check_identity(st) == 0
    assert 2 * st.D - 6 * (st.K + st.Q) == 2 * nn


def test_boundary_dd_m1_explicit():
    for v1 in itertools.product((False, True), repeat=4):
        if not any(v1):
            continue  # pure cube, not a defect
        p = ColumnPattern(h=(F4, F4), v=(v1,), bottom_end="boundary",
                          top_end="disordered")
        st = defect_stats(reflect_pattern(p, 4))
        nn = 16
        db = 4 * sum(1 for b in v1 if not b)
        assert st.l == 1 and st.Db == db
        assert st.D == 3 * nn + db and st.K == db and st.Q == 0
        assert check_identity(st) == 0
        assert 2 * Fraction(st.D) - Fraction(9, 2) * st.K == 6 * nn - Fraction(5, 2) * db


def test_all_disordered_slab_fixture():
    # artificial d=2 slab of height 3, every bond disordered
    p = ColumnPattern(h=(F4, F4, F4, F4), v=(F4, F4, F4),
                      bottom_end="disordered", top_end="disordered")
    st = defect_stats(reflect_pattern(p, 4))
    nn = 16
    assert st.K == (st.l - 1) * nn == 3 * nn
    assert st.Q == 0 and st.n_components == 0
    assert check_identity(st) == 0


def test_scale_consistency():
    # per-N^2 statistics identical at N = 2, 4, 8 (period-2 structure)
    pats = [_od_problematic(),
            ColumnPattern(h=(F4, (True, True, False, False), F4),
                          v=((False, True, True, False), (True, False, False, True)),
                          bottom_end="disordered", top_end="disordered")]
    for p in pats:
        base = None
        for n in (2, 4, 8):
            st = defect_stats(reflect_pattern(p, n))
            nn = n * n
            scaled = (Fraction(st.D, nn), Fraction(st.K, nn), Fraction(st.Q, nn),
                      Fraction(st.Db, nn))
            assert st.K % (nn // 4) == 0 and st.Q % (nn // 4) == 0
            if base is None:
                base = scaled
            assert scaled == base


def test_hosts_blob():
    assert hosts_blob(_od_problematic())
    # order-order with ordered planes cannot carry any interface plaquette
    p = ColumnPattern(h=(T4, T4), v=((False, True, True, True),),
                      bottom_end="ordered", top_end="ordered")
    assert not hosts_blob(p)


def test_pattern_feasibility():
    assert pattern_feasible(_od_problematic())
    # two ordered verticals under a fully ordered plane pin two far-apart
    # boundary values together: infeasible
    p = ColumnPattern(h=(F4, T4), v=((True, True, False, False),),
                      bottom_end="boundary", top_end="ordered")
    assert not pattern_feasible(p)
    # a single ordered vertical is fine
    p2 = ColumnPattern(h=(F4, T4), v=((True, False, False, False),),
                       bottom_end="boundary", top_end="ordered")
    assert pattern_feasible(p2)


def test_enumeration_deterministic_and_sharded():
    first = [p.key() for p in enumerate_patterns(1)]
    second = [p.key() for p in enumerate_patterns(1)]
    assert first == second
    sharded = []
    for i in range(3):
        sharded.extend(p.key() for p in enumerate_patterns(1, shard=(i, 3)))
    assert sorted(sharded) == sorted(first)


def test_enumeration_matches_unpruned_filter_at_lslab_1():
    # apply the admissibility predicate to the raw 2^(8+4) bond patterns of
    # a naked one-cube stack and compare with the pruned enumerator
    families = [("ordered", "ordered"), ("disordered", "ordered"),
                ("disordered", "disordered"), ("boundary", "ordered"),
                ("boundary", "disordered")]
    raw_count = 0
    for bottom, top in families:
        for bits in itertools.product((False, True), repeat=12):
            h0, h1, v = tuple(bits[:4]), tuple(bits[4:8]), tuple(bits[8:])
            if h0 != ((bottom == "ordered"),) * 4 or h1 != ((top == "ordered"),) * 4:
                continue
            try:
                p = ColumnPattern(h=(h0, h1), v=(v,), bottom_end=bottom, top_end=top)
            except cl.PatternError:
                continue
            if not p.cube_frustrated(0) or not hosts_blob(p) or not pattern_feasible(p):
                continue
            raw_count += 1
    assert raw_count == sum(1 for _ in enumerate_patterns(1))


def test_enumerated_patterns_are_admissible():
    for p in enumerate_patterns(1):
        assert p.m >= 1
        assert all(p.cube_frustrated(j) for j in range(p.n_cubes))
        st = defect_stats(reflect_pattern(p, 4))
        assert st.l <= 2 * st.m


def test_equality_iff_problematic_bulk():
    nn = 16
    for p in enumerate_patterns(2, boundary=False):
        if p.d not in (0, 1):
            continue
        st = defect_stats(reflect_pattern(p, 4))
        eq = 2 * st.D - 6 * (st.K + st.Q) == 2 * nn
        assert eq == (classify_pattern(p) == "problematic")


def test_enumeration_cap():
    with pytest.raises(cl.PatternError):
        list(enumerate_patterns(4))


def test_glued_pair_core_holds_everywhere():
    for n in (2, 4):
        for bits in itertools.product((False, True), repeat=4):
            v = np.zeros((n, n), dtype=bool)
            v[:2, :2] = np.array(bits).reshape(2, 2)
            for lt in (3, 4):
                r = check_glued_pair(n, v, l_tilde=lt)
                assert r["core_ok"], (n, bits, lt)
                assert r["disconnected_ends"]


def test_glued_pair_extreme_overlays():
    # V empty maximizes D; V full still holds
    for v in (np.zeros((4, 4), bool), np.ones((4, 4), bool)):
        r = check_glued_pair(4, v, l_tilde=3)
        assert r["core_ok"]
    empty = check_glued_pair(4, np.zeros((4, 4), bool), l_tilde=3)
    fullv = check_glued_pair(4, np.ones((4, 4), bool), l_tilde=3)
    assert empty["D"] > fullv["D"]


def test_glued_pair_literal_term_dominates_small_n():
    # the 2*l*N boundary-component term makes the literal bound unsatisfiable
    # at small N; it first holds around N ~ 100
    v = np.zeros((4, 4), bool)
    assert not check_glued_pair(4, v, l_tilde=3)["literal_ok"]
    v_big = np.zeros((128, 128), bool)
    assert check_glued_pair(128, v_big, l_tilde=3)["literal_ok"]


def test_inequality_margins_are_rational():
    p = _od_problematic()
    st = defect_stats(reflect_pattern(p, 4))
    for c in check_inequalities(st, classify_pattern(p)):
        assert isinstance(c["margin"], Fraction)
