from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hilbert_padic.dieudonne import dmod_model, enumerate_cyclic_subgroups
from hilbert_padic.errors import InputError, MissingData, TooSingular, UndeterminedDynamics
from hilbert_padic.field import Field
from hilbert_padic.hecke import (
    ValPoint,
    canonical_sums,
    derived_hodge,
    image_counts,
    in_tower,
    orbit,
    random_path,
    region_classify,
    s_branch_walk,
    steps_in_wii,
    up_image,
    vcan_radius_holds,
    weighted_sums,
)

unit = st.fractions(min_value=0, max_value=1, max_denominator=200)


def pt(*nu, **kw):
    return ValPoint.single(nu, **kw)


def nus(img):
    return {tuple(e.point.at(0).nu): e.mult for e in img.entries}


def test_region_examples():
    assert region_classify(pt(1, 1), 3) == ("canonical", "W_{B,empty}")
    assert region_classify(pt(F(1, 2), F(1, 2)), 3) == ("canonical", "W_{B,B}")
    assert region_classify(pt(0, 1), 3) == ("too-singular", "W_{1,1}")
    assert region_classify(pt(1, 0), 3)[1] == "W_{2,2}"
    assert region_classify(pt(0, 0), 3) == ("anti-canonical", "W_{empty,B}")


def test_canonical_image():
    assert nus(up_image(pt(F(1, 2), F(3, 4)), 3)) == {(F(11, 12), F(5, 6)): 9}


def test_anticanonical_image():
    img = up_image(pt(F(1, 10), F(1, 5)), 3)
    assert nus(img) == {(F(3, 5), F(3, 10)): 1, (F(9, 10), F(4, 5)): 8}


def test_supergeneral_image():
    assert nus(up_image(pt(0, 1, flag="supergeneral"), 3)) == {(1, F(2, 3)): 9}
    assert nus(up_image(pt(1, 0, flag="supergeneral"), 3)) == {(F(2, 3), 1): 9}


def test_superspecial_top_height():
    img = up_image(pt(0, 1, flag="superspecial", w=(1, 1)), 3)
    assert nus(img) == {(0, 1): 1, (F(3, 4), F(3, 4)): 8}
    assert {e.tag for e in img.entries} == {"s-branch", "circ-branch"}


def test_superspecial_small_height():
    img = up_image(pt(0, 1, flag="superspecial", w=(1, F(1, 2))), 3)
    assert nus(img) == {(F(5, 6), F(2, 3) + F(1, 18)): 9}


def test_superspecial_height_boundary():
    # w = p/(p+1) still uses the single-image law
    assert len(up_image(pt(0, 1, flag="superspecial", w=(1, F(3, 4))), 3).entries) == 1
    assert len(up_image(pt(0, 1, flag="superspecial", w=(1, F(4, 5))), 3).entries) == 2


def test_edge_strata_images():
    hi = up_image(pt(0, F(9, 10)), 3)
    assert nus(hi) == {(1, 1 - F(1, 3) - F(1, 90)): 9}
    lo = up_image(pt(0, F(7, 20)), 3)
    assert nus(lo) == {(1, F(3, 20)): 1, (1, F(13, 20)): 8}


def test_edge_threshold_is_half_open():
    p = 3
    y = F(p + 1, p * p + 1)
    assert len(up_image(pt(0, y), p).entries) == 1
    assert len(up_image(pt(0, y - F(1, 10 ** 6)), p).entries) == 2


def test_degree_one_images():
    assert nus(up_image(pt(1), 3)) == {(1,): 3}
    assert nus(up_image(pt(F(1, 4)), 3)) == {(F(3, 4),): 3}
    assert nus(up_image(pt(F(1, 10)), 3)) == {(F(3, 10),): 1, (F(9, 10),): 2}
    assert nus(up_image(pt(F(1, 2)), 3)) == {(F(5, 6),): 3}


def test_undetermined_interior():
    # too-singular interior point: canonical sum below 1 in one direction only
    Q = pt(F(1, 2), F(1, 20))
    assert region_classify(Q, 3)[0] == "too-singular"
    with pytest.raises(UndeterminedDynamics):
        up_image(Q, 3)


def test_wii_needs_flag_and_height():
    with pytest.raises(UndeterminedDynamics):
        up_image(pt(0, 1), 3)
    with pytest.raises(MissingData):
        up_image(pt(0, 1, flag="superspecial"), 3)


def test_derived_hodge():
    assert derived_hodge(pt(F(1, 2), F(3, 4)), 3)[1] == F(1, 4)
    assert derived_hodge(pt(F(1, 10), F(1, 10)), 3) == (F(3, 10), F(3, 10))
    assert derived_hodge(pt(1, 1), 3) == (0, 0)
    with pytest.raises(TooSingular):
        derived_hodge(pt(0, 1), 3)


def test_invalid_points():
    with pytest.raises(InputError):
        pt(F(3, 2), 0)
    with pytest.raises(InputError):
        pt(F(1, 2), F(1, 2), flag="superspecial")
    with pytest.raises(InputError):
        pt(0, 1, flag="superspecial", w=(F(1, 2), 1))


def test_json_round_trip():
    Q = pt(0, 1, flag="superspecial", coords=(1, F(29, 10)))
    assert ValPoint.from_json(Q.to_json()) == Q
    with pytest.raises(InputError):
        ValPoint.from_json({"f": 2, "nu": ["0", "1"], "colour": "red"})


@settings(max_examples=300, deadline=None)
@given(a=unit, b=unit, p=st.sampled_from([2, 3, 5]))
def test_image_size_and_canonical_invariance(a, b, p):
    Q = pt(a, b)
    region = region_classify(Q, p)[0]
    try:
        img = up_image(Q, p)
    except UndeterminedDynamics:
        assert region == "too-singular"
        return
    assert img.size() == p * p
    if region == "canonical":
        assert all(region_classify(e.point, p)[0] == "canonical" for e in img.entries)


@settings(max_examples=300, deadline=None)
@given(a=unit, b=unit, p=st.sampled_from([2, 3, 5]), r=st.fractions(min_value=0, max_value=3, max_denominator=50))
def test_vcan_contraction(a, b, p, r):
    nu = (a, b)
    if not vcan_radius_holds(p, nu, r) or region_classify(pt(a, b), p)[0] != "canonical":
        return
    for e in up_image(pt(a, b), p).entries:
        assert vcan_radius_holds(p, e.point.at(0).nu, r / p)


@settings(max_examples=200, deadline=None)
@given(w=st.fractions(min_value=0, max_value=1, max_denominator=100).filter(lambda x: x > 0),
       p=st.sampled_from([2, 3, 5]))
def test_superspecial_images_on_degree_one_line(w, p):
    img = up_image(pt(0, 1, flag="superspecial", w=(1, w)), p)
    assert img.size() == p * p
    for e in img.entries:
        a, b = e.point.at(0).nu
        assert a + p * b == p


def test_weighted_sums_monotone_on_random_paths():
    rng = random.Random(5)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        Q = pt(F(rng.randint(0, 60), 60), F(rng.randint(0, 60), 60))
        path = random_path(Q, p, 6, rng)
        sums = [weighted_sums(p, x.at(0).nu) for x in path]
        for s, t in zip(sums, sums[1:]):
            assert all(y >= x for x, y in zip(s, t))


def test_weighted_sums_reach_ordinary_value():
    p = 3
    o = orbit(pt(F(1, 2), F(3, 4)), p, 5)
    sums = [weighted_sums(p, n.point.at(0).nu) for n in o.paths()[0]]
    assert all(all(y > x for x, y in zip(s, t)) for s, t in zip(sums, sums[1:]))
    assert all(x < p + 1 for x in sums[-1])
    assert o.all_monotone()


def test_ordinary_orbit_is_constant():
    o = orbit(pt(1, 1), 3, 4)
    assert all(n.point.at(0).nu == (1, 1) for path in o.paths() for n in path)


def test_orbit_marks_undetermined():
    o = orbit(pt(F(1, 2), F(1, 20)), 3, 2)
    assert o.root.status == "undetermined" and not o.root.children


def test_tower_shift_and_exit():
    Q = pt(0, 1, flag="superspecial", coords=(1, F(29, 10)))
    walk = s_branch_walk(Q, 3, 5)
    assert [x.at(0).coords for x in walk[:3]] == [(1, F(29, 10)), (2, F(19, 10)), (3, F(9, 10))]
    assert steps_in_wii(Q, 3, 5) == 2
    assert walk[3].at(0).nu == (F(3, 10), F(9, 10))


@pytest.mark.parametrize("n", range(1, 11))
def test_tower_membership(n):
    coords = (1, n)
    assert in_tower(coords, n) and not in_tower(coords, n + 1)
    Q = pt(0, 1, flag="superspecial", coords=coords)
    walk = s_branch_walk(Q, 3, n + 2)
    for k, x in enumerate(walk[1:], start=1):
        c = x.at(0).coords
        if c is None:
            break
        assert c == (1 + k, n - k)
        assert in_tower(c, n - k)


def test_vertex_counts_match_enumeration():
    # counts of stratum labels among witnesses over F_9 against the image law at the ss vertex
    ws = enumerate_cyclic_subgroups(dmod_model("superspecial", Field(3, 2), 2))
    strata = Counter(w.stratum for w in ws)
    img = up_image(pt(0, 1, flag="superspecial", w=(1, 1)), 3)
    assert img.size() == 9
    assert strata["W_{1,1}"] == 9 == img.size()
    assert image_counts(img)[((0, 1),)] == 1


def test_canonical_sums():
    assert canonical_sums(3, (F(1, 2), F(1, 2))) == (2, 2)
