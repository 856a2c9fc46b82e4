"""Basic opens: membership, scaling, intersection, witnesses, serialization."""

import json
import random

import pytest

from hlf.errors import (UnsupportedFieldError, UnsupportedOpenError,
                        UnsupportedScalarError)
from hlf.fields import parse_field
from hlf.opens import (AffineRule, ConstRule, FullOpen, FullRule, LevelsOpen,
                       PeriodicRule, QuadraticRule, ZeroOpen, admitted_depth,
                       ball_at, deep_ball, excluding_ball, intersect_open,
                       open_from_data, product_escape_witness, random_open,
                       rejection_depth, residue_image, scale_open,
                       subgroup_escape_witness, subgroup_shaped)
from hlf.parsing import parse_element
from hlf.valuation import in_integer_ring

F5UT = parse_field("Fq(5)((u))((t))")
Q3T = parse_field("Qp(3)((t))")
Q3M = parse_field("Qp(3){{t}}")
FIELDS = (F5UT, Q3T, Q3M)


def e(field, text):
    return parse_element(field, text)


SCALARS = {F5UT: ["u^2", "t^-1", "3*u^-1*t", "u*t^2", "2*t^-2"],
           Q3T: ["3^2", "t^-1", "3^-1*t", "-t^2"],
           Q3M: ["3*t", "t^-2", "-3^2", "3^-1*t^3"]}
ELEMS = {F5UT: ["u", "t", "u^-3*t^2", "1+u", "u^2/(1+t)", "4*u^-1",
                "t^3/(u - t)", "u^-1*t^-1", "u^4*t^-2"],
         Q3T: ["3", "t", "3^-2*t", "1+3*t", "t^2/(1-t)", "2", "3^3*t^-1",
               "3^-1*t^-2"],
         Q3M: ["t", "3", "t^-1", "1+t", "3*t^-2", "2+t", "3^2*t^-1",
               "t^4*3^-1"]}


def test_deep_ball_membership():
    B = deep_ball(F5UT, 2)
    assert not B.contains(e(F5UT, "u*t"))
    assert B.contains(e(F5UT, "u^5*t"))
    assert B.contains(e(F5UT, "u^2*t"))
    assert B.contains(e(F5UT, "t^3"))
    assert B.contains(e(F5UT, "t^2"))
    assert B.contains(e(F5UT, "0"))


def test_mixed_deep_ball_membership():
    B = deep_ball(Q3M, 1)
    assert B.contains(e(Q3M, "3*t"))
    assert B.contains(e(Q3M, "t"))
    assert B.contains(e(Q3M, "3"))
    assert not B.contains(e(Q3M, "1"))
    assert not B.contains(e(Q3M, "2 + t"))


def test_ball_at_legality():
    assert ball_at(Q3T.residue(), 2).contains(e(Q3T.residue(), "3^2"))
    assert ball_at(F5UT.residue(), 2).contains(e(F5UT.residue(), "u^3"))
    with pytest.raises(UnsupportedFieldError):
        ball_at(F5UT, 1)
    with pytest.raises(UnsupportedFieldError):
        ball_at(Q3M, 1)


def test_excluding_ball():
    for f, s in ((F5UT, "u^-1*t^2"), (Q3M, "3^2*t^-1"), (Q3T, "3*t^-2")):
        x = e(f, s)
        B = excluding_ball(x)
        assert not B.contains(x)
        assert B.contains(e(f, "0"))


def test_depth_probes():
    L = ball_at(F5UT.residue(), 3)
    assert rejection_depth(L) == 3
    assert admitted_depth(L) == 3
    assert rejection_depth(deep_ball(F5UT, 2).level(0)) == 2
    assert rejection_depth(FullOpen(F5UT.residue())) is None
    assert admitted_depth(FullOpen(F5UT.residue())) == 0


def test_window_membership():
    base = F5UT.residue()
    U = LevelsOpen(F5UT, 2, {0: ball_at(base, 1)}, FullRule())
    assert U.contains(e(F5UT, "u + t"))
    assert not U.contains(e(F5UT, "1 + t"))
    assert U.contains(e(F5UT, "u^-9*t^-1"))
    assert U.contains(e(F5UT, "t^2/(1+u)"))


def test_affine_rule_membership():
    U = LevelsOpen(F5UT, 0, {}, AffineRule(-1, 0))
    # level i below 0 requires depth -i, so u^2*t^-2 is on the boundary
    assert U.contains(e(F5UT, "u^2*t^-2"))
    assert not U.contains(e(F5UT, "u*t^-2"))
    assert U.contains(e(F5UT, "t^3"))


def test_scale_property_battery():
    rng = random.Random(11)
    checked = 0
    for f in FIELDS:
        for _ in range(40):
            U = random_open(rng, f)
            for ys in SCALARS[f]:
                y = e(f, ys)
                try:
                    Us = scale_open(U, y)
                except UnsupportedScalarError:
                    continue
                for xs in ELEMS[f]:
                    x = e(f, xs)
                    assert Us.contains(y * x) == U.contains(x)
                    checked += 1
    assert checked > 2000


def test_scale_rejects_non_monomial():
    with pytest.raises(UnsupportedScalarError):
        scale_open(deep_ball(F5UT, 1), e(F5UT, "1 + t"))


def test_intersection_depthwise_battery_closes():
    rng = random.Random(23)
    for f in FIELDS:
        for _ in range(120):
            U = random_open(rng, f, depthwise=True)
            V = random_open(rng, f, depthwise=True)
            W = intersect_open(U, V)
            for xs in ELEMS[f]:
                x = e(f, xs)
                assert W.contains(x) == (U.contains(x) and V.contains(x))


def test_intersection_general_battery_sound():
    rng = random.Random(31)
    raises = 0
    for f in FIELDS:
        for _ in range(120):
            U = random_open(rng, f)
            V = random_open(rng, f)
            try:
                W = intersect_open(U, V)
            except UnsupportedOpenError:
                raises += 1
                continue
            for xs in ELEMS[f]:
                x = e(f, xs)
                assert W.contains(x) == (U.contains(x) and V.contains(x))
    # the fallback stays an exception, not the common case
    assert raises < 60


def test_intersection_quadratic_tail():
    U = LevelsOpen(F5UT, 0, {}, QuadraticRule(1, 0, 0))
    V = LevelsOpen(F5UT, 0, {}, AffineRule(-3, 1))
    W = intersect_open(U, V)
    for xs in ["u^4*t^-2", "u^3*t^-2", "u^7*t^-2", "t^2", "u^-1*t^-1"]:
        x = e(F5UT, xs)
        assert W.contains(x) == (U.contains(x) and V.contains(x))


def test_json_round_trip_battery():
    rng = random.Random(5)
    for f in FIELDS:
        for _ in range(120):
            U = random_open(rng, f)
            data = json.loads(json.dumps(U.to_data()))
            V = open_from_data(f, data)
            assert V == U
            assert V.to_data() == U.to_data()


def test_subgroup_escape_witness_pairs():
    # the smallest mirror pair for a constant depth descriptor sits at the
    # cutoff on one side and at that depth on the other
    U = LevelsOpen(F5UT, cutoff=2, window={},
                   below=ConstRule(ball_at(F5UT.residue(), 7)))
    w = subgroup_escape_witness(U)
    assert [str(e) for e in w.elems[:2]] == ["u^7*t^-2", "u^-7*t^2"]
    assert dict(w.claims)["mirror sum in U"]
    for U in (FullOpen(F5UT), deep_ball(F5UT, 0)):
        w = subgroup_escape_witness(U)
        assert [str(e) for e in w.elems[:2]] == ["u*t^-1", "u^-1*t"]
        assert w.checked()


def test_subgroup_escape_witness_battery():
    rng = random.Random(17)
    for f in (F5UT, Q3M):
        for _ in range(150):
            U = random_open(rng, f)
            w = subgroup_escape_witness(U)
            assert w is not None
            assert w.checked()
            assert not in_integer_ring(w.elems[0], 1)
            assert not in_integer_ring(w.elems[2], 1)


def test_product_escape_witness():
    for f in FIELDS:
        B = deep_ball(f, 2)
        w = product_escape_witness(FullOpen(f), FullOpen(f), B)
        assert w is not None and w.checked()
        x, y = w.elems
        assert not B.contains(x * y)


def test_product_escape_witness_battery():
    rng = random.Random(29)
    found = 0
    for f in FIELDS:
        for _ in range(60):
            V1 = random_open(rng, f)
            V2 = random_open(rng, f)
            W = random_open(rng, f)
            w = product_escape_witness(V1, V2, W)
            if w is not None:
                assert w.checked()
                found += 1
    assert found > 100


def test_product_escape_none_when_cofinally_full():
    W = LevelsOpen(F5UT, 2, {}, FullRule())
    assert product_escape_witness(FullOpen(F5UT), FullOpen(F5UT), W) is None


def test_subgroup_shaped():
    base = Q3M.residue()
    assert subgroup_shaped(deep_ball(F5UT, 1))
    assert subgroup_shaped(LevelsOpen(F5UT, 2,
                                      {1: ball_at(F5UT.residue(), 3)},
                                      ConstRule(ball_at(F5UT.residue(), 0))))
    rising = LevelsOpen(Q3M, 2, {0: ball_at(base, 0), 1: ball_at(base, 1)},
                        ConstRule(ball_at(base, 1)))
    falling = LevelsOpen(Q3M, 2, {0: ball_at(base, 2), 1: ball_at(base, 1)},
                         ConstRule(ball_at(base, 2)))
    assert not subgroup_shaped(rising)
    assert subgroup_shaped(falling)
    xs = [e(Q3M, s) for s in ["t", "2*t", "3", "1+t", "2", "3*t^-1", "t^2",
                              "2+t", "1+2*t"]]
    for a in xs:
        for b in xs:
            if falling.contains(a) and falling.contains(b):
                assert falling.contains(a + b)


def test_residue_image():
    img = residue_image(deep_ball(F5UT, 2))
    assert not img.is_full()
    assert img.contains(e(F5UT.residue(), "u^2"))
    assert not img.contains(e(F5UT.residue(), "u"))
    assert residue_image(deep_ball(F5UT, 0)).is_full()
    assert residue_image(FullOpen(Q3M)).is_full()
    assert isinstance(residue_image(deep_ball(Q3T, 3)), type(ball_at(Q3T.residue(), 3)))


def test_periodic_rule_round_trip():
    base = F5UT.residue()
    U = LevelsOpen(F5UT, 1, {},
                   PeriodicRule([ball_at(base, 2), FullOpen(base)]))
    V = open_from_data(F5UT, json.loads(json.dumps(U.to_data())))
    assert V == U
    # alternating pattern: level 0 constrained, level -1 free
    assert not U.contains(e(F5UT, "u"))
    assert U.contains(e(F5UT, "u^2"))
    assert U.contains(e(F5UT, "u^-5*t^-1"))
    assert not U.contains(e(F5UT, "u^-5*t^-2"))
