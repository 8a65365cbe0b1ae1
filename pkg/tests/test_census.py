import random

import pytest

from leftorder.census import (
    census_digest, enumerate_ball_cones, extendable_filter,
    restriction_ball_cone,
)
from leftorder.cones import klein_cones, slope_cone, z_cone
from leftorder.errors import ResourceLimitError
from leftorder.words import FreeCtx, KleinCtx, ZPowCtx

Z1 = ZPowCtx(1)
Z2 = ZPowCtx(2)
KLEIN = KleinCtx()


def test_z_three_ball_has_two_cones():
    cones = enumerate_ball_cones(Z1, 3)
    assert len(cones) == 2
    pos = z_cone(ctx=Z1)
    restr = restriction_ball_cone(pos.sign, Z1, 3)
    assert restr in cones


def test_klein_r2_contains_the_four_restrictions():
    cones = enumerate_ball_cones(KLEIN, 2)
    for kc in klein_cones(KLEIN):
        assert restriction_ball_cone(kc.sign, KLEIN, 2) in cones


def test_klein_census_r4_extend_8():
    cones = enumerate_ball_cones(KLEIN, 4)
    survivors = extendable_filter(cones, 8)
    assert len(survivors) == 4
    expected = {restriction_ball_cone(kc.sign, KLEIN, 4)
                for kc in klein_cones(KLEIN)}
    assert set(survivors) == expected


def test_z2_r1_census():
    assert len(enumerate_ball_cones(Z2, 1)) == 4


def test_soundness_slope_restrictions_appear():
    cones = enumerate_ball_cones(Z2, 2)
    rng = random.Random(0)
    for _ in range(10):
        a = (rng.randint(-4, 4), rng.randint(-4, 4))
        if a == (0, 0):
            continue
        v = rng.choice(("++", "+-", "-+", "--"))
        c = slope_cone(a, v)
        assert restriction_ball_cone(c.sign, Z2, 2) in cones


def test_extendable_filter_identity_radius():
    cones = enumerate_ball_cones(Z2, 1)
    assert extendable_filter(cones, 1) == cones


def test_extendable_filter_monotone():
    cones = enumerate_ball_cones(Z2, 2)
    s4 = set(extendable_filter(cones, 4))
    s5 = set(extendable_filter(cones, 5))
    assert s5 <= s4


def test_enumeration_canonical_order_and_digest_stable():
    c1 = enumerate_ball_cones(KLEIN, 2)
    c2 = enumerate_ball_cones(KLEIN, 2)
    assert c1 == c2
    assert census_digest(c1) == census_digest(c2)
    keys = [tuple(0 if s == 1 else 1 for s in c.signs) for c in c1]
    assert keys == sorted(keys)


def test_box_generator_census():
    gens = tuple(Z2.box_generators())
    cones = enumerate_ball_cones(Z2, 1, gens=gens)
    # box-1 domain has 8 points; count pinned by the enumeration oracle itself
    assert all(len(c.domain) == 8 for c in cones)
    c = slope_cone((1, 1), "++")
    assert restriction_ball_cone(c.sign, Z2, 1, gens=gens) in cones


def test_domain_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_ball_cones(FreeCtx(2), 6, cap=100)
