"""Products, squares, Wu and Stiefel-Whitney classes.

Convention certificates: the cup-i coboundary identity on random cochains,
the binomial action of squares on projective spaces, and agreement of the
combinatorial Sq^1 with the integral-lift Bockstein.
"""

from __future__ import annotations

import math
import random

import pytest

from cohomotopy.chains import (
    Mod2CohomologyBasis,
    bockstein_sq1,
    coboundary_mod2,
    mod2_apply,
)
from cohomotopy.complexes import FacetComplex
from cohomotopy.factory import antipodal_quotient, circle, product, sphere
from cohomotopy.steenrod import (
    CocycleClass,
    Mod2Context,
    cup,
    cup_i,
    pin_minus_obstruction,
    sq,
    sq_bits,
    stiefel_whitney,
    wu_classes,
)

RP2 = antipodal_quotient(2)
RP3 = antipodal_quotient(3)
RP4 = antipodal_quotient(4)
TORUS = product(circle(3), circle(3))
S3S1 = product(sphere(3), circle(3))


def rand_cochain(rng, K, p):
    return rng.getrandbits(len(K.skeleton(p))) if len(K.skeleton(p)) else 0


def delta(K, p, x):
    return mod2_apply(coboundary_mod2(K, p), x)


def a_class(K):
    """Generator representative of one-dimensional H^1(K; Z/2)."""
    b = Mod2CohomologyBasis(K, 1)
    assert b.dim() == 1
    return b.representatives[0]


def a_power(K, a, m):
    out = a
    for j in range(1, m):
        out = cup(K, j, 1, out, a)
    return out


# ------------------------------------------------------------
# cup product
# ------------------------------------------------------------

def test_cup_unit_law():
    rng = random.Random(1)
    for K in (RP2, TORUS):
        unit = (1 << K.n_vertices) - 1
        for p in range(K.dim + 1):
            x = rand_cochain(rng, K, p)
            assert cup(K, p, 0, x, unit) == x
            assert cup(K, 0, p, unit, x) == x


def test_cup_leibniz_rule():
    rng = random.Random(2)
    for K in (RP2, RP3):
        for p in range(K.dim):
            for q in range(K.dim - p):
                x = rand_cochain(rng, K, p)
                y = rand_cochain(rng, K, q)
                lhs = delta(K, p + q, cup(K, p, q, x, y))
                rhs = cup(K, p + 1, q, delta(K, p, x), y) ^ \
                    cup(K, p, q + 1, x, delta(K, q, y))
                assert lhs == rhs, (p, q)


def test_cup_strictly_associative():
    rng = random.Random(3)
    K = RP3
    x = rand_cochain(rng, K, 1)
    y = rand_cochain(rng, K, 1)
    z = rand_cochain(rng, K, 1)
    assert cup(K, 2, 1, cup(K, 1, 1, x, y), z) == \
        cup(K, 1, 2, x, cup(K, 1, 1, y, z))


def test_cup_projective_plane_top_pairing():
    a = a_class(RP2)
    aa = cup(RP2, 1, 1, a, a)
    assert aa.bit_count() & 1 == 1  # <a^2, [X]> = 1


def test_cup_i_zero_is_cup():
    rng = random.Random(4)
    K = RP3
    for p, q in ((1, 1), (1, 2), (2, 1)):
        x = rand_cochain(rng, K, p)
        y = rand_cochain(rng, K, q)
        assert cup_i(K, 0, p, q, x, y) == cup(K, p, q, x, y)


def test_cup_i_index_out_of_range_is_zero():
    rng = random.Random(5)
    K = RP3
    x = rand_cochain(rng, K, 1)
    y = rand_cochain(rng, K, 1)
    assert cup_i(K, 2, 1, 1, x, y) == 0
    with pytest.raises(ValueError):
        cup_i(K, -1, 1, 1, x, y)


def test_cup_i_coboundary_identity():
    # delta(x u_i y) = dx u_i y + x u_i dy + x u_{i-1} y + y u_{i-1} x
    rng = random.Random(6)
    for K in (RP3, RP4):
        for p in range(1, K.dim):
            for q in range(1, K.dim):
                for i in range(1, min(p, q) + 1):
                    if p + q - i + 1 > K.dim:
                        continue
                    x = rand_cochain(rng, K, p)
                    y = rand_cochain(rng, K, q)
                    n = p + q - i
                    lhs = delta(K, n, cup_i(K, i, p, q, x, y))
                    rhs = cup_i(K, i, p + 1, q, delta(K, p, x), y)
                    rhs ^= cup_i(K, i, p, q + 1, x, delta(K, q, y))
                    rhs ^= cup_i(K, i - 1, p, q, x, y)
                    rhs ^= cup_i(K, i - 1, q, p, y, x)
                    assert lhs == rhs, (K.dim, p, q, i)


def test_cup_commutator_is_exact_correction():
    # for cocycles x, y: x u y + y u x = delta(x u_1 y) exactly
    K = TORUS
    b = Mod2CohomologyBasis(K, 1)
    x, y = b.representatives
    comm = cup(K, 1, 1, x, y) ^ cup(K, 1, 1, y, x)
    assert comm == delta(K, 1, cup_i(K, 1, 1, 1, x, y))


def test_cup_i_threads_deterministic():
    rng = random.Random(7)
    K = RP4
    x = rand_cochain(rng, K, 2)
    y = rand_cochain(rng, K, 2)
    base = cup_i(K, 1, 2, 2, x, y)
    assert cup_i(K, 1, 2, 2, x, y, threads=3) == base
    assert cup_i(K, 1, 2, 2, x, y, threads=8) == base
    assert cup(K, 2, 2, x, y, threads=3) == cup(K, 2, 2, x, y)


# ------------------------------------------------------------
# Steenrod squares
# ------------------------------------------------------------

def test_sq_zero_is_identity_on_classes():
    # top degree: Sq^0 is the identity on the nose
    K = sphere(4)
    top = len(K.skeleton(4))
    x = random.Random(8).getrandbits(top)
    assert sq_bits(K, 0, 4, x) == x
    # degree 1 on the projective plane: identity on cohomology
    a = a_class(RP2)
    b = Mod2CohomologyBasis(RP2, 1)
    assert b.class_coordinates(sq_bits(RP2, 0, 1, a)) == (1,)


def test_sq_above_degree_vanishes():
    a = a_class(RP4)
    assert sq_bits(RP4, 2, 1, a) == 0
    assert sq_bits(RP4, 5, 4, 1) == 0


def test_sq_top_square_is_cup_square():
    a = a_class(RP2)
    assert sq_bits(RP2, 1, 1, a) == cup(RP2, 1, 1, a, a)


def test_sq_binomial_on_projective_spaces():
    for K, d in ((RP2, 2), (RP3, 3), (RP4, 4)):
        a = a_class(K)
        for m in range(1, d + 1):
            am = a_power(K, a, m)
            for k in range(0, m + 1):
                if m + k > d:
                    continue
                got = sq_bits(K, k, m, am)
                basis = Mod2CohomologyBasis(K, m + k)
                want = math.comb(m, k) & 1
                expect = basis.class_coordinates(a_power(K, a, m + k)) \
                    if want else (0,)
                assert basis.class_coordinates(got) == expect, (d, m, k)


def test_sq_additive_on_cohomology():
    K = TORUS
    b1 = Mod2CohomologyBasis(K, 1)
    b2 = Mod2CohomologyBasis(K, 2)
    x, y = b1.representatives
    lhs = b2.class_coordinates(sq_bits(K, 1, 1, x ^ y))
    rhs_bits = sq_bits(K, 1, 1, x) ^ sq_bits(K, 1, 1, y)
    assert lhs == b2.class_coordinates(rhs_bits)


def test_sq_one_agrees_with_bockstein():
    for K in (RP2, RP3, RP4, TORUS, S3S1):
        for deg in (1, 2):
            if deg + 1 > K.dim:
                continue
            basis = Mod2CohomologyBasis(K, deg)
            out = Mod2CohomologyBasis(K, deg + 1)
            for x in basis.representatives:
                via_cup = out.class_coordinates(sq_bits(K, 1, deg, x))
                via_lift = out.class_coordinates(bockstein_sq1(K, deg, x))
                assert via_cup == via_lift, (K.dim, deg)


def test_sq_class_interface():
    a = CocycleClass(RP4, 1, a_class(RP4))
    s = sq(1, a)
    assert s.degree == 2 and s.complex is RP4
    beyond = sq(4, s)  # lands above the dimension: zero group
    assert beyond.degree == 6 and beyond.bits == 0
    with pytest.raises(ValueError, match="cocycle"):
        CocycleClass(RP4, 1, 1)  # a single edge is not a cocycle
    with pytest.raises(ValueError, match="skeleton"):
        CocycleClass(RP4, 5, 1)  # no 5-simplices to support a bit


# ------------------------------------------------------------
# Wu and Stiefel-Whitney classes
# ------------------------------------------------------------

def wu_roundtrip(K, ctx, v, k):
    dual = ctx.basis(K.dim - k)
    for x in dual.representatives:
        lhs = cup(K, k, K.dim - k, v.bits, x).bit_count() & 1
        rhs = sq_bits(K, k, K.dim - k, x).bit_count() & 1
        assert lhs == rhs


def test_wu_classes_sphere_vanish():
    K = sphere(4)
    v1, v2 = wu_classes(K)
    assert v1.bits == 0 and v2.bits == 0


def test_wu_classes_rp4():
    ctx = Mod2Context(RP4)
    v1, v2 = wu_classes(ctx)
    a = a_class(RP4)
    b1 = Mod2CohomologyBasis(RP4, 1)
    b2 = Mod2CohomologyBasis(RP4, 2)
    assert b1.class_coordinates(v1.bits) == (1,)
    assert b2.class_coordinates(v2.bits) == \
        b2.class_coordinates(cup(RP4, 1, 1, a, a))
    wu_roundtrip(RP4, ctx, v1, 1)
    wu_roundtrip(RP4, ctx, v2, 2)


def test_wu_classes_small_cases():
    v1, v2 = wu_classes(RP2)
    b1 = Mod2CohomologyBasis(RP2, 1)
    assert b1.class_coordinates(v1.bits) == (1,)
    assert Mod2CohomologyBasis(RP2, 2).class_coordinates(v2.bits) == (0,)
    for K in (RP3, TORUS, S3S1):
        v1, v2 = wu_classes(K)
        ctx = Mod2Context(K)
        assert ctx.basis(1).is_coboundary(v1.bits), K.dim
        wu_roundtrip(K, ctx, v1, 1)
        wu_roundtrip(K, ctx, v2, 2)


def test_wu_rejects_degenerate_pairing():
    disk = FacetComplex([[0, 1, 2]])
    with pytest.raises(ValueError, match="degenerate"):
        wu_classes(disk)


def test_stiefel_whitney_values():
    w1, w2 = stiefel_whitney(RP4)
    assert Mod2CohomologyBasis(RP4, 1).class_coordinates(w1.bits) == (1,)
    assert Mod2CohomologyBasis(RP4, 2).class_coordinates(w2.bits) == (0,)
    w1, w2 = stiefel_whitney(RP2)
    a = a_class(RP2)
    b2 = Mod2CohomologyBasis(RP2, 2)
    assert Mod2CohomologyBasis(RP2, 1).class_coordinates(w1.bits) == (1,)
    assert b2.class_coordinates(w2.bits) == \
        b2.class_coordinates(cup(RP2, 1, 1, a, a))
    for K in (RP3, TORUS, S3S1):
        w1, w2 = stiefel_whitney(K)
        ctx = Mod2Context(K)
        assert ctx.basis(1).is_coboundary(w1.bits)
        assert ctx.basis(2).is_coboundary(w2.bits)


def test_pin_minus_obstruction_values():
    # RP^4: w1^2 + w2 = a^2, not a coboundary
    res = pin_minus_obstruction(RP4)
    assert not res.is_zero and res.witness is None
    b2 = Mod2CohomologyBasis(RP4, 2)
    assert b2.class_coordinates(res.representative.bits) == (1,)
    # RP^2: w1^2 + w2 = a^2 + a^2 = 0 with a checked witness
    res = pin_minus_obstruction(RP2)
    assert res.is_zero
    assert mod2_apply(coboundary_mod2(RP2, 1), res.witness) == \
        res.representative.bits
    for K in (RP3, TORUS, S3S1):
        res = pin_minus_obstruction(K)
        assert res.is_zero
        assert mod2_apply(coboundary_mod2(K, 1), res.witness) == \
            res.representative.bits
