import random

import pytest

from leftorder.cones import (
    Cone, KleinCone, check_cone_axioms_on_ball, cyclic_embedding,
    detect_slope, dynamical_cone, klein_cones, lex_cone, quad_slope_cone,
    restrict_cone, ses_kernel_embedding, slope_cone, z_cone,
)
from leftorder.errors import (
    InvalidConeError, InvalidEmbeddingError, InvalidSlopeError, NoSignError,
    WrongConstructorError,
)
from leftorder.surd import Mat2, mat2, quad, rational, sign_int_surd, sqrt_of
from leftorder.words import (
    DirectProductCtx, FreeCtx, KleinCtx, SemidirectCtx, ZPowCtx,
    direct_product_ses, semidirect_ses,
)

Z2 = ZPowCtx(2)
Z1 = ZPowCtx(1)
KLEIN = KleinCtx()
F2 = FreeCtx(2)
SOL = SemidirectCtx(Mat2(2, 1, 1, 1))
SOL_SES = semidirect_ses(SOL)
ZXF2 = DirectProductCtx((ZPowCtx(1, ("z",)), FreeCtx(2)))
ZXF2_SES = direct_product_ses(ZXF2, kernel_factor=0)


def vec(m, n):
    return Z2.from_vector((m, n))


# -- slope cones ---------------------------------------------------------------

def test_slope_cone_strict_halfplane():
    c = slope_cone((1, 0), "++")
    assert c.sign(vec(1, -5)) == 1  # a1 m + a2 n = 1 > 0


def test_slope_cone_on_line_excluded_variant():
    # a = (1,-1): (-1,-1) lies on the line; (1,1) = c(-1,-1) forces c = -1 < 0
    c = slope_cone((1, -1), "++")
    assert c.sign(vec(-1, -1)) == -1
    assert slope_cone((1, -1), "+-").sign(vec(-1, -1)) == 1


def test_slope_cone_on_line_vertical():
    # a = (0,1): (5,0) is on the line, (-1,0) = c(5,0) gives c = -1/5 < 0
    c = slope_cone((0, 1), "++")
    assert c.sign(vec(5, 0)) == -1
    assert slope_cone((0, 1), "+-").sign(vec(5, 0)) == 1


def test_slope_cone_canonicalization():
    assert slope_cone((1, 1), "++").a == (1, 1)
    assert slope_cone((2, 2), "+-") == slope_cone((1, 1), "+-")
    # negating a flips both variant characters and keeps the same set
    c1, c2 = slope_cone((-1, 2), "++"), slope_cone((1, -2), "--")
    assert c1 == c2
    rng = random.Random(0)
    for _ in range(200):
        m, n = rng.randint(-6, 6), rng.randint(-6, 6)
        if (m, n) == (0, 0):
            continue
        for v in ("++", "+-", "-+", "--"):
            lhs = slope_cone((3, -5), v).sign(vec(m, n))
            rhs = slope_cone((-3, 5), v).sign(vec(m, n))
            assert lhs == -rhs  # opposite a with same variant is the reverse cone


def test_slope_cone_rejects_zero():
    with pytest.raises(InvalidSlopeError):
        slope_cone((0, 0), "++")


def test_identity_has_no_sign():
    with pytest.raises(NoSignError):
        slope_cone((1, 0), "++").sign(Z2.identity())


def test_quad_slope_cone():
    c = quad_slope_cone((rational(1), sqrt_of(2)), "+")
    assert c.sign(vec(1, 1)) == 1   # 1 + sqrt(2) > 0
    assert c.sign(vec(-2, 1)) == -1  # sqrt(2) - 2 < 0
    assert quad_slope_cone((rational(1), sqrt_of(2)), "-").sign(vec(1, 1)) == -1


def test_quad_slope_rejects_rational_ratio():
    with pytest.raises(WrongConstructorError):
        quad_slope_cone((rational(2), rational(3)), "+")
    with pytest.raises(WrongConstructorError):
        quad_slope_cone((sqrt_of(2), sqrt_of(2)), "+")
    with pytest.raises(WrongConstructorError):
        quad_slope_cone((rational(1), rational(0)), "+")


def test_z_cone():
    pos = z_cone()
    assert pos.sign(Z1.from_vector((3,))) == 1
    assert pos.sign(Z1.from_vector((-1,))) == -1
    assert z_cone(positive=False).sign(Z1.from_vector((3,))) == -1


# -- Klein cones -----------------------------------------------------------------

def test_klein_cone_sign_rule():
    c = KleinCone(KLEIN, 1, 1)
    assert c.sign(KLEIN.word([("y", -3), ("x", 1)])) == 1  # x-exponent decides
    assert c.sign(KLEIN.word([("y", 2)])) == 1
    assert KleinCone(KLEIN, 1, -1).sign(KLEIN.word([("y", 2)])) == -1


def test_klein_cones_four_and_distinct():
    cones = klein_cones(KLEIN)
    assert len(cones) == 4
    x, y = KLEIN.gens()
    for i, c1 in enumerate(cones):
        for c2 in cones[i + 1:]:
            assert c1.sign(x) != c2.sign(x) or c1.sign(y) != c2.sign(y)
    # (+,+) vs (+,-) differ on y; (+,+) vs (-,+) differ on x
    assert cones[0].sign(y) != cones[1].sign(y)
    assert cones[0].sign(x) != cones[2].sign(x)


# -- lex cones ---------------------------------------------------------------------

def test_lex_sol_examples():
    c = lex_cone(SOL_SES, slope_cone((1, 0), "++", SOL_SES.kernel), z_cone(ctx=SOL_SES.quotient))
    t = SOL.word([("t", 1)])
    assert c.sign(t) == 1                          # quotient decides
    assert c.sign(SOL.from_parts((0, 3), 0)) == 1  # on-line kernel tie, c > 0
    assert c.sign(SOL.from_parts((0, -3), 0)) == -1


def test_lex_direct_product_kernel_part():
    c = lex_cone(ZXF2_SES, z_cone(ctx=ZXF2_SES.kernel), dynamical_cone(ZXF2_SES.quotient))
    w = ZXF2.word([("z", 1)])
    assert c.sign(w) == 1


def test_lex_dichotomy_unfolds():
    rng = random.Random(1)
    kc = slope_cone((1, 0), "++", SOL_SES.kernel)
    qc = z_cone(ctx=SOL_SES.quotient)
    c = lex_cone(SOL_SES, kc, qc)
    for _ in range(300):
        v = (rng.randint(-4, 4), rng.randint(-4, 4))
        k = rng.randint(-3, 3)
        w = SOL.from_parts(v, k)
        if w.is_identity():
            continue
        h = SOL_SES.project(w)
        if not h.is_identity():
            assert c.sign(w) == qc.sign(h)
        else:
            assert c.sign(w) == kc.sign(SOL_SES.kernel_pull(w))


def test_lex_cone_context_check():
    with pytest.raises(InvalidConeError):
        lex_cone(SOL_SES, z_cone(), z_cone(ctx=SOL_SES.quotient))


# -- dynamical cone ------------------------------------------------------------------

def test_dynamical_generator_signs():
    c = dynamical_cone()
    a, b = c.ctx.gens()
    assert c.sign(a) == 1        # translation by 2 moves sqrt(2) up
    assert c.sign(a.inv()) == -1
    assert c.sign(b) == -c.sign(b.inv())


def test_dynamical_axioms_small_ball():
    c = dynamical_cone()
    assert check_cone_axioms_on_ball(c, 3).ok


def test_dynamical_word_fixing_first_basepoint():
    # a b^-1 a has matrix -[[3,4],[2,3]]; the Mobius map fixes sqrt(2),
    # so the sign comes from the winding or the second basepoint
    c = dynamical_cone()
    w = c.ctx.word([("a", 1), ("b", -1), ("a", 1)])
    from leftorder.surd import mobius_apply
    assert mobius_apply(mat2([[3, 4], [2, 3]]), sqrt_of(2)) == sqrt_of(2)
    assert c.sign(w) in (1, -1)
    assert c.sign(w) == -c.sign(w.inv())


def test_dynamical_totality_ball6():
    c = dynamical_cone()
    for w in c.ctx.ball(6):
        if not w.is_identity():
            assert c.sign(w) in (1, -1)


def test_dynamical_unfaithful_images_guarded():
    # both generators mapped to the same matrix: a b^-1 acts trivially, and
    # the insufficient-basepoints guard must fire rather than invent a sign
    from leftorder.cones import DynamicalCone
    from leftorder.errors import InsufficientBasepointsError
    m = mat2([[1, 2], [0, 1]])
    c = DynamicalCone(F2, (m, m), (sqrt_of(2), sqrt_of(3)))
    w = F2.word([("a", 1), ("b", -1)])
    with pytest.raises(InsufficientBasepointsError):
        c.sign(w)
    with pytest.raises(InsufficientBasepointsError):
        c.sign_of_product([F2.word([("a", 1)]), F2.word([("b", -1)])])


def test_dynamical_sign_of_product_matches_mul():
    c = dynamical_cone()
    rng = random.Random(2)
    for _ in range(200):
        u = _rand_free(rng)
        v = _rand_free(rng)
        uv = c.ctx.mul(u, v)
        if uv.is_identity():
            with pytest.raises(NoSignError):
                c.sign_of_product([u, v])
        else:
            assert c.sign_of_product([u, v]) == c.sign(uv)


def _rand_free(rng, n=5):
    return F2.word([(rng.randrange(2), rng.choice([-2, -1, 1, 2]))
                    for _ in range(rng.randint(0, n))])


# -- conjugate / restriction wrappers --------------------------------------------------

def test_restrict_lex_to_kernel_equals_kernel_cone():
    kc = slope_cone((1, 0), "++", SOL_SES.kernel)
    c = lex_cone(SOL_SES, kc, z_cone(ctx=SOL_SES.quotient))
    rc = restrict_cone(c, ses_kernel_embedding(SOL_SES))
    for w in SOL_SES.kernel.ball(4):
        if not w.is_identity():
            assert rc.sign(w) == kc.sign(w)
    assert rc.simplified() == kc


def test_restrict_dynamical_to_cyclic():
    c = dynamical_cone()
    a = c.ctx.gens()[0]
    rc = restrict_cone(c, cyclic_embedding(c.ctx, a))
    sub = rc.ctx
    for n in (-3, -1, 1, 2, 5):
        assert rc.sign(sub.from_vector((n,))) == (1 if n > 0 else -1)


def test_bad_embedding_rejected():
    from leftorder.cones import Embedding
    sub = ZPowCtx(1, ("u",))

    def not_hom(w):
        (k,) = sub.vector(w)
        return vec(k, k * k)  # quadratic, breaks multiplicativity

    with pytest.raises(InvalidEmbeddingError):
        restrict_cone(slope_cone((1, 0), "++"), Embedding(sub, Z2, not_hom))


# -- axiom checking ---------------------------------------------------------------------

def test_axioms_pass_slope_and_klein():
    for v in ("++", "+-", "-+", "--"):
        assert check_cone_axioms_on_ball(slope_cone((2, 3), v), 3).ok
    for c in klein_cones(KLEIN):
        assert check_cone_axioms_on_ball(c, 3).ok


def test_axioms_every_concrete_family_r5():
    sol_kernel = slope_cone((1, 0), "++", SOL_SES.kernel)
    lex_sol = lex_cone(SOL_SES, sol_kernel, z_cone(ctx=SOL_SES.quotient))
    cones = [
        slope_cone((1, -1), "+-"),
        slope_cone((3, 2), "--"),
        quad_slope_cone((rational(1), sqrt_of(2)), "+"),
        z_cone(),
        KleinCone(KLEIN, -1, 1),
        lex_sol,
        lex_cone(ZXF2_SES, z_cone(ctx=ZXF2_SES.kernel),
                 dynamical_cone(ZXF2_SES.quotient)),
        dynamical_cone(),
        restrict_cone(lex_sol, ses_kernel_embedding(SOL_SES)),
    ]
    for c in cones:
        rep = check_cone_axioms_on_ball(c, 5)
        assert rep.ok, (c, rep)


def test_axioms_catch_flipped_oracle():
    class Tampered(Cone):
        def __init__(self, base, bad):
            self.ctx = base.ctx
            self.base = base
            self.bad = bad

        def _sign(self, w):
            s = self.base.sign(w)
            return -s if w == self.bad else s

    bad = vec(1, 0)
    rep = check_cone_axioms_on_ball(Tampered(slope_cone((1, 0), "++"), bad), 2)
    assert not rep.ok
    assert rep.kind in ("antisymmetry", "closure")
    assert bad in rep.words


# -- slope detection -----------------------------------------------------------------------

def test_detect_slope_readback():
    res = detect_slope(slope_cone((2, 3), "+-"))
    assert res.exact and res.variant == "+-"
    assert res.slope.vec == (3, -2)  # canonical form of (-3, 2)


def test_detect_slope_restriction_of_sol_lex():
    kc = slope_cone((1, 0), "++", SOL_SES.kernel)
    c = lex_cone(SOL_SES, kc, z_cone(ctx=SOL_SES.quotient))
    rc = restrict_cone(c, ses_kernel_embedding(SOL_SES))
    res = detect_slope(rc)
    assert res.exact and res.slope.vec == (0, 1) and res.variant == "++"


def test_detect_slope_quad_sector():
    c = quad_slope_cone((rational(1), sqrt_of(2)), "+")
    res = detect_slope(c, r=5)
    assert res.exact and res.slope.direction is not None
    u, v = res.sector
    # boundary direction d = (-sqrt2, 1) lies strictly between u and v:
    # cross(u, d) = u_m + u_n sqrt2 > 0 and cross(d, v) = -(v_m + v_n sqrt2) > 0
    assert sign_int_surd(u[0], u[1], 2) > 0
    assert sign_int_surd(v[0], v[1], 2) < 0
    assert u[0] * v[1] - u[1] * v[0] > 0  # u angularly before v


def test_detect_slope_opaque_sector_honest():
    # an irrational cone seen as an opaque oracle: sector, not a guess
    base = quad_slope_cone((rational(1), sqrt_of(2)), "+")

    class Opaque(Cone):
        ctx = Z2

        def _sign(self, w):
            return base.sign(w)

    res = detect_slope(Opaque(), r=5)
    assert not res.exact and res.sector is not None


def test_detect_slope_rejects_non_z2():
    with pytest.raises(InvalidConeError):
        detect_slope(dynamical_cone(), r=3)
