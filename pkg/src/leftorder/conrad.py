"""Conradian certificates, convexity checks and order-homomorphism tests.

All checks are bounded scans over word balls: pass(r) means "no violation up
to radius r", never a proof for the whole group.  Witnesses carry the exact
words involved and re-verify against the cone that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .cones import Cone
from .errors import InvalidHomError
from .words import GroupCtx, Word


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup as generators plus a decidable membership predicate."""

    ctx: GroupCtx
    generators: tuple[Word, ...]
    member: "callable" = field(compare=False)
    label: str = ""


def cyclic_subgroup(ctx: GroupCtx, w: Word, power_bound: int = 64) -> SubgroupSpec:
    """<w> with membership decided against |k| <= power_bound precomputed powers.

    The bound must dominate the ball radius the predicate will be scanned
    over; the default covers every desk-scale radius used here.
    """
    w = ctx.normalize(w)
    powers = {ctx.identity()}
    p = ctx.identity()
    q = ctx.identity()
    for _ in range(power_bound):
        p = ctx.mul(p, w)
        q = ctx.mul(q, ctx.inv(w))
        powers.add(p)
        powers.add(q)

    return SubgroupSpec(ctx, (w,), powers.__contains__, label=f"<{w!r}>")


# -- Conradian check -------------------------------------------------------------

@dataclass(frozen=True)
class ConradianReport:
    passed: bool
    radius: int
    witnesses: tuple[tuple[Word, Word], ...] = ()

    def certify(self, c: Cone) -> bool:
        """A witness (g, h) re-verifies iff g, h > 1 but g^-1 h g^2 is negative."""
        for g, h in self.witnesses:
            ctx = c.ctx
            w = ctx.mul(ctx.mul(ctx.inv(g), h), ctx.mul(g, g))
            if not (c.sign(g) == 1 and c.sign(h) == 1 and c.sign(w) == -1):
                return False
        return bool(self.witnesses)

    def to_dict(self):
        return {"passed": self.passed, "radius": self.radius,
                "witnesses": [[g.pairs(), h.pairs()] for g, h in self.witnesses]}


def conradian_check(c: Cone, r: int, collect_all: bool = False) -> ConradianReport:
    """Scan positive pairs (g, h) in B_r for sign(g^-1 h g^2) != +.

    Uses the exponent-2 form of the Conradian condition, which makes the
    ball check finite.  pass(r) is bounded evidence only.
    """
    ctx = c.ctx
    ball = [w for w in ctx.ball(r) if not w.is_identity()]
    positives = [w for w in ball if c.sign(w) == 1]
    witnesses = []
    for g in positives:
        g_inv = ctx.inv(g)
        g_sq = ctx.mul(g, g)
        for h in positives:
            # g^-1 h g^2 cannot be trivial here: that would force h = g^-1 < 1
            if c.sign_of_product([g_inv, h, g_sq]) != 1:
                witnesses.append((g, h))
                if not collect_all:
                    return ConradianReport(False, r, tuple(witnesses))
    return ConradianReport(not witnesses, r, tuple(witnesses))


# -- convexity check ----------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    radius: int
    witness: tuple[Word, Word, Word] | None = None  # (c1, f, c2)

    def certify(self, c: Cone, subgroup: SubgroupSpec) -> bool:
        if self.witness is None:
            return False
        c1, f, c2 = self.witness
        ctx = c.ctx
        return (subgroup.member(c1) and subgroup.member(c2)
                and not subgroup.member(f)
                and c.sign(ctx.mul(ctx.inv(c1), f)) == 1
                and c.sign(ctx.mul(ctx.inv(f), c2)) == 1)

    def to_dict(self):
        return {"passed": self.passed, "radius": self.radius,
                "witness": None if self.witness is None else
                [w.pairs() for w in self.witness]}


def convexity_check(c: Cone, subgroup: SubgroupSpec, r: int) -> ConvexityReport:
    """Find c1 < f < c2 with c1, c2 in the subgroup but f outside it.

    Scans shortlex triples (c1 outermost, then f, then c2) over B_r, so the
    returned witness is the canonical first one.
    """
    ctx = c.ctx
    ball = ctx.ball(r)
    members = [w for w in ball if subgroup.member(w)]
    outsiders = [w for w in ball if not subgroup.member(w)]
    for c1 in members:
        for f in outsiders:
            step1 = ctx.mul(ctx.inv(c1), f)
            if step1.is_identity() or c.sign(step1) != 1:
                continue
            for c2 in members:
                step2 = ctx.mul(ctx.inv(f), c2)
                if step2.is_identity() or c.sign(step2) != 1:
                    continue
                return ConvexityReport(False, r, (c1, f, c2))
    return ConvexityReport(True, r)


# -- cofinality domination -------------------------------------------------------------

@dataclass(frozen=True)
class CofinalityReport:
    holds: bool
    bound: int
    failed_at: int | None = None

    def to_dict(self):
        return {"holds": self.holds, "bound": self.bound,
                "failed_at": self.failed_at}


def cofinality_witness(c: Cone, u: Word, g: Word, bound: int) -> CofinalityReport:
    """Check u^n < g for every |n| <= bound; first failing exponent wins."""
    ctx = c.ctx
    for n in range(-bound, bound + 1):
        w = ctx.mul(ctx.inv(u ** n), g)
        if w.is_identity() or c.sign(w) != 1:
            return CofinalityReport(False, bound, failed_at=n)
    return CofinalityReport(True, bound)


# -- order homomorphism check ------------------------------------------------------------

@dataclass(frozen=True)
class OrderHomReport:
    passed: bool
    radius: int
    witness: tuple[Word, Word] | None = None

    def to_dict(self):
        return {"passed": self.passed, "radius": self.radius,
                "witness": None if self.witness is None else
                [w.pairs() for w in self.witness]}


def order_hom_check(c: Cone, phi, r: int, spot_pairs: int = 4000) -> OrderHomReport:
    """Check g < h implies phi(g) <= phi(h) on B_r for an integer-valued hom.

    phi is spot-checked for additivity on ball pairs first; a witness is a
    positive comparison the claimed order-preserving map reverses.
    """
    ctx = c.ctx
    ball = ctx.ball(r)
    pairs = [(u, v) for u in ball for v in ball]
    if len(pairs) > spot_pairs:
        rng = Random(0)
        pairs = [pairs[rng.randrange(len(pairs))] for _ in range(spot_pairs)]
    for u, v in pairs:
        if phi(ctx.mul(u, v)) != phi(u) + phi(v):
            raise InvalidHomError(f"phi is not additive at {u!r}, {v!r}")
    values = {w: phi(w) for w in ball}
    for g in ball:
        for h in ball:
            d = ctx.mul(ctx.inv(g), h)
            if d.is_identity() or c.sign(d) != 1:
                continue
            if values[g] > values[h]:
                return OrderHomReport(False, r, (g, h))
    return OrderHomReport(True, r)
