"""The conjugation action on cones and its orbit machinery.

Convention, fixed once and property-tested: the cone g . P answers
sign(w) = sign_P(g^-1 w g), so conj_cone(conj_cone(c, g), h) equals
conj_cone(c, h g).  Conjugates simplify to canonical descriptors whenever the
family algebra is known (abelian contexts, Klein parity, lex components);
everything else stays an honest wrapper compared on balls.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContextMismatchError, OrbitUndecidedError
from .cones import (
    Cone, ConjugateCone, KleinCone, LexCone, QuadSlopeCone, RestrictionCone,
    SlopeCone, ZSignCone, detect_slope, restrict_cone, slope_cone,
)
from .words import (
    DirectProductCtx, GroupCtx, SemidirectCtx, ShortExactSeq, Word, ZPowCtx,
)


def conj_cone(c: Cone, g: Word) -> Cone:
    """The cone g . P; simplified to an exact descriptor when computable."""
    ctx = c.ctx
    g = ctx.normalize(g)
    if g.is_identity():
        return c
    if isinstance(ctx, ZPowCtx):
        return c  # abelian: the action is trivial
    if isinstance(c, KleinCone):
        _, a = ctx.yx_exponents(g)
        return KleinCone(ctx, c.ex, c.ey if a % 2 == 0 else -c.ey)
    if isinstance(c, LexCone):
        return LexCone(c.ses,
                       kernel_conj_cone(c.ses, c.kernel_cone, g),
                       conj_cone(c.quotient_cone, c.ses.project(g)))
    if isinstance(c, ConjugateCone):
        return conj_cone(c.base, ctx.mul(g, c.by))
    return ConjugateCone(c, g)


@dataclass(frozen=True)
class KernelActionCone(Cone):
    """Kernel cone transported by the automorphism k -> g^-1 k g of a normal kernel."""

    ses: ShortExactSeq
    base: Cone
    g: Word

    @property
    def ctx(self) -> GroupCtx:
        return self.ses.kernel

    def _sign(self, w: Word) -> int:
        total = self.ses.total
        moved = total.mul(total.mul(total.inv(self.g), self.ses.inject(w)), self.g)
        return self.base.sign(self.ses.kernel_pull(moved))

    def descriptor(self):
        return {"kind": "kernel_action", "g": self.g.pairs(),
                "base": self.base.descriptor()}


def kernel_conj_cone(ses: ShortExactSeq, kcone: Cone, g: Word) -> Cone:
    """Transport a kernel cone along conjugation by g in the total group."""
    g = ses.total.normalize(g)
    if g.is_identity():
        return kcone
    total = ses.total
    if isinstance(total, SemidirectCtx) and isinstance(kcone, SlopeCone):
        _, k = total.parts(g)
        if k == 0:
            return kcone  # kernel is abelian; inner part acts trivially
        m = total.matrix.power(-k)
        a1, a2 = kcone.a
        new_a = (m.a * a1 + m.c * a2, m.b * a1 + m.d * a2)  # transpose action
        variant = kcone.variant
        if m.det() < 0:
            variant = variant[0] + ("-" if variant[1] == "+" else "+")
        return slope_cone(new_a, variant, ctx=kcone.ctx)
    if isinstance(total, DirectProductCtx):
        g0 = ses.kernel_part(g)
        return conj_cone(kcone, g0)
    return KernelActionCone(ses, kcone, g)


def diag_conj(pair: tuple[Cone, Cone], g: Word, ses: ShortExactSeq) -> tuple[Cone, Cone]:
    """The diagonal action g . (P_K, P_H) on kernel/quotient cone pairs."""
    pk, ph = pair
    return (kernel_conj_cone(ses, pk, g), conj_cone(ph, ses.project(g)))


# -- equality ------------------------------------------------------------------

_EXACT_TYPES = (SlopeCone, QuadSlopeCone, KleinCone, ZSignCone)


@dataclass(frozen=True)
class EqualityResult:
    verdict: str  # "equal" | "distinct" | "unknown"
    witness: Word | None = None
    radius: int | None = None

    def to_dict(self):
        return {"verdict": self.verdict,
                "witness": self.witness.pairs() if self.witness else None,
                "radius": self.radius}


def _exact_comparable(c: Cone) -> bool:
    if isinstance(c, _EXACT_TYPES):
        return True
    if isinstance(c, LexCone):
        return (_exact_comparable(c.kernel_cone)
                and _exact_comparable(c.quotient_cone))
    return False


def _distinct_witness(c1: Cone, c2: Cone) -> Word | None:
    """Some word the two (structurally distinct) canonical cones sign apart."""
    if isinstance(c1, SlopeCone) and isinstance(c2, SlopeCone):
        d1 = c1.slope().vec
        d2 = c2.slope().vec
        cands = [d1, d2, tuple(x + y for x, y in zip(d1, d2)),
                 tuple(x - y for x, y in zip(d1, d2))]
        for v in cands:
            for w in (v, tuple(-x for x in v)):
                if w == (0, 0):
                    continue
                word = c1.ctx.from_vector(w)
                if c1.sign(word) != c2.sign(word):
                    return word
        return None
    if isinstance(c1, LexCone) and isinstance(c2, LexCone) and c1.ses == c2.ses:
        kw = _first_ball_difference(c1.kernel_cone, c2.kernel_cone, 2)
        kw = kw or _distinct_witness(c1.kernel_cone, c2.kernel_cone)
        if kw is not None:
            return c1.ses.inject(kw)
        qw = _first_ball_difference(c1.quotient_cone, c2.quotient_cone, 2)
        qw = qw or _distinct_witness(c1.quotient_cone, c2.quotient_cone)
        if qw is not None:
            return c1.ses.section(qw)
        return None
    return _first_ball_difference(c1, c2, 4)


def _first_ball_difference(c1: Cone, c2: Cone, r: int) -> Word | None:
    for w in c1.ctx.ball(r):
        if not w.is_identity() and c1.sign(w) != c2.sign(w):
            return w
    return None


def cone_equal(c1: Cone, c2: Cone, strategy: str = "exact",
               radius: int = 4) -> EqualityResult:
    """Decide cone equality.

    "exact" decides canonical descriptors (slope, Klein, Z-sign and lex
    cones built from them); "ball" compares signs on B_radius and answers
    unknown when descriptors are not canonically comparable.
    """
    if c1.ctx != c2.ctx:
        raise ContextMismatchError("cones live on different contexts")
    if strategy == "exact":
        s1, s2 = c1.simplified(), c2.simplified()
        if not (_exact_comparable(s1) and _exact_comparable(s2)):
            return EqualityResult("unknown", radius=0)
        if s1 == s2:
            return EqualityResult("equal")
        return EqualityResult("distinct", witness=_distinct_witness(s1, s2))
    if strategy == "ball":
        w = _first_ball_difference(c1, c2, radius)
        if w is not None:
            return EqualityResult("distinct", witness=w, radius=radius)
        if c1.simplified() == c2.simplified():
            return EqualityResult("equal", radius=radius)
        return EqualityResult("unknown", radius=radius)
    raise ValueError(f"unknown strategy {strategy!r}")


# -- orbits -------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitReport:
    representatives: tuple[Cone, ...]
    size: object                   # int or "exceeded-bound"
    strategy: str
    radius: int | None
    conjugators: tuple[Word, ...]
    separations: tuple = ()        # (i, j, word) certifying rep i != rep j

    def to_dict(self):
        return {"size": self.size, "strategy": self.strategy,
                "radius": self.radius,
                "conjugators": [g.pairs() for g in self.conjugators],
                "representatives": [c.descriptor() for c in self.representatives],
                "witnesses": [[i, j, w.pairs() if w else None]
                              for i, j, w in self.separations]}


def orbit(c: Cone, conjugators, strategy: str = "exact", radius: int = 4,
          max_size: int = 64) -> OrbitReport:
    """Breadth-first closure of {c} under conjugation, modulo cone_equal."""
    ctx = c.ctx
    gens = []
    for g in conjugators:
        g = ctx.normalize(g)
        for h in (g, ctx.inv(g)):
            if h not in gens and not h.is_identity():
                gens.append(h)
    reps: list[Cone] = [c]
    frontier = [c]
    separations = []

    def close():
        return OrbitReport(tuple(reps), len(reps), strategy, radius,
                           tuple(gens), tuple(separations))

    while frontier:
        nxt = []
        for rep in frontier:
            for g in gens:
                cand = conj_cone(rep, g)
                seen = False
                found = []
                for j, known in enumerate(reps):
                    res = cone_equal(cand, known, strategy, radius)
                    if res.verdict == "equal":
                        seen = True
                        break
                    if res.verdict == "unknown":
                        raise OrbitUndecidedError(
                            "cone equality undecided during orbit closure",
                            partial=OrbitReport(tuple(reps), "undecided",
                                                strategy, radius, tuple(gens),
                                                tuple(separations)))
                    found.append((len(reps), j, res.witness))
                if seen:
                    continue
                reps.append(cand)
                separations.extend(found)
                nxt.append(cand)
                if len(reps) > max_size:
                    return OrbitReport(tuple(reps[:max_size]), "exceeded-bound",
                                       strategy, radius, tuple(gens),
                                       tuple(separations))
        frontier = nxt
    return close()


# -- equivariant maps ------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantConeMap:
    """theta(P) = value for every P."""

    value: Cone

    def apply(self, cone: Cone) -> Cone:
        return self.value

    def descriptor(self):
        return {"kind": "constant", "value": self.value.descriptor()}


@dataclass(frozen=True)
class EquivarianceReport:
    ok: bool
    witness: tuple | None = None   # (g, sample index, differing word)
    radius: int = 0

    def to_dict(self):
        g, idx, w = self.witness if self.witness else (None, None, None)
        return {"ok": self.ok, "radius": self.radius,
                "witness": None if not self.witness else
                {"conjugator": g.pairs(), "sample": idx, "word": w.pairs()}}


def equivariance_check(theta, ses: ShortExactSeq, samples, r: int = 4,
                       direction: str = "kernel_to_quotient") -> EquivarianceReport:
    """Check theta(g . P) agrees with g . theta(P) on B_r for each sample.

    With the default direction theta maps kernel cones to quotient cones and
    samples are (g, kernel cone) pairs, g in the total group; the reverse
    direction swaps the two actions.
    """
    if direction not in ("kernel_to_quotient", "quotient_to_kernel"):
        raise ValueError(f"unknown direction {direction!r}")
    for idx, (g, cone) in enumerate(samples):
        if direction == "kernel_to_quotient":
            left = theta.apply(kernel_conj_cone(ses, cone, g))
            right = conj_cone(theta.apply(cone), ses.project(g))
        else:
            left = theta.apply(conj_cone(cone, ses.project(g)))
            right = kernel_conj_cone(ses, theta.apply(cone), g)
        res = cone_equal(left, right, "ball", r)
        if res.verdict == "distinct":
            return EquivarianceReport(False, (g, idx, res.witness), r)
    return EquivarianceReport(True, None, r)


# -- restricted orbit sampling -----------------------------------------------------------

@dataclass(frozen=True)
class RestrictedSample:
    conjugator: Word
    cone: RestrictionCone
    verified: bool                # simplified descriptor agreed on the ball
    detection: object             # DetectResult

    def to_dict(self):
        return {"conjugator": self.conjugator.pairs(),
                "cone": self.cone.descriptor(),
                "verified": self.verified,
                "detection": self.detection.to_dict()}


def restricted_orbit_sample(c: Cone, embedding, conjugators, k: int,
                            verify_radius: int = 4,
                            detect_radius: int = 8) -> list[RestrictedSample]:
    """Distinct restrictions of conjugates of c along words over the conjugators.

    Each restriction that simplifies to a classified descriptor is verified
    against the unsimplified oracle on B_verify_radius before its slope is
    reported; deduplication uses the exact slope and variant when available,
    otherwise the scanned sector.
    """
    ctx = c.ctx
    words = ctx.ball(k, gens=tuple(ctx.normalize(g) for g in conjugators))
    out: list[RestrictedSample] = []
    seen = set()
    for g in words:
        rc = restrict_cone(conj_cone(c, g), embedding)
        simp = rc.simplified()
        verified = True
        if simp is not rc and simp != rc:
            verified = _first_ball_difference(rc, simp, verify_radius) is None
        target = simp if verified else rc
        det = detect_slope(target, detect_radius)
        if det.exact:
            key = ("exact", det.slope, det.variant)
        else:
            key = ("sector", det.sector)
        if key in seen:
            continue
        seen.add(key)
        out.append(RestrictedSample(g, rc, verified, det))
    return out
