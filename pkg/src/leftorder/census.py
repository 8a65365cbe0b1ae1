"""Brute-force enumeration of ball-consistent partial cones.

A ball cone is a sign assignment on the nonidentity elements of a word ball
satisfying antisymmetry and positive closure for every in-ball triple.  The
enumerator backtracks over elements in shortlex order with unit propagation
(assigning w forces w^-1; a positive pair forces its in-ball product), so its
output is the complete, deterministic list of locally consistent assignments.
It is the independent oracle the classified cone families are checked against.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import ResourceLimitError
from .words import GroupCtx, Word

CENSUS_DOMAIN_CAP = 2000


@dataclass(frozen=True)
class BallCone:
    """Finite sign assignment on B_r minus the identity."""

    ctx: GroupCtx
    radius: int
    domain: tuple[Word, ...]          # shortlex order, identity excluded
    signs: tuple[int, ...]            # aligned with domain

    def sign_of(self, w: Word) -> int:
        return self.signs[self.domain.index(w)]

    def as_dict(self):
        return dict(zip(self.domain, self.signs))

    def serial(self) -> list:
        return [[w.pairs(), s] for w, s in zip(self.domain, self.signs)]


def _closure_triples(domain):
    """(u, v, uv) with all three in the domain, indexed per touched element."""
    dset = set(domain)
    ctx = domain[0].ctx
    by_word = {w: [] for w in domain}
    for u in domain:
        for v in domain:
            p = ctx.mul(u, v)
            if p in dset:
                t = (u, v, p)
                for w in {u, v, p}:
                    by_word[w].append(t)
    return by_word


class _Search:
    """Shared propagation engine for enumeration and extension checking."""

    def __init__(self, domain):
        self.domain = domain
        self.ctx = domain[0].ctx if domain else None
        self.inv = {w: w.ctx.inv(w) for w in domain}
        self.by_word = _closure_triples(domain)
        self.sign: dict[Word, int] = {}

    def assign(self, w: Word, s: int) -> bool:
        if w in self.sign:
            return self.sign[w] == s
        self.sign[w] = s
        return self._propagate([w])

    def _propagate(self, queue) -> bool:
        sign = self.sign
        while queue:
            w = queue.pop()
            s = sign[w]
            iw = self.inv[w]
            si = sign.get(iw)
            if si is None:
                sign[iw] = -s
                queue.append(iw)
            elif si != -s:
                return False
            for (u, v, p) in self.by_word[w]:
                su, sv, sp = sign.get(u), sign.get(v), sign.get(p)
                if su == 1 and sv == 1:
                    if sp is None:
                        sign[p] = 1
                        queue.append(p)
                    elif sp == -1:
                        return False
                elif su == 1 and sp == -1 and sv is None:
                    sign[v] = -1
                    queue.append(v)
                elif sv == 1 and sp == -1 and su is None:
                    sign[u] = -1
                    queue.append(u)
        return True

    def run(self, collect=None) -> bool:
        """DFS in shortlex variable order, + branch first.

        With ``collect`` set, gathers every solution and returns True;
        otherwise returns whether at least one completion exists.
        """
        return self._solve(0, collect)

    def _solve(self, i: int, collect) -> bool:
        domain = self.domain
        while i < len(domain) and domain[i] in self.sign:
            i += 1
        if i == len(domain):
            if collect is None:
                return True
            collect.append(dict(self.sign))
            return True
        w = domain[i]
        found = False
        for s in (1, -1):
            saved = dict(self.sign)
            self.sign[w] = s
            if self._propagate([w]) and self._solve(i + 1, collect):
                if collect is None:
                    return True
                found = True
            self.sign = saved
        return found


def _domain(ctx: GroupCtx, r: int, gens, cap: int):
    ball = ctx.ball(r, gens=gens)
    domain = [w for w in ball if not w.is_identity()]
    if len(domain) > cap:
        raise ResourceLimitError(
            f"census domain has {len(domain)} elements, cap is {cap}")
    return domain


def enumerate_ball_cones(ctx: GroupCtx, r: int, gens=None,
                         cap: int = CENSUS_DOMAIN_CAP) -> list[BallCone]:
    """All ball cones on B_r, in canonical order (shortlex on sign vectors)."""
    domain = _domain(ctx, r, gens, cap)
    if not domain:
        return [BallCone(ctx, r, (), ())]
    search = _Search(domain)
    found: list[dict] = []
    search.run(collect=found)
    cones = [BallCone(ctx, r, tuple(domain), tuple(sol[w] for w in domain))
             for sol in found]
    cones.sort(key=lambda c: tuple(0 if s == 1 else 1 for s in c.signs))
    return cones


def extendable_filter(cones: list[BallCone], target_radius: int, gens=None,
                      cap: int = CENSUS_DOMAIN_CAP) -> list[BallCone]:
    """Keep the ball cones that extend to a consistent assignment on B_target."""
    out = []
    for cone in cones:
        if target_radius < cone.radius:
            raise ValueError("target radius must not shrink the ball")
        if target_radius == cone.radius:
            out.append(cone)
            continue
        domain = _domain(cone.ctx, target_radius, gens, cap)
        search = _Search(domain)
        seeded = True
        for w, s in zip(cone.domain, cone.signs):
            if not search.assign(w, s):
                seeded = False
                break
        if seeded and search.run():
            out.append(cone)
    return out


def census_digest(cones: list[BallCone]) -> dict:
    """Count plus a hash of the canonical serialization, for regression pinning."""
    payload = json.dumps([c.serial() for c in cones], sort_keys=True,
                         separators=(",", ":"))
    return {"count": len(cones),
            "sha256": hashlib.sha256(payload.encode()).hexdigest()}


def restriction_ball_cone(cone_sign, ctx: GroupCtx, r: int, gens=None) -> BallCone:
    """Restrict a genuine cone's sign oracle to B_r as a BallCone."""
    domain = tuple(w for w in ctx.ball(r, gens=gens) if not w.is_identity())
    return BallCone(ctx, r, domain, tuple(cone_sign(w) for w in domain))
