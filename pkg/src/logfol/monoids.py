"""Finitely generated submonoids of Z^k: membership, Grothendieck group, saturation.

A monoid is stored by its ambient rank and a tuple of integer generators.
Everything is decided by resource-bounded exact search, which is enough for
the desk-scale inputs this package targets; the bounds are explicit arguments
and overrunning them raises SaturationBoundError rather than guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg


class SaturationBoundError(RuntimeError):
    """Raised when a bounded enumeration cannot certify an answer."""


def _as_vec(x, k):
    v = tuple(int(c) for c in x)
    if len(v) != k:
        raise ValueError("vector %r does not have ambient rank %d" % (x, k))
    return v


@dataclass(frozen=True)
class FGMonoid:
    """Submonoid of Z^ambient_rank generated by `generators`."""

    ambient_rank: int
    generators: tuple

    def __post_init__(self):
        if self.ambient_rank < 1:
            raise ValueError("ambient rank must be positive")
        gens = tuple(_as_vec(g, self.ambient_rank) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def free(cls, r):
        """N^r inside Z^r."""
        gens = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        return cls(r, gens)

    def nonzero_generators(self):
        seen = []
        for g in self.generators:
            if any(g) and g not in seen:
                seen.append(g)
        return seen


def contains(m: FGMonoid, x, budget=48):
    """Nonnegative-integer combination witness for x, or None.

    Depth-first search over coefficient vectors in nondecreasing generator
    order, with a step budget. A None result with a tight budget only means
    "not found within budget"; callers that need certainty either keep inputs
    desk-scale or check the rational cone first.
    """
    k = m.ambient_rank
    x = _as_vec(x, k)
    gens = m.nonzero_generators()
    if not any(x):
        return ()
    if not gens:
        return None
    ngen = len(gens)
    # coordinates where no generator can push the value back toward zero
    can_drop = [any(g[c] > 0 for g in gens) for c in range(k)]
    can_raise = [any(g[c] < 0 for g in gens) for c in range(k)]
    fail = {}

    def hopeless(vec):
        for c in range(k):
            if vec[c] > 0 and not can_drop[c]:
                return True
            if vec[c] < 0 and not can_raise[c]:
                return True
        return False

    def search(vec, idx, steps):
        if not any(vec):
            return []
        if steps <= 0 or idx >= ngen or hopeless(vec):
            return None
        key = (vec, idx)
        if fail.get(key, -1) >= steps:
            return None
        for i in range(idx, ngen):
            g = gens[i]
            y = tuple(a - b for a, b in zip(vec, g))
            sub = search(y, i, steps - 1)
            if sub is not None:
                return [i] + sub
        fail[key] = steps
        return None

    path = search(x, 0, budget)
    if path is None:
        return None
    coeffs = [0] * ngen
    for i in path:
        coeffs[i] += 1
    return tuple(coeffs)


def grothendieck_group(m: FGMonoid):
    """Hermite basis (tuple of rows) of the group of differences of m."""
    return tuple(linalg.hermite_normal_form(list(m.generators)))


def in_cone(m: FGMonoid, x):
    """Rational cone membership: x = sum t_i g_i with t_i >= 0 rational.

    Returns the coefficient vector or None.
    """
    gens = m.nonzero_generators()
    if not any(_as_vec(x, m.ambient_rank)):
        return tuple(Fraction(0) for _ in gens)
    if not gens:
        return None
    cols = linalg.transpose(linalg.mat(gens))
    sol = linalg.nonneg_rational_solution(cols, list(x))
    return None if sol is None else tuple(sol)


@dataclass(frozen=True)
class MonoidHom:
    """Monoid map induced by an integer matrix on the ambient lattices.

    The matrix has shape target_rank x source_rank. Construction checks that
    every source generator maps into the target monoid and keeps the
    nonnegative-combination witnesses.
    """

    source: FGMonoid
    target: FGMonoid
    matrix: tuple
    witnesses: tuple = None

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.matrix)
        if len(rows) != self.target.ambient_rank or any(
            len(r) != self.source.ambient_rank for r in rows
        ):
            raise ValueError("matrix shape does not match ambient ranks")
        object.__setattr__(self, "matrix", rows)
        wits = []
        for g in self.source.generators:
            img = self.apply(g)
            w = contains(self.target, img)
            if w is None:
                raise ValueError(
                    "image of generator %r is not visibly in the target monoid" % (g,)
                )
            wits.append((img, w))
        object.__setattr__(self, "witnesses", tuple(wits))

    def apply(self, x):
        x = _as_vec(x, self.source.ambient_rank)
        return tuple(sum(r[j] * x[j] for j in range(len(x))) for r in self.matrix)


def diagonal_hom(r):
    """N -> N^r, 1 |-> (1, ..., 1)."""
    src = FGMonoid.free(1)
    tgt = FGMonoid.free(r)
    return MonoidHom(src, tgt, tuple((1,) for _ in range(r)))


def _box_points(k, box):
    return itertools.product(range(-box, box + 1), repeat=k)


def saturate(m: FGMonoid, box=10, multiple_bound=24, budget=64):
    """Generators of {x in Z^k : n*x in m for some n >= 1}.

    Brute force over lattice points of the rational cone of m inside the box
    [-box, box]^k, then a greedy reduction to a small generating set. Raises
    SaturationBoundError when a certificate does not fit the bounds, instead
    of returning something unverified.
    """
    k = m.ambient_rank
    gens = m.nonzero_generators()
    if not gens:
        return FGMonoid(m.ambient_rank, ())

    candidates = []
    for p in _box_points(k, box):
        if not any(p):
            continue
        if not linalg.in_row_span_q(gens, p):
            continue
        t = in_cone(m, p)
        if t is None:
            continue
        # clear denominators: that multiple of p is an honest member of m
        mult = 1
        for c in t:
            mult = mult * c.denominator // _gcd(mult, c.denominator)
        if mult > multiple_bound:
            raise SaturationBoundError(
                "witness multiple %d for %r exceeds bound %d" % (mult, p, multiple_bound)
            )
        candidates.append(p)

    # greedy reduction, small elements first; kept set always generates the
    # candidates already processed
    candidates.sort(key=lambda v: (sum(abs(c) for c in v), v))
    kept = []
    for p in candidates:
        if kept and contains(FGMonoid(k, tuple(kept)), p, budget=budget) is not None:
            continue
        kept.append(p)

    out = FGMonoid(k, tuple(kept))
    for g in gens:
        if contains(out, g, budget=budget) is None:
            raise SaturationBoundError(
                "box %d too small: generator %r not recovered from the saturation" % (box, g)
            )
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def monoid_equal(a: FGMonoid, b: FGMonoid, budget=64):
    """Equality as submonoids of the common ambient lattice."""
    if a.ambient_rank != b.ambient_rank:
        return False
    return all(contains(b, g, budget=budget) is not None for g in a.nonzero_generators()) and all(
        contains(a, g, budget=budget) is not None for g in b.nonzero_generators()
    )


def is_saturated(m: FGMonoid, box=10, multiple_bound=24, budget=64):
    """True iff m already equals its saturation in the ambient lattice."""
    sat = saturate(m, box=box, multiple_bound=multiple_bound, budget=budget)
    return all(contains(m, g, budget=budget) is not None for g in sat.generators)
