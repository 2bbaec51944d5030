"""Randomized verification of the identities the rest of the code leans on.

Each check draws fresh random instances and evaluates an algebraic identity
exactly; any counterexample is a bug, not noise.  Derivative-heavy identities
are asserted at a reduced order, since every application of a vector field
costs one order of jet validity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import jets, leafcomplex, linalg, logcalc, semistability
from .jets import GermContext, Jet
from .logcalc import LogDerivation, lie_bracket


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    trials: int
    detail: str = ""


# --- random generators ---


def _rand_fraction(rng, span=3):
    return Fraction(rng.randint(-span, span), rng.choice((1, 1, 2, 3)))


def _rand_jet(rng, ctx, terms=3, span=3, unit=False):
    pool = jets.monomials(ctx, ctx.order)
    out = {}
    for e in rng.sample(pool, min(terms, len(pool))):
        c = _rand_fraction(rng, span)
        if c and (not unit or sum(e) > 0):
            out[e] = c
    jet = Jet.make(ctx, out)
    if unit:
        jet = jet + Jet.one(ctx)
    return jet


def _rand_ctx(rng, min_r=1):
    n = rng.choice((2, 3))
    r = rng.randint(min(min_r, n), n)
    return GermContext(n, r, 4)


def _rand_derivation(rng, ctx, terms=2):
    b = tuple(_rand_jet(rng, ctx, terms) for _ in range(ctx.r))
    a = tuple(_rand_jet(rng, ctx, terms) for _ in range(ctx.n - ctx.r))
    return LogDerivation(ctx, b, a)


def _rand_unimodular(rng, n):
    p = linalg.identity(n)
    for _ in range(2 * n):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = Fraction(rng.randint(-2, 2))
        for k in range(n):
            p[i][k] += c * p[j][k]
    return p


_BASE_STRUCTURES = {
    # [e0, e1] = e1
    "solvable2": ((((0, 0), (0, 1)), ((0, -1), (0, 0)))),
    # [e0, e1] = e2
    "heisenberg": (
        (((0, 0, 0), (0, 0, 1), (0, 0, 0))),
        (((0, 0, -1), (0, 0, 0), (0, 0, 0))),
        (((0, 0, 0), (0, 0, 0), (0, 0, 0))),
    ),
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h
    "sl2": (
        (((0, 0, 0), (0, 2, 0), (0, 0, -2))),
        (((0, -2, 0), (0, 0, 0), (1, 0, 0))),
        (((0, 0, 2), (-1, 0, 0), (0, 0, 0))),
    ),
}


def _conjugate_algebra(algebra, p):
    """Structure constants in the basis given by the columns of p."""
    n = algebra.dim
    cols = linalg.transpose(p)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            br = algebra.bracket(list(cols[i]), list(cols[j]))
            coords = linalg.solve([r[:] for r in p], br)
            row.append(tuple(coords))
        table.append(tuple(row))
    return leafcomplex.LieAlgebra(tuple(table))


def _rand_module(rng):
    kind = rng.choice(("abelian", "solvable2", "heisenberg", "sl2"))
    if kind == "abelian":
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        algebra = leafcomplex.abelian_algebra(n)
        action = []
        for _ in range(n):
            d = linalg.zeros(m, m)
            for t in range(m):
                d[t][t] = _rand_fraction(rng, 2)
            action.append(tuple(tuple(row) for row in d))
        return leafcomplex.LieModuleData(algebra, tuple(action))
    base = leafcomplex.LieAlgebra(
        tuple(tuple(tuple(Fraction(x) for x in v) for v in row) for row in _BASE_STRUCTURES[kind])
    )
    p = _rand_unimodular(rng, base.dim)
    algebra = _conjugate_algebra(base, p)
    return leafcomplex.adjoint_module(algebra)


def _rand_cover(rng):
    if rng.random() < 0.5:
        sizes = [rng.randint(1, 3) for _ in range(rng.randint(3, 4))]
        mats = []
        prev = None
        for q in range(len(sizes) - 1):
            rows, cols = sizes[q + 1], sizes[q]
            if prev is None:
                m = [[_rand_fraction(rng, 2) for _ in range(cols)] for _ in range(rows)]
            else:
                # rows must kill the image of the previous differential
                left_null = linalg.nullspace(linalg.transpose(prev))
                m = linalg.zeros(rows, cols)
                for rrow in m:
                    for vec in left_null:
                        c = _rand_fraction(rng, 2)
                        for k in range(cols):
                            rrow[k] += c * vec[k]
            mats.append(m)
            prev = m
        return leafcomplex.constant_cover(mats, n_opens=3)
    e0 = rng.randint(-1, 2)
    n_rows = rng.randint(1, 3)
    degrees = [e0]
    polys = []
    zero_slot = rng.randrange(max(1, n_rows - 1)) if n_rows == 3 else None
    for q in range(n_rows - 1):
        gap = rng.randint(0, 2)
        degrees.append(degrees[-1] + gap)
        if n_rows == 3 and q == zero_slot:
            polys.append([Fraction(0)])
        else:
            polys.append([_rand_fraction(rng, 2) for _ in range(gap + 1)])
    return leafcomplex.p1_window_cover(degrees, rng.randint(2, 4), polys)


def _zero_product(a, b):
    return linalg.is_zero_mat(linalg.mat_mul(a, b))


# --- the individual checks ---


def check_cech_square(rng, trials):
    """Alternating restriction differences compose to zero."""
    for t in range(trials):
        data = _rand_cover(rng)
        for q in range(data.n_rows):
            if not _zero_product(data.cech_matrix(1, q), data.cech_matrix(0, q)):
                return CheckResult("cech-square-zero", False, t + 1, "row %d" % q)
    return CheckResult("cech-square-zero", True, trials)


def check_ce_square(rng, trials):
    """The alternating cochain differential squares to zero."""
    for t in range(trials):
        module = _rand_module(rng)
        for k in range(module.algebra.dim - 1):
            d_low = leafcomplex.ce_differential(module, k)
            d_high = leafcomplex.ce_differential(module, k + 1)
            if not _zero_product(d_high, d_low):
                return CheckResult("ce-square-zero", False, t + 1, "degree %d" % k)
    return CheckResult("ce-square-zero", True, trials)


def check_total_square(rng, trials):
    """The mixed-sign total differential squares to zero."""
    for t in range(trials):
        data = _rand_cover(rng)
        for n in range(data.max_total_degree):
            if not _zero_product(data.total_matrix(n + 1), data.total_matrix(n)):
                return CheckResult("total-square-zero", False, t + 1, "degree %d" % n)
    return CheckResult("total-square-zero", True, trials)


def check_bracket_jacobi(rng, trials):
    """Jacobi identity for the derivation bracket, at two orders down."""
    for t in range(trials):
        ctx = _rand_ctx(rng)
        u = _rand_derivation(rng, ctx)
        v = _rand_derivation(rng, ctx)
        w = _rand_derivation(rng, ctx)
        s = lie_bracket(u, lie_bracket(v, w))
        s = s + lie_bracket(v, lie_bracket(w, u))
        s = s + lie_bracket(w, lie_bracket(u, v))
        if not s.equal_to_order(LogDerivation.zero(ctx), ctx.order - 2):
            return CheckResult("bracket-jacobi", False, t + 1, "trial %d" % t)
    return CheckResult("bracket-jacobi", True, trials)


def check_nabla_leibniz(rng, trials):
    """The connection is a derivation over multiplication by functions."""
    for t in range(trials):
        ctx = _rand_ctx(rng, min_r=1)
        v = _rand_derivation(rng, ctx)
        h = _rand_jet(rng, ctx)
        g = _rand_jet(rng, ctx)
        tr = v.log_trace()
        lhs = v.apply(h * g) - tr * (h * g)
        rhs = v.apply(h) * g + h * (v.apply(g) - tr * g)
        diff = semistability.t1_reduce(lhs - rhs)
        if not diff.equal_to_order(Jet.zero(ctx), ctx.order - 1):
            return CheckResult("nabla-leibniz", False, t + 1, "trial %d" % t)
    return CheckResult("nabla-leibniz", True, trials)


def check_flat_closure(rng, trials):
    """Tangency defects close under the bracket.

    The defect of a field v against a unit u is d(v) = v(u) - trace(v) u.
    The identity d([v, w]) = v(d(w)) - w(d(v)) + trace(w) d(v) - trace(v) d(w)
    holds at two orders down and shows that fields with vanishing defect stay
    closed under the bracket.  Traceless pairs give the constant-unit case
    directly: their bracket is again traceless one order down.
    """
    for t in range(trials):
        ctx = _rand_ctx(rng, min_r=1)
        unit = _rand_jet(rng, ctx, unit=True)
        v = _rand_derivation(rng, ctx)
        w = _rand_derivation(rng, ctx)

        def defect(x):
            return x.apply(unit) - x.log_trace() * unit

        lhs = defect(lie_bracket(v, w))
        rhs = v.apply(defect(w)) - w.apply(defect(v))
        rhs = rhs + w.log_trace() * defect(v) - v.log_trace() * defect(w)
        if not (lhs - rhs).equal_to_order(Jet.zero(ctx), ctx.order - 2):
            return CheckResult("flat-closure", False, t + 1, "defect identity, trial %d" % t)

        if ctx.r >= 1:
            b = list(_rand_jet(rng, ctx, 2) for _ in range(ctx.r - 1))
            b.append(-sum(b, Jet.zero(ctx)))
            a = tuple(_rand_jet(rng, ctx, 2) for _ in range(ctx.n - ctx.r))
            v0 = LogDerivation(ctx, tuple(b), a)
            w0_b = list(_rand_jet(rng, ctx, 2) for _ in range(ctx.r - 1))
            w0_b.append(-sum(w0_b, Jet.zero(ctx)))
            w0 = LogDerivation(ctx, tuple(w0_b), a)
            tr = lie_bracket(v0, w0).log_trace()
            if not tr.equal_to_order(Jet.zero(ctx), ctx.order - 1):
                return CheckResult("flat-closure", False, t + 1, "traceless pair, trial %d" % t)
    return CheckResult("flat-closure", True, trials)


ALL_CHECKS = (
    ("cech-square-zero", check_cech_square),
    ("ce-square-zero", check_ce_square),
    ("total-square-zero", check_total_square),
    ("bracket-jacobi", check_bracket_jacobi),
    ("nabla-leibniz", check_nabla_leibniz),
    ("flat-closure", check_flat_closure),
)


def run_all(seed=0, trials=40):
    """Run every identity check with its own deterministic stream."""
    results = []
    for name, fn in ALL_CHECKS:
        rng = random.Random("%d:%s" % (seed, name))
        results.append(fn(rng, trials))
    return results
