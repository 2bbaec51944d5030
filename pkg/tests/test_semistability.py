"""Flat units along the crossing locus and residue indices.

The oracle for the flat-unit solver assembles the full linear system in one
shot over all usable equation degrees and solves it once, independently of
the degree-by-degree search in the library.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logfol import (
    FoliationGerm,
    GermContext,
    HolonomyData,
    LogOneForm,
    ResonanceError,
    SurfaceOneForm,
    check_holonomy_compatibility,
    check_normal_degrees,
    cs_index_log,
    cs_index_surface,
    derivation_from_string,
    find_flat_unit,
    laurent_residue,
    nabla,
    t1_monomial_alive,
    t1_reduce,
)
from logfol import linalg
from logfol.foliations import InconclusiveAtOrderError, NonInvariantError
from logfol.jets import Jet, monomials
from logfol.logcalc import LogDerivation
from logfol.semistability import T1Section


# -- oracle -------------------------------------------------------------------


def flat_unit_exists_oracle(fol, order):
    """One-shot solvability of nabla_v(1 + sum c_e x^e) = 0, degrees < order."""
    ctx = fol.ctx
    unknowns = [
        e for e in monomials(ctx, order)
        if sum(e) >= 1 and t1_monomial_alive(ctx, e)
    ]
    rows = []
    rhs = []
    eq_index = {}
    for v in fol.generators:
        tr = v.log_trace()
        images = [t1_reduce(v.apply(Jet.make(ctx, {e: 1})) - tr * Jet.make(ctx, {e: 1}))
                  for e in unknowns]
        const = t1_reduce(v.apply(Jet.one(ctx)) - tr)
        coords = set(const.terms)
        for img in images:
            coords |= set(img.terms)
        for e_out in sorted(coords):
            if sum(e_out) >= order:
                continue
            row = [img.terms.get(e_out, Fraction(0)) for img in images]
            rows.append(row)
            rhs.append(-const.terms.get(e_out, Fraction(0)))
            eq_index[len(rows) - 1] = (id(v), e_out)
    if not unknowns:
        return all(c == 0 for c in rhs)
    return linalg.solve(rows, rhs) is not None


def node_field(ctx, lam1, lam2):
    b = (Jet.constant(ctx, lam1), Jet.constant(ctx, lam2))
    return LogDerivation(ctx, b, ())


# -- T1 bookkeeping -------------------------------------------------------------


def test_t1_aliveness_pattern():
    ctx = GermContext(3, 3, 6)
    assert t1_monomial_alive(ctx, (0, 0, 0))
    assert t1_monomial_alive(ctx, (4, 0, 0))
    assert not t1_monomial_alive(ctx, (1, 1, 0))
    assert not t1_monomial_alive(ctx, (0, 2, 3))


def test_t1_is_zero_for_few_branches():
    assert not t1_monomial_alive(GermContext(2, 1, 4), (0, 0))
    assert not t1_monomial_alive(GermContext(2, 0, 4), (0, 0))


def test_t1_reduce_is_multiplicative_on_the_quotient():
    ctx = GermContext(3, 3, 5)
    f = Jet.make(ctx, {(1, 1, 0): Fraction(2), (1, 0, 0): Fraction(1)})
    g = Jet.make(ctx, {(1, 0, 0): Fraction(3), (0, 0, 1): Fraction(1)})
    lhs = t1_reduce(f * g)
    rhs = t1_reduce(t1_reduce(f) * t1_reduce(g))
    assert lhs == rhs


def test_nabla_of_the_constant_section():
    ctx = GermContext(2, 2, 6)
    v = derivation_from_string(ctx, "x1*dx1")
    s = T1Section.make(Jet.one(ctx))
    out = nabla(v, s)
    assert out.g == Jet.constant(ctx, -1)


def test_nabla_leibniz_in_t1():
    ctx = GermContext(3, 3, 6)
    v = derivation_from_string(ctx, "x1*dx1 + 2*x2*dx2 - x3*dx3")
    h = Jet.one(ctx) + Jet.variable(ctx, 0)
    g = Jet.variable(ctx, 1) ** 2
    lhs = nabla(v, T1Section.make(h * g)).g
    rhs = t1_reduce(v.apply(h) * g) + t1_reduce(h * nabla(v, T1Section.make(g)).g)
    assert lhs.equal_to_order(rhs, ctx.order - 1)


# -- flat units -------------------------------------------------------------------


def test_balanced_node_has_unique_flat_unit():
    ctx = GermContext(2, 2, 6)
    fol = FoliationGerm(ctx, (node_field(ctx, 2, -2),))
    res = find_flat_unit(fol)
    assert res.ok and res.unique
    assert res.unit == Jet.one(ctx)
    assert res.order == 6


def test_unbalanced_node_fails_at_degree_zero():
    ctx = GermContext(2, 2, 6)
    fol = FoliationGerm(ctx, (node_field(ctx, 1, 1),))
    res = find_flat_unit(fol)
    assert not res.ok
    assert res.failing_degree == 0
    assert res.unit is None


def test_flat_unit_solves_the_connection_equation():
    ctx = GermContext(3, 3, 6)
    v = derivation_from_string(ctx, "(1 + x2)*x1*dx1 + x2*dx2 - 2*x3*dx3")
    fol = FoliationGerm(ctx, (v,))
    res = find_flat_unit(fol)
    assert res.ok
    defect = t1_reduce(v.apply(res.unit) - v.log_trace() * res.unit)
    assert defect.truncate(ctx.order - 1).is_zero()
    assert res.unit.constant_term() == 1


def test_flat_unit_respects_explicit_order():
    ctx = GermContext(2, 2, 6)
    fol = FoliationGerm(ctx, (node_field(ctx, 3, -3),))
    res = find_flat_unit(fol, order=3)
    assert res.ok and res.order == 3


def test_flat_unit_rejects_non_involutive_input():
    ctx = GermContext(2, 1, 4)
    v = derivation_from_string(ctx, "dx2")
    w = derivation_from_string(ctx, "x2*x1*dx1")
    fol = FoliationGerm(ctx, (v, w), rank=2)
    with pytest.raises(ValueError):
        find_flat_unit(fol)


def test_flat_unit_grid_matches_trace_balance():
    ctx = GermContext(2, 2, 5)
    for l1 in range(-2, 3):
        for l2 in range(-2, 3):
            fol = FoliationGerm(ctx, (node_field(ctx, l1, l2),))
            assert find_flat_unit(fol).ok == (l1 + l2 == 0)


def test_flat_unit_agrees_with_one_shot_oracle():
    rng = random.Random(20260825)
    ctx = GermContext(3, 3, 4)
    span = [Fraction(k) for k in range(-2, 3)]
    for _ in range(40):
        b = []
        for i in range(3):
            terms = {(0, 0, 0): rng.choice(span)}
            e = [0, 0, 0]
            e[rng.randrange(3)] = rng.randint(1, 2)
            terms[tuple(e)] = rng.choice(span)
            b.append(Jet.make(ctx, terms))
        fol = FoliationGerm(ctx, (LogDerivation(ctx, tuple(b), ()),))
        res = find_flat_unit(fol)
        assert res.ok == flat_unit_exists_oracle(fol, ctx.order), [str(x) for x in b]


# -- residues ----------------------------------------------------------------------


def test_laurent_residue_frozen_values():
    assert laurent_residue({0: Fraction(1)}, {1: Fraction(1)}, 6) == 1
    assert laurent_residue({2: Fraction(1), 0: Fraction(2)}, {3: Fraction(1)}, 6) == 1
    assert laurent_residue({0: Fraction(1)}, {1: Fraction(1), 2: Fraction(1)}, 6) == 1
    assert laurent_residue({0: Fraction(1)}, {2: Fraction(1), 3: Fraction(1)}, 6) == -1
    assert laurent_residue({0: Fraction(1)}, {0: Fraction(2)}, 6) == 0


def test_laurent_residue_order_guard():
    with pytest.raises(InconclusiveAtOrderError):
        laurent_residue({0: Fraction(1)}, {3: Fraction(1)}, 3)


# -- log indices ---------------------------------------------------------------------


def constant_form(ctx, consts, reg=()):
    return LogOneForm.make(ctx, [Jet.constant(ctx, c) for c in consts], reg)


def test_cs_log_frozen_triple():
    ctx = GermContext(3, 3, 6)
    form = constant_form(ctx, (1, 2, 4))
    assert cs_index_log(form, 0, 1) == 3
    assert cs_index_log(form, 1, 0) == -2
    assert cs_index_log(form, 0, 2) == Fraction(1, 3)
    assert cs_index_log(form, 1, 2) == Fraction(-1, 2)


def test_cs_log_node_is_rigid():
    # with two branches there is no third direction; the index vanishes
    ctx = GermContext(2, 2, 6)
    form = constant_form(ctx, (5, -3))
    assert cs_index_log(form, 0, 1) == 0
    assert cs_index_log(form, 1, 0) == 0


def test_cs_log_regular_part_never_shifts_a_nonresonant_index():
    ctx = GermContext(3, 2, 6)
    x3 = Jet.variable(ctx, 2)
    bare = LogOneForm.make(ctx, [Jet.constant(ctx, 2), Jet.zero(ctx)], [Jet.zero(ctx)])
    dressed = LogOneForm.make(
        ctx, [Jet.constant(ctx, 2), Jet.zero(ctx)], [x3 ** 2 - 3 * x3]
    )
    assert cs_index_log(bare, 0, 1) == cs_index_log(dressed, 0, 1)


def test_cs_log_resonance_raises():
    ctx = GermContext(3, 3, 6)
    form = constant_form(ctx, (1, 1, 2))
    with pytest.raises(ResonanceError):
        cs_index_log(form, 0, 1)
    # the other pairs stay fine
    assert cs_index_log(form, 0, 2) + cs_index_log(form, 2, 0) == 1


def test_cs_log_index_relation_random():
    rng = random.Random(11)
    for _ in range(30):
        r = rng.randint(2, 5)
        ctx = GermContext(r, r, 5)
        consts = rng.sample(range(-8, 9), r)
        dlog = []
        for c in consts:
            terms = {(0,) * r: Fraction(c)}
            e = [0] * r
            e[rng.randrange(r)] = 1
            terms[tuple(e)] = Fraction(rng.randint(-2, 2))
            dlog.append(Jet.make(ctx, terms))
        form = LogOneForm.make(ctx, dlog, [])
        for i in range(r):
            for j in range(i + 1, r):
                assert cs_index_log(form, i, j) + cs_index_log(form, j, i) == r - 2


def test_cs_log_rejects_out_of_range_pairs():
    ctx = GermContext(3, 2, 6)
    form = LogOneForm.make(ctx, [Jet.constant(ctx, 1), Jet.zero(ctx)], [Jet.zero(ctx)])
    with pytest.raises(ValueError):
        cs_index_log(form, 0, 0)
    with pytest.raises(ValueError):
        cs_index_log(form, 0, 2)


# -- surface indices -----------------------------------------------------------------


def linear_model(ctx, lam):
    y = Jet.variable(ctx, 0)
    z = Jet.variable(ctx, 1)
    return SurfaceOneForm(z, Jet.constant(ctx, -lam) * y)


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(3), Fraction(-7, 2), Fraction(5, 3)])
def test_cs_surface_linear_model(lam):
    ctx = GermContext(2, 0, 6)
    assert cs_index_surface(linear_model(ctx, lam)) == lam


def test_cs_surface_higher_tangency():
    # A = z^2, B = y(1 + z): index -Res (1 + z)/z^2 dz = -1
    ctx = GermContext(2, 0, 6)
    y = Jet.variable(ctx, 0)
    z = Jet.variable(ctx, 1)
    form = SurfaceOneForm(z ** 2, y * (Jet.one(ctx) + z))
    assert cs_index_surface(form) == -1


def test_cs_surface_requires_invariant_curve():
    ctx = GermContext(2, 0, 6)
    z = Jet.variable(ctx, 1)
    with pytest.raises(NonInvariantError):
        cs_index_surface(SurfaceOneForm(z, z))


def test_cs_surface_inconclusive_when_transverse_part_vanishes():
    ctx = GermContext(2, 0, 4)
    y = Jet.variable(ctx, 0)
    with pytest.raises(InconclusiveAtOrderError):
        cs_index_surface(SurfaceOneForm(y, y))


def test_index_sum_detects_flat_unit_on_the_node():
    # two branch models glue to the node field (lam1, lam2); the index sum
    # vanishes exactly when the flat unit exists
    ctx2 = GermContext(2, 0, 6)
    node_ctx = GermContext(2, 2, 6)
    for lam1, lam2 in [(1, -1), (2, -2), (1, 1), (3, -2), (0, 0), (Fraction(1, 2), Fraction(-1, 2))]:
        s = cs_index_surface(linear_model(ctx2, lam1)) + cs_index_surface(linear_model(ctx2, lam2))
        fol = FoliationGerm(node_ctx, (node_field(node_ctx, lam1, lam2),))
        assert (s == 0) == find_flat_unit(fol).ok


# -- stratum compatibility data --------------------------------------------------------


def test_holonomy_values_must_be_nonzero():
    with pytest.raises(ValueError):
        HolonomyData((1, 0))


def test_holonomy_compatibility():
    a = HolonomyData((2, Fraction(3, 4)))
    b = HolonomyData((Fraction(1, 2), Fraction(4, 3)))
    assert check_holonomy_compatibility(a, b)
    c = HolonomyData((Fraction(1, 2), Fraction(3, 4)))
    assert not check_holonomy_compatibility(a, c)
    with pytest.raises(ValueError):
        check_holonomy_compatibility(a, HolonomyData((2,)))


def test_normal_degree_pairing():
    assert check_normal_degrees(2, -2)
    assert check_normal_degrees(0, 0)
    assert not check_normal_degrees(1, 1)
