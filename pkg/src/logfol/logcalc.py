"""Log derivations and log one-forms on a normal crossing germ.

The tangent sheaf of the germ is free on x_1 d_1, ..., x_r d_r (logarithmic
directions along the crossing variables) and d_{r+1}, ..., d_n (the smooth
directions). A LogDerivation stores the coefficients in that basis: b_i for
x_i d_i and a_j for d_j. The standard-log-point structure singles out the
relative fields, those v with v(u) = (b_1 + ... + b_r) u for the chart unit u.

One-forms dual to this basis are a_1 dx_1/x_1 + ... + a_r dx_r/x_r + eta with
eta regular; the single relation dx_1/x_1 + ... + dx_r/x_r = du/u makes the
dlog coefficients unique only up to a common additive term. We normalize by
removing the common constant so that the last dlog coefficient has constant
term zero. The pairing with a vector field is representative-independent
exactly on relative fields, which is where it is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exprs import parse_polynomial
from .jets import ContextMismatchError, GermContext, Jet, format_jet, name_table
from .linalg import frac


class TangencyParseError(ValueError):
    """A crossing coefficient was not divisible by its variable."""


def _check_ctx(ctx, jets_, what):
    for j in jets_:
        if j.ctx != ctx:
            raise ContextMismatchError("%s has mismatched context" % what)


@dataclass(frozen=True)
class LogDerivation:
    """b_1 x_1 d_1 + ... + b_r x_r d_r + a_{r+1} d_{r+1} + ... + a_n d_n."""

    ctx: GermContext
    b: tuple
    a: tuple

    def __post_init__(self):
        b = tuple(self.b)
        a = tuple(self.a)
        if len(b) != self.ctx.r or len(a) != self.ctx.n - self.ctx.r:
            raise ValueError("coefficient counts do not match the context")
        _check_ctx(self.ctx, b + a, "derivation coefficient")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @classmethod
    def zero(cls, ctx):
        z = Jet.zero(ctx)
        return cls(ctx, (z,) * ctx.r, (z,) * (ctx.n - ctx.r))

    @classmethod
    def basis(cls, ctx, i):
        """The i-th basis derivation: x_i d_i if i < r, else d_i."""
        z = Jet.zero(ctx)
        one = Jet.one(ctx)
        b = [z] * ctx.r
        a = [z] * (ctx.n - ctx.r)
        if i < ctx.r:
            b[i] = one
        else:
            a[i - ctx.r] = one
        return cls(ctx, tuple(b), tuple(a))

    def apply(self, f):
        """Value on a jet. Valid to order-1 in general (exact when no smooth
        coefficient meets a top-degree term)."""
        if f.ctx != self.ctx:
            raise ContextMismatchError("jet context mismatch")
        out = Jet.zero(self.ctx)
        for i, bi in enumerate(self.b):
            if not bi.is_zero():
                out = out + bi * f.scaled_partial(i)
        for j, aj in enumerate(self.a):
            if not aj.is_zero():
                out = out + aj * f.partial(self.ctx.r + j)
        return out

    def log_trace(self):
        """Sum of the crossing coefficients b_1 + ... + b_r."""
        out = Jet.zero(self.ctx)
        for bi in self.b:
            out = out + bi
        return out

    def constant_vector(self):
        """Coefficients at the origin, (b_1(0), ..., b_r(0), a_{r+1}(0), ...)."""
        return tuple(c.constant_term() for c in self.b + self.a)

    def components(self):
        return self.b + self.a

    def is_zero(self):
        return all(c.is_zero() for c in self.b + self.a)

    def __add__(self, other):
        if other.ctx != self.ctx:
            raise ContextMismatchError("derivation context mismatch")
        return LogDerivation(
            self.ctx,
            tuple(x + y for x, y in zip(self.b, other.b)),
            tuple(x + y for x, y in zip(self.a, other.a)),
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, f):
        """Multiply by a jet or a rational scalar."""
        return LogDerivation(
            self.ctx,
            tuple(c * f for c in self.b),
            tuple(c * f for c in self.a),
        )

    def equal_to_order(self, other, order):
        return all(
            x.equal_to_order(y, order)
            for x, y in zip(self.components(), other.components())
        )

    def __str__(self):
        return format_derivation(self)


def lie_bracket(v, w):
    """Bracket of two log derivations, again a log derivation.

    Componentwise: the x_k d_k coefficient of [v, w] is v(b_k(w)) - w(b_k(v)),
    and likewise for the smooth coefficients. Coefficients come out valid to
    one order below the inputs.
    """
    if v.ctx != w.ctx:
        raise ContextMismatchError("derivation context mismatch")
    b = tuple(v.apply(bw) - w.apply(bv) for bv, bw in zip(v.b, w.b))
    a = tuple(v.apply(aw) - w.apply(av) for av, aw in zip(v.a, w.a))
    return LogDerivation(v.ctx, b, a)


@dataclass(frozen=True)
class TangencyCheck:
    ok: bool
    order: int
    defect: Jet

    def __bool__(self):
        return self.ok


def in_relative_tangent(v, unit=None):
    """Does v lie in the relative tangent sheaf over the standard log point?

    The condition is v(u) - (b_1 + ... + b_r) u = 0 for the chart unit u
    (default 1). Decided up to truncation; the report carries the order.
    """
    ctx = v.ctx
    if unit is None:
        unit = Jet.one(ctx)
    if unit.ctx != ctx:
        raise ContextMismatchError("unit context mismatch")
    if not unit.is_unit():
        raise ValueError("chart unit must be invertible")
    defect = v.apply(unit) - v.log_trace() * unit
    order = ctx.order if unit.is_constant() else ctx.order - 1
    return TangencyCheck(defect.truncate(order).is_zero(), order, defect.truncate(order))


@dataclass(frozen=True)
class LogOneForm:
    """a_1 dx_1/x_1 + ... + a_r dx_r/x_r + c_{r+1} dx_{r+1} + ... + c_n dx_n.

    Stored in the normalized representative: the common additive constant
    allowed by the relation sum_i dx_i/x_i = du/u is removed, so the last
    dlog coefficient has constant term zero. Construct through make().
    """

    ctx: GermContext
    dlog: tuple
    reg: tuple

    def __post_init__(self):
        if self.ctx.r < 1:
            raise ValueError("a log one-form needs at least one crossing variable")
        if len(self.dlog) != self.ctx.r or len(self.reg) != self.ctx.n - self.ctx.r:
            raise ValueError("coefficient counts do not match the context")
        _check_ctx(self.ctx, tuple(self.dlog) + tuple(self.reg), "form coefficient")

    @classmethod
    def make(cls, ctx, dlog, reg=()):
        dlog = tuple(dlog)
        reg = tuple(reg)
        if len(dlog) != ctx.r:
            raise ValueError("expected %d dlog coefficients" % ctx.r)
        shift = dlog[-1].constant_term()
        if shift != 0:
            dlog = tuple(c - shift for c in dlog)
        return cls(ctx, dlog, reg)


def contract(form, v):
    """Pairing of a log one-form with a log derivation.

    <dx_i/x_i, x_i d_i> = 1 and <dx_j, d_j> = 1; the value is the jet
    sum_i a_i b_i + sum_j c_j a_j. Representative-independent on relative
    fields.
    """
    if form.ctx != v.ctx:
        raise ContextMismatchError("form and derivation context mismatch")
    out = Jet.zero(form.ctx)
    for ai, bi in zip(form.dlog, v.b):
        out = out + ai * bi
    for cj, aj in zip(form.reg, v.a):
        out = out + cj * aj
    return out


def derivation_from_string(ctx, text, names=None, params=None):
    """Parse vector-field syntax into a LogDerivation.

    The derivation tokens d1..dn (and dx, dy, ... for named variables) stand
    for the plain partials. Coefficients of a crossing partial d_i must be
    divisible by x_i, i.e. the field must be tangent to the crossing locus;
    the quotient becomes the stored b_i. Example: "lam1*y*dy + z*dz" with
    names x, y, z and a rational parameter lam1.
    """
    table = dict(name_table(ctx, names))
    width = 2 * ctx.n
    for nm, idx in list(table.items()):
        token = "d" + nm
        if token in table:
            raise ValueError("derivation token %r collides with a variable" % token)
        table[token] = ctx.n + idx
    consts = {k: frac(v) for k, v in (params or {}).items()}
    raw = parse_polynomial(text, table, width=width, consts=consts)

    b_raw = [dict() for _ in range(ctx.r)]
    a_raw = [dict() for _ in range(ctx.n - ctx.r)]
    for e, c in raw.items():
        var_part, d_part = e[: ctx.n], e[ctx.n:]
        if sum(d_part) != 1:
            raise TangencyParseError(
                "each term must contain exactly one derivation token d1..dn"
            )
        i = d_part.index(1)
        if i < ctx.r:
            if var_part[i] < 1:
                raise TangencyParseError(
                    "coefficient of d%d must vanish on {x%d = 0}; "
                    "the field is not tangent to the crossing locus" % (i + 1, i + 1)
                )
            e2 = list(var_part)
            e2[i] -= 1
            b_raw[i][tuple(e2)] = c
        else:
            a_raw[i - ctx.r][var_part] = c
    b = tuple(Jet.make(ctx, d) for d in b_raw)
    a = tuple(Jet.make(ctx, d) for d in a_raw)
    return LogDerivation(ctx, b, a)


def format_derivation(v, names=None):
    names = names or v.ctx.default_names()
    parts = []
    for i, bi in enumerate(v.b):
        if not bi.is_zero():
            parts.append("(%s)*%s*d%s" % (format_jet(bi, names), names[i], names[i]))
    for j, aj in enumerate(v.a):
        if not aj.is_zero():
            idx = v.ctx.r + j
            parts.append("(%s)*d%s" % (format_jet(aj, names), names[idx]))
    return " + ".join(parts) if parts else "0"
