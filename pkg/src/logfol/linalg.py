"""Dense exact linear algebra over Fraction, plus a few integer lattice routines.

Everything here works on plain lists of lists. Sizes stay small (desk scale),
so no attempt is made at sparsity or pivoting heuristics beyond exactness.
"""

from __future__ import annotations

from fractions import Fraction

Vector = "list[Fraction]"
Matrix = "list[list[Fraction]]"


def frac(x) -> Fraction:
    """Coerce int / str ("3/2") / Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("cannot interpret %r as an exact rational" % (x,))


def mat(rows):
    return [[frac(x) for x in row] for row in rows]


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def mat_vec(a, x):
    return [sum((c * v for c, v in zip(row, x)), Fraction(0)) for row in a]


def vec_add(x, y):
    return [a + b for a, b in zip(x, y)]

def vec_sub(x, y):
    return [a - b for a, b in zip(x, y)]

def vec_scale(c, x):
    return [c * a for a in x]

def is_zero_vec(x):
    return all(v == 0 for v in x)


def rref(a):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    r = [row[:] for row in a]
    m = len(r)
    n = len(r[0]) if m else 0
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        sel = None
        for i in range(row, m):
            if r[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        r[row], r[sel] = r[sel], r[row]
        inv = Fraction(1) / r[row][col]
        r[row] = [x * inv for x in r[row]]
        for i in range(m):
            if i != row and r[i][col] != 0:
                c = r[i][col]
                r[i] = [x - c * y for x, y in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a):
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def solve(a, b):
    """One solution of a x = b, or None if the system is inconsistent.

    Free variables are set to zero.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [a[i][:] + [frac(b[i])] for i in range(m)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = r[i][n]
    return x


def nullspace(a):
    """Basis of the kernel of a, as a list of vectors."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [row[:] for row in identity(n)]
    r, pivots = rref(a)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -r[i][f]
        basis.append(v)
    return basis


def inverse(a):
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def hstack(a, b):
    if not a:
        return [row[:] for row in b]
    if not b:
        return [row[:] for row in a]
    return [ra + rb for ra, rb in zip(a, b)]


def vstack(a, b):
    return [row[:] for row in a] + [row[:] for row in b]


def is_zero_mat(a):
    return all(all(x == 0 for x in row) for row in a)


# --- integer lattice routines ---

def hermite_normal_form(rows):
    """Row-style Hermite normal form of an integer matrix.

    Output rows are the nonzero rows of the canonical form: echelon shape,
    positive pivots, entries above each pivot reduced into [0, pivot).
    """
    a = [list(map(int, row)) for row in rows if any(row)]
    if not a:
        return []
    m = len(a)
    k = len(a[0])
    r = 0
    for c in range(k):
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            if i0 != r:
                a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == m:
                break
    return [tuple(row) for row in a[:r] if any(row)]


def in_row_span_q(rows, x):
    """Is x in the Q-span of the given integer/rational rows?"""
    if is_zero_vec(list(map(frac, x))):
        return True
    if not rows:
        return False
    a = transpose(mat(rows))
    return solve(a, list(map(frac, x))) is not None


def nonneg_rational_solution(a, b):
    """A rational solution t >= 0 of a t = b, or None if infeasible.

    Phase-1 simplex with Bland's rule; exact Fraction arithmetic throughout.
    `a` is m x n (columns are the generators), `b` has length m.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    t = []
    for i in range(m):
        row = [frac(x) for x in a[i]] + [Fraction(0)] * m + [frac(b[i])]
        if row[-1] < 0:
            row = [-x for x in row]
        row[n + i] = Fraction(1)
        t.append(row)
    width = n + m
    basis = [n + i for i in range(m)]
    # reduced-cost row for minimizing the sum of artificials
    obj = [Fraction(1) if j >= n else Fraction(0) for j in range(width)] + [Fraction(0)]
    for row in t:
        obj = [o - x for o, x in zip(obj, row)]
    while True:
        enter = None
        for j in range(width):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if t[i][enter] > 0:
                ratio = t[i][-1] / t[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("phase-1 simplex unbounded; input is malformed")
        piv = t[leave][enter]
        t[leave] = [x / piv for x in t[leave]]
        for i in range(m):
            if i != leave and t[i][enter] != 0:
                c = t[i][enter]
                t[i] = [x - c * y for x, y in zip(t[i], t[leave])]
        if obj[enter] != 0:
            c = obj[enter]
            obj = [x - c * y for x, y in zip(obj, t[leave] )]
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = t[i][-1]
    return x
