"""Exact rational scalars and dense matrix helpers.

Scalars are `fractions.Fraction` throughout.  Matrices are immutable tuples
of row tuples, so they hash and compare structurally.  Nothing in this
module rounds; floats are rejected unless they go through `rationalize`,
which is the single explicit float -> rational gate.

Row reduction is fraction-free: rows are scaled to integers and eliminated
with Bareiss one-step updates (exact integer divisions), with a final
normalization pass producing the reduced echelon form over Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def scalar(x):
    """Coerce ``x`` (int, Fraction, or a string like '3/4') to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {x!r}")


def rationalize(x, max_denominator=10**8):
    """Round a float to a nearby rational.  The only float entry point."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(max_denominator)


def vec(values):
    return tuple(scalar(v) for v in values)


def matrix(rows):
    """Normalize a nested sequence to an immutable Fraction matrix."""
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged rows")
    return out


def zeros(m, n):
    return tuple((Fraction(0),) * n for _ in range(m))


def identity(n):
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_mul(a, b):
    if not a or not b:
        return ()
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a, v):
    """Apply matrix ``a`` to a column vector (returned as a flat tuple)."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    c = scalar(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_neg(a):
    return tuple(tuple(-x for x in row) for row in a)


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def hstack(a, b):
    if not a:
        return b
    if not b:
        return a
    return tuple(ra + rb for ra, rb in zip(a, b))


def vstack(a, b):
    return tuple(a) + tuple(b)


def block_diag(*blocks):
    blocks = [b for b in blocks if b and len(b[0])]
    total = sum(len(b[0]) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        w = len(b[0])
        for r in b:
            rows.append(
                (Fraction(0),) * offset + tuple(r) + (Fraction(0),) * (total - offset - w)
            )
        offset += w
    return tuple(rows)


def _integer_rows(rows):
    """Scale each row to coprime integers; drop zero rows.  Row scaling by a
    nonzero rational leaves the row span unchanged."""
    out = []
    for r in rows:
        fr = [scalar(x) for x in r]
        if all(x == 0 for x in fr):
            continue
        m = lcm(*(x.denominator for x in fr)) if fr else 1
        ints = [int(x * m) for x in fr]
        g = gcd(*(abs(v) for v in ints))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def rref(rows):
    """Reduced row echelon form of the row span.

    Returns ``(rows, pivots)``: the nonzero RREF rows as Fraction tuples and
    the pivot column indices.  The forward elimination is Bareiss (integer,
    fraction-free); only the final back-substitution touches Fractions.
    """
    work = _integer_rows(rows)
    if not work:
        return (), ()
    m, n = len(work), len(work[0])

    piv_cols = []
    r = 0
    prev = 1
    for c in range(n):
        p = next((i for i in range(r, m) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        piv = work[r][c]
        top = work[r]
        for i in range(r + 1, m):
            cur = work[i]
            t = cur[c]
            for j in range(c + 1, n):
                cur[j] = (piv * cur[j] - t * top[j]) // prev
            cur[c] = 0
        prev = piv
        piv_cols.append(c)
        r += 1
        if r == m:
            break

    # Back-substitute on the r echelon rows; RREF is unique, hence canonical.
    frows = [[Fraction(x) for x in work[i]] for i in range(r)]
    for i in range(r):
        inv = frows[i][piv_cols[i]]
        frows[i] = [x / inv for x in frows[i]]
    for i in reversed(range(r)):
        c = piv_cols[i]
        for k in range(i):
            f = frows[k][c]
            if f:
                frows[k] = [a - f * b for a, b in zip(frows[k], frows[i])]
    return tuple(tuple(row) for row in frows), tuple(piv_cols)


def kernel(a, ncols=None):
    """Canonical basis rows of ``{x : a @ x = 0}``.

    ``ncols`` is required when ``a`` has no rows (kernel of a zero map).
    """
    if not a:
        if ncols is None:
            raise ValueError("kernel of an empty matrix needs ncols")
        return identity(ncols)
    n = len(a[0])
    red, pivots = rref(a)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    rows, _ = rref(basis)
    return rows


def solve_right(a, b):
    """Solve ``a @ x = b`` for square invertible ``a`` (``b`` a matrix)."""
    n = len(a)
    aug = hstack(a, b)
    red, pivots = rref(aug)
    if tuple(pivots[:n]) != tuple(range(n)) or len(red) != n:
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in red)


def invert(a):
    return solve_right(a, identity(len(a)))


def rank(a):
    if not a:
        return 0
    return len(rref(a)[0])


def solve_linear(a, b, ncols=None):
    """General exact solve of ``a @ x = b`` for a vector ``b``.

    Returns ``(particular, nullspace_rows)`` or None when inconsistent.
    The solution set is ``particular + span(nullspace_rows)``.  ``ncols``
    is required when ``a`` has no rows (no constraints).
    """
    a = matrix(a)
    b = vec(b)
    if not a:
        if ncols is None:
            raise ValueError("solve with no equations needs ncols")
        return (Fraction(0),) * ncols, identity(ncols)
    n = len(a[0])
    aug = tuple(row + (bv,) for row, bv in zip(a, b))
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = red[i][n]
    return tuple(x), kernel(a, ncols=n)
