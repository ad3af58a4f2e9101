"""Exact subspace calculus: split pairings, Lagrangian predicates, relations.

`Subspace` stores the reduced-echelon basis of a rational subspace, which is
unique, so equality of subspaces is equality of tuples.  Everything downstream
(quadratic Lie algebras, morphism fibers, the fiberwise dictionary) trades in
these values.

Conventions used package-wide:

* linear maps act on column vectors; the matrix of ``f: V -> W`` has shape
  ``(dim W, dim V)``,
* the graph of ``f`` is ``{(v, f v)}`` inside ``V (+) W``,
* a relation is any subspace of ``V (+) W``; composition glues along the
  shared middle factor and projects it away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import rational as rat


class SplitSignatureError(ValueError):
    """Raised when a Lagrangian predicate meets a non-split pairing."""


def canonicalize(rows, ambient_dim=None):
    """Span of ``rows`` as a canonical `Subspace`.

    ``ambient_dim`` is needed only when ``rows`` is empty (the zero subspace
    of a given ambient space); otherwise it is inferred and checked.
    """
    rows = rat.matrix(rows)
    if rows:
        width = len(rows[0])
        if ambient_dim is None:
            ambient_dim = width
        elif ambient_dim != width:
            raise ValueError(f"rows have width {width}, ambient is {ambient_dim}")
    elif ambient_dim is None:
        raise ValueError("empty span needs an explicit ambient_dim")
    basis, pivots = rat.rref(rows)
    return Subspace(ambient_dim, basis, pivots)


@dataclass(frozen=True)
class Subspace:
    """Canonical reduced-echelon basis of a rational subspace.

    Do not build directly; go through `canonicalize` (or the helpers below),
    which guarantee the canonical-form invariant that makes ``==`` decide
    subspace equality.
    """

    ambient_dim: int
    basis: tuple
    pivots: tuple

    @staticmethod
    def zero(ambient_dim):
        return canonicalize((), ambient_dim)

    @staticmethod
    def full(ambient_dim):
        return canonicalize(rat.identity(ambient_dim), ambient_dim)

    @property
    def dim(self):
        return len(self.basis)

    def contains_vector(self, v):
        v = list(rat.vec(v))
        if len(v) != self.ambient_dim:
            raise ValueError("vector has wrong length")
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                for j in range(self.ambient_dim):
                    v[j] -= c * row[j]
        return all(x == 0 for x in v)

    def contains(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return all(self.contains_vector(r) for r in other.basis)

    def intersection(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        # Solve c . A - d . B = 0 over stacked coefficients (c, d); each
        # solution row recombines A into a vector of the intersection.
        a_t = rat.transpose(self.basis)
        b_t = rat.transpose(other.basis)
        coeffs = rat.kernel(rat.hstack(a_t, rat.mat_neg(b_t)))
        rows = [
            rat.mat_vec(rat.transpose(self.basis), c[: self.dim]) for c in coeffs
        ]
        return canonicalize(rows, self.ambient_dim)

    def __add__(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return canonicalize(self.basis + other.basis, self.ambient_dim)

    def project(self, cols):
        """Image under the coordinate projection keeping ``cols`` (in order)."""
        rows = [tuple(r[c] for c in cols) for r in self.basis]
        return canonicalize(rows, len(cols))

    def embed(self, positions, ambient_dim):
        """Image under the coordinate inclusion sending axis i to
        ``positions[i]`` of a larger space."""
        rows = []
        for r in self.basis:
            v = [Fraction(0)] * ambient_dim
            for x, p in zip(r, positions):
                v[p] = x
            rows.append(v)
        return canonicalize(rows, ambient_dim)


@lru_cache(maxsize=None)
def _signature_of(gram):
    """Signature (n_plus, n_minus, n_zero) by symmetric congruence
    diagonalization over the rationals (exact)."""
    n = len(gram)
    m = [list(row) for row in gram]

    def swap(i, j):
        m[i], m[j] = m[j], m[i]
        for row in m:
            row[i], row[j] = row[j], row[i]

    def add_to(i, j, c):
        # row/col op keeping symmetry: e_i <- e_i + c e_j
        for k in range(n):
            m[i][k] += c * m[j][k]
        for k in range(n):
            m[k][i] += c * m[k][j]

    for k in range(n):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][i] != 0), None)
            if pivot is not None:
                swap(k, pivot)
            else:
                # all remaining diagonal entries vanish; pull in an
                # off-diagonal one (char 0: e_i + e_j has square 2 m[i][j])
                found = next(
                    (
                        (i, j)
                        for i in range(k, n)
                        for j in range(i + 1, n)
                        if m[i][j] != 0
                    ),
                    None,
                )
                if found is None:
                    break  # zero block; the rest contributes to n_zero
                i, j = found
                add_to(i, j, Fraction(1))
                swap(k, i)
        d = m[k][k]
        if d == 0:
            continue
        for i in range(k + 1, n):
            c = -m[i][k] / d
            if c:
                add_to(i, k, c)
    plus = sum(1 for k in range(n) if m[k][k] > 0)
    minus = sum(1 for k in range(n) if m[k][k] < 0)
    return plus, minus, n - plus - minus


@dataclass(frozen=True)
class SplitForm:
    """Symmetric bilinear pairing given by its Gram matrix."""

    dim: int
    gram: tuple

    def __post_init__(self):
        g = rat.matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != self.dim or (g and len(g[0]) != self.dim):
            raise ValueError("gram has wrong shape")
        if g != rat.transpose(g):
            raise ValueError("gram is not symmetric")

    @staticmethod
    def standard_double(n):
        """Pairing of a space with its dual: <(v, a), (v', a')> = a'(v) + a(v')."""
        zero, eye = rat.zeros(n, n), rat.identity(n)
        top = rat.hstack(zero, eye)
        bottom = rat.hstack(eye, zero)
        return SplitForm(2 * n, rat.vstack(top, bottom))

    @staticmethod
    def diagonal(entries):
        entries = rat.vec(entries)
        n = len(entries)
        return SplitForm(
            n,
            tuple(
                tuple(entries[i] if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            ),
        )

    def pairing(self, u, v):
        return sum(x * y for x, y in zip(rat.mat_vec(self.gram, rat.vec(v)), rat.vec(u)))

    def signature(self):
        return _signature_of(self.gram)

    @property
    def nondegenerate(self):
        return self.signature()[2] == 0

    @property
    def is_split(self):
        p, m, z = self.signature()
        return z == 0 and p == m

    def negate(self):
        return SplitForm(self.dim, rat.mat_neg(self.gram))

    def direct_sum(self, other, negate_second=False):
        second = other.negate() if negate_second else other
        return SplitForm(
            self.dim + other.dim, rat.block_diag(self.gram, second.gram)
        )


def orthogonal_complement(form, u):
    """``{v : gram(v, w) = 0 for all w in u}``; exact."""
    if u.ambient_dim != form.dim:
        raise ValueError("subspace does not live in the form's space")
    if not form.nondegenerate:
        raise ValueError(
            f"gram is degenerate (signature {form.signature()}); "
            "orthogonal complements need a nondegenerate pairing"
        )
    rows = rat.kernel(rat.mat_mul(u.basis, form.gram), ncols=form.dim)
    return canonicalize(rows, form.dim)


def _require_split(form):
    p, m, z = form.signature()
    if z or p != m:
        raise SplitSignatureError(
            f"pairing has signature ({p}, {m}"
            + (f", {z} null" if z else "")
            + "); Lagrangian subspaces need split signature (n, n)"
        )


def is_isotropic(form, u):
    b = u.basis
    return rat.is_zero_matrix(
        rat.mat_mul(rat.mat_mul(b, form.gram), rat.transpose(b))
    )


def is_lagrangian(form, u):
    """Maximal isotropic test; requires (and enforces) split signature."""
    if u.ambient_dim != form.dim:
        raise ValueError("subspace does not live in the form's space")
    _require_split(form)
    return 2 * u.dim == form.dim and is_isotropic(form, u)


@dataclass(frozen=True)
class LinearRelation:
    """A subspace of ``source (+) target`` viewed as a multivalued map."""

    source_dim: int
    target_dim: int
    graph: Subspace

    def __post_init__(self):
        if self.graph.ambient_dim != self.source_dim + self.target_dim:
            raise ValueError("graph lives in the wrong ambient space")

    @staticmethod
    def from_matrix(m, source_dim=None):
        """Graph of the linear map with matrix ``m`` (columns = inputs)."""
        m = rat.matrix(m)
        if source_dim is None:
            if not m:
                raise ValueError("need source_dim for an empty matrix")
            source_dim = len(m[0])
        target_dim = len(m)
        rows = rat.hstack(rat.identity(source_dim), rat.transpose(m))
        return LinearRelation(
            source_dim, target_dim, canonicalize(rows, source_dim + target_dim)
        )

    @staticmethod
    def identity(n):
        return LinearRelation.from_matrix(rat.identity(n))


def compose(r, s):
    """Relation composition ``{(v, z) : exists w, (v,w) in r, (w,z) in s}``.

    Computed exactly: both graphs are embedded in ``V (+) W (+) Z``, glued by
    intersecting along the shared middle factor, and the middle coordinates
    are projected away.
    """
    if r.target_dim != s.source_dim:
        raise ValueError(
            f"cannot compose: middle dimensions differ "
            f"({r.target_dim} vs {s.source_dim})"
        )
    v, w, z = r.source_dim, r.target_dim, s.target_dim
    n = v + w + z
    left = r.graph.embed(tuple(range(v + w)), n) + Subspace.full(z).embed(
        tuple(range(v + w, n)), n
    )
    right = s.graph.embed(tuple(range(v, n)), n) + Subspace.full(v).embed(
        tuple(range(v)), n
    )
    glued = left.intersection(right)
    out = glued.project(tuple(range(v)) + tuple(range(v + w, n)))
    return LinearRelation(v, z, out)


def is_graph_over_factor(r, factor):
    """Matrix of the map whose graph is ``r``, if the projection onto the
    named factor ('source' or 'target') is an isomorphism; else None.

    For ``factor='source'`` the map goes source -> target; for
    ``factor='target'`` it goes target -> source.
    """
    v, w = r.source_dim, r.target_dim
    basis = r.graph.basis
    if factor == "source":
        dom_cols, cod_cols, dom_dim = range(v), range(v, v + w), v
    elif factor == "target":
        dom_cols, cod_cols, dom_dim = range(v, v + w), range(v), w
    else:
        raise ValueError("factor must be 'source' or 'target'")
    if r.graph.dim != dom_dim:
        return None
    dom_part = tuple(tuple(row[c] for c in dom_cols) for row in basis)
    cod_part = tuple(tuple(row[c] for c in cod_cols) for row in basis)
    if rat.rank(dom_part) != dom_dim:
        return None
    # rows satisfy  x = dom_part^T c,  y = cod_part^T c  =>  y = M x
    try:
        m = rat.mat_mul(
            rat.transpose(cod_part), rat.invert(rat.transpose(dom_part))
        )
    except ValueError:
        return None
    return m
