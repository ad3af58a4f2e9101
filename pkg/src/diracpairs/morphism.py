"""Morphisms of Manin pairs over a point, and Hamiltonian fibers.

A morphism between pairs is a Lagrangian relation between the ambient
algebras, taken with the pairing negated on the target side, whose readout
into the two dual spaces is the graph of a linear map.  A Hamiltonian fiber
couples a tangent space (with its standard even pairing on T plus T*) to a
pair fiber; it stores the sum-pairing Lagrangian and reaches the morphism
predicates through the sign flip on the covector slot, which exchanges the
sum and difference conventions without moving anything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import rational as rat
from .exact_linear import (
    LinearRelation,
    SplitForm,
    Subspace,
    canonicalize,
    compose,
    is_graph_over_factor,
    is_lagrangian,
)
from .quadratic_lie import ManinPairPoint, QuadraticLieAlgebra


@lru_cache(maxsize=64)
def product_algebra(d1, d2, negate_second=True):
    """Componentwise bracket on the direct sum; the pairing on the second
    factor is negated by default (the morphism convention)."""
    n1, n2 = d1.dim, d2.dim
    dim = n1 + n2
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n1):
        for j in range(n1):
            row = d1.structure[i][j]
            for k in range(n1):
                if row[k]:
                    c[i][j][k] = row[k]
    for i in range(n2):
        for j in range(n2):
            row = d2.structure[i][j]
            for k in range(n2):
                if row[k]:
                    c[n1 + i][n1 + j][n1 + k] = row[k]
    form = d1.form.direct_sum(d2.form, negate_second=negate_second)
    structure = tuple(tuple(tuple(r) for r in p) for p in c)
    return QuadraticLieAlgebra(dim, structure, form)


def _dual_readout(pair, e):
    """Coordinates of the image of ``e`` in the dual of the Lagrangian half:
    pairings against the canonical basis of the half."""
    return tuple(pair.d.pairing(e, a) for a in pair.g.basis)


@dataclass(frozen=True)
class MorphismFiber:
    """Lagrangian, bracket-closed relation between two Manin pairs.

    ``check_bracket=False`` skips closure validation; pointwise snapshots
    of manifold-level data use it, because their integrability lives in
    derivatives the fiber cannot see.
    """

    source: ManinPairPoint
    target: ManinPairPoint
    K: Subspace
    check_bracket: bool = True

    def __post_init__(self):
        n1, n2 = self.source.d.dim, self.target.d.dim
        if self.K.ambient_dim != n1 + n2:
            raise ValueError("relation lives in the wrong ambient space")
        prod = product_algebra(self.source.d, self.target.d)
        if not is_lagrangian(prod.form, self.K):
            raise ValueError("relation is not Lagrangian for the difference pairing")
        if self.check_bracket:
            for i, u in enumerate(self.K.basis):
                for v in self.K.basis[i + 1 :]:
                    if not self.K.contains_vector(prod.bracket(u, v)):
                        raise ValueError("relation is not closed under the bracket")

    @property
    def source_dim(self):
        return self.source.d.dim


def identity_morphism(pair):
    n = pair.d.dim
    diag = canonicalize(
        [row + row for row in rat.identity(n)],
        2 * n,
    )
    return MorphismFiber(pair, pair, diag)


def graph_morphism(source, target, phi):
    """Morphism whose relation is the graph of the linear map ``phi``
    (a matrix taking source coordinates to target coordinates)."""
    phi = rat.matrix(phi)
    n1 = source.d.dim
    rows = [
        tuple(e) + tuple(col)
        for e, col in zip(rat.identity(n1), rat.transpose(phi))
    ]
    return MorphismFiber(source, target, canonicalize(rows, n1 + len(phi)))


def dual_pair_readout(m):
    """The relation pushed into the duals of the two halves."""
    r1 = m.source.g.dim
    rows = [
        _dual_readout(m.source, row[: m.source_dim])
        + _dual_readout(m.target, row[m.source_dim :])
        for row in m.K.basis
    ]
    span = canonicalize(rows, r1 + m.target.g.dim)
    return LinearRelation(r1, m.target.g.dim, span)


def check_morphism_def(m):
    """Graph criterion: the dual readout of the relation is the graph of a
    linear map from the source dual to the target dual."""
    return is_graph_over_factor(dual_pair_readout(m), "source") is not None


def check_morphism_equiv(m):
    """Transversality criterion: the relation meets the source half only at
    zero, and its slice over the source half projects isomorphically onto
    the target half."""
    n1, n2 = m.source_dim, m.target.d.dim
    a1_embedded = m.source.g.embed(tuple(range(n1)), n1 + n2)
    if m.K.intersection(a1_embedded).dim != 0:
        return False
    full_e2 = Subspace.full(n2).embed(tuple(range(n1, n1 + n2)), n1 + n2)
    slice_ = m.K.intersection(a1_embedded + full_e2)
    if slice_.dim != m.target.g.dim:
        return False
    return slice_.project(tuple(range(n1, n1 + n2))) == m.target.g


def compose_morphisms(m12, m23):
    """Relation composition; the composite must again satisfy the graph
    criterion, which is asserted."""
    if m12.target != m23.source:
        raise ValueError("middle pairs do not match")
    r12 = LinearRelation(m12.source_dim, m12.target.d.dim, m12.K)
    r23 = LinearRelation(m23.source_dim, m23.target.d.dim, m23.K)
    k13 = compose(r12, r23).graph
    out = MorphismFiber(
        m12.source,
        m23.target,
        k13,
        check_bracket=m12.check_bracket and m23.check_bracket,
    )
    if not check_morphism_def(out):
        raise ValueError("composite relation is not a morphism")
    return out


# ---------------------------------------------------------------------------
# Hamiltonian fibers


@lru_cache(maxsize=16)
def tangent_pair(t_dim):
    """Abelian pair on T plus T* with the evaluation pairing and the tangent
    half; the source of every Hamiltonian fiber's underlying morphism."""
    dim = 2 * t_dim
    structure = tuple(
        tuple((Fraction(0),) * dim for _ in range(dim)) for _ in range(dim)
    )
    d = QuadraticLieAlgebra(dim, structure, SplitForm.standard_double(t_dim))
    half = canonicalize(
        [
            tuple(Fraction(1 if j == i else 0) for j in range(dim))
            for i in range(t_dim)
        ],
        dim,
    )
    return ManinPairPoint(d, half)


@dataclass(frozen=True)
class HamiltonianFiber:
    """Pointwise Hamiltonian data: a Lagrangian in (T + T*) + E for the sum
    pairing, a moment differential into the base of the pair bundle, and the
    fiber anchor used by the support condition.

    ``dJ`` has one row per base direction (possibly none) and ``rho`` maps
    the pair fiber to the same base directions; the support condition says
    the two readouts agree on every element of the Lagrangian.
    """

    t_dim: int
    pair: ManinPairPoint
    K: Subspace
    dJ: tuple = ()
    rho: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "dJ", rat.matrix(self.dJ))
        object.__setattr__(self, "rho", rat.matrix(self.rho))
        t, n = self.t_dim, self.pair.d.dim
        if self.K.ambient_dim != 2 * t + n:
            raise ValueError("Lagrangian lives in the wrong ambient space")
        if len(self.dJ) != len(self.rho):
            raise ValueError("moment differential and anchor disagree on the base")
        if self.dJ and (len(self.dJ[0]) != t or len(self.rho[0]) != n):
            raise ValueError("moment differential or anchor has wrong width")
        form = SplitForm.standard_double(t).direct_sum(self.pair.d.form)
        if not is_lagrangian(form, self.K):
            raise ValueError("not Lagrangian for the sum pairing")
        for row in self.K.basis:
            u, e = row[:t], row[2 * t :]
            if self.dJ and rat.mat_vec(self.dJ, u) != rat.mat_vec(self.rho, e):
                raise ValueError("support condition fails: tangents do not match")

    @property
    def ambient_dim(self):
        return 2 * self.t_dim + self.pair.d.dim

    def morphism_fiber(self):
        """Underlying morphism from the tangent pair, in the difference
        convention: flip the sign of the covector block."""
        t = self.t_dim
        rows = [
            row[:t] + tuple(-x for x in row[t : 2 * t]) + row[2 * t :]
            for row in self.K.basis
        ]
        return MorphismFiber(
            tangent_pair(t),
            self.pair,
            canonicalize(rows, self.ambient_dim),
            check_bracket=False,
        )


def check_hamiltonian_fiber(h):
    """Both morphism predicates on the underlying morphism; they must agree
    (and the constructor has already enforced the Lagrangian and support
    conditions)."""
    m = h.morphism_fiber()
    d, e = check_morphism_def(m), check_morphism_equiv(m)
    return {"definition": d, "equivalent": e, "agree": d == e}


def extract_action(h):
    """Matrix of the induced action of the pair's half on tangents: for each
    basis vector a of the half, the unique tangent u with ((u, 0), a) in the
    Lagrangian."""
    t, n = h.t_dim, h.pair.d.dim
    bt = rat.transpose(h.K.basis)  # ambient coords as rows, K-coords as cols
    k = h.K.dim
    constraint = bt[t : 2 * t] + bt[2 * t :]
    columns = []
    for a in h.pair.g.basis:
        rhs = (Fraction(0),) * t + tuple(a)
        sol = rat.solve_linear(constraint, rhs, ncols=k)
        if sol is None:
            raise ValueError("no tangent lift: fiber violates transversality")
        part, null = sol
        u = rat.mat_vec(bt[:t], part)
        for nv in null:
            if any(x != 0 for x in rat.mat_vec(bt[:t], nv)):
                raise ValueError("tangent lift is not unique")
        columns.append(u)
    return rat.transpose(columns)


def action_tangents(h):
    """Subspace of tangents hit by the induced action."""
    act = extract_action(h)
    return canonicalize(rat.transpose(act), h.t_dim)


def cotangent_surjective(h):
    """True iff every covector occurs in the Lagrangian."""
    t = h.t_dim
    proj = h.K.project(tuple(range(t, 2 * t)))
    return proj.dim == t


def covectors_with_half_witness(h):
    """Covectors whose Lagrangian witness can be chosen with pair component
    in the half."""
    t, n = h.t_dim, h.pair.d.dim
    half_slab = (
        Subspace.full(2 * t).embed(tuple(range(2 * t)), h.ambient_dim)
        + h.pair.g.embed(tuple(range(2 * t, 2 * t + n)), h.ambient_dim)
    )
    return h.K.intersection(half_slab).project(tuple(range(t, 2 * t)))


def transversal_to_complement(h, splitting):
    """True iff the Lagrangian meets the embedded isotropic complement only
    at zero."""
    t, n = h.t_dim, h.pair.d.dim
    comp = splitting.dual_image().embed(tuple(range(2 * t, 2 * t + n)), h.ambient_dim)
    return h.K.intersection(comp).dim == 0
