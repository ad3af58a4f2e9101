"""Shared generators for the exact-tier tests.

Randomness always flows through an explicit numpy generator so every test
is reproducible from its seed.  Lagrangian subspaces come from graphs of
antisymmetric matrices composed with coordinate slot swaps; both steps
preserve the standard split pairing, and the swaps break graph-ness so
the samples are not all transverse to the covector factor.
"""

from fractions import Fraction

import numpy as np

from diracpairs import rational as rat
from diracpairs.dictionary import (
    ExactIdentification,
    QuasiPoissonPointData,
    abstract_double,
    identification_from_anchor,
)
from diracpairs.exact_linear import Subspace, canonicalize
from diracpairs.quadratic_lie import catalog
from diracpairs.splitting import make_isotropic_splitting


def rng_for(seed):
    return np.random.default_rng(seed)


def random_fraction(rng, lo=-4, hi=5, den=4):
    return Fraction(int(rng.integers(lo, hi)), int(rng.integers(1, den)))


def random_matrix(rng, m, n, lo=-4, hi=5, den=4):
    return rat.matrix(
        [[random_fraction(rng, lo, hi, den) for _ in range(n)] for _ in range(m)]
    )


def random_antisymmetric(rng, t):
    rows = [[Fraction(0)] * t for _ in range(t)]
    for i in range(t):
        for j in range(i + 1, t):
            v = random_fraction(rng)
            rows[i][j], rows[j][i] = v, -v
    return rat.matrix(rows)


def random_lagrangian(rng, t):
    """Random Lagrangian subspace of the standard split space of rank 2t."""
    b = random_antisymmetric(rng, t)
    rows = [tuple(e) + tuple(col) for e, col in zip(rat.identity(t), b)]
    out = []
    swaps = [i for i in range(t) if rng.random() < 0.4]
    for row in rows:
        row = list(row)
        for i in swaps:
            row[i], row[t + i] = row[t + i], row[i]
        out.append(tuple(row))
    return canonicalize(out, 2 * t)


def random_injective(rng, m, q):
    """Random m x q matrix of full column rank (q <= m)."""
    while True:
        f = random_matrix(rng, m, q)
        if rat.rank(f) == q:
            return f


def random_quasi(rng, t, a_dim):
    return QuasiPoissonPointData(
        t_dim=t,
        a_dim=a_dim,
        Pi=random_antisymmetric(rng, t),
        rho_X=random_matrix(rng, t, a_dim) if a_dim else (),
    )


def cayley_rotation(rng, den=4):
    """Exact rational orthogonal 3x3 matrix with determinant one."""
    s = random_antisymmetric(rng, 3)
    i3 = rat.identity(3)
    return rat.mat_mul(rat.mat_sub(i3, s), rat.invert(rat.mat_add(i3, s)))


def rotation_cayley_ident(rng):
    """Exact splitting of the rotation double from an orthogonal anchor.

    The anchor [-I | R] with R exactly orthogonal is coisotropic for the
    double's pairing because R R^T = I holds on the nose.
    """
    pair = catalog()["so3-double"]
    r = cayley_rotation(rng)
    rho = rat.hstack(rat.mat_neg(rat.identity(3)), r)
    return identification_from_anchor(pair, rho)


def abstract_ident(r):
    """Splitting of the abelian double of rank r with anchor [0 | I]."""
    pair = abstract_double(r)
    rho = rat.hstack(rat.zeros(r, r), rat.identity(r))
    return identification_from_anchor(pair, rho)


def moment_compatible_quasi(rng, t, r):
    """(q, dJ) whose fiber over the abelian double satisfies the support
    condition: dJ has the invertible-left-block shape, the bivector has a
    vanishing upper-left block, and the action is -Pi dJ^T."""
    assert t >= r
    while True:
        d = random_matrix(rng, r, r)
        if rat.rank(d) == r:
            break
    dj = rat.hstack(d, rat.zeros(r, t - r))
    pi = [[Fraction(0)] * t for _ in range(t)]
    for i in range(t):
        for j in range(max(i + 1, r), t):
            v = random_fraction(rng)
            pi[i][j], pi[j][i] = v, -v
    pi = rat.matrix(pi)
    rho_x = rat.mat_neg(rat.mat_mul(pi, rat.transpose(dj)))
    q = QuasiPoissonPointData(t_dim=t, a_dim=r, Pi=pi, rho_X=rho_x)
    return q, dj


def hyperbolic_frame(pair):
    """Columns mapping the standard split space onto the pair's ambient:
    half basis first, then the isotropic complement dual to it."""
    sp = make_isotropic_splitting(pair)
    return rat.hstack(rat.transpose(pair.g.basis), sp.j)


def random_lagrangian_for_pair(rng, pair):
    """Random Lagrangian subspace for the pair's own split pairing."""
    n = pair.d.dim
    frame = hyperbolic_frame(pair)
    std = random_lagrangian(rng, n // 2)
    rows = [tuple(rat.mat_vec(frame, v)) for v in std.basis]
    return canonicalize(rows, n)


def random_relation_lagrangian(rng, pair1, pair2):
    """Random Lagrangian for the difference form on pair1 + pair2.

    The second pair's pairing enters negated, so its isotropic complement
    is flipped to keep the combined frame hyperbolic; a slot permutation
    then lines the frame up with one standard split space.
    """
    a, b = pair1.d.dim // 2, pair2.d.dim // 2
    f1 = hyperbolic_frame(pair1)
    sp2 = make_isotropic_splitting(pair2)
    f2 = rat.hstack(rat.transpose(pair2.g.basis), rat.mat_neg(sp2.j))
    frame = rat.block_diag(f1, f2)
    std = random_lagrangian(rng, a + b)
    order = (
        list(range(a))
        + list(range(2 * a, 2 * a + b))
        + list(range(a, 2 * a))
        + list(range(2 * a + b, 2 * (a + b)))
    )
    rows = []
    for v in std.basis:
        arranged = [Fraction(0)] * len(order)
        for std_slot, block_slot in enumerate(order):
            arranged[block_slot] = v[std_slot]
        rows.append(tuple(rat.mat_vec(frame, arranged)))
    return canonicalize(rows, 2 * (a + b))
