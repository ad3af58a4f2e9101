from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from diracpairs import rational as rat
from diracpairs.dictionary import abstract_double, k_from_quasi
from diracpairs.exact_linear import Subspace, canonicalize
from diracpairs.morphism import (
    HamiltonianFiber,
    MorphismFiber,
    check_hamiltonian_fiber,
    check_morphism_def,
    check_morphism_equiv,
    compose_morphisms,
    extract_action,
    graph_morphism,
    identity_morphism,
    product_algebra,
    tangent_pair,
)
from diracpairs.quadratic_lie import catalog


def test_identity_morphism_passes_both_criteria():
    for name in ("abelian-r2", "so3-double", "bialgebra-double"):
        m = identity_morphism(catalog()[name])
        assert check_morphism_def(m)
        assert check_morphism_equiv(m)


def test_half_sum_relation_fails_both_criteria():
    pair = catalog()["abelian-r4"]
    n = pair.d.dim
    k = pair.g.embed(tuple(range(n)), 2 * n) + pair.g.embed(
        tuple(range(n, 2 * n)), 2 * n
    )
    m = MorphismFiber(source=pair, target=pair, K=k)
    assert not check_morphism_def(m)
    assert not check_morphism_equiv(m)


def test_product_algebra_negates_the_second_pairing():
    d1 = catalog()["so3-double"].d
    prod = product_algebra(d1, d1)
    assert prod.dim == 12
    assert prod.form.gram == rat.block_diag(d1.form.gram, rat.mat_neg(d1.form.gram))
    u = (1, 0, 0, 0, 0, 0) + (0,) * 6
    v = (0, 1, 0, 0, 0, 0) + (0,) * 6
    assert prod.bracket(u, v)[:6] == d1.bracket(u[:6], v[:6])


def test_graph_morphism_of_a_bracket_isometry():
    pair = catalog()["so3-double"]
    rng = helpers.rng_for(5)
    r = helpers.cayley_rotation(rng)
    phi = rat.block_diag(r, r)
    m = graph_morphism(pair, pair, phi)
    assert check_morphism_def(m)
    assert check_morphism_equiv(m)


def test_graph_morphism_rejects_non_isometries():
    pair = catalog()["abelian-r2"]
    with pytest.raises(ValueError):
        graph_morphism(pair, pair, rat.matrix([[2, 0], [0, 1]]))


def test_composition_identities():
    pair = catalog()["so3-double"]
    ident = identity_morphism(pair)
    assert compose_morphisms(ident, ident).K == ident.K
    rng = helpers.rng_for(11)
    r = helpers.cayley_rotation(rng)
    m = graph_morphism(pair, pair, rat.block_diag(r, r))
    assert compose_morphisms(m, ident).K == m.K
    assert compose_morphisms(ident, m).K == m.K


def test_composition_of_two_graphs_is_the_graph_of_the_composite():
    pair = catalog()["so3-double"]
    rng = helpers.rng_for(17)
    r1 = helpers.cayley_rotation(rng)
    r2 = helpers.cayley_rotation(rng)
    p1 = rat.block_diag(r1, r1)
    p2 = rat.block_diag(r2, r2)
    m1 = graph_morphism(pair, pair, p1)
    m2 = graph_morphism(pair, pair, p2)
    comp = compose_morphisms(m1, m2)
    expect = graph_morphism(pair, pair, rat.mat_mul(p2, p1))
    assert comp.K == expect.K
    assert check_morphism_def(comp)


def test_tangent_pair_shape():
    tp = tangent_pair(3)
    assert tp.d.dim == 6
    assert tp.g.dim == 3
    assert tangent_pair(3) is tp


def test_hamiltonian_fiber_zero_data():
    rng = helpers.rng_for(2)
    q = helpers.random_quasi(rng, 3, 0)
    h = k_from_quasi(q)
    rep = check_hamiltonian_fiber(h)
    assert rep["definition"] and rep["equivalent"] and rep["agree"]


def test_hamiltonian_fiber_validation_errors():
    pair = abstract_double(1)
    # not Lagrangian: the tangent line pairs with itself through the sum form
    bad = canonicalize([[1, 0, 1, 0, 0, 0]], 6)
    with pytest.raises(ValueError):
        HamiltonianFiber(t_dim=2, pair=pair, K=bad)
    # support condition: a nonzero moment differential must see the flow
    q = helpers.random_quasi(helpers.rng_for(3), 2, 1)
    h = k_from_quasi(q)
    with pytest.raises(ValueError):
        HamiltonianFiber(
            t_dim=2,
            pair=h.pair,
            K=h.K,
            dJ=rat.matrix([[1, 0], [0, 1]]),
            rho=rat.zeros(2, 2),
        )


def test_extract_action_returns_the_action_matrix():
    rng = helpers.rng_for(9)
    for t, r in ((2, 1), (3, 2), (4, 3)):
        q = helpers.random_quasi(rng, t, r)
        h = k_from_quasi(q)
        assert extract_action(h) == q.rho_X


def test_extract_action_zero_fiber():
    q = helpers.random_quasi(helpers.rng_for(1), 3, 0)
    h = k_from_quasi(q)
    assert rat.matrix(extract_action(h)) == ()


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**20))
def test_fiber_criteria_agree_on_random_bivector_fibers(seed):
    rng = helpers.rng_for(seed)
    t = int(rng.integers(1, 4))
    r = int(rng.integers(0, 3))
    q = helpers.random_quasi(rng, t, r)
    h = k_from_quasi(q)
    rep = check_hamiltonian_fiber(h)
    assert rep["agree"]
    assert rep["definition"] and rep["equivalent"]


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**20))
def test_morphism_criteria_agree_on_random_relations(seed):
    rng = helpers.rng_for(seed)
    names = ["abelian-r2", "abelian-r4", "so3-double"]
    p1 = catalog()[names[int(rng.integers(0, 3))]]
    p2 = catalog()[names[int(rng.integers(0, 2))]]
    k = helpers.random_relation_lagrangian(rng, p1, p2)
    m = MorphismFiber(source=p1, target=p2, K=k, check_bracket=False)
    assert check_morphism_def(m) == check_morphism_equiv(m)
