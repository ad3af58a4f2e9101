import math
from fractions import Fraction

import numpy as np
import pytest

from diracpairs import numeric_manifold as nm
from diracpairs import rational as rat
from diracpairs.dictionary import dirac_from_k, identification_from_anchor
from diracpairs.exact_linear import canonicalize
from diracpairs.morphism import check_hamiltonian_fiber


@pytest.fixture(scope="module")
def standard3(flat3):
    chart, _ = flat3
    return nm.make_standard_twisted(chart)


@pytest.fixture(scope="module")
def twisted3(flat3):
    chart, _ = flat3
    return nm.make_standard_twisted(chart, nm.volume_form(3))


def test_default_constants_are_pinned():
    assert nm.DEFAULT_STEP == 1e-4
    assert nm.DEFAULT_TOL == 1e-6
    assert nm.JACOBIATOR_SIGN == 1.0


def test_volume_form_is_the_alternating_tensor():
    vol = nm.volume_form(3)
    assert vol.shape == (3, 3, 3)
    assert vol[0, 1, 2] == 1.0
    assert vol[1, 2, 0] == 1.0
    assert vol[1, 0, 2] == -1.0
    assert vol[0, 0, 2] == 0.0
    assert np.allclose(vol, -np.swapaxes(vol, 0, 1))
    assert np.allclose(vol, -np.swapaxes(vol, 1, 2))


def test_untwisted_constant_sections_commute(standard3, flat3):
    _, pts = flat3
    basis = [nm.SectionField.constant(np.eye(6)[i]) for i in range(6)]
    for x in pts[:3]:
        for i in range(6):
            for j in range(6):
                out = standard3.bracket_at(basis[i], basis[j], x)
                assert np.allclose(out, 0.0, atol=1e-12)


def test_pairing_couples_vectors_with_covectors(standard3, flat3):
    _, pts = flat3
    tangent = nm.SectionField.constant(np.eye(6)[0])
    dual = nm.SectionField.constant(np.eye(6)[3])
    other = nm.SectionField.constant(np.eye(6)[4])
    assert standard3.pair_at(tangent, dual, pts[0]) == pytest.approx(1.0)
    assert standard3.pair_at(tangent, other, pts[0]) == pytest.approx(0.0)
    assert standard3.anchor_coisotropy_residual(pts[:4]) == 0.0
    assert np.allclose(
        standard3.rho_star(pts[0]), np.vstack([np.zeros((3, 3)), np.eye(3)])
    )


def test_volume_twist_feeds_the_covector_leg(twisted3, flat3):
    _, pts = flat3
    ex = nm.SectionField.constant(np.eye(6)[0])
    ey = nm.SectionField.constant(np.eye(6)[1])
    for x in pts[:3]:
        assert np.allclose(twisted3.bracket_at(ex, ey, x), np.eye(6)[5], atol=1e-9)
        assert np.allclose(twisted3.bracket_at(ey, ex, x), -np.eye(6)[5], atol=1e-9)
    alpha = nm.SectionField.constant(np.eye(6)[3])
    beta = nm.SectionField.constant(np.eye(6)[4])
    assert np.allclose(twisted3.bracket_at(alpha, beta, pts[0]), 0.0, atol=1e-12)
    assert twisted3.label == "standard-twisted"


def test_axiom_report_passes_for_standard_bundles(standard3, twisted3, flat3):
    _, pts = flat3
    for c in (standard3, twisted3):
        rep = nm.check_axioms_numeric(c, points=pts[:2])
        assert rep.passed
        assert rep.residuals["anchor_coisotropy"] == 0.0
        assert max(rep.residuals.values()) < 1e-6


def linear_volume_twist():
    base = np.zeros((4, 4, 4))
    for (i, j, k), sign in (
        ((1, 2, 3), 1.0),
        ((2, 3, 1), 1.0),
        ((3, 1, 2), 1.0),
        ((1, 3, 2), -1.0),
        ((3, 2, 1), -1.0),
        ((2, 1, 3), -1.0),
    ):
        base[i, j, k] = sign
    return lambda x: float(x[0]) * base


def test_nonclosed_twist_is_rejected_then_breaks_jacobi():
    rng = np.random.default_rng(11)
    pts = tuple(rng.uniform(-0.5, 0.5, size=4) for _ in range(2))
    chart = nm.Chart(4, pts, name="flat4")
    twist = linear_volume_twist()
    with pytest.raises(ValueError, match="not closed"):
        nm.make_standard_twisted(chart, twist)
    broken = nm.make_standard_twisted(chart, twist, check_closed=False)
    e = [nm.SectionField.constant(np.eye(8)[i]) for i in range(3)]
    x = pts[0]
    lhs = broken.bracket_at(e[0], broken.bracket(e[1], e[2]), x)
    rhs = broken.bracket_at(broken.bracket(e[0], e[1]), e[2], x)
    rhs = rhs + broken.bracket_at(e[1], broken.bracket(e[0], e[2]), x)
    assert float(np.max(np.abs(lhs - rhs))) > 1e-3
    rep = nm.check_axioms_numeric(broken, points=pts[:1], triples=((0, 1, 2),))
    assert rep.residuals["c1_jacobi"] > 1e-3
    assert not rep.passed


def test_bracket_error_shrinks_with_the_step(flat3):
    chart, pts = flat3
    factory = lambda step: nm.make_standard_twisted(chart, nm.volume_form(3), h=step)
    coarse = nm.fd_convergence_probe(factory, pts[0], 1e-2)
    fine = nm.fd_convergence_probe(factory, pts[0], 1e-3)
    assert fine < coarse / 10.0
    assert fine < 1e-5


def test_dressing_bracket_extends_the_algebra_bracket(dressing, so3_pair, so3_points):
    def basis_vec(i):
        return tuple(Fraction(1 if k == i else 0) for k in range(6))

    basis = [nm.SectionField.constant(np.eye(6)[i]) for i in range(6)]
    x = np.asarray(so3_points[0], float)
    for i in range(6):
        for j in range(6):
            got = dressing.bracket_at(basis[i], basis[j], x)
            want = np.array(
                [float(v) for v in so3_pair.d.bracket(basis_vec(i), basis_vec(j))]
            )
            assert np.allclose(got, want, atol=1e-9)


def test_dressing_axiom_report(dressing, so3_points):
    pts = [np.asarray(x, float) for x in so3_points[:2]]
    rep = nm.check_axioms_numeric(dressing, points=pts)
    assert rep.passed
    assert dressing.anchor_coisotropy_residual(so3_points[:6]) < 1e-10


def test_dressing_chart_requires_the_rotation_double(so3_pair):
    chart = nm.Chart(2, (np.zeros(2),), name="bad")
    with pytest.raises(ValueError, match="six-dimensional"):
        nm.make_dressing_courant(so3_pair.d, so3_pair.g, chart)


def test_exact_splitting_of_the_standard_bundle(standard3, flat3):
    _, pts = flat3
    s, phi = nm.make_exact_splitting(standard3)
    assert np.allclose(
        s(pts[0]), np.vstack([np.eye(3), np.zeros((3, 3))]), atol=1e-12
    )
    assert np.allclose(phi(pts[0]), 0.0, atol=1e-10)
    res = nm.splitting_residuals(standard3, s, points=pts[:3])
    assert res["composition"] < 1e-12
    assert res["isotropy"] < 1e-12


def test_exact_splitting_of_the_dressing_bundle(dressing, so3_points):
    s, phi = nm.make_exact_splitting(dressing)
    res = nm.splitting_residuals(dressing, s, points=so3_points[:4])
    assert res["composition"] < 1e-9
    assert res["isotropy"] < 1e-9
    p = phi(np.asarray(so3_points[0], float))
    assert p.shape == (3, 3, 3)
    assert np.allclose(p, -np.swapaxes(p, 1, 2), atol=1e-12)


def test_splitting_requires_an_exact_onto_anchor(flat3):
    chart, _ = flat3
    thin = nm.CourantNumeric(
        chart=chart,
        rank=4,
        gram=np.eye(4),
        anchor=lambda x: np.zeros((3, 4)),
        bracket_at=lambda e1, e2, x: np.zeros(4),
        step=1e-4,
        label="thin",
    )
    with pytest.raises(ValueError, match="twice the chart dimension"):
        nm.make_exact_splitting(thin)
    flat_anchor = nm.CourantNumeric(
        chart=chart,
        rank=6,
        gram=np.eye(6),
        anchor=lambda x: np.zeros((3, 6)),
        bracket_at=lambda e1, e2, x: np.zeros(6),
        step=1e-4,
        label="flat-anchor",
    )
    with pytest.raises(ValueError, match="not onto"):
        nm.make_exact_splitting(flat_anchor)


def test_tangent_half_gives_the_plain_tangent_dirac_field(standard3, flat3):
    _, pts = flat3
    s, _ = nm.make_exact_splitting(standard3)
    half = np.hstack([np.eye(3), np.zeros((3, 3))])
    field = nm.dirac_of_pair(standard3, half, s)
    assert np.allclose(
        field.basis_at(pts[0]), np.hstack([np.eye(3), np.zeros((3, 3))]), atol=1e-12
    )
    rep = field.lagrangian_report(pts[0])
    assert rep["isotropy"] < 1e-12
    assert rep["rank_drop"] == 0
    assert field.integrability_residual(pts[0], None) < 1e-10


def test_dressing_half_field_is_lagrangian_and_integrable(dressing, so3_pair, so3_points):
    s, phi = nm.make_exact_splitting(dressing)
    field = nm.dirac_of_pair(dressing, so3_pair.g, s)
    x = np.asarray(so3_points[0], float)
    rep = field.lagrangian_report(x)
    assert rep["isotropy"] < 1e-8
    assert rep["rank_drop"] == 0
    assert field.integrability_residual(x, phi) < 1e-6


def test_half_must_close_under_the_algebra_bracket(dressing):
    s, _ = nm.make_exact_splitting(dressing)
    mixed = canonicalize(
        [
            (1, 0, 0, 1, 0, 0),
            (0, 1, 0, 0, 0, 0),
        ],
        6,
    )
    with pytest.raises(ValueError, match="closed under"):
        nm.dirac_of_pair(dressing, mixed, s)


def test_canonical_fibers_freeze_to_exact_hamiltonian_data(canonical_space, so3_points):
    x = np.asarray(so3_points[0], float)
    rows = canonical_space.fiber_rows(x)
    assert rows.shape == (6, 12)
    frozen = canonical_space.frozen_fiber(x)
    assert frozen.dJ == rat.identity(3)
    rep = check_hamiltonian_fiber(frozen)
    assert rep["definition"] and rep["equivalent"] and rep["agree"]


def test_canonical_generator_families_stay_in_the_fiber(canonical_space, so3_points):
    res = canonical_space.generator_residuals(np.asarray(so3_points[0], float))
    assert set(res) == {"half_half", "half_covector", "covector_covector"}
    assert max(res.values()) < 1e-6


def test_orbit_space_projects_and_stays_tangent(dressing):
    orbit = nm.canonical_orbit_hamiltonian(dressing, 0.8)
    p = orbit.project(np.array([1.0, 2.0, 2.0]))
    assert np.linalg.norm(p) == pytest.approx(0.8)
    pts = orbit.orbit_points(6, seed=5)
    assert len(pts) == 6
    for x in pts:
        assert np.linalg.norm(x) == pytest.approx(0.8)
        assert orbit.tangency_residual(x) < 1e-10
    rep = orbit.fiber_report(pts[0])
    assert rep["isotropy"] < 1e-8
    assert rep["dim"] == 5
    with pytest.raises(ValueError, match="origin"):
        orbit.project(np.zeros(3))


def test_strong_map_report_for_the_identity_moment_map(dressing, so3_pair, so3_points):
    s, phi = nm.make_exact_splitting(dressing)
    field = nm.dirac_of_pair(dressing, so3_pair.g, s)
    jmap = nm.MapField.identity(3)
    pts = [np.asarray(x, float) for x in so3_points[:3]]
    reports = nm.check_strong_dirac(jmap, field.basis_at, field.basis_at, pts, phi=phi)
    for r in reports:
        assert r.passed
        assert not r.exact
        assert r.integrability_residual < 1e-6


def test_strong_map_report_on_frozen_exact_fibers(
    dressing, so3_pair, canonical_space, so3_points
):
    s, phi = nm.make_exact_splitting(dressing)
    field = nm.dirac_of_pair(dressing, so3_pair.g, s)
    jmap = nm.MapField.identity(3)

    def exact_fibers(x):
        rho_q = dressing.exact_anchor(np.asarray(x, float), 10**8)
        ident = identification_from_anchor(so3_pair, rho_q)
        lx_rows = dirac_from_k(canonical_space.frozen_fiber(x), ident).L.basis
        ls_rows = [
            tuple(rat.mat_vec(rho_q, a)) + tuple(rat.mat_vec(ident.s_star, a))
            for a in so3_pair.g.basis
        ]
        return lx_rows, ls_rows, rat.identity(3)

    pts = [np.asarray(x, float) for x in so3_points[:2]]
    reports = nm.check_strong_dirac(
        jmap, field.basis_at, field.basis_at, pts, phi=phi, exact_fibers=exact_fibers
    )
    for r in reports:
        assert r.exact and r.passed
        assert r.inclusion_residual == 0.0
        assert r.integrability_residual < 1e-6


def test_strong_map_fails_for_a_collapsing_target(flat3):
    _, pts = flat3
    omega = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    rows = np.hstack([np.eye(3), omega])
    target_rows = np.hstack([np.eye(3), np.zeros((3, 3))])
    jmap = nm.MapField.constant(np.zeros(3), 3)
    reports = nm.check_strong_dirac(
        jmap, lambda x: rows, lambda y: target_rows, [pts[0]]
    )
    assert reports[0].transversality is False
    assert reports[0].passed is False


def test_quasi_bivector_field_is_antisymmetric_and_sharp_compatible(
    dressing, so3_splitting, so3_points
):
    pi, rho_x, rho_astar = nm.make_quasi_pi_field(dressing, so3_splitting.j)
    for x in so3_points[:4]:
        x = np.asarray(x, float)
        p = pi(x)
        assert p.shape == (3, 3)
        assert np.allclose(p, -p.T, atol=1e-10)
        assert np.allclose(p.T, rho_x(x) @ np.asarray(rho_astar(x)).T, atol=1e-10)


def test_exact_quasi_fibers_satisfy_the_sharp_identity_exactly(
    dressing, so3_splitting, so3_points
):
    fibers = nm.make_exact_quasi_pi(dressing, so3_splitting.j)
    fb = fibers(np.asarray(so3_points[0], float))
    pi = fb["pi"]
    assert pi == rat.mat_neg(rat.transpose(pi))
    lhs = rat.mat_mul(rat.transpose(pi), rat.transpose(fb["dj"]))
    rhs = rat.mat_mul(fb["rho_x"], rat.transpose(fb["rho_astar"]))
    assert lhs == rhs


def test_quasi_poisson_identities_hold_along_the_dressing_chart(
    dressing, so3_splitting, so3_quasi_data, so3_points
):
    pi, rho_x, rho_astar = nm.make_quasi_pi_field(dressing, so3_splitting.j)
    fibers = nm.make_exact_quasi_pi(dressing, so3_splitting.j)
    funcs = list(nm.scalar_library(3)[:4]) + [nm.group_trace_function]
    rep = nm.check_quasi_poisson(
        pi,
        rho_x,
        nm.MapField.identity(3),
        so3_quasi_data.chi,
        so3_quasi_data.F,
        [np.asarray(x, float) for x in so3_points[:2]],
        exact_fibers=fibers,
        funcs=funcs,
    )
    assert rep.passed
    assert rep.sharp_exact
    assert rep.sharp_compat == 0.0
    assert rep.jacobiator < 1e-4
    assert rep.lie_compat < 1e-4


def test_linear_rotation_poisson_satisfies_jacobi(flat3):
    _, pts = flat3
    no_action = lambda x: np.zeros((3, 0))
    rep = nm.check_quasi_poisson(
        nm.so3_linear_poisson,
        no_action,
        nm.MapField.identity(3),
        (),
        (),
        pts[:3],
        funcs=nm.scalar_library(3)[:4],
    )
    assert rep.passed
    assert rep.jacobiator < 1e-6
    assert rep.lie_compat == 0.0
    assert not rep.sharp_exact


def test_group_trace_probe_matches_rotation_angles():
    assert nm.group_trace_function(np.zeros(3)) == pytest.approx(3.0)
    assert nm.group_trace_function(np.array([math.pi, 0.0, 0.0])) == pytest.approx(-1.0)


def test_section_library_starts_with_the_constant_frame(flat3):
    lib = nm.section_library(6, 3)
    assert len(lib) > 6
    x = np.zeros(3)
    for i in range(6):
        assert np.allclose(lib[i](x), np.eye(6)[i])
    scaled = lib[0].scaled_by(lambda y: 2.0)
    assert np.allclose(scaled(x), 2.0 * np.eye(6)[0])
