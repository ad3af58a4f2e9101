import sys

import numpy as np

sys.path.insert(0, "/root/pkg/src")

from fractions import Fraction

from diracpairs import dictionary as dc
from diracpairs import numeric_manifold as nm
from diracpairs import quadratic_lie as ql
from diracpairs import reduction as red
from diracpairs import so3
from diracpairs import splitting as sp_mod

# symplectic plane: the bivector pairs the two coordinates with weight one
P = np.array([[0.0, 1.0], [-1.0, 0.0]])
fib2 = red.bivector_fibers(lambda x: P, 2)
pts2 = [np.array([0.3, -0.2]), np.array([1.1, 0.7]), np.array([-0.4, 0.9])]

fx = red.observable(lambda p: p[0], grad=lambda p: np.array([1.0, 0.0]), name="x")
fy = red.observable(lambda p: p[1], grad=lambda p: np.array([0.0, 1.0]), name="y")
br = red.poisson_bracket(fx, fy, fib2)
print("{x,y}:", [br.value(p) for p in pts2])
assert all(abs(br.value(p) - 1.0) < 1e-8 for p in pts2)
brxx = red.poisson_bracket(fx, fx, fib2)
assert all(abs(brxx.value(p)) < 1e-10 for p in pts2)
const = red.observable(lambda p: 4.0, grad=lambda p: np.zeros(2), name="c")
brc = red.poisson_bracket(const, fy, fib2)
assert all(abs(brc.value(p)) < 1e-12 for p in pts2)

# exact twin on the frozen graph fiber
q = dc.QuasiPoissonPointData(
    t_dim=2, a_dim=0,
    Pi=((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0))), rho_X=((), ()),
)
hfib = dc.k_from_quasi(q)
u = red.exact_flow_vector(2, hfib.K.ambient_dim - 4, hfib.K.basis, (Fraction(1), Fraction(0)))
print("exact u_x:", u)
assert u == (Fraction(0), Fraction(1))

# bracket laws with quadratics: nontrivial flow commutator
f2 = red.observable(lambda p: 0.5 * p[0] ** 2, grad=lambda p: np.array([p[0], 0.0]), name="xx")
g2 = red.observable(lambda p: 0.5 * p[1] ** 2, grad=lambda p: np.array([0.0, p[1]]), name="yy")
rep = red.check_bracket_laws(f2, g2, fib2, pts2)
print("laws:", rep.as_dict())
assert rep.passed

jac = red.jacobi_residual(f2, g2, fx, fib2, pts2)
print("jacobi:", jac)
assert jac < 1e-4

# rotation-group canonical geometry: admissible means class function
pair = ql.catalog()["so3-double"]
gpts = so3.sample_chart_points(5, seed=11)
chart = nm.Chart(3, tuple(gpts), name="so3")
cd = nm.make_dressing_courant(pair.d, pair.g, chart)
can = nm.canonical_hamiltonian(cd)
fibs = red.canonical_fibers(can)
sp = sp_mod.make_isotropic_splitting(pair)
_, rho_x, _ = nm.make_quasi_pi_field(cd, sp.j)

trace = red.observable(
    nm.group_trace_function,
    grad=lambda p: -2.0 * np.sin(np.linalg.norm(p)) * p / np.linalg.norm(p),
    name="tr",
)
samples = red.hamiltonian_vector(trace, fibs, gpts)
print("trace admissible:", [s.admissible for s in samples])
print("trace |u|:", max(float(np.linalg.norm(s.vector)) for s in samples))
print("trace conservation:", max(s.conservation for s in samples))
assert all(s.admissible for s in samples)
assert max(float(np.linalg.norm(s.vector)) for s in samples) < 1e-6

coord = red.observable(lambda p: p[1], grad=lambda p: np.array([0.0, 1.0, 0.0]), name="x1")
pairs = red.admissibility_matches_invariance(coord, rho_x, fibs, gpts)
print("coord pairs:", pairs)
assert all(inv == adm for inv, adm in pairs) and not any(a for _, a in pairs)
pairs_t = red.admissibility_matches_invariance(trace, rho_x, fibs, gpts)
assert all(inv and adm for inv, adm in pairs_t)

# reduction to a conjugacy sphere
radius = float(np.linalg.norm(gpts[0]))
shell = red.observable(
    lambda p: float(p @ p) - radius**2, grad=lambda p: 2.0 * p, name="shell"
)
seeds = so3.sample_chart_points(4, seed=23)
orbit = red.OrbitDescription.from_projection([shell], seeds)
print("orbit radii:", [float(np.linalg.norm(p)) for p in orbit.samples])

norm2 = red.observable(
    lambda p: float(p @ p), grad=lambda p: 2.0 * p, name="n2"
)
rep_o = red.reduce_to_orbit(orbit, trace, norm2, fibs, action_field=rho_x)
print("orbit report:", rep_o.as_dict())
assert rep_o.passed
assert max(abs(v) for v in rep_o.values) < 1e-6

# no constraints: the report collapses to the ambient bracket
whole = red.OrbitDescription((), tuple(pts2))
rep_w = red.reduce_to_orbit(whole, fx, fy, fib2)
print("whole-space values:", rep_w.values)
assert all(abs(v - 1.0) < 1e-8 for v in rep_w.values)
assert rep_w.extension_residual == 0.0

# degenerate constraint must be rejected
try:
    red.OrbitDescription(
        (red.observable(lambda p: float(p @ p), grad=lambda p: 2.0 * p),),
        (np.zeros(3),),
        locus_tol=1e-3,
    )
except ValueError as e:
    print("rank rejection:", e)
else:
    raise AssertionError("degenerate constraint accepted")

print("reduction smoke OK")
