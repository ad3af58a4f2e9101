import sys
import time

import numpy as np

sys.path.insert(0, "/root/pkg/src")

from fractions import Fraction

from diracpairs import dictionary as dc
from diracpairs import numeric_manifold as nm
from diracpairs import quadratic_lie as ql
from diracpairs import rational as rat
from diracpairs import so3
from diracpairs.exact_linear import canonicalize

pair = ql.catalog()["so3-double"]
pts = so3.sample_chart_points(6, seed=42)
chart = nm.Chart(3, tuple(pts), name="so3")
cd = nm.make_dressing_courant(pair.d, pair.g, chart)
can = nm.canonical_hamiltonian(cd)
s_fn, phi_fn = can.s, can.phi

ds = nm.dirac_of_pair(cd, pair.g, s_fn)


def exact_fibers(x):
    rho_q = cd.exact_anchor(np.asarray(x, float), 10**8)
    ident = dc.identification_from_anchor(pair, rho_q)
    hf = can.frozen_fiber(x)
    lx = dc.dirac_from_k(hf, ident).L.basis
    ls_rows = [
        tuple(rat.mat_vec(rho_q, a)) + tuple(rat.mat_vec(ident.s_star, a))
        for a in pair.g.basis
    ]
    ls = canonicalize(ls_rows, 6).basis
    return lx, ls, rat.identity(3)


jmap = nm.MapField.identity(3)

t0 = time.time()
reps = nm.check_strong_dirac(
    jmap, ds.basis_at, ds.basis_at, pts[:4], phi=phi_fn, exact_fibers=exact_fibers
)
t1 = time.time()
print("exact flagship (%.2fs for 4 pts):" % (t1 - t0))
for r in reps:
    print("  ", r.as_dict())
assert all(r.inclusion and r.transversality and r.exact for r in reps)
assert all(r.integrability_residual < 1e-6 for r in reps)

reps_f = nm.check_strong_dirac(jmap, ds.basis_at, ds.basis_at, pts[:2], phi=phi_fn)
print("float path:")
for r in reps_f:
    print("  ", r.as_dict())
assert all(r.inclusion and r.transversality and not r.exact for r in reps_f)

# negative control: rank-2 presymplectic graph pushed along a constant map
omega = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def lx_deg(x):
    return np.hstack([np.eye(3), omega @ np.eye(3)])


def ls_triv(y):
    return np.hstack([np.eye(3), np.zeros((3, 3))])


const = nm.MapField.constant(np.zeros(3), 3)
reps_n = nm.check_strong_dirac(const, lx_deg, ls_triv, pts[:2])
print("negative control:")
for r in reps_n:
    print("  ", r.as_dict())
assert all(not r.transversality for r in reps_n)
print("strong-dirac smoke OK")
