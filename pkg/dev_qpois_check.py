import sys
import time

import numpy as np

sys.path.insert(0, "/root/pkg/src")

from diracpairs import numeric_manifold as nm
from diracpairs import quadratic_lie as ql
from diracpairs import so3
from diracpairs import splitting as sp_mod

pair = ql.catalog()["so3-double"]
pts = so3.sample_chart_points(4, seed=7)
chart = nm.Chart(3, tuple(pts), name="so3")
cd = nm.make_dressing_courant(pair.d, pair.g, chart)

sp = sp_mod.make_isotropic_splitting(pair)
qd = sp_mod.derive_quasi_data(pair, sp)

pi, rho_x, rho_astar = nm.make_quasi_pi_field(cd, sp.j)
exact = nm.make_exact_quasi_pi(cd, sp.j)
jmap = nm.MapField.identity(3)

funcs = nm.scalar_library(3) + [nm.group_trace_function]

t0 = time.time()
rep = nm.check_quasi_poisson(
    pi, rho_x, jmap, qd.chi, qd.F, pts, rho_astar=rho_astar,
    exact_fibers=exact, funcs=funcs,
)
t1 = time.time()
print("full report (%.2fs, 4 pts):" % (t1 - t0), rep.as_dict())
assert rep.passed
assert rep.sharp_exact and rep.sharp_compat == 0.0
assert rep.jacobiator < 1e-6

# float sharp path
rep_f = nm.check_quasi_poisson(
    pi, rho_x, jmap, qd.chi, qd.F, pts[:2], rho_astar=rho_astar, funcs=funcs[:3],
)
print("float sharp:", rep_f.as_dict())
assert rep_f.passed and not rep_f.sharp_exact

# linear Poisson on the dual of the rotation algebra: plain Jacobi identity
lin_pts = [np.array([0.3, -0.7, 1.1]), np.array([1.2, 0.4, -0.5]),
           np.array([-0.9, 0.8, 0.2])]
rep_lin = nm.check_quasi_poisson(
    nm.so3_linear_poisson, lambda x: np.zeros((3, 0)), jmap, (), (), lin_pts,
    tol=1e-6,
)
print("linear dual:", rep_lin.as_dict())
assert rep_lin.jacobiator < 1e-6
print("qpois smoke OK")
