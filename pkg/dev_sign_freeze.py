"""Dev: freeze TOP_BRACKET_SIGN using a non-unimodular Lagrangian half."""
from fractions import Fraction as F

from diracpairs import quadratic_lie as qla
from diracpairs import splitting as sp

pair = qla.catalog()["solvable-cotangent"]
print("solvable-cotangent validates")

s0 = sp.make_isotropic_splitting(pair)
d0 = sp.derive_quasi_data(pair, s0)
assert all(sp.tensor_is_zero(fi) for fi in d0.F) and sp.tensor_is_zero(d0.chi)
print("untwisted: F=0 chi=0 (dual side abelian)")

struct = sp.subalgebra_structure(pair)
basis = [tuple(F(1 if k == i else 0) for k in range(3)) for i in range(3)]

for wname, wtable in [
    ("a0^a1", {(0, 1): F(1), (1, 0): F(-1)}),
    ("a0^a2", {(0, 2): F(1), (2, 0): F(-1)}),
    ("a0^a1 + 2 a1^a2", {(0, 1): F(1), (1, 0): F(-1), (1, 2): F(2), (2, 1): F(-2)}),
]:
    w = sp.tensor_from_function(3, 2, lambda kl: wtable.get(kl, F(0)))
    st = s0.twist(w)
    dt = sp.derive_quasi_data(pair, st)
    print(f"twist {wname}: chi^012 = {sp.tensor_get(dt.chi, (0,1,2))}")
    for i in range(3):
        once = sp.apply_codifferential(basis[i], 1, dt.F, 3)
        twice = sp.apply_codifferential(once, 2, dt.F, 3)
        ad_chi = sp.ad_action(struct, basis[i], dt.chi, 3)
        lhs = sp.tensor_get(twice, (0, 1, 2))
        rhs = sp.tensor_get(ad_chi, (0, 1, 2))
        print(
            f"  e_{i}: d*d = {lhs}, ad_a(chi) = {rhs}, "
            f"ratio = {lhs / rhs if rhs else ('0/0' if not lhs else 'INF')}"
        )
