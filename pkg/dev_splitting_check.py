"""Dev: splitting oracles + the top-bracket sign freeze experiment."""
from fractions import Fraction as F

from diracpairs import quadratic_lie as qla
from diracpairs import splitting as sp
from diracpairs import rational as rat

cat = qla.catalog()

# 1. constructor invariants + round trips for every catalog pair
for name, pair in cat.items():
    s = sp.make_isotropic_splitting(pair)
    e = tuple(F(k + 1) for k in range(pair.d.dim))
    a_c, x_c = s.decompose(e)
    back = s.embed_double(a_c, x_c)
    assert back == rat.vec(e), name
    print(f"{name}: splitting ok, j =")
    for row in s.j:
        print("   ", tuple(str(x) for x in row))

# 2. frozen oracles for F and chi
so3 = cat["so3-double"]
s3 = sp.make_isotropic_splitting(so3)
d3 = sp.derive_quasi_data(so3, s3)
assert all(sp.tensor_is_zero(fi) for fi in d3.F), "so3 F"
assert sp.tensor_get(d3.chi, (0, 1, 2)) == F(1, 4), sp.tensor_get(d3.chi, (0, 1, 2))
print("so3-double: F=0, chi^012 = 1/4  OK")

sl2 = cat["sl2-double"]
sl = sp.make_isotropic_splitting(sl2)
dl = sp.derive_quasi_data(sl2, sl)
assert all(sp.tensor_is_zero(fi) for fi in dl.F), "sl2 F"
assert sp.tensor_get(dl.chi, (0, 1, 2)) == F(-1, 4), sp.tensor_get(dl.chi, (0, 1, 2))
print("sl2-double: F=0, chi^012 = -1/4  OK")

bi = cat["bialgebra-double"]
sb = sp.make_isotropic_splitting(bi)
db = sp.derive_quasi_data(bi, sb)
assert sp.tensor_is_zero(db.chi), "bialgebra chi"
assert sp.tensor_is_zero(db.F[0]), "bialgebra F[0]"
assert sp.tensor_get(db.F[1], (0, 1)) == 1, sp.tensor_get(db.F[1], (0, 1))
print("bialgebra-double: chi=0, F[y](0,1)=1  OK")

for name in ("abelian-r2", "abelian-r4"):
    p = cat[name]
    s = sp.make_isotropic_splitting(p)
    d = sp.derive_quasi_data(p, s)
    assert all(sp.tensor_is_zero(fi) for fi in d.F) and sp.tensor_is_zero(d.chi), name
print("abelian: F=0, chi=0  OK")

# 3. coherence on untwisted pairs (should pass for any sign; sanity only)
for name, pair in cat.items():
    s = sp.make_isotropic_splitting(pair)
    data = sp.derive_quasi_data(pair, s)
    struct = sp.subalgebra_structure(pair)
    rep = sp.check_quasi_jacobi(struct, data)
    print(f"{name}: untwisted coherence={rep.coherence} defect_closed={rep.defect_closed}")
    assert rep.passed, name

# 4. SIGN FREEZE: twisted so3 splitting makes both sides nonzero
w = sp.tensor_from_function(3, 2, lambda kl: {(0, 1): F(1), (1, 0): F(-1)}.get(kl, F(0)))
s3t = s3.twist(w)
d3t = sp.derive_quasi_data(so3, s3t)
struct3 = sp.subalgebra_structure(so3)
print("twisted so3: F images nonzero:", [not sp.tensor_is_zero(fi) for fi in d3t.F])
print("twisted so3: chi nonzero:", not sp.tensor_is_zero(d3t.chi))

dim = 3
basis = [tuple(F(1 if k == i else 0) for k in range(dim)) for i in range(dim)]
for i in range(dim):
    t = basis[i]
    once = sp.apply_codifferential(t, 1, d3t.F, dim)
    twice = sp.apply_codifferential(once, 2, d3t.F, dim)
    ad_chi = sp.ad_action(struct3, basis[i], d3t.chi, 3)
    lhs = sp.tensor_get(twice, (0, 1, 2))
    rhs = sp.tensor_get(ad_chi, (0, 1, 2))
    print(f"  e_{i}: d*d = {lhs},  ad_a(chi) = {rhs},  ratio = {lhs / rhs if rhs else 'n/a'}")

# also try a second twist to confirm the ratio is stable
w2 = sp.tensor_from_function(3, 2, lambda kl: {(1, 2): F(2), (2, 1): F(-2)}.get(kl, F(0)))
s3t2 = s3.twist(w2)
d3t2 = sp.derive_quasi_data(so3, s3t2)
for i in range(dim):
    t = basis[i]
    once = sp.apply_codifferential(t, 1, d3t2.F, dim)
    twice = sp.apply_codifferential(once, 2, d3t2.F, dim)
    ad_chi = sp.ad_action(struct3, basis[i], d3t2.chi, 3)
    lhs = sp.tensor_get(twice, (0, 1, 2))
    rhs = sp.tensor_get(ad_chi, (0, 1, 2))
    print(f"  twist2 e_{i}: d*d = {lhs},  ad = {rhs},  ratio = {lhs / rhs if rhs else 'n/a'}")

# 5. bialgebra twisted as an independent cross-check once sign frozen
wb = sp.tensor_from_function(2, 2, lambda kl: {(0, 1): F(1), (1, 0): F(-1)}.get(kl, F(0)))
sbt = sb.twist(wb)
dbt = sp.derive_quasi_data(bi, sbt)
structb = sp.subalgebra_structure(bi)
for i in range(2):
    t = tuple(F(1 if k == i else 0) for k in range(2))
    once = sp.apply_codifferential(t, 1, dbt.F, 2)
    twice = sp.apply_codifferential(once, 2, dbt.F, 2)
    ad_chi = sp.ad_action(structb, t, dbt.chi, 3) if not sp.tensor_is_zero(dbt.chi) else None
    print(f"  bialg twist e_{i}: d*d zero? {sp.tensor_is_zero(twice)}, chi zero? {sp.tensor_is_zero(dbt.chi)}")
print("experiment done")
