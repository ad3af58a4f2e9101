"""Scratch smoke for scene_dsl: parse, print round-trip, validate, run."""

from fractions import Fraction

from diracpairs import scene_dsl as sd
from diracpairs.quadratic_lie import catalog

MINIMAL = """
algebra a { dim 2; pairing diag(1, -1); }
subspace l in a { span e1 + e2; }
maninpair p (a, l);
check lagrangian l;
check subalgebra l;
"""

ir = sd.parse_scene(MINIMAL)
assert len(ir.decls) == 3 and len(ir.checks) == 2
scene = sd.validate_scene(ir)
for step in scene.plan:
    out = step.run()
    assert out.status == "pass", (step.name, out)
print("minimal scene OK")

# round-trip: print then reparse must give the identical IR
text = sd.print_scene(ir)
assert sd.parse_scene(text) == ir
assert sd.print_scene(sd.parse_scene(text)) == text
print("round trip OK")

SO3_DOUBLE = """
algebra dd {
  dim 6;
  basis e1 e2 e3 f1 f2 f3;
  bracket [e1, e2] = e3;
  bracket [e2, e3] = e1;
  bracket [e3, e1] = e2;
  bracket [f1, f2] = f3;
  bracket [f2, f3] = f1;
  bracket [f3, f1] = f2;
  pairing diag(1, 1, 1, -1, -1, -1);
}
subspace diag_half in dd {
  span e1 + f1;
  span e2 + f2;
  span e3 + f3;
}
maninpair rot (dd, diag_half);
splitting s for rot { auto; }
check quadratic dd;
check lagrangian diag_half;
check subalgebra diag_half;
check splitting s;
"""

ir2 = sd.parse_scene(SO3_DOUBLE)
scene2 = sd.validate_scene(ir2)
ref = catalog()["so3-double"]
assert scene2.algebras["dd"].structure == ref.d.structure
assert scene2.algebras["dd"].form.gram == ref.d.form.gram
assert scene2.pairs["rot"].g == ref.g
for step in scene2.plan:
    out = step.run()
    assert out.status == "pass", (step.name, out)
assert sd.parse_scene(sd.print_scene(ir2)) == ir2
print("so3 catalog equivalence OK")

# positioned parse errors
def expect_error(text, line, col, frag):
    try:
        sd.parse_scene(text)
    except sd.ParseError as e:
        assert (e.line, e.col) == (line, col), (e.line, e.col, str(e))
        assert frag in e.message, str(e)
        return
    raise AssertionError(f"no error for: {text!r}")

expect_error("algebra a { dim 2; pairing diag(1, -1); ", 1, 41, "expected '}'")
expect_error("algebra a { dim 2; pairing diag(1.5, -1); }", 1, 33, "rational")
expect_error(
    "algebra a { dim 2; pairing diag(1, -1); }\nsubspace l in a { span e9; }",
    2, 24, "unknown identifier",
)
expect_error(
    "algebra a { dim 2; pairing diag(1, -1); }\nalgebra a { dim 2; pairing diag(1, -1); }",
    2, 9, "duplicate name",
)
expect_error("algebra a { dim 2; pairing diag(1, -1, 3); }", 1, 20, "dimension mismatch")
expect_error("algebra a { dim 2; pairing rows (0, 1) (1, 1); }\ncheck lagrangian a;", 2, 18, "expected a subspace name")
expect_error("fiber f { tdim 1; pair q; }", 1, 24, "unknown identifier")
expect_error("algebra a @ dim 2;", 1, 11, "unexpected character")
print("parse errors OK")

# semantic error: broken Jacobi names the failing triple.  The bracket
# is built from the 3-form e123 + e345 with gram diag(1,1,1,-1,-1,-1),
# so antisymmetry and invariance hold but Jacobi fails at (e1, e2, e4).
BAD = """
algebra bad {
  dim 6;
  bracket [e1, e2] = e3;
  bracket [e2, e3] = e1;
  bracket [e3, e1] = e2;
  bracket [e3, e4] = - e5;
  bracket [e3, e5] = e4;
  bracket [e4, e5] = e3;
  pairing diag(1, 1, 1, -1, -1, -1);
}
"""
try:
    sd.validate_scene(sd.parse_scene(BAD))
except sd.SceneError as e:
    assert e.decl == "bad" and "jacobi" in e.reason, e
    print("semantic error OK:", e)
else:
    raise AssertionError("non-Jacobi algebra accepted")

# fiber declarations, morphism and roundtrip checks
FIBER = """
algebra a {
  dim 2;
  pairing diag(1, -1);
}
subspace l in a { span e1 + e2; }
maninpair p (a, l);
fiber id0 {
  tdim 0;
  pair p;
  k (1, 1);
}
fiber lift {
  tdim 1;
  pair p;
  k (1, 0, 1, 1) (0, 1, -1/2, 1/2);
}
check morphism id0;
check morphism lift;
check roundtrip lift;
"""
ir3 = sd.parse_scene(FIBER)
scene3 = sd.validate_scene(ir3)
for step in scene3.plan:
    out = step.run()
    assert out.status == "pass", (step.name, out)
assert sd.parse_scene(sd.print_scene(ir3)) == ir3
print("fiber scene OK")

# example checks go through the registry
EX = """
example spin_chart { samples 7; seed 3; tol 1e-05; }
check example spin_chart;
"""
seen = {}

def fake(samples, seed, tol, step):
    seen.update(samples=samples, seed=seed, tol=tol, step=step)
    return {"passed": True, "residual": 1.25e-9}

ir4 = sd.parse_scene(EX)
scene4 = sd.validate_scene(ir4, example_registry={"spin_chart": fake})
out = scene4.plan[0].run()
assert out.status == "pass" and out.residual == 1.25e-9
assert seen == {"samples": 7, "seed": 3, "tol": 1e-05, "step": 1e-4}, seen
assert sd.parse_scene(sd.print_scene(ir4)) == ir4
try:
    sd.validate_scene(ir4, example_registry={})
except sd.SceneError:
    print("example registry OK")
else:
    raise AssertionError("unknown example accepted")

# combos with fractional coefficients survive the printer round trip
FRAC = """
algebra a { dim 3; pairing diag(1, 1, -1); }
subspace w in a { span 1/2 e1 - 3 e2 + e3; span - e1 + 2/7 e3; }
"""
ir5 = sd.parse_scene(FRAC)
assert ir5.decls[1].vectors[0] == (Fraction(1, 2), Fraction(-3), Fraction(1))
assert ir5.decls[1].vectors[1] == (Fraction(-1), Fraction(0), Fraction(2, 7))
assert sd.parse_scene(sd.print_scene(ir5)) == ir5
print("fraction combos OK")
print("scene smoke OK")
