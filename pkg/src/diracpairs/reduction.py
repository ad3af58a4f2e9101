"""Admissible observables and level-set reduction over pointwise fibers.

A scalar function is admissible at a point when the fiber there contains
an element pairing its differential with a flow direction and nothing
from the algebra leg.  Matching directions across points gives a bracket
on the admissible functions; restricting everything to the zero locus of
constraint functions inherits it.  All checks are sample based: callers
hand in a fiber supplier and probe points and read residuals back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import rational as rat
from .numeric_manifold import (
    DEFAULT_STEP,
    DEFAULT_TOL,
    gradient,
    vector_commutator,
)


@dataclass(frozen=True, eq=False)
class ObservableFunction:
    """Scalar chart function with an optional hand-supplied gradient.

    Evaluation must be deterministic; the finite-difference gradient is
    the fallback when no analytic one is given.
    """

    fn: Callable
    grad: Optional[Callable] = None
    name: str = ""

    def value(self, x):
        return float(self.fn(np.asarray(x, dtype=float)))

    def gradient(self, x, h=DEFAULT_STEP):
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return gradient(self.fn, x, x.shape[0], h)


def observable(f, grad=None, name=""):
    """Coerce a plain callable to an observable, passing one through."""
    if isinstance(f, ObservableFunction):
        return f
    return ObservableFunction(fn=f, grad=grad, name=name or getattr(f, "__name__", ""))


@dataclass(frozen=True, eq=False)
class PointFiber:
    """Float row basis of one fiber, read as tangent/covector/algebra
    column blocks, plus the optional base differential whose kernel the
    matched flows must respect."""

    t_dim: int
    e_dim: int
    rows: np.ndarray
    dj: Optional[np.ndarray] = None

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[1] != 2 * self.t_dim + self.e_dim:
            raise ValueError("fiber rows do not match the declared block widths")
        object.__setattr__(self, "rows", rows)


def bivector_fibers(pi_field, dim):
    """Graph fibers of a bivector field: each coordinate covector is
    paired with its interior product, so every function is admissible."""

    def fiber_at(x):
        p = np.asarray(pi_field(np.asarray(x, dtype=float)), dtype=float)
        return PointFiber(dim, 0, np.hstack([p, np.eye(dim)]))

    return fiber_at


def canonical_fibers(space):
    """Fiber supplier of a canonical moment geometry (identity base map)."""
    n = space.courant.chart.dim
    eye = np.eye(n)

    def fiber_at(x):
        rows = space.fiber_rows(np.asarray(x, dtype=float))
        return PointFiber(n, space.courant.rank, rows, dj=eye)

    return fiber_at


@dataclass(frozen=True, eq=False)
class FlowSample:
    """Outcome of matching a differential against one fiber."""

    point: np.ndarray
    vector: Optional[np.ndarray]
    residual: float
    conservation: float

    @property
    def admissible(self):
        return self.vector is not None


def _reject_ambiguous(a, u_map, rank_tol):
    # a kernel coefficient with a nonzero tangent image means the fiber
    # pairs the zero differential with a flow, so no match is unique
    vt = np.linalg.svd(a)[2]
    sv = np.linalg.svd(a, compute_uv=False)
    for i in range(vt.shape[0]):
        if i >= len(sv) or sv[i] < rank_tol:
            if np.linalg.norm(u_map @ vt[i]) > rank_tol:
                raise ValueError(
                    "fiber matches the zero differential with a nonzero direction"
                )


def hamiltonian_vector(
    f, fiber_at, points, h=DEFAULT_STEP, tol=DEFAULT_TOL, rank_tol=1e-8
):
    """Flow directions matched to ``f`` by the fibers.

    At each point the fiber rows are combined so the covector block hits
    the differential of ``f`` and the algebra block vanishes; the tangent
    block of that combination is the flow direction.  No combination
    within ``tol`` means ``f`` is not admissible there and the sample
    carries ``None``.  Fibers able to match the zero differential with a
    nonzero direction are rejected outright.
    """
    f = observable(f)
    out = []
    for x in points:
        x = np.asarray(x, dtype=float)
        fb = fiber_at(x)
        t = fb.t_dim
        m = fb.rows
        a = m[:, t:].T
        u_map = m[:, :t].T
        _reject_ambiguous(a, u_map, rank_tol)
        rhs = np.concatenate([f.gradient(x, h), np.zeros(fb.e_dim)])
        coef = np.linalg.lstsq(a, rhs, rcond=None)[0]
        res = float(np.linalg.norm(a @ coef - rhs))
        if res >= tol:
            out.append(FlowSample(x, None, res, 0.0))
            continue
        u = u_map @ coef
        cons = 0.0
        if fb.dj is not None:
            du = np.asarray(fb.dj, dtype=float) @ u
            cons = float(np.max(np.abs(du))) if du.size else 0.0
        out.append(FlowSample(x, u, res, cons))
    return out


def exact_flow_vector(t_dim, e_dim, rows, df):
    """Rational-arithmetic twin of the fiber matching for frozen fibers.

    Returns the flow direction as a Fraction tuple, or None when the
    system is inconsistent (the differential is not admissible).
    """
    rows_q = rat.matrix(rows)
    if rows_q and len(rows_q[0]) != 2 * t_dim + e_dim:
        raise ValueError("fiber rows do not match the declared block widths")
    a = rat.transpose([r[t_dim:] for r in rows_q])
    rhs = tuple(rat.vec(df)) + (Fraction(0),) * e_dim
    sol = rat.solve_linear(a, rhs, ncols=len(rows_q))
    if sol is None:
        return None
    coef, null = sol
    u_map = rat.transpose([r[:t_dim] for r in rows_q])
    for z in null:
        if any(rat.mat_vec(u_map, z)):
            raise ValueError(
                "fiber matches the zero differential with a nonzero direction"
            )
    return rat.mat_vec(u_map, coef)


def invariance_residual(f, action_field, x, h=DEFAULT_STEP):
    """Largest directional derivative of ``f`` along the action frame."""
    f = observable(f)
    x = np.asarray(x, dtype=float)
    cols = np.asarray(action_field(x), dtype=float)
    if cols.size == 0:
        return 0.0
    return float(np.max(np.abs(f.gradient(x, h) @ cols)))


def invariant_check(f, action_field, points, h=DEFAULT_STEP, tol=DEFAULT_TOL):
    """Whether ``f`` is constant along the action directions, per point."""
    return [invariance_residual(f, action_field, x, h) < tol for x in points]


def admissibility_matches_invariance(
    f, action_field, fiber_at, points, h=DEFAULT_STEP, tol=DEFAULT_TOL
):
    """The derivative criterion against the solvability criterion.

    Returns (invariant, admissible) pairs; the two booleans agreeing at
    every sample is the equivalence the bracket theory rests on.
    """
    inv = invariant_check(f, action_field, points, h=h, tol=tol)
    adm = [s.admissible for s in hamiltonian_vector(f, fiber_at, points, h=h, tol=tol)]
    return list(zip(inv, adm))


def poisson_bracket(f, g, fiber_at, h=DEFAULT_STEP, tol=DEFAULT_TOL):
    """Derivative of ``g`` along the flow matched to ``f``.

    The result is again an observable; evaluating it somewhere the
    fibers reject ``f`` raises ValueError.
    """
    f = observable(f)
    g = observable(g)

    def value(y):
        y = np.asarray(y, dtype=float)
        sample = hamiltonian_vector(f, fiber_at, [y], h=h, tol=tol)[0]
        if sample.vector is None:
            raise ValueError("observable is not admissible where the bracket is evaluated")
        return float(g.gradient(y, h) @ sample.vector)

    label = "{%s,%s}" % (f.name or "f", g.name or "g")
    return ObservableFunction(fn=value, name=label)


@dataclass(frozen=True)
class BracketLawReport:
    """Worst-case residuals of the bracket laws over the probe points."""

    skew: float
    flow_match: float
    conservation: float
    tol: float

    @property
    def passed(self):
        return max(self.skew, self.flow_match, self.conservation) < self.tol

    def as_dict(self):
        return {
            "skew": self.skew,
            "flow_match": self.flow_match,
            "conservation": self.conservation,
            "tol": self.tol,
            "passed": self.passed,
        }


def check_bracket_laws(f, g, fiber_at, points, h=DEFAULT_STEP, tol=1e-4):
    """Skew symmetry and the flow of a bracket against the commutator of
    flows.

    Outer differentiation widens the step to sqrt(h): inner values carry
    an error of order h^2 already, and dividing by a same-order step
    would drown it.
    """
    f = observable(f)
    g = observable(g)
    fg = poisson_bracket(f, g, fiber_at, h=h, tol=tol)
    gf = poisson_bracket(g, f, fiber_at, h=h, tol=tol)
    h2 = float(np.sqrt(h))

    def flow_field(obs, step, solve_tol):
        def at(y):
            s = hamiltonian_vector(obs, fiber_at, [y], h=step, tol=solve_tol)[0]
            if s.vector is None:
                raise ValueError("bracket laws need admissible inputs")
            return s.vector

        return at

    skew = 0.0
    match = 0.0
    cons = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        skew = max(skew, abs(fg.value(x) + gf.value(x)))
        dim = x.shape[0]
        lie = vector_commutator(
            flow_field(f, h, tol), flow_field(g, h, tol), x, dim, h2
        )
        s_fg = hamiltonian_vector(fg, fiber_at, [x], h=h2, tol=max(tol, 1e-3))[0]
        if s_fg.vector is None:
            raise ValueError("bracket of the inputs stopped being admissible")
        match = max(match, float(np.max(np.abs(s_fg.vector - lie))))
        for obs in (f, g):
            cons = max(
                cons, hamiltonian_vector(obs, fiber_at, [x], h=h, tol=tol)[0].conservation
            )
    return BracketLawReport(skew=skew, flow_match=match, conservation=cons, tol=tol)


def jacobi_residual(f, g, k, fiber_at, points, h=DEFAULT_STEP, tol=DEFAULT_TOL):
    """Cyclic sum of nested brackets, nesting with the widened step."""
    h2 = float(np.sqrt(h))
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        total = 0.0
        for a, b, c in ((f, g, k), (g, k, f), (k, f, g)):
            inner = poisson_bracket(b, c, fiber_at, h=h, tol=tol)
            outer = poisson_bracket(a, inner, fiber_at, h=h2, tol=max(tol, 1e-3))
            total += outer.value(x)
        worst = max(worst, abs(total))
    return worst


@dataclass(frozen=True, eq=False)
class OrbitDescription:
    """Zero locus of constraint functions with probe points on it.

    Construction validates that the samples sit on the locus and that
    the constraint gradients keep full rank there, so downstream
    consumers can treat the data as transversality-certified.
    """

    constraints: tuple
    samples: tuple
    locus_tol: float = 1e-6
    rank_tol: float = 1e-8

    def __post_init__(self):
        cons = tuple(observable(c) for c in self.constraints)
        object.__setattr__(self, "constraints", cons)
        pts = tuple(np.asarray(p, dtype=float) for p in self.samples)
        if not pts:
            raise ValueError("orbit needs at least one sample point")
        object.__setattr__(self, "samples", pts)
        for x in pts:
            for c in cons:
                if abs(c.value(x)) > self.locus_tol:
                    raise ValueError("sample is off the constraint locus")
            self._require_transversal(x)

    def _require_transversal(self, x):
        if not self.constraints:
            return
        grads = np.stack([c.gradient(x) for c in self.constraints])
        sv = np.linalg.svd(grads, compute_uv=False)
        if len(sv) < len(self.constraints) or sv[-1] <= self.rank_tol * max(sv[0], 1.0):
            raise ValueError("constraint gradients drop rank at a sample")

    @classmethod
    def from_projection(
        cls,
        constraints,
        seeds,
        steps=60,
        damping=0.5,
        newton_tol=1e-12,
        **kwargs,
    ):
        """Build the locus samples by damped least-squares projection of
        seed points onto the constraint zero set."""
        cons = tuple(observable(c) for c in constraints)
        pts = []
        for x in seeds:
            x = np.array(x, dtype=float)
            for _ in range(steps):
                vals = np.array([c.value(x) for c in cons])
                if vals.size == 0 or np.max(np.abs(vals)) < newton_tol:
                    break
                jac = np.stack([c.gradient(x) for c in cons])
                step = np.linalg.lstsq(jac, vals, rcond=None)[0]
                x = x - damping * step
            pts.append(x)
        return cls(cons, tuple(pts), **kwargs)


@dataclass(frozen=True)
class ReductionReport:
    """Bracket restricted to a constraint locus, with its stability data."""

    values: tuple
    extension_residual: float
    tangency_residual: float
    tol: float

    @property
    def passed(self):
        return max(self.extension_residual, self.tangency_residual) < self.tol

    def as_dict(self):
        return {
            "values": list(self.values),
            "extension_residual": self.extension_residual,
            "tangency_residual": self.tangency_residual,
            "tol": self.tol,
            "passed": self.passed,
        }


def reduce_to_orbit(
    orbit,
    f,
    g,
    fiber_at,
    action_field=None,
    witness=None,
    h=DEFAULT_STEP,
    tol=1e-4,
):
    """Bracket of two observables along the constraint locus.

    The inputs act as their own ambient extensions.  Independence of
    that choice is probed by replacing ``f`` with an extension differing
    by a constraint multiple (scaled by ``witness``, any smooth nowhere
    special function); the restricted bracket must not move.  The probe
    presumes the constraints are themselves constant along the action,
    which is what the tangency residual reports when an action frame is
    supplied.  With no constraints the locus is everything and the
    report collapses to the plain bracket.
    """
    f = observable(f)
    g = observable(g)
    for x in orbit.samples:
        orbit._require_transversal(x)
    fg = poisson_bracket(f, g, fiber_at, h=h, tol=tol)
    values = tuple(fg.value(x) for x in orbit.samples)

    ext_res = 0.0
    if orbit.constraints:
        wit = witness if witness is not None else (lambda y: 1.0 + 0.25 * float(np.sum(y)))
        c0 = orbit.constraints[0]

        def shifted(y):
            return f.value(y) + c0.value(y) * wit(np.asarray(y, dtype=float))

        fg_ext = poisson_bracket(
            ObservableFunction(fn=shifted, name=f.name + "+ext"), g, fiber_at, h=h, tol=tol
        )
        for x, base in zip(orbit.samples, values):
            ext_res = max(ext_res, abs(fg_ext.value(x) - base))

    tang = 0.0
    if action_field is not None:
        for x in orbit.samples:
            cols = np.asarray(action_field(x), dtype=float)
            if cols.size == 0:
                continue
            for c in orbit.constraints:
                tang = max(tang, float(np.max(np.abs(c.gradient(x, h) @ cols))))

    return ReductionReport(
        values=values, extension_residual=ext_res, tangency_residual=tang, tol=tol
    )
