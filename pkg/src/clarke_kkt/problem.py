"""Problem definitions, evaluation, finite differences, and Lipschitz estimation.

A problem file is line-oriented UTF-8; '#' starts a comment.  Lines:

    dim INT            (exactly once)
    name IDENT         (optional)
    objective EXPR     (exactly once)
    eq EXPR            (repeatable; order defines the component index)
    ineq EXPR          (repeatable; the constraint is EXPR <= 0)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sampling
from .errors import ProblemParseError
from .expressions import Expression, evaluate, max_var_index, parse_expression, to_text

DEFAULT_KINK_TOL = 1e-3


@dataclass(frozen=True)
class ProblemDefinition:
    """A minimization problem: objective F, equalities G1(u)=0, inequalities G2(u)<=0."""

    n: int
    objective: Expression
    eq: tuple = ()
    ineq: tuple = ()
    name: str = "problem"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        for expr in (self.objective, *self.eq, *self.ineq):
            if max_var_index(expr) > self.n:
                raise ValueError("expression references a variable beyond the dimension")

    @property
    def m(self) -> int:
        return len(self.eq)

    @property
    def p(self) -> int:
        return len(self.ineq)


@dataclass(frozen=True)
class LipschitzEstimate:
    """Sampled local Lipschitz data: max quotient over pairs in the ball of the given radius."""

    radius: float
    constant: float
    sample_count: int


def as_point(u, n) -> np.ndarray:
    """Validate u as a finite point of dimension n."""
    u = np.asarray(u, dtype=float)
    if u.shape != (n,):
        raise ValueError(f"point has shape {u.shape}, expected ({n},)")
    if not np.all(np.isfinite(u)):
        raise ValueError("point has non-finite coordinates")
    return u


# ---------------------------------------------------------------------------
# Parsing / printing
# ---------------------------------------------------------------------------

def parse_problem(text: str) -> ProblemDefinition:
    """Parse a problem file; raises ProblemParseError with line/col on failure."""
    dim = None
    name = "problem"
    objective = None
    eq = []
    ineq = []
    pending = []  # (expr, line) for the variable-range check once dim is known
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        parts = stripped.split(None, 1)
        keyword = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        # column offset of `rest` within the raw line
        rest_offset = line.index(rest, indent + len(keyword)) if rest else indent + len(keyword)
        if keyword == "dim":
            if dim is not None:
                raise ProblemParseError("duplicate dim directive", lineno, indent + 1)
            try:
                dim = int(rest)
            except ValueError:
                raise ProblemParseError("dim requires an integer", lineno, rest_offset + 1)
            if dim < 1:
                raise ProblemParseError("dim must be at least 1", lineno, rest_offset + 1)
        elif keyword == "name":
            if not rest:
                raise ProblemParseError("name requires an identifier", lineno, indent + 1)
            name = rest.strip()
        elif keyword in ("objective", "eq", "ineq"):
            expr = parse_expression(rest, lineno, rest_offset)
            pending.append((expr, lineno))
            if keyword == "objective":
                if objective is not None:
                    raise ProblemParseError("duplicate objective directive", lineno, indent + 1)
                objective = expr
            elif keyword == "eq":
                eq.append(expr)
            else:
                ineq.append(expr)
        else:
            raise ProblemParseError(f"unknown directive {keyword!r}", lineno, indent + 1)
    if dim is None:
        raise ProblemParseError("missing dim directive", 0, 0)
    if objective is None:
        raise ProblemParseError("missing objective directive", 0, 0)
    for expr, lineno in pending:
        if max_var_index(expr) > dim:
            raise ProblemParseError("variable index out of range", lineno, 0)
    return ProblemDefinition(n=dim, objective=objective, eq=tuple(eq), ineq=tuple(ineq), name=name)


def to_problem_text(prob: ProblemDefinition) -> str:
    """Render a problem in the file grammar; re-parsing yields an identical problem."""
    lines = [f"name {prob.name}", f"dim {prob.n}", f"objective {to_text(prob.objective)}"]
    lines += [f"eq {to_text(e)}" for e in prob.eq]
    lines += [f"ineq {to_text(e)}" for e in prob.ineq]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_objective(prob: ProblemDefinition, u) -> float:
    """F(u) by tree evaluation; deterministic and pure."""
    u = as_point(u, prob.n)
    return float(evaluate(prob.objective, u))


def eval_objective_batch(prob: ProblemDefinition, points) -> np.ndarray:
    """F on a (..., n) batch of points."""
    points = np.asarray(points, dtype=float)
    if points.shape[-1] != prob.n:
        raise ValueError("batch has wrong trailing dimension")
    return np.asarray(evaluate(prob.objective, points), dtype=float)


def eval_constraints(prob: ProblemDefinition, u):
    """(G1(u), G2(u)) as arrays of shapes (m,) and (p,)."""
    u = as_point(u, prob.n)
    eq_values = np.array([float(evaluate(e, u)) for e in prob.eq])
    ineq_values = np.array([float(evaluate(e, u)) for e in prob.ineq])
    return eq_values, ineq_values


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def default_step(u) -> float:
    u = np.asarray(u, dtype=float)
    return 1e-6 * (1.0 + float(np.max(np.abs(u), initial=0.0)))


def _stencil(u, h, n):
    eye = np.eye(n) * h
    return np.concatenate([u[None, :] + eye, u[None, :] - eye], axis=0)


def finite_diff_gradient(prob: ProblemDefinition, u, h=None) -> np.ndarray:
    """Central-difference gradient of the objective, step h per coordinate."""
    u = as_point(u, prob.n)
    if h is None:
        h = default_step(u)
    if h <= 0:
        raise ValueError("step must be positive")
    values = eval_objective_batch(prob, _stencil(u, h, prob.n))
    return (values[: prob.n] - values[prob.n:]) / (2.0 * h)


def finite_diff_gradient_expr(expr: Expression, u, h) -> np.ndarray:
    """Central-difference gradient of a single expression at u."""
    u = np.asarray(u, dtype=float)
    n = u.size
    values = np.asarray(evaluate(expr, _stencil(u, h, n)), dtype=float)
    return (values[:n] - values[n:]) / (2.0 * h)


def kink_mismatch(prob: ProblemDefinition, u, h) -> float:
    """Max over coordinates of |forward quotient - backward quotient| at step h."""
    u = as_point(u, prob.n)
    f0 = eval_objective(prob, u)
    values = eval_objective_batch(prob, _stencil(u, h, prob.n))
    fwd = (values[: prob.n] - f0) / h
    bwd = (f0 - values[prob.n:]) / h
    return float(np.max(np.abs(fwd - bwd)))


def kink_avoiding_gradient(prob: ProblemDefinition, u, h, kink_tol=DEFAULT_KINK_TOL):
    """Gradient sample with one-shot kink avoidance.

    A point whose forward/backward quotients disagree by more than kink_tol
    is shifted by +h along the first coordinate and re-evaluated once.
    Returns (gradient, point_used).
    """
    u = as_point(u, prob.n)
    if kink_mismatch(prob, u, h) > kink_tol:
        u = u.copy()
        u[0] += h
    return finite_diff_gradient(prob, u, h), u


# ---------------------------------------------------------------------------
# Lipschitz estimation
# ---------------------------------------------------------------------------

def estimate_lipschitz(prob: ProblemDefinition, u0, r, n_samples, seed=42) -> LipschitzEstimate:
    """Max difference quotient over n_samples point pairs in the ball B_r(u0).

    Sample i draws its pair from substream (seed, i), so for a fixed seed the
    first N1 samples of an N2 > N1 run coincide and the estimate is monotone
    in the sample count.
    """
    u0 = as_point(u0, prob.n)
    if r <= 0:
        raise ValueError("radius must be positive")
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    best = 0.0
    for i in range(n_samples):
        rng = sampling.substream(seed, sampling.NS_LIPSCHITZ, i)
        u = sampling.ball_point(rng, u0, r)
        v = sampling.ball_point(rng, u0, r)
        dist = float(np.linalg.norm(u - v))
        if dist == 0.0:
            continue
        quotient = abs(eval_objective(prob, u) - eval_objective(prob, v)) / dist
        best = max(best, quotient)
    return LipschitzEstimate(radius=float(r), constant=best, sample_count=n_samples)
