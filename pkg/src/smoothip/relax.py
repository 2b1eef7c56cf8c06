"""LP relaxations centered on an oracle prediction.

Given the decomposition p(x) = c + sum_i x_i * p_i(x), a Boolean prediction
xhat, and an error budget eps (a bound on how many coordinates the
prediction may have wrong), the relaxation fixes every nonlinear component
at its predicted value and constrains the corresponding linearization to
stay within a tolerance of it:

    maximize  c + sum_j x_j * p_j(xhat)
    s.t.      c_I + sum_j x_j * p_(I,j)(xhat)  in  p_I(xhat) +- delta_I
              for every component tuple I with 1 <= |I| <= d - 1,
              x in [0,1]^n.

The tolerance schedule delta_I is beta * sqrt(n * eps) for the deepest
constrained level (|I| = d - 1) and 2 * beta * e * n^(d - |I| - 1/2) *
sqrt(eps) above it.  Those radii are exactly what makes the true optimum
x* feasible whenever eps is at least the prediction's Hamming error, while
the prediction itself is feasible for every eps >= 0.

Square roots and e are carried as upper rational approximations, so
feasibility of x* survives the passage to concrete numbers.  The
constrained variant adds, per polynomial side constraint, the same
component rows plus a relaxed top-level window widened by the sum of that
constraint's tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lpsolve import LpModel
from .poly import DecompositionTree, Polynomial, decompose, evaluate
from .rat import E_UPPER, sqrt_upper
from .rounding import rounding_deviation_term


@dataclass(frozen=True)
class ToleranceTable:
    """Per-component slack radii for one (tree, beta, eps) combination."""

    entries: dict
    epsilon: int
    beta: Fraction
    n: int
    d: int


@dataclass(frozen=True)
class ConstrainedProgram:
    """Objective plus polynomial constraints lower <= p_c(x) <= upper.

    Either constraint bound may be None for unbounded.  All polynomials
    share the objective's variable count.
    """

    objective: Polynomial
    constraints: tuple = ()

    def __post_init__(self):
        for poly, lower, upper in self.constraints:
            if poly.n != self.objective.n:
                raise ValueError("constraint variable count mismatch")
            if lower is not None and upper is not None and lower > upper:
                raise ValueError("constraint bounds crossed")


def tolerance(
    beta: Fraction | int, n: int, d: int, tuple_len: int, eps: int
) -> Fraction:
    """Slack radius delta_I for a component at depth tuple_len = |I|.

    beta * sqrt(n * eps) at the deepest constrained level (|I| = d - 1),
    2 * beta * e * n^(d - |I| - 1/2) * sqrt(eps) above it; both via upward
    square roots, written as n^(d - |I| - 1) * sqrt(n * eps).
    """
    if not 1 <= tuple_len <= d - 1:
        raise ValueError(f"tuple length {tuple_len} outside [1, {d - 1}]")
    if not 0 <= eps <= n:
        raise ValueError(f"error budget {eps} outside [0, {n}]")
    if eps == 0:
        return Fraction(0)
    root = sqrt_upper(n * eps)
    if tuple_len == d - 1:
        return Fraction(beta) * root
    return 2 * Fraction(beta) * E_UPPER * Fraction(n) ** (d - tuple_len - 1) * root


def tolerance_table(
    tree: DecompositionTree, beta: Fraction | int, eps: int
) -> ToleranceTable:
    """Radii for every component of the tree that receives a constraint."""
    n = tree.root.n
    d = tree.root.degree
    entries = {
        key: tolerance(beta, n, d, len(key), eps)
        for key in tree.component_keys()
        if 1 <= len(key) <= d - 1
    }
    return ToleranceTable(entries, eps, Fraction(beta), n, d)


def _check_prediction(xhat: Sequence, n: int) -> list[Fraction]:
    if len(xhat) != n:
        raise ValueError(f"prediction length {len(xhat)}, expected {n}")
    out = []
    for v in xhat:
        f = Fraction(v)
        if f not in (0, 1):
            raise ValueError("prediction entries must be 0 or 1")
        out.append(f)
    return out


def _linearization(tree: DecompositionTree, key, point) -> tuple:
    """Coefficient vector and constant of c_I + sum_j x_j * p_(I,j)(xhat)."""
    node = tree.nodes[key]
    coeffs = [Fraction(0)] * tree.root.n
    for j in node.children:
        coeffs[j] = evaluate(tree.nodes[key + (j,)].poly, point)
    return coeffs, node.constant


def _component_rows(tree, point, table) -> list:
    rows = []
    for key in sorted(table.entries):
        coeffs, const = _linearization(tree, key, point)
        center = evaluate(tree.nodes[key].poly, point)
        delta = table.entries[key]
        rows.append(
            (tuple(coeffs), center - const - delta, center - const + delta)
        )
    return rows


def build_relaxation(
    tree: DecompositionTree,
    xhat: Sequence,
    eps: int,
    beta: Fraction | int,
) -> LpModel:
    """The oracle-centered LP for one error budget.

    The prediction satisfies every row of the output exactly, so the model
    is never genuinely infeasible; growing eps only widens the rows.
    """
    n = tree.root.n
    point = _check_prediction(xhat, n)
    table = tolerance_table(tree, beta, eps)
    objective, offset = _linearization(tree, (), point)
    return LpModel(
        num_vars=n,
        var_bounds=tuple((Fraction(0), Fraction(1)) for _ in range(n)),
        rows=tuple(_component_rows(tree, point, table)),
        objective=tuple(objective),
        offset=offset,
        maximize=True,
    )


def constraint_degree(poly: Polynomial) -> int:
    """Degree at which a side constraint enters the schedule; linear
    constraints are treated as (vacuously) quadratic since the schedule
    needs d >= 2."""
    return max(2, poly.degree)


def build_constrained_relaxation(
    prog: ConstrainedProgram,
    xhat: Sequence,
    eps: int,
    beta: Fraction | int,
) -> LpModel:
    """Objective relaxation plus relaxed windows for each side constraint.

    Each constraint polynomial is decomposed on its own; its linearized
    top level q_c must stay within [lower - delta_c, upper + delta_c] where
    delta_c is the sum of the constraint's component tolerances, and its
    components obey the same per-tuple rows as the objective's.
    """
    objective_tree = decompose(prog.objective)
    base = build_relaxation(objective_tree, xhat, eps, beta)
    n = prog.objective.n
    point = _check_prediction(xhat, n)
    rows = list(base.rows)
    for poly, lower, upper in prog.constraints:
        tree = decompose(poly.with_degree(constraint_degree(poly)))
        table = tolerance_table(tree, beta, eps)
        slack = sum(table.entries.values(), Fraction(0))
        top, top_const = _linearization(tree, (), point)
        rows.append(
            (
                tuple(top),
                None if lower is None else lower - slack - top_const,
                None if upper is None else upper + slack - top_const,
            )
        )
        rows.extend(_component_rows(tree, point, table))
    return LpModel(
        num_vars=base.num_vars,
        var_bounds=base.var_bounds,
        rows=tuple(rows),
        objective=base.objective,
        offset=base.offset,
        maximize=True,
    )


def gap_bound(
    beta: Fraction | int, n: int, d: int, eps: int
) -> Fraction:
    """Additive bound 2 * eta * beta * n^(d - 1/2) * sqrt(eps) on how far
    the LP optimum can fall below the true optimum, eta = 2e(d - 2) + 1.

    For d = 2 this is 2 * beta * n^(3/2) * sqrt(eps).  Computed with the
    same upward approximations the tolerances use, so it upper-bounds the
    slack actually granted to the LP.
    """
    if d < 2:
        raise ValueError("gap bound needs degree >= 2")
    if eps == 0:
        return Fraction(0)
    eta = 2 * E_UPPER * (d - 2) + 1
    return 2 * eta * Fraction(beta) * Fraction(n) ** (d - 1) * sqrt_upper(n * eps)


def constraint_violation_bound(
    beta: Fraction | int, n: int, d: int, eps: int, k: Fraction | int
) -> Fraction:
    """How far a rounded solution can land outside a degree-d constraint
    window: eta * beta * n^(d - 1/2) * sqrt(eps) of relaxation slack plus
    eta * beta * n^(d - 1) * sqrt((k + 1) / 2) * sqrt(n ln n) of rounding
    deviation."""
    if d < 2:
        raise ValueError("violation bound needs degree >= 2")
    eta = 2 * E_UPPER * (d - 2) + 1
    slack = (
        eta * Fraction(beta) * Fraction(n) ** (d - 1) * sqrt_upper(n * eps)
        if eps > 0
        else Fraction(0)
    )
    return slack + rounding_deviation_term(beta, n, d, k)


def lp_text(model: LpModel) -> str:
    """Render a model in LP exchange text (for external cross-checks).

    Two-sided rows are written as a <=/>= pair; rationals are printed as
    15-significant-digit decimals.
    """

    def num(v) -> str:
        return f"{float(v):.15g}"

    def expr(coeffs) -> str:
        parts = []
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(f"{sign} {num(abs(c))} x{j}".strip())
        return " ".join(parts) if parts else "0 x0"

    lines = ["Maximize" if model.maximize else "Minimize"]
    obj = expr(model.objective)
    if model.offset:
        obj += f" + {num(model.offset)}" if model.offset > 0 else (
            f" - {num(-model.offset)}"
        )
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for i, (coeffs, lo, hi) in enumerate(model.rows):
        body = expr(coeffs)
        if hi is not None:
            lines.append(f" r{i}u: {body} <= {num(hi)}")
        if lo is not None:
            lines.append(f" r{i}l: {body} >= {num(lo)}")
    lines.append("Bounds")
    for j, (lo, hi) in enumerate(model.var_bounds):
        lines.append(f" {num(lo)} <= x{j} <= {num(hi)}")
    lines.append("End")
    return "\n".join(lines) + "\n"
