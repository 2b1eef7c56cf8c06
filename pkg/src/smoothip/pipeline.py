"""End-to-end solve loop: enumerate error budgets, relax, solve, round.

For each eps in a grid over [0, n] the pipeline builds the
prediction-centered relaxation, solves it, rounds the fractional optimum
to a Boolean point, and scores that point against the true objective in
exact arithmetic.  The prediction itself and a cheap baseline (greedy
rounding of the all-halves vector) enter the candidate pool as well, so
the returned solution is never worse than either; the best candidate by
exact value wins, earliest tag on ties.

A failed LP solve skips that eps and is recorded as such; it never aborts
the run.  Tiny instances (n <= declared degree) bypass the LP machinery
entirely and are brute-forced, since the relaxation's bounds are vacuous
there.

Reports carry, per eps, the additive slack granted to the LP and the
concentration radius of randomized rounding, so downstream consumers can
check the advertised guarantees without re-deriving constants.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .lpsolve import OPTIMAL, solve as lp_solve
from .poly import (
    Polynomial,
    decompose,
    evaluate,
    min_smoothness,
    multilinearize,
)
from .relax import (
    ConstrainedProgram,
    build_constrained_relaxation,
    build_relaxation,
    constraint_degree,
    gap_bound,
)
from .rounding import (
    greedy_round,
    randomized_round,
    rounding_deviation_term,
    rounding_error_bound,
)

GREEDY = "greedy"
RANDOMIZED = "randomized"


@dataclass(frozen=True)
class Instance:
    """A problem to maximize: objective polynomial, optional constraint
    windows (poly, lower, upper), a family tag, and the cost ceiling used
    by empirical-risk selection."""

    objective: Polynomial
    constraints: tuple = ()
    kind: str = "custom"
    h: Fraction | None = None
    label: str = ""

    def __post_init__(self):
        ConstrainedProgram(self.objective, self.constraints)  # validates


@dataclass(frozen=True)
class SolveConfig:
    """Knobs for one pipeline run.

    grid = None walks 0, stride, 2*stride, ... up to n; an explicit grid
    is used as given (sorted, deduplicated).  k is the tail exponent in
    the reported concentration radii.  lp_backend may swap in any solver
    with the embedded one's signature and status vocabulary.
    """

    strategy: str = GREEDY
    seed: int = 0
    grid: tuple | None = None
    stride: int = 1
    include_prediction_candidate: bool = True
    include_baseline_candidate: bool = True
    k: int = 1
    randomized_rounds: int = 16
    lp_backend: Callable | None = None
    exact_cap: int = 24

    def __post_init__(self):
        if self.strategy not in (GREEDY, RANDOMIZED):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if self.randomized_rounds < 1:
            raise ValueError("need at least one randomized round")
        if self.k <= 0:
            raise ValueError("tail parameter k must be positive")


@dataclass(frozen=True)
class EpsRecord:
    eps: int
    status: str
    lp_value: float | None
    rounded_z: tuple | None
    rounded_value: Fraction | None
    violation_max: Fraction | None
    gap: Fraction
    rounding_radius: Fraction
    wall_ms: float
    seed_values: tuple = ()


@dataclass(frozen=True)
class Candidate:
    tag: str
    z: tuple
    value: Fraction
    violation: Fraction


@dataclass(frozen=True)
class SolveReport:
    n: int
    degree: int
    beta: Fraction
    strategy: str
    best_z: tuple
    best_value: Fraction
    per_eps: tuple
    candidates: tuple
    label: str = ""


def _as_point(prediction, n: int) -> tuple:
    raw = getattr(prediction, "x_hat", prediction)
    point = tuple(int(v) for v in raw)
    if len(point) != n:
        raise ValueError(f"prediction length {len(point)}, expected {n}")
    if any(v not in (0, 1) for v in point):
        raise ValueError("prediction entries must be 0 or 1")
    return point


def _grid(config: SolveConfig, n: int) -> list[int]:
    if config.grid is None:
        return list(range(0, n + 1, config.stride))
    values = sorted(set(int(e) for e in config.grid))
    for e in values:
        if not 0 <= e <= n:
            raise ValueError(f"grid value {e} outside [0, {n}]")
    return values


def _violation(constraints, z) -> Fraction:
    worst = Fraction(0)
    for poly, lower, upper in constraints:
        value = evaluate(poly, z)
        if lower is not None and lower - value > worst:
            worst = lower - value
        if upper is not None and value - upper > worst:
            worst = value - upper
    return worst


def _round_seed(base: int, eps: int, index: int) -> int:
    stream = np.random.SeedSequence((base % 2**64, eps, index))
    return int(stream.generate_state(1, np.uint64)[0])


def _normalized(objective: Polynomial, constraints):
    """Multilinearize, pad the degree to at least 2, take the shared
    smoothness certificate over objective and constraints."""
    p = multilinearize(objective)
    p = p.with_degree(max(2, p.degree))
    normal = []
    beta = min_smoothness(p)
    for poly, lower, upper in constraints:
        q = multilinearize(poly)
        q = q.with_degree(constraint_degree(q))
        beta = max(beta, min_smoothness(q))
        normal.append(
            (
                q,
                None if lower is None else Fraction(lower),
                None if upper is None else Fraction(upper),
            )
        )
    return p, tuple(normal), beta


def _run(
    objective: Polynomial,
    constraints: tuple,
    prediction,
    config: SolveConfig,
    label: str,
) -> SolveReport:
    p, constraints, beta = _normalized(objective, constraints)
    n, d = p.n, p.degree
    xhat = _as_point(prediction, n)
    constrained = bool(constraints)

    candidates: list[Candidate] = []
    if config.include_prediction_candidate:
        candidates.append(
            Candidate(
                "prediction", xhat, evaluate(p, xhat),
                _violation(constraints, xhat),
            )
        )
    if config.include_baseline_candidate:
        z = greedy_round(p, (Fraction(1, 2),) * n)
        candidates.append(
            Candidate("baseline", z, evaluate(p, z), _violation(constraints, z))
        )

    records: list[EpsRecord] = []
    if n <= d:
        # The relaxation's analysis needs n > d; brute force instead.
        z, value = _exact(p, constraints, config.exact_cap)
        candidates.append(Candidate("exact", z, value, Fraction(0)))
    else:
        backend = config.lp_backend
        prog = ConstrainedProgram(p, constraints) if constrained else None
        tree = None if constrained else decompose(p)
        radius = (
            rounding_error_bound(beta, n, d, config.k)
            if config.strategy == RANDOMIZED and beta > 0
            else Fraction(0)
        )
        for eps in _grid(config, n):
            started = time.perf_counter()
            if constrained:
                model = build_constrained_relaxation(prog, xhat, eps, beta)
            else:
                model = build_relaxation(tree, xhat, eps, beta)
            sol = (
                backend(model)
                if backend is not None
                else lp_solve(model, warm_start=xhat)
            )
            gap = gap_bound(beta, n, d, eps)
            if sol.status != OPTIMAL:
                records.append(
                    EpsRecord(
                        eps, sol.status, None, None, None, None,
                        gap, radius,
                        (time.perf_counter() - started) * 1000.0,
                    )
                )
                continue
            y = tuple(min(max(v, 0.0), 1.0) for v in sol.y)
            seed_values: tuple = ()
            if config.strategy == GREEDY:
                z = greedy_round(p, y)
            else:
                outcomes = []
                for r in range(config.randomized_rounds):
                    zr = randomized_round(y, _round_seed(config.seed, eps, r))
                    outcomes.append((zr, evaluate(p, zr)))
                seed_values = tuple(v for _, v in outcomes)
                z = max(outcomes, key=lambda zv: zv[1])[0]
            value = evaluate(p, z)
            violation = _violation(constraints, z)
            records.append(
                EpsRecord(
                    eps, OPTIMAL, float(sol.objective_value), z, value,
                    violation, gap, radius,
                    (time.perf_counter() - started) * 1000.0, seed_values,
                )
            )
            candidates.append(Candidate(f"eps={eps}", z, value, violation))

    best = None
    for cand in candidates:
        # In constrained mode only exactly-feasible side candidates
        # compete; LP-derived points carry the violation guarantee.
        if constrained and cand.violation > 0 and not cand.tag.startswith(
            ("eps=", "exact")
        ):
            continue
        if best is None or cand.value > best.value:
            best = cand
    if best is None:
        raise RuntimeError(
            "no usable candidate: every relaxation failed and no fallback "
            "was enabled"
        )
    return SolveReport(
        n, d, beta, config.strategy, best.z, best.value,
        tuple(records), tuple(candidates), label,
    )


def solve(
    instance: Instance, prediction, config: SolveConfig = SolveConfig()
) -> SolveReport:
    """Run the full loop on an instance; see the module docstring."""
    return _run(
        instance.objective, instance.constraints, prediction, config,
        instance.label,
    )


def solve_constrained(
    prog: ConstrainedProgram, prediction, config: SolveConfig = SolveConfig()
) -> SolveReport:
    """Same loop driven by an explicit constrained program."""
    return _run(prog.objective, prog.constraints, prediction, config, "")


# -- exact reference ----------------------------------------------------


def _masks_to_values(poly: Polynomial, n: int):
    """Objective value of every Boolean point as integers over a common
    denominator, indexed so that bit (n - 1 - i) holds z_i; ascending
    index order is then lexicographic order on z."""
    denom = math.lcm(
        *(c.denominator for c in poly.coeffs.values()), 1
    )
    total = sum(abs(int(c * denom)) for c in poly.coeffs.values())
    dtype = np.int64 if total < 2**62 else object
    table = np.zeros(1 << n, dtype=dtype)
    for mono, coeff in poly.coeffs.items():
        mask = 0
        for i in mono:
            mask |= 1 << (n - 1 - i)
        table[mask] += int(coeff * denom)
    for b in range(n):
        view = table.reshape(-1, 2, 1 << b)
        view[:, 1, :] += view[:, 0, :]
    return table, denom


def _exact(p: Polynomial, constraints, cap: int) -> tuple:
    n = p.n
    if n > cap:
        raise ValueError(f"{n} variables exceeds the brute-force cap {cap}")
    values, denom = _masks_to_values(p, n)
    feasible = np.ones(1 << n, dtype=bool)
    for poly, lower, upper in constraints:
        bounds_denom = math.lcm(
            1 if lower is None else Fraction(lower).denominator,
            1 if upper is None else Fraction(upper).denominator,
        )
        scaled = poly * bounds_denom
        table, qd = _masks_to_values(scaled, n)
        if lower is not None:
            feasible &= table >= int(Fraction(lower) * bounds_denom * qd)
        if upper is not None:
            feasible &= table <= int(Fraction(upper) * bounds_denom * qd)
    if not feasible.any():
        raise ValueError("no Boolean point satisfies the constraints")
    if values.dtype == object:
        best_mask = None
        best_val = None
        for mask in range(1 << n):
            if feasible[mask] and (best_val is None or values[mask] > best_val):
                best_mask, best_val = mask, values[mask]
    else:
        sentinel = np.iinfo(np.int64).min
        masked = np.where(feasible, values, sentinel)
        best_mask = int(np.argmax(masked))  # first max: lex smallest
        best_val = int(masked[best_mask])
    z = tuple((best_mask >> (n - 1 - i)) & 1 for i in range(n))
    return z, Fraction(best_val, denom)


def exact_solve(instance: Instance, cap: int = 24) -> tuple:
    """Exhaustive maximization honoring constraints.

    Returns (z, value) with z the lexicographically smallest optimum.
    """
    p, constraints, _ = _normalized(instance.objective, instance.constraints)
    return _exact(p, constraints, cap)


# -- theoretical floors -------------------------------------------------


def guarantee_bound(
    instance: Instance, eps: int, config: SolveConfig = SolveConfig()
) -> Fraction:
    """Value the pipeline is guaranteed to reach at prediction error eps:
    OPT minus the relaxation gap, minus the rounding deviation when the
    strategy is randomized (greedy rounding never loses value)."""
    p, constraints, beta = _normalized(instance.objective, instance.constraints)
    _, opt = _exact(p, constraints, config.exact_cap)
    floor = opt - gap_bound(beta, p.n, p.degree, eps)
    if config.strategy == RANDOMIZED and beta > 0:
        floor -= rounding_deviation_term(beta, p.n, p.degree, config.k)
    return floor


def approx_ratio_bound(
    beta: Fraction | int, n: int, d: int, eps: int,
    kappa: float, xi: float,
) -> float:
    """Multiplicative guarantee 1 - (2 eta beta / kappa) sqrt(eps) / n^xi
    for instances whose optimum is at least kappa * n^(d - 1/2 + xi).

    For the cut encoding (beta = 2, d = 2) this is 1 - (4/kappa)
    sqrt(eps)/n^xi.
    """
    if d < 2:
        raise ValueError("ratio bound needs degree >= 2")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if not 0 < xi <= 0.5:
        raise ValueError("xi must lie in (0, 1/2]")
    if eps < 0:
        raise ValueError("negative error budget")
    eta = 2 * math.e * (d - 2) + 1
    return 1.0 - (2 * eta * float(beta) / kappa) * math.sqrt(eps) / n**xi


# -- serialization ------------------------------------------------------


def _frac(value) -> str | None:
    return None if value is None else str(Fraction(value))


def report_json(report: SolveReport) -> str:
    """Canonical JSON rendering; rationals appear as num/den strings."""
    payload = {
        "label": report.label,
        "n": report.n,
        "degree": report.degree,
        "beta": _frac(report.beta),
        "strategy": report.strategy,
        "best_z": list(report.best_z),
        "best_value": _frac(report.best_value),
        "candidates": [
            {
                "tag": c.tag,
                "z": list(c.z),
                "value": _frac(c.value),
                "violation": _frac(c.violation),
            }
            for c in report.candidates
        ],
        "per_eps": [
            {
                "eps": r.eps,
                "status": r.status,
                "lp_value": r.lp_value,
                "rounded_z": None if r.rounded_z is None else list(r.rounded_z),
                "rounded_value": _frac(r.rounded_value),
                "violation_max": _frac(r.violation_max),
                "gap": _frac(r.gap),
                "rounding_radius": _frac(r.rounding_radius),
                "wall_ms": r.wall_ms,
                "seed_values": [_frac(v) for v in r.seed_values],
            }
            for r in report.per_eps
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def report_csv(report: SolveReport) -> str:
    lines = ["eps,lp_value,rounded_value,violation_max,wall_ms"]
    for r in report.per_eps:
        lines.append(
            ",".join(
                (
                    str(r.eps),
                    "" if r.lp_value is None else repr(r.lp_value),
                    "" if r.rounded_value is None else repr(
                        float(r.rounded_value)
                    ),
                    "" if r.violation_max is None else repr(
                        float(r.violation_max)
                    ),
                    f"{r.wall_ms:.3f}",
                )
            )
        )
    return "\n".join(lines) + "\n"
