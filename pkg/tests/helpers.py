"""Shared random generators for the test suite."""

from fractions import Fraction

from smoothip.lpsolve import LpModel
from smoothip.poly import Polynomial


def random_multilinear(rng, n, d, max_terms=12, coeff_bound=6):
    """Random multilinear polynomial on n variables with degree <= d."""
    coeffs = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        width = rng.randrange(0, min(d, n) + 1)
        mono = tuple(sorted(rng.sample(range(n), width)))
        value = Fraction(
            rng.randrange(-coeff_bound, coeff_bound + 1), rng.randrange(1, 4)
        )
        coeffs[mono] = coeffs.get(mono, 0) + value
    return Polynomial(n, coeffs)


def random_point(rng, n, den=8):
    """Random rational point in the unit cube."""
    return [Fraction(rng.randrange(0, den + 1), den) for _ in range(n)]


def random_bool_vector(rng, n):
    return [rng.randrange(2) for _ in range(n)]


def random_lp_model(rng, max_vars=30, max_rows=60):
    """Random box-and-rows model, feasible by construction around a hidden
    point; roughly one in seven gets a deliberately contradictory row pair.
    """
    n = rng.randrange(1, max_vars + 1)
    bounds = []
    hidden = []
    for _ in range(n):
        if rng.random() < 0.8:
            lo, hi = Fraction(0), Fraction(1)
        else:
            lo = Fraction(rng.randrange(0, 5), 8)
            hi = lo + Fraction(rng.randrange(0, 9 - int(lo * 8)), 8)
        bounds.append((lo, hi))
        hidden.append(lo + (hi - lo) * Fraction(rng.randrange(0, 9), 8))

    rows = []
    for _ in range(rng.randrange(0, max_rows + 1)):
        coeffs = tuple(
            Fraction(rng.randrange(-3, 4)) if rng.random() < 0.4 else Fraction(0)
            for _ in range(n)
        )
        value = sum(c * x for c, x in zip(coeffs, hidden))
        slack_lo = Fraction(rng.randrange(0, 17), 8)
        slack_hi = Fraction(rng.randrange(0, 17), 8)
        shape = rng.random()
        if shape < 0.6:
            rows.append((coeffs, value - slack_lo, value + slack_hi))
        elif shape < 0.75:
            rows.append((coeffs, None, value + slack_hi))
        elif shape < 0.9:
            rows.append((coeffs, value - slack_lo, None))
        else:
            rows.append((coeffs, value, value))
    if rng.random() < 0.15 and n >= 2:
        coeffs = tuple(Fraction(rng.randrange(1, 4)) for _ in range(n))
        value = sum(c * x for c, x in zip(coeffs, hidden))
        rows.append((coeffs, value + 1, None))
        rows.append((coeffs, None, value - 1))

    objective = tuple(Fraction(rng.randrange(-5, 6)) for _ in range(n))
    return LpModel(
        num_vars=n,
        var_bounds=tuple(bounds),
        rows=tuple(rows),
        objective=objective,
        offset=Fraction(rng.randrange(-3, 4)),
    )
