"""Prediction sources: exact optima, controlled noise, files, and
empirical-risk selection over a finite candidate family.

A prediction is just a Boolean vector with a provenance tag.  Candidates
for selection are callables from an instance to such a vector (or to a
Prediction); selection runs the full pipeline on every training instance
per candidate and keeps the one with the smallest mean cost, where the
cost of achieving value v on an instance with ceiling h is h - v.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .pipeline import Instance, SolveConfig, exact_solve, solve


@dataclass(frozen=True)
class Prediction:
    """Boolean vector plus where it came from: "exact", "perturbed(e)",
    "file", or "erm(i)"."""

    x_hat: tuple
    provenance: str

    def __post_init__(self):
        object.__setattr__(self, "x_hat", tuple(int(v) for v in self.x_hat))
        if any(v not in (0, 1) for v in self.x_hat):
            raise ValueError("prediction entries must be 0 or 1")


@dataclass(frozen=True)
class ErmProblem:
    """Finite candidate family plus training instances.

    Every training instance must carry a cost ceiling h at least its
    maximum achievable objective, so costs stay in [0, h].
    """

    candidates: tuple
    training: tuple

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("need at least one candidate")
        if not self.training:
            raise ValueError("need at least one training instance")
        for instance in self.training:
            if instance.h is None:
                raise ValueError(
                    f"training instance {instance.label!r} has no cost ceiling"
                )


def _vector(prediction) -> tuple:
    return tuple(int(v) for v in getattr(prediction, "x_hat", prediction))


def exact_prediction(instance: Instance, cap: int = 24) -> Prediction:
    """The canonical optimum itself (lexicographically smallest)."""
    z, _ = exact_solve(instance, cap)
    return Prediction(z, "exact")


def perturb(x_star, eps: int, seed: int) -> Prediction:
    """Flip exactly eps coordinates, chosen uniformly by the seed.

    The result is always at Hamming distance eps from the input.
    """
    base = list(_vector(x_star))
    if not 0 <= eps <= len(base):
        raise ValueError(f"flip count {eps} outside [0, {len(base)}]")
    rng = random.Random(seed)
    for i in rng.sample(range(len(base)), eps):
        base[i] = 1 - base[i]
    return Prediction(tuple(base), f"perturbed({eps})")


def erm_select(
    prob: ErmProblem, config: SolveConfig = SolveConfig()
) -> tuple[int, Fraction]:
    """Pick the candidate with the smallest mean cost over the training
    set; ties go to the lowest index."""
    best_id, best_cost = None, None
    for i, candidate in enumerate(prob.candidates):
        total = Fraction(0)
        for instance in prob.training:
            report = solve(instance, _vector(candidate(instance)), config)
            total += Fraction(instance.h) - report.best_value
        cost = total / len(prob.training)
        if best_cost is None or cost < best_cost:
            best_id, best_cost = i, cost
    return best_id, best_cost


def empirical_prediction_error(
    candidate: Callable, instances, cap: int = 24
) -> Fraction:
    """Mean Hamming distance from the candidate's predictions to the
    canonical brute-force optima."""
    instances = tuple(instances)
    if not instances:
        raise ValueError("need at least one instance")
    total = 0
    for instance in instances:
        star, _ = exact_solve(instance, cap)
        guess = _vector(candidate(instance))
        if len(guess) != len(star):
            raise ValueError("prediction length mismatch")
        total += sum(1 for a, b in zip(guess, star) if a != b)
    return Fraction(total, len(instances))


# -- files --------------------------------------------------------------


def write_prediction(path, prediction) -> None:
    Path(path).write_text(
        "".join(str(v) for v in _vector(prediction)) + "\n"
    )


def read_prediction(path) -> Prediction:
    text = Path(path).read_text().strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"prediction file {path} is not a 0/1 line")
    return Prediction(tuple(int(ch) for ch in text), "file")


def parse_manifest(text: str, base_dir) -> tuple:
    """Candidate callables from a JSON list of {instance label: file}.

    Each manifest entry becomes a candidate that looks up the instance's
    label and reads the named prediction file (relative to base_dir).
    """
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(entries, list):
        raise ValueError("manifest must be a JSON list")
    base = Path(base_dir)

    def make(mapping) -> Callable:
        def candidate(instance: Instance):
            try:
                name = mapping[instance.label]
            except KeyError:
                raise ValueError(
                    f"manifest has no prediction for {instance.label!r}"
                ) from None
            return read_prediction(base / name)

        return candidate

    return tuple(make(dict(entry)) for entry in entries)
