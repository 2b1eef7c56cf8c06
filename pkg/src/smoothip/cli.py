"""Command-line front end.

Four subcommands: ``gen`` writes instance files, ``solve`` runs the
pipeline on one instance, ``sweep`` produces the ratio-versus-error CSV
across instances and trials, and ``verify`` prints an instance's
smoothness diagnostics.  Instance kind is detected from file content
(DIMACS edge, DIMACS CNF, or the CSP JSON shape).

Exit codes: 0 success, 2 parse or parameter failure, 3 when every
relaxation in a solve failed.  All output is deterministic for fixed
flags and seed; the only varying CSV column is wall_ms.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .oracle import exact_prediction, perturb, read_prediction
from .pipeline import (
    Instance,
    SolveConfig,
    exact_solve,
    guarantee_bound,
    report_csv,
    report_json,
    solve,
)
from .poly import decompose, min_smoothness, multilinearize
from .problems import (
    gen_gnp,
    gen_kcsp,
    gen_ksat,
    maxcut_objective,
    maxkcsp_objective,
    maxksat_objective,
    parse_csp_json,
    parse_dimacs_cnf,
    parse_dimacs_graph,
    write_csp_json,
    write_dimacs_cnf,
    write_dimacs_graph,
)

# Advisory density thresholds printed by verify: "dense" wants the
# optimum around n^d, "near-dense" around n^(d - 1/2 + xi); we display
# the xi = 1/4 member of that family.
DENSE_FRACTION = Fraction(1, 8)
NEAR_DENSE_EXPONENT_DROP = 0.25


def load_instance(path) -> Instance:
    """Read an instance file, detecting its format from content."""
    text = Path(path).read_text()
    label = Path(path).stem
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p edge"):
            graph = parse_dimacs_graph(text)
            return Instance(
                maxcut_objective(graph), kind="maxcut",
                h=Fraction(len(graph.edges)), label=label,
            )
        if line.startswith("p cnf"):
            formula = parse_dimacs_cnf(text)
            return Instance(
                maxksat_objective(formula), kind="maxksat",
                h=Fraction(len(formula.clauses)), label=label,
            )
        break
    inst = parse_csp_json(text)
    return Instance(
        maxkcsp_objective(inst), kind="maxkcsp",
        h=Fraction(len(inst.constraints)), label=label,
    )


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_grid(flag: str):
    """Grid flag: full | stride:S | comma-separated eps values."""
    if flag == "full":
        return None, 1
    if flag.startswith("stride:"):
        return None, int(flag.split(":", 1)[1])
    return tuple(int(part) for part in flag.split(",")), 1


def _prediction_for(flag: str, instance: Instance, seed: int):
    if flag == "exact":
        return exact_prediction(instance)
    if flag.startswith("perturb:"):
        eps = int(flag.split(":", 1)[1])
        return perturb(exact_prediction(instance), eps, seed)
    if flag.startswith("file:"):
        return read_prediction(flag.split(":", 1)[1])
    raise ValueError(
        f"prediction source {flag!r} is not exact, perturb:EPS, or file:PATH"
    )


# -- gen ----------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family == "maxcut":
        text = write_dimacs_graph(gen_gnp(args.n, args.p, args.seed))
    elif args.family == "maxksat":
        text = write_dimacs_cnf(gen_ksat(args.n, args.m, args.k, args.seed))
    else:
        text = write_csp_json(gen_kcsp(args.n, args.m, args.k, args.seed))
    _emit(text, args.out)
    return 0


# -- solve --------------------------------------------------------------


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    grid, stride = _parse_grid(args.grid)
    config = SolveConfig(
        strategy=args.strategy,
        seed=args.seed,
        grid=grid,
        stride=stride,
        k=args.k,
        randomized_rounds=args.rounds,
    )
    prediction = _prediction_for(args.prediction, instance, args.seed)
    try:
        report = solve(instance, prediction, config)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.json:
        Path(args.json).write_text(report_json(report))
    if args.csv:
        Path(args.csv).write_text(report_csv(report))
    skips = sum(1 for r in report.per_eps if r.status != "optimal")
    print(
        f"instance: {report.label} (kind={instance.kind}, "
        f"n={report.n}, degree={report.degree})"
    )
    print(f"beta: {report.beta}")
    print(f"strategy: {report.strategy}")
    print(f"best value: {float(report.best_value):.6g} ({report.best_value})")
    print("best z: " + "".join(str(v) for v in report.best_z))
    print(f"eps records: {len(report.per_eps)} ({skips} skipped)")
    if report.per_eps and skips == len(report.per_eps):
        print("error: every relaxation failed", file=sys.stderr)
        return 3
    return 0


# -- sweep --------------------------------------------------------------


def _sweep_cell(payload):
    instance, star, opt, eps, trial, strategy, seed, k = payload
    stream = np.random.SeedSequence((seed % 2**64, eps, trial))
    cell_seed = int(stream.generate_state(1, np.uint64)[0])
    prediction = perturb(star, eps, cell_seed)
    config = SolveConfig(strategy=strategy, seed=cell_seed, grid=(eps,), k=k)
    achieved = solve(instance, prediction, config).best_value
    bound = guarantee_bound(instance, eps, config)
    ratio = "" if opt <= 0 else repr(float(Fraction(achieved) / opt))
    return (
        instance.label, eps, trial,
        repr(float(achieved)), repr(float(opt)), ratio, repr(float(bound)),
    )


def cmd_sweep(args) -> int:
    eps_values = sorted(set(int(part) for part in args.eps.split(",")))
    if args.opt is not None and len(args.instances) != 1:
        raise ValueError("--opt applies to a single instance")
    cells = []
    for path in args.instances:
        instance = load_instance(path)
        star, brute_opt = exact_solve(instance)
        opt = Fraction(args.opt) if args.opt is not None else brute_opt
        for eps in eps_values:
            if eps > instance.objective.n:
                raise ValueError(
                    f"eps {eps} exceeds {instance.label}'s variable count"
                )
            for trial in range(args.trials):
                cells.append(
                    (
                        instance, star, opt, eps, trial,
                        args.strategy, args.seed, args.k,
                    )
                )
    workers = int(os.environ.get("SMOOTHIP_WORKERS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(cell) for cell in cells]
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    lines = ["instance,eps,trial,achieved,opt,ratio,bound"]
    lines.extend(
        ",".join(str(field) for field in row) for row in rows
    )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- verify -------------------------------------------------------------


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    p = multilinearize(instance.objective)
    p = p.with_degree(max(2, p.degree))
    tree = decompose(p)
    beta = min_smoothness(p)
    n, d = p.n, p.degree
    print(f"instance: {instance.label} (kind={instance.kind})")
    print(f"n: {n}")
    print(f"degree: {d}")
    print(f"monomials: {len(p.coeffs)}")
    print(f"beta: {float(beta):.6g} ({beta})")
    print(f"decomposition nodes: {len(tree.nodes)}")
    dense_at = DENSE_FRACTION * Fraction(n) ** d
    near_at = n ** (d - 0.5 + (0.5 - NEAR_DENSE_EXPONENT_DROP))
    if args.opt is not None:
        opt = Fraction(args.opt)
    elif n <= 24:
        _, opt = exact_solve(instance)
    else:
        opt = None
    print(
        f"density thresholds: dense >= {float(dense_at):.6g} (n^d/8), "
        f"near-dense >= {near_at:.6g} (n^(d-1/4))"
    )
    if opt is None:
        print("density: unknown (instance too large to brute-force; pass --opt)")
    elif opt >= dense_at:
        print(f"density: dense (optimum {float(opt):.6g})")
    elif float(opt) >= near_at:
        print(f"density: near-dense (optimum {float(opt):.6g})")
    else:
        print(f"density: below both thresholds (optimum {float(opt):.6g})")
    return 0


# -- wiring -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothip",
        description="Prediction-guided Boolean polynomial maximization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument(
        "family", choices=("maxcut", "maxksat", "maxkcsp")
    )
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, default=0.5,
                     help="edge probability (maxcut)")
    gen.add_argument("--m", type=int, default=0,
                     help="clause/constraint count")
    gen.add_argument("--k", type=int, default=3,
                     help="clause/constraint width")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output path (default stdout)")
    gen.set_defaults(func=cmd_gen)

    solve_p = sub.add_parser("solve", help="run the pipeline on an instance")
    solve_p.add_argument("instance")
    solve_p.add_argument(
        "--prediction", default="exact",
        help="exact | perturb:EPS | file:PATH",
    )
    solve_p.add_argument(
        "--strategy", choices=("greedy", "randomized"), default="greedy"
    )
    solve_p.add_argument(
        "--grid", default="full", help="full | stride:S | e1,e2,..."
    )
    solve_p.add_argument("--seed", type=int, default=0)
    solve_p.add_argument("--k", type=int, default=1,
                         help="tail exponent for reported bounds")
    solve_p.add_argument("--rounds", type=int, default=16,
                         help="randomized rounding repetitions")
    solve_p.add_argument("--json", help="write the full report here")
    solve_p.add_argument("--csv", help="write per-eps rows here")
    solve_p.set_defaults(func=cmd_solve)

    sweep = sub.add_parser(
        "sweep", help="ratio-versus-error table over instances"
    )
    sweep.add_argument("instances", nargs="+")
    sweep.add_argument("--eps", required=True, help="comma-separated budgets")
    sweep.add_argument("--trials", type=int, default=1)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument(
        "--strategy", choices=("greedy", "randomized"), default="greedy"
    )
    sweep.add_argument("--k", type=int, default=1)
    sweep.add_argument(
        "--opt", help="known optimum (single instance only; skips brute force)"
    )
    sweep.add_argument("--out", help="output CSV path (default stdout)")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="print smoothness diagnostics")
    verify.add_argument("instance")
    verify.add_argument("--opt", help="known optimum for the density label")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
