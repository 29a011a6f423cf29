"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 plan fails validation,
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bench
from .plan import load_plan, save_plan
from .scenario import (
    DEFAULT_HORIZON_S,
    DEFAULT_MAX_OFF_NADIR_DEG,
    ScenarioError,
    load_scenario,
    load_stations,
    make_scenario,
    save_scenario,
    with_opportunities,
)
from .solvers import SOLVER_NAMES, check_solver_args, run_solver
from .validate import validate, write_report, write_trace_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_SOLVER = 3

SEED_ENV = "ORBITSCHED_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _on_off(v: str) -> bool:
    if v not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return v == "on"


def _n_a_max(v: str):
    if v.lower() == "none":
        return None
    try:
        return int(v)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'none'") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orbitsched", description="Agile Earth-observation satellite task planning.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("gen", help="sample a random scenario (no opportunities)")
    g.add_argument("--locations", type=int, required=True, help="number of image locations")
    g.add_argument("--seed", type=int, default=None, help=f"sampling seed (default ${SEED_ENV} or 0)")
    g.add_argument("--horizon-s", type=float, default=DEFAULT_HORIZON_S)
    g.add_argument("--max-off-nadir-deg", type=float, default=DEFAULT_MAX_OFF_NADIR_DEG)
    g.add_argument("--stations", help="JSON list of ground stations replacing the defaults")
    g.add_argument("--out", required=True)

    a = sub.add_parser("access", help="compute collect/contact/sun-point opportunities")
    a.add_argument("--scenario", required=True)
    a.add_argument("--out", required=True)

    pl = sub.add_parser("plan", help="run a solver and write a plan")
    pl.add_argument("--scenario", required=True)
    pl.add_argument("--solver", required=True, help=f"one of: {', '.join(SOLVER_NAMES)}")
    pl.add_argument("--out", required=True)
    pl.add_argument("--resources", type=_on_off, default=False, metavar="on|off")
    pl.add_argument("--gamma", type=float)
    pl.add_argument("--d-solve", type=int)
    pl.add_argument("--c", type=float)
    pl.add_argument("--n-sim", type=int)
    pl.add_argument("--n-a-max", type=_n_a_max, default=argparse.SUPPRESS, metavar="N|none")
    pl.add_argument("--seed", type=int, help=f"MCTS seed (default ${SEED_ENV} or 0)")
    pl.add_argument("--time-limit-s", type=float, help="branch-and-bound time limit")
    pl.add_argument("--literal-duration-reward", action="store_true")
    pl.add_argument("--literal-resource-interval", action="store_true")
    pl.add_argument("--agility-from-start", action="store_true")

    v = sub.add_parser("validate", help="replay a plan and report violations")
    v.add_argument("--scenario", required=True)
    v.add_argument("--plan", required=True)
    v.add_argument("--trace", help="write the resource trace as CSV")
    v.add_argument("--report", help="also write the JSON report to this file")

    b = sub.add_parser("bench", help="run an experiment spec")
    b.add_argument("--spec", required=True)
    b.add_argument("--out-dir", required=True)
    b.add_argument("--jobs", type=int, default=1)

    gr = sub.add_parser("grid", help="hyperparameter grid search on one scenario")
    gr.add_argument("--scenario", required=True)
    gr.add_argument("--solver", required=True)
    gr.add_argument("--grid", required=True, help="JSON object mapping parameter to value list")
    gr.add_argument("--out", required=True)
    gr.add_argument("--resources", type=_on_off, default=False, metavar="on|off")
    gr.add_argument("--repeats", type=int, help="runs per point (default 10 for mcts, else 1)")
    gr.add_argument("--seed", type=int, help=f"first MCTS seed (default ${SEED_ENV} or 0)")
    return p


def _ready_scenario(path):
    sc = load_scenario(path)
    return sc if sc.opportunities is not None else with_opportunities(sc)


def cmd_gen(args) -> int:
    if args.locations <= 0:
        raise UsageError(f"--locations must be positive, got {args.locations}")
    if not args.horizon_s > 0:
        raise UsageError(f"--horizon-s must be positive, got {args.horizon_s}")
    seed = args.seed if args.seed is not None else default_seed()
    stations = load_stations(args.stations) if args.stations else None
    sc = make_scenario(args.locations, seed, args.horizon_s, stations=stations, max_off_nadir_deg=args.max_off_nadir_deg)
    save_scenario(sc, args.out)
    print(f"wrote {args.out}: {len(sc.requests)} requests, {len(sc.stations)} stations, seed {seed}")
    return EXIT_OK


def cmd_access(args) -> int:
    sc = with_opportunities(load_scenario(args.scenario))
    save_scenario(sc, args.out)
    counts = {}
    for o in sc.opportunities:
        counts[o.mode.value] = counts.get(o.mode.value, 0) + 1
    print(f"wrote {args.out}: " + ", ".join(f"{counts.get(m, 0)} {m}" for m in ("collect", "contact", "sunpoint")))
    return EXIT_OK


def _plan_params(args) -> dict:
    params = {}
    if args.gamma is not None:
        params["gamma"] = args.gamma
    if hasattr(args, "n_a_max"):
        params["n_a_max"] = args.n_a_max
    if args.d_solve is not None:
        params["d_solve"] = args.d_solve
    if args.c is not None:
        params["c"] = args.c
    if args.n_sim is not None:
        params["n_sim_max"] = args.n_sim
    if args.time_limit_s is not None:
        params["time_limit_s"] = args.time_limit_s
    for flag in ("literal_duration_reward", "literal_resource_interval", "agility_from_start"):
        if getattr(args, flag):
            params[flag] = True
    if args.solver == "mcts":
        params["seed"] = args.seed if args.seed is not None else default_seed()
    elif args.seed is not None:
        params["seed"] = args.seed  # rejected below for solvers without randomness
    return params


def cmd_plan(args) -> int:
    params = _plan_params(args)
    try:
        check_solver_args(args.solver, params, args.resources)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sc = _ready_scenario(args.scenario)
    t0 = time.perf_counter()
    try:
        plan = run_solver(args.solver, sc, params, args.resources)
    except Exception as exc:
        print(f"orbitsched: solver {args.solver} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    runtime = time.perf_counter() - t0
    save_plan(plan, args.out)
    print(
        f"solver={plan.solver_name} reward={plan.total_reward:.6f} "
        f"images={plan.images_collected} runtime_s={runtime:.3f}"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = load_scenario(args.scenario)
    plan = load_plan(args.plan)
    report = validate(plan, sc)
    sys.stdout.write(write_report(report, args.report))
    if args.trace:
        write_trace_csv(report, args.trace)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    doc = _read_json(args.spec)
    if isinstance(doc, dict) and "base_seed" not in doc:
        doc = dict(doc, base_seed=default_seed())
    spec = bench.spec_from_dict(doc)
    rows = bench.run_experiment(spec, jobs=args.jobs)
    out = bench.write_experiment(rows, args.out_dir)
    for s in bench.summarize(rows):
        print(
            f"{s['resource_mode']:>7} n={s['n_locations']:<5} {s['solver']:<10} "
            f"reward={s['mean_reward']:.3f} runtime_s={s['mean_runtime_s']:.3f} "
            f"errors={s['errors']} infeasible={s['infeasible']}"
        )
    print(f"wrote {out['results']}, {out['summary']} and {len(out['charts'])} charts")
    return EXIT_OK


def cmd_grid(args) -> int:
    grid = bench.load_grid(args.grid)
    if args.solver not in SOLVER_NAMES:
        raise UsageError(f"unknown solver {args.solver!r}; choose from {', '.join(SOLVER_NAMES)}")
    for point in bench.grid_points(grid):
        try:
            check_solver_args(args.solver, point, args.resources)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.repeats is not None and args.repeats < 1:
        raise UsageError(f"--repeats must be >= 1, got {args.repeats}")
    sc = _ready_scenario(args.scenario)
    seed = args.seed if args.seed is not None else default_seed()
    try:
        rows = bench.grid_search(sc, args.solver, grid, args.resources, args.repeats, seed)
    except bench.SpecError:
        raise
    except Exception as exc:
        print(f"orbitsched: solver {args.solver} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    bench.write_grid_csv(rows, args.out)
    for key, r in bench.best_per_n_a_max(rows).items():
        print(f"n_a_max={key}: best {json.dumps(r['params'], sort_keys=True)} mean_reward={r['mean_reward']:.4f}")
    return EXIT_OK


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


COMMANDS = {
    "gen": cmd_gen,
    "access": cmd_access,
    "plan": cmd_plan,
    "validate": cmd_validate,
    "bench": cmd_bench,
    "grid": cmd_grid,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ScenarioError, bench.SpecError, OSError) as exc:
        print(f"orbitsched {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
