"""Experiment harness: repeated location samplings, every solver, both resource modes.

The ``total_reward`` column is the quantity each experiment compares. With
resources off it is the undiscounted reward of the images a plan collects,
which is the objective the exact and graph planners optimize and what the
SMDP planners are ultimately judged on. With resources on it is the SMDP
return, penalties included, since that is the only place the resource
bookkeeping shows up.
"""

from __future__ import annotations

import csv
import itertools
import json
import statistics
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .charts import write_bar_chart
from .scenario import DEFAULT_HORIZON_S, Scenario, make_scenario, with_opportunities
from .solvers import RESOURCE_FREE_ONLY, SMDP_PARAMS, SOLVER_NAMES, SOLVER_PARAMS, run_solver
from .validate import validate

RESOURCE_MODES = ("without", "with")
MCTS_GRID_REPEATS = 10


class SpecError(ValueError):
    """A malformed experiment or grid description."""


@dataclass(frozen=True)
class SolverEntry:
    name: str
    params: dict = field(default_factory=dict)
    params_by_mode: dict = field(default_factory=dict)
    label: str = ""

    @property
    def display(self) -> str:
        return self.label or self.name

    def params_for(self, mode: str) -> dict:
        merged = dict(self.params)
        merged.update(self.params_by_mode.get(mode, {}))
        return merged


@dataclass(frozen=True)
class ExperimentSpec:
    location_counts: tuple
    samples_per_count: int
    solvers: tuple
    resource_modes: tuple = ("without",)
    base_seed: int = 0
    horizon_s: float = DEFAULT_HORIZON_S

    def __post_init__(self):
        if self.samples_per_count < 1:
            raise SpecError(f"samples_per_count: must be >= 1, got {self.samples_per_count}")
        if not self.location_counts:
            raise SpecError("location_counts: must not be empty")
        for i, n in enumerate(self.location_counts):
            if not isinstance(n, int) or n < 1:
                raise SpecError(f"location_counts[{i}]: must be a positive integer, got {n!r}")
        if not self.solvers:
            raise SpecError("solvers: must list at least one solver")
        for i, s in enumerate(self.solvers):
            if s.name not in SOLVER_NAMES:
                raise SpecError(f"solvers[{i}].name: unknown solver {s.name!r}; choose from {', '.join(SOLVER_NAMES)}")
            allowed = set(SMDP_PARAMS) | set(SOLVER_PARAMS[s.name])
            for mode in RESOURCE_MODES:
                bad = set(s.params_for(mode)) - allowed
                if bad:
                    raise SpecError(f"solvers[{i}].params: {s.name} does not take {', '.join(sorted(bad))}")
            for mode in s.params_by_mode:
                if mode not in RESOURCE_MODES:
                    raise SpecError(f"solvers[{i}].params_by_mode: unknown mode {mode!r}")
        if not self.resource_modes:
            raise SpecError("resource_modes: must not be empty")
        for m in self.resource_modes:
            if m not in RESOURCE_MODES:
                raise SpecError(f"resource_modes: {m!r} is not one of {', '.join(RESOURCE_MODES)}")
        if not self.horizon_s > 0:
            raise SpecError(f"horizon_s: must be positive, got {self.horizon_s}")


def spec_from_dict(doc) -> ExperimentSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec: expected a JSON object")
    known = {f.name for f in fields(ExperimentSpec)}
    extra = set(doc) - known - {"schema_version"}
    if extra:
        raise SpecError(f"spec: unknown field(s) {', '.join(sorted(extra))}")
    for req in ("location_counts", "samples_per_count", "solvers"):
        if req not in doc:
            raise SpecError(f"{req}: required field missing")
    if not isinstance(doc["location_counts"], list):
        raise SpecError("location_counts: expected a list")
    if not isinstance(doc["solvers"], list):
        raise SpecError("solvers: expected a list")
    solvers = []
    for i, s in enumerate(doc["solvers"]):
        if isinstance(s, str):
            s = {"name": s}
        if not isinstance(s, dict) or "name" not in s:
            raise SpecError(f"solvers[{i}]: expected a name or an object with a name")
        for key in ("params", "params_by_mode"):
            if not isinstance(s.get(key, {}), dict):
                raise SpecError(f"solvers[{i}].{key}: expected an object")
        solvers.append(
            SolverEntry(str(s["name"]), dict(s.get("params", {})), dict(s.get("params_by_mode", {})), str(s.get("label", "")))
        )
    try:
        return ExperimentSpec(
            location_counts=tuple(doc["location_counts"]),
            samples_per_count=int(doc["samples_per_count"]),
            solvers=tuple(solvers),
            resource_modes=tuple(doc.get("resource_modes", ["without"])),
            base_seed=int(doc.get("base_seed", 0)),
            horizon_s=float(doc.get("horizon_s", DEFAULT_HORIZON_S)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"spec: {exc}") from exc


def load_spec(path) -> ExperimentSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return spec_from_dict(doc)


@dataclass
class ResultRow:
    solver: str
    resource_mode: str
    n_locations: int
    sample_index: int
    total_reward: float
    images_collected: int
    runtime_s: float
    reward_per_second: float
    smdp_reward: float = 0.0
    feasible: bool = True
    validation_gap: float = 0.0  # |validator reward - solver reward|
    error: str = ""


RESULT_HEADER = [f.name for f in fields(ResultRow)]


def cell_seed(base_seed: int, n_locations: int, sample_index: int) -> int:
    """Stable per-cell seed; ``hash()`` is salted per process, crc32 is not."""
    return base_seed + zlib.crc32(f"{n_locations}:{sample_index}".encode())


def cell_scenario(spec: ExperimentSpec, n_locations: int, sample_index: int) -> Scenario:
    seed = cell_seed(spec.base_seed, n_locations, sample_index)
    return with_opportunities(make_scenario(n_locations, seed, horizon_s=spec.horizon_s))


def score(plan, resources: bool) -> float:
    return plan.total_reward if resources else plan.collect_reward


def run_one(entry: SolverEntry, scenario: Scenario, mode: str, n: int, sample: int) -> ResultRow:
    resources = mode == "with"
    try:
        t0 = time.perf_counter()
        plan = run_solver(entry.name, scenario, entry.params_for(mode), resources)
        runtime = time.perf_counter() - t0
    except Exception as exc:  # recorded, the experiment carries on
        return ResultRow(entry.display, mode, n, sample, 0.0, 0, 0.0, 0.0, 0.0, False, 0.0, f"{type(exc).__name__}: {exc}")
    report = validate(plan, scenario)
    reward = score(plan, resources)
    return ResultRow(
        solver=entry.display,
        resource_mode=mode,
        n_locations=n,
        sample_index=sample,
        total_reward=reward,
        images_collected=plan.images_collected,
        runtime_s=runtime,
        reward_per_second=reward / max(runtime, 1e-12),
        smdp_reward=plan.total_reward,
        feasible=report.feasible,
        validation_gap=abs(report.recomputed_reward - plan.total_reward),
    )


def run_cell(spec: ExperimentSpec, n: int, sample: int) -> list[ResultRow]:
    scenario = cell_scenario(spec, n, sample)
    rows = []
    for mode in spec.resource_modes:
        for entry in spec.solvers:
            if mode == "with" and entry.name in RESOURCE_FREE_ONLY:
                continue
            rows.append(run_one(entry, scenario, mode, n, sample))
    return rows


def _sort_key(row: ResultRow):
    return (row.n_locations, row.sample_index, RESOURCE_MODES.index(row.resource_mode), row.solver)


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[ResultRow]:
    """One row per (count, sample, mode, solver), sorted canonically.

    Solvers that only handle the resource-free problem are skipped in the
    resource mode rather than reported as failures.
    """
    cells = [(n, s) for n in spec.location_counts for s in range(spec.samples_per_count)]
    rows: list[ResultRow] = []
    if jobs <= 1:
        for n, s in cells:
            rows.extend(run_cell(spec, n, s))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(run_cell, itertools.repeat(spec), [c[0] for c in cells], [c[1] for c in cells]):
                rows.extend(part)
    return sorted(rows, key=_sort_key)


def write_results_csv(rows: list[ResultRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_HEADER)
        for r in rows:
            w.writerow([getattr(r, k) for k in RESULT_HEADER])


def read_results_csv(path) -> list[ResultRow]:
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            out.append(
                ResultRow(
                    solver=rec["solver"],
                    resource_mode=rec["resource_mode"],
                    n_locations=int(rec["n_locations"]),
                    sample_index=int(rec["sample_index"]),
                    total_reward=float(rec["total_reward"]),
                    images_collected=int(rec["images_collected"]),
                    runtime_s=float(rec["runtime_s"]),
                    reward_per_second=float(rec["reward_per_second"]),
                    smdp_reward=float(rec["smdp_reward"]),
                    feasible=rec["feasible"] == "True",
                    validation_gap=float(rec["validation_gap"]),
                    error=rec["error"],
                )
            )
    return out


SUMMARY_HEADER = [
    "resource_mode", "n_locations", "solver", "runs", "errors", "infeasible",
    "mean_reward", "mean_images", "mean_runtime_s", "mean_reward_per_second",
]


def summarize(rows: list[ResultRow]) -> list[dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.resource_mode, r.n_locations, r.solver), []).append(r)
    out = []
    for (mode, n, solver), rs in sorted(groups.items(), key=lambda kv: (RESOURCE_MODES.index(kv[0][0]), kv[0][1], kv[0][2])):
        ok = [r for r in rs if not r.error]
        mean = lambda xs: statistics.fmean(xs) if xs else float("nan")  # noqa: E731
        out.append(
            {
                "resource_mode": mode,
                "n_locations": n,
                "solver": solver,
                "runs": len(rs),
                "errors": len(rs) - len(ok),
                "infeasible": sum(1 for r in ok if not r.feasible),
                "mean_reward": mean([r.total_reward for r in ok]),
                "mean_images": mean([r.images_collected for r in ok]),
                "mean_runtime_s": mean([r.runtime_s for r in ok]),
                "mean_reward_per_second": mean([r.reward_per_second for r in ok]),
            }
        )
    return out


def write_summary_csv(summary: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_HEADER)
        w.writeheader()
        w.writerows(summary)


def write_charts(summary: list[dict], out_dir) -> list[Path]:
    """Reward, runtime and time-normalized reward, one SVG each."""
    out_dir = Path(out_dir)
    multi = len({(s["resource_mode"], s["n_locations"]) for s in summary}) > 1
    labels = [f"{s['solver']} {s['resource_mode']} {s['n_locations']}" if multi else s["solver"] for s in summary]
    panels = [
        ("reward.svg", "mean_reward", "Total reward", "reward"),
        ("runtime.svg", "mean_runtime_s", "Solver runtime", "seconds"),
        ("reward_per_second.svg", "mean_reward_per_second", "Time-normalized reward", "reward / s"),
    ]
    paths = []
    for name, key, title, unit in panels:
        p = out_dir / name
        write_bar_chart(p, labels, [s[key] for s in summary], title, unit)
        paths.append(p)
    return paths


def write_experiment(rows: list[ResultRow], out_dir) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_results_csv(rows, out_dir / "results.csv")
    summary = summarize(rows)
    write_summary_csv(summary, out_dir / "summary.csv")
    charts = write_charts(summary, out_dir)
    return {"results": out_dir / "results.csv", "summary": out_dir / "summary.csv", "charts": charts}


# ---------------------------------------------------------------- grid search


def grid_points(grid: dict) -> list[dict]:
    keys = sorted(grid)
    for k in keys:
        if not isinstance(grid[k], list) or not grid[k]:
            raise SpecError(f"grid.{k}: expected a non-empty list of values")
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(
    scenario: Scenario,
    solver: str,
    grid: dict,
    resources: bool = False,
    repeats: Optional[int] = None,
    seed: int = 0,
) -> list[dict]:
    """Evaluate every grid point; rows come back ranked by mean reward.

    MCTS points run ``repeats`` times (default ten) with seeds
    ``seed, seed+1, ...``; deterministic solvers run once.
    """
    if solver not in SOLVER_NAMES:
        raise SpecError(f"unknown solver {solver!r}; choose from {', '.join(SOLVER_NAMES)}")
    allowed = set(SMDP_PARAMS) | set(SOLVER_PARAMS[solver])
    bad = set(grid) - allowed
    if bad:
        raise SpecError(f"grid: {solver} does not take {', '.join(sorted(bad))}")
    if repeats is None:
        repeats = MCTS_GRID_REPEATS if solver == "mcts" and "seed" not in grid else 1
    rows = []
    for order, point in enumerate(grid_points(grid)):
        rewards, runtimes = [], []
        for k in range(repeats):
            params = dict(point)
            if solver == "mcts" and "seed" not in point:
                params["seed"] = seed + k
            t0 = time.perf_counter()
            plan = run_solver(solver, scenario, params, resources)
            runtimes.append(time.perf_counter() - t0)
            rewards.append(score(plan, resources))
        rows.append(
            {
                "params": point,
                "mean_reward": statistics.fmean(rewards),
                "std_reward": statistics.pstdev(rewards),
                "mean_runtime_s": statistics.fmean(runtimes),
                "runs": repeats,
                "order": order,
            }
        )
    rows.sort(key=lambda r: (-r["mean_reward"], r["order"]))
    for rank, r in enumerate(rows, 1):
        r["rank"] = rank
    return rows


def best_per_n_a_max(rows: list[dict]) -> dict:
    """Top-ranked row for each ``n_a_max`` value (rows must already be ranked)."""
    out = {}
    for r in rows:
        key = r["params"].get("n_a_max")
        out.setdefault(key, r)
    return out


def write_grid_csv(rows: list[dict], path) -> None:
    keys = sorted({k for r in rows for k in r["params"]})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", *keys, "mean_reward", "std_reward", "mean_runtime_s", "runs"])
        for r in rows:
            w.writerow([r["rank"], *(r["params"].get(k, "") for k in keys), r["mean_reward"], r["std_reward"], r["mean_runtime_s"], r["runs"]])


def load_grid(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or not doc:
        raise SpecError("grid: expected a non-empty JSON object mapping parameter to value list")
    grid_points(doc)
    return doc

