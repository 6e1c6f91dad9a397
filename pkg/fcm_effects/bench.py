"""Timing harness comparing binary search, linear scan and exhaustive enumeration.

For every (n, density, trial) cell one random map is generated from a seed
derived from the plan's base seed, and every algorithm that applies to that n
solves it. Timed solves run one at a time on the calling thread; only graph
generation is spread across worker threads.
"""
from dataclasses import asdict, dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple
import logging
import os
import time

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .config import DEFAULT_THREADS, EXHAUSTIVE_MAX_N
from .errors import BudgetExceeded, EmptyInput, InvalidPlan
from .generator import derive_seed, generate, make_spec
from .graph import FcmGraph
from .solver import total_effects_all_pairs, total_effects_to_target

logger = logging.getLogger(__name__)

OK = "ok"
BUDGET_EXCEEDED = "budget_exceeded"

RECORD_COLUMNS = ["algorithm", "n", "density", "trial", "seed", "elapsed_s", "status"]
SUMMARY_COLUMNS = ["algorithm", "n", "density", "mean_s", "median_s", "min_s", "max_s", "exceeded"]
OVERALL_COLUMNS = ["algorithm", "n", "mean_s", "densities"]

# algorithm name -> (solver method, solver options)
ALGORITHMS: Dict[str, Tuple[str, dict]] = {
    "binary": ("binary", {}),
    "linear": ("linear", {}),
    "exhaustive": ("exhaustive", {"prune": False}),
    "exhaustive_pruned": ("exhaustive", {"prune": True}),
}
EXHAUSTIVE = ("exhaustive", "exhaustive_pruned")

DEFAULT_SIZES = [10, 12, 50, 100, 500]
DEFAULT_EXHAUSTIVE_SIZES = [8, 10, 12]
DEFAULT_DENSITIES = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
DEFAULT_TRIALS = 10
FULL_TRIALS = 40
FULL_EXTRA_SIZES = [1000]


class BenchPlan(BaseModel):
    algorithms: List[Literal["binary", "linear", "exhaustive", "exhaustive_pruned"]] = Field(
        default_factory=lambda: ["binary", "linear", "exhaustive"])
    sizes: List[int] = Field(default_factory=lambda: list(DEFAULT_SIZES),
                             description="n values for the binary and linear solvers")
    exhaustive_sizes: List[int] = Field(default_factory=lambda: list(DEFAULT_EXHAUSTIVE_SIZES),
                                        description="n values for exhaustive enumeration")
    densities: List[float] = Field(default_factory=lambda: list(DEFAULT_DENSITIES))
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    base_seed: int = Field(default=0, ge=0)
    target_policy: Literal["last_concept", "all_pairs"] = "last_concept"
    budget_s: float = Field(default=300.0, gt=0, description="time budget per timed solve")
    warmup: bool = True
    allow_large_exhaustive: bool = False
    n_jobs: int = Field(default=DEFAULT_THREADS, ge=1, description="threads for graph generation")

    @field_validator("algorithms")
    @classmethod
    def check_algorithms(cls, v):
        if not v:
            raise ValueError("at least one algorithm is required")
        return list(dict.fromkeys(v))

    @field_validator("sizes", "exhaustive_sizes")
    @classmethod
    def check_sizes(cls, v):
        if any(n < 2 for n in v):
            raise ValueError("every size must be at least 2")
        return v

    @field_validator("densities")
    @classmethod
    def check_densities(cls, v):
        if not v:
            raise ValueError("at least one density is required")
        if any(not 0 < d <= 1 for d in v):
            raise ValueError("densities must lie in (0, 1]")
        return v

    @model_validator(mode="after")
    def check_exhaustive_sizes(self):
        if any(a in EXHAUSTIVE for a in self.algorithms) and not self.allow_large_exhaustive:
            too_big = [n for n in self.exhaustive_sizes if n > EXHAUSTIVE_MAX_N]
            if too_big:
                raise ValueError(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_MAX_N}, got {too_big}; "
                                 f"set allow_large_exhaustive to override")
        return self

    def sizes_for(self, algorithm: str) -> List[int]:
        return self.exhaustive_sizes if algorithm in EXHAUSTIVE else self.sizes

    def cells(self) -> List[Tuple[int, float, int]]:
        """Every (n, density, trial) needing a graph, in run order."""
        ns = sorted({n for a in self.algorithms for n in self.sizes_for(a)})
        return [(n, d, t) for n in ns for d in self.densities for t in range(self.trials)]


def make_plan(full_scale: bool = False, **fields) -> BenchPlan:
    """Build a BenchPlan; `full_scale` switches to 40 trials and adds n=1000."""
    fields = {k: v for k, v in fields.items() if v is not None}
    if full_scale:
        fields.setdefault("trials", FULL_TRIALS)
        fields["sizes"] = sorted(set(fields.get("sizes", DEFAULT_SIZES)) | set(FULL_EXTRA_SIZES))
    try:
        return BenchPlan(**fields)
    except ValidationError as e:
        raise InvalidPlan(str(e))


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    n: int
    density: float
    trial: int
    seed: int
    elapsed_s: float
    status: str


def _solve(graph: FcmGraph, algorithm: str, target_policy: str, deadline: Optional[float]):
    method, options = ALGORITHMS[algorithm]
    if target_policy == "all_pairs":
        return total_effects_all_pairs(graph, method, deadline=deadline, **options)
    return total_effects_to_target(graph, graph.n - 1, method, deadline=deadline, **options)


def _warm_up(graph: FcmGraph, algorithm: str, budget_s: float):
    # one untimed pair so imports and caches are paid before timing starts
    method, options = ALGORITHMS[algorithm]
    deadline = time.monotonic() + budget_s
    try:
        if method == "exhaustive":
            from .oracle import total_effect_exhaustive
            total_effect_exhaustive(graph, 0, graph.n - 1, deadline=deadline, **options)
        else:
            total_effects_to_target(graph, graph.n - 1, method, deadline=deadline, **options)
    except BudgetExceeded:
        pass


def time_solve(graph: FcmGraph, algorithm: str, target_policy: str = "last_concept",
               budget_s: Optional[float] = None) -> Tuple[float, str]:
    """Elapsed wall-clock seconds for one full solve (sorting included) and its status."""
    deadline = time.monotonic() + budget_s if budget_s is not None else None
    start = time.perf_counter()
    try:
        _solve(graph, algorithm, target_policy, deadline)
        status = OK
    except BudgetExceeded:
        status = BUDGET_EXCEEDED
    return time.perf_counter() - start, status


def _fresh(graph: FcmGraph) -> FcmGraph:
    # same edges, no cached sorted list, so every timed solve pays for its sort
    return FcmGraph(graph.n, graph.edges, graph.labels)


def run_plan(plan: BenchPlan) -> List[BenchRecord]:
    cells = plan.cells()
    logger.info(f"Running plan: {len(plan.algorithms)} algorithms, {len(cells)} graph cells")

    def build(n: int, density: float, trial: int):
        seed = derive_seed(plan.base_seed, n, density, trial)
        return (n, density, trial), seed, generate(make_spec(n, density, seed))

    built = Parallel(n_jobs=plan.n_jobs, prefer="threads")(delayed(build)(*c) for c in cells)
    graphs = {key: (seed, graph) for key, seed, graph in built}

    records: List[BenchRecord] = []
    for algorithm in plan.algorithms:
        for n in sorted(plan.sizes_for(algorithm)):
            for density in plan.densities:
                if plan.warmup:
                    _warm_up(_fresh(graphs[(n, density, 0)][1]), algorithm, plan.budget_s)
                for trial in range(plan.trials):
                    seed, graph = graphs[(n, density, trial)]
                    elapsed, status = time_solve(_fresh(graph), algorithm, plan.target_policy, plan.budget_s)
                    if status != OK:
                        logger.warning(f"{algorithm} n={n} density={density} trial={trial} exceeded {plan.budget_s}s budget")
                    logger.debug(f"{algorithm} n={n} density={density} trial={trial}: {elapsed:.6f}s")
                    records.append(BenchRecord(algorithm, n, density, trial, seed, elapsed, status))
    logger.info(f"Plan finished: {len(records)} records")
    return records


def records_frame(records: Sequence[BenchRecord]) -> pd.DataFrame:
    if isinstance(records, pd.DataFrame):
        return records[RECORD_COLUMNS]
    return pd.DataFrame([asdict(r) for r in records], columns=RECORD_COLUMNS)


def summarize(records) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Per-cell elapsed statistics and the across-density mean per (algorithm, n).

    Budget-exceeded trials are left out of the statistics and counted in
    `exceeded`. The overall mean is the plain average of the cell means over
    the densities that have one.
    """
    frame = records_frame(records)
    if frame.empty:
        raise EmptyInput("no benchmark records to summarize")

    rows = []
    for (algorithm, n, density), cell in frame.groupby(["algorithm", "n", "density"], sort=True):
        ok = cell.loc[cell["status"] == OK, "elapsed_s"]
        rows.append({
            "algorithm": algorithm,
            "n": int(n),
            "density": float(density),
            "mean_s": ok.mean() if len(ok) else np.nan,
            "median_s": ok.median() if len(ok) else np.nan,
            "min_s": ok.min() if len(ok) else np.nan,
            "max_s": ok.max() if len(ok) else np.nan,
            "exceeded": int((cell["status"] == BUDGET_EXCEEDED).sum()),
        })
    summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

    overall_rows = []
    for (algorithm, n), cells in summary.groupby(["algorithm", "n"], sort=True):
        means = cells["mean_s"].dropna()
        overall_rows.append({
            "algorithm": algorithm,
            "n": int(n),
            "mean_s": float(means.sum() / len(means)) if len(means) else np.nan,
            "densities": int(len(means)),
        })
    overall = pd.DataFrame(overall_rows, columns=OVERALL_COLUMNS)
    return summary, overall


def speedups(summary: pd.DataFrame, baseline: str = "exhaustive", contender: str = "binary") -> pd.DataFrame:
    """Ratio baseline mean / contender mean for every (n, density) both algorithms ran."""
    base = summary[summary["algorithm"] == baseline][["n", "density", "mean_s"]]
    cont = summary[summary["algorithm"] == contender][["n", "density", "mean_s"]]
    merged = base.merge(cont, on=["n", "density"], suffixes=("_" + baseline, "_" + contender))
    merged["speedup"] = merged[f"mean_s_{baseline}"] / merged[f"mean_s_{contender}"]
    return merged


def coefficient_of_variation(records, algorithm: str, n: int, density: float = 1.0) -> float:
    frame = records_frame(records)
    sel = frame[(frame["algorithm"] == algorithm) & (frame["n"] == n)
                & np.isclose(frame["density"], density) & (frame["status"] == OK)]["elapsed_s"]
    if len(sel) < 2:
        raise EmptyInput(f"need at least two {algorithm} timings at n={n}, density={density}")
    return float(sel.std(ddof=1) / sel.mean())


def plot_frames(records, variability_n: Optional[int] = None) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Plot-ready data: per-trial times at density 1.0 and mean time against density."""
    frame = records_frame(records)
    dense = frame[np.isclose(frame["density"], 1.0) & frame["algorithm"].isin(["binary", "linear"])]
    if variability_n is None and not dense.empty:
        variability_n = int(dense["n"].max())
    dense = dense[dense["n"] == variability_n]
    if dense.empty:
        variability = pd.DataFrame(columns=["trial"])
    else:
        variability = (dense.pivot_table(index="trial", columns="algorithm", values="elapsed_s", aggfunc="first")
                       .reset_index())
        variability.columns.name = None

    summary, _ = summarize(frame)
    trend = summary[["algorithm", "n", "density", "mean_s"]].reset_index(drop=True)
    return variability, trend


def write_outputs(records, out_dir: str) -> Dict[str, str]:
    """Write bench.csv, summary.csv, overall.csv, variability.csv and density_trend.csv."""
    os.makedirs(out_dir, exist_ok=True)
    frame = records_frame(records)
    summary, overall = summarize(frame)
    variability, trend = plot_frames(frame)
    paths = {
        "bench": os.path.join(out_dir, "bench.csv"),
        "summary": os.path.join(out_dir, "summary.csv"),
        "overall": os.path.join(out_dir, "overall.csv"),
        "variability": os.path.join(out_dir, "variability.csv"),
        "density_trend": os.path.join(out_dir, "density_trend.csv"),
    }
    frame.to_csv(paths["bench"], index=False, lineterminator="\n")
    summary.to_csv(paths["summary"], index=False, lineterminator="\n")
    overall.to_csv(paths["overall"], index=False, lineterminator="\n")
    variability.to_csv(paths["variability"], index=False, lineterminator="\n")
    trend.to_csv(paths["density_trend"], index=False, lineterminator="\n")
    logger.info(f"Benchmark outputs written to {out_dir}")
    return paths


def read_records(path: str) -> pd.DataFrame:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Records file not found: {path}")
    frame = pd.read_csv(path, float_precision="round_trip",
                        dtype={"algorithm": str, "n": "int64", "trial": "int64", "seed": "int64", "status": str})
    missing = [c for c in RECORD_COLUMNS if c not in frame.columns]
    if missing:
        raise EmptyInput(f"{path} is missing columns {missing}")
    return frame[RECORD_COLUMNS]
