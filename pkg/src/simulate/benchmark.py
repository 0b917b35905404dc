"""
Benchmark Runner.

Runs the grid dgps x methods x estimators x n_grid, `reps` replications per
cell, and aggregates MSE of the ATE and MISE of the ITE. Also the runtime
and bandwidth studies.
"""

import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.core.sample import CovariateMatrix
from src.core.seeds import DEFAULT_SEED, derive_seed, make_rng
from src.designs.base import DesignConfig
from src.designs.designer import ExperimentDesigner
from src.designs.types import DesignMethod
from src.errors import ConfigError, DesignError, MissingFile
from src.estimators.types import EstimatorType
from src.simulate.dgps import DGPType, generate
from src.simulate.harness import ReplicationResult, run_replication

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

BASE_COLUMNS = ["dgp", "method", "estimator", "n", "reps", "mse_ate", "mise_ite"]
TIMING_COLUMNS = ["mean_design_ms", "mean_estimate_ms"]
SCALED_COLUMNS = ["mse_ate_scaled", "mise_ite_scaled"]
SKIPPED_PREFIX = "skipped:"


@dataclass
class BenchmarkConfig:
    """
    Benchmark grid and settings, loadable from JSON.

    Attributes:
        dgps: Data-generating processes
        methods: Design methods
        estimators: Estimators
        n_grid: Sample sizes
        reps: Replications per cell
        seed: Master seed
        standardize: Standardize covariates inside the designs
        bandwidth: "auto" or a positive float
        k: Neighbours for the k-NN T-learner
        accept_frac: Rerandomization acceptance quantile
        n_jobs: Worker processes for replications
        timings: Add timing columns (they vary between runs)
        serial_timing: Run replications in-process so timings are not contended
        normalize_exponent: Also report errors multiplied by n**exponent
        noise_scale: Outcome noise multiplier
    """
    dgps: List[str]
    methods: List[str]
    estimators: List[str]
    n_grid: List[int]
    reps: int = 1
    seed: int = DEFAULT_SEED
    standardize: bool = True
    bandwidth: Union[str, float] = "auto"
    k: int = 5
    accept_frac: float = 0.01
    n_jobs: int = 1
    timings: bool = False
    serial_timing: bool = False
    normalize_exponent: Optional[float] = None
    noise_scale: float = 1.0

    def __post_init__(self):
        try:
            self.dgps = [DGPType.parse(d).value for d in self.dgps]
            self.methods = [DesignMethod.parse(m).value for m in self.methods]
            self.estimators = [EstimatorType.parse(e).value for e in self.estimators]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not (self.dgps and self.methods and self.estimators and self.n_grid):
            raise ConfigError("dgps, methods, estimators and n_grid must be non-empty")
        if any(int(n) < 2 for n in self.n_grid):
            raise ConfigError(f"Every n must be >= 2, got {self.n_grid}")
        self.n_grid = [int(n) for n in self.n_grid]
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if self.k < 1 or self.n_jobs < 1:
            raise ConfigError("k and n_jobs must be >= 1")
        try:
            self.design_config()
        except DesignError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "BenchmarkConfig":
        """
        Load from a JSON file.

        Raises:
            MissingFile: No such file
            ConfigError: Malformed JSON, unknown fields or invalid values
        """
        path = Path(path)
        if not path.is_file():
            raise MissingFile(str(path))
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"{path}: unknown fields {unknown}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def to_dict(self) -> dict:
        return asdict(self)

    def design_config(self) -> DesignConfig:
        return DesignConfig(
            bandwidth=self.bandwidth,
            standardize=self.standardize,
            accept_frac=self.accept_frac,
        )

    def cells(self) -> List[Tuple[str, str, str, int]]:
        """Grid cells in output order."""
        return [
            (dgp, method, estimator, n)
            for dgp in self.dgps
            for method in self.methods
            for estimator in self.estimators
            for n in self.n_grid
        ]


@dataclass
class BenchmarkTable:
    """
    Aggregated benchmark results.

    Attributes:
        rows: One row per cell
        normalize_exponent: Exponent of the scaled columns, if any
        skipped: Cells skipped as incompatible; they stay in `rows` with an
            error starting "skipped:"
    """
    rows: pd.DataFrame
    normalize_exponent: Optional[float] = None
    skipped: List[Tuple[str, str, str, int]] = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        errors = self.rows["error"].fillna("")
        return int((errors.astype(bool) & ~errors.str.startswith(SKIPPED_PREFIX)).sum())

    @property
    def n_succeeded(self) -> int:
        return len(self.rows) - self.n_failed - len(self.skipped)

    def to_csv(self, path: Union[str, Path]) -> None:
        self.rows.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _columns(config: BenchmarkConfig) -> List[str]:
    columns = list(BASE_COLUMNS)
    if config.timings:
        columns += TIMING_COLUMNS
    if config.normalize_exponent is not None:
        columns += SCALED_COLUMNS
    return columns + ["error"]


def _replicate(task) -> ReplicationResult:
    dgp, n, method, estimator, seed, design_config, k, noise_scale = task
    return run_replication(dgp, n, method, estimator, seed, design_config, k, noise_scale)


def aggregate(results: Sequence[ReplicationResult]) -> dict:
    """mse_ate, mise_ite and mean timings over replications, summed in replication order."""
    ate_errors = np.array([r.ate_error for r in results])
    return {
        "mse_ate": float(np.mean(np.square(ate_errors))),
        "mise_ite": float(np.mean([r.ite_mse for r in results])),
        "mean_design_ms": float(np.mean([r.design_ms for r in results])),
        "mean_estimate_ms": float(np.mean([r.estimate_ms for r in results])),
    }


def run_benchmark(
    config: BenchmarkConfig,
    output: Optional[Union[str, Path]] = None,
    progress: bool = False
) -> BenchmarkTable:
    """
    Run every compatible cell of the grid.

    A failing cell is recorded with its error message and the run goes on.
    An incompatible cell keeps its row, with no replications and an error
    naming the reason.
    When `output` is given the CSV is rewritten after every cell.

    Args:
        config: Benchmark grid
        output: CSV path
        progress: Show a progress bar on stderr

    Returns:
        BenchmarkTable
    """
    columns = _columns(config)
    design_config = config.design_config()
    rows, skipped = [], []

    cells = config.cells()
    reasons = [
        EstimatorType(estimator).incompatibility(DesignMethod(method))
        for _, method, estimator, _ in cells
    ]

    use_pool = config.n_jobs > 1 and not (config.timings and config.serial_timing)
    executor = ProcessPoolExecutor(max_workers=config.n_jobs) if use_pool else None
    bar = tqdm(
        total=sum(not reason for reason in reasons) * config.reps,
        disable=not progress,
        file=sys.stderr,
        desc="replications",
    )
    try:
        for (dgp, method, estimator, n), reason in zip(cells, reasons):
            if reason:
                logger.warning("Skipping %s/%s/%s/n=%d: %s", dgp, method, estimator, n, reason)
                skipped.append((dgp, method, estimator, n))
                rows.append({"dgp": dgp, "method": method, "estimator": estimator, "n": n,
                             "reps": 0, "error": f"{SKIPPED_PREFIX} {reason}"})
                continue
            dgp_index = config.dgps.index(dgp)
            tasks = [
                (dgp, n, method, estimator, derive_seed(config.seed, dgp_index, n, rep),
                 design_config, config.k, config.noise_scale)
                for rep in range(config.reps)
            ]
            row = {"dgp": dgp, "method": method, "estimator": estimator, "n": n,
                   "reps": config.reps, "error": ""}
            try:
                if executor is not None:
                    results = []
                    for result in executor.map(_replicate, tasks):
                        results.append(result)
                        bar.update(1)
                else:
                    results = []
                    for task in tasks:
                        results.append(_replicate(task))
                        bar.update(1)
                row.update(aggregate(results))
                if config.normalize_exponent is not None:
                    scale = float(n) ** config.normalize_exponent
                    row["mse_ate_scaled"] = row["mse_ate"] * scale
                    row["mise_ite_scaled"] = row["mise_ite"] * scale
            except DesignError as exc:
                logger.warning("Cell %s/%s/%s/n=%d failed: %s", dgp, method, estimator, n, exc)
                row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)
            table = BenchmarkTable(
                pd.DataFrame(rows).reindex(columns=columns), config.normalize_exponent, skipped
            )
            if output is not None:
                table.to_csv(output)
    finally:
        bar.close()
        if executor is not None:
            executor.shutdown()

    table = BenchmarkTable(pd.DataFrame(rows).reindex(columns=columns), config.normalize_exponent, skipped)
    if output is not None:
        table.to_csv(output)
    return table


@dataclass(frozen=True)
class RuntimeResult:
    """Mean design time per sample size and the log-log slope."""
    method: DesignMethod
    points: List[Tuple[int, float]]
    slope: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.points, columns=["n", "mean_ms"])


def runtime_scaling(
    method: Union[str, DesignMethod],
    n_grid: Sequence[int],
    reps: int = 3,
    dimension: int = 2,
    seed: int = DEFAULT_SEED,
    config: Optional[DesignConfig] = None
) -> RuntimeResult:
    """
    Time design construction over increasing sample sizes.

    Args:
        method: Design method
        n_grid: Ascending sample sizes
        reps: Timed designs per sample size
        dimension: Covariate dimension of the standard normal data
        seed: Data seed
        config: Design settings

    Returns:
        RuntimeResult with the slope of log(ms) against log(n)
    """
    n_grid = [int(n) for n in n_grid]
    if n_grid != sorted(n_grid):
        raise ConfigError(f"n_grid must be ascending, got {n_grid}")
    method = DesignMethod.parse(method)
    designer = ExperimentDesigner(method, config)
    points = []
    for n in n_grid:
        X = CovariateMatrix(make_rng(derive_seed(seed, n)).standard_normal((n, dimension)))
        timings = []
        for rep in range(reps):
            start = time.perf_counter()
            designer.design(X, derive_seed(seed, n, rep))
            timings.append((time.perf_counter() - start) * 1000.0)
        points.append((n, float(np.mean(timings))))
        logger.info("%s n=%d: %.3f ms", method.value, n, points[-1][1])

    if len(points) > 1:
        ns, ms = np.array(points).T
        slope = float(np.polyfit(np.log(ns), np.log(np.maximum(ms, 1e-9)), 1)[0])
    else:
        slope = float("nan")
    return RuntimeResult(method, points, slope)


def bandwidth_sensitivity(
    dgp: Union[str, DGPType],
    n: int,
    bandwidths: Sequence[float],
    reps: int = 10,
    seed: int = DEFAULT_SEED,
    noise_scale: float = 1.0
) -> pd.DataFrame:
    """
    SoftBlock with the design estimator across bandwidths.

    Every bandwidth sees the same samples and design seeds.

    Returns:
        DataFrame with columns bandwidth, mse_ate, mise_ite,
        identical_up_to_flip (assignment equal to, or the flip of, the
        first bandwidth's on every replication)
    """
    samples = [generate(dgp, n, derive_seed(seed, rep), noise_scale) for rep in range(reps)]
    reference = None
    rows = []
    for h in bandwidths:
        config = DesignConfig(bandwidth=float(h))
        results = [
            run_replication(
                data.dgp, n, DesignMethod.SOFTBLOCK, EstimatorType.DESIGN, data.seed,
                config, data=data,
            )
            for data in samples
        ]
        assignments = [r.assignment for r in results]
        if reference is None:
            reference = assignments
        identical = all(
            np.array_equal(a, ref) or np.array_equal(a, 1 - ref)
            for a, ref in zip(assignments, reference)
        )
        summary = aggregate(results)
        rows.append({
            "bandwidth": float(h),
            "mse_ate": summary["mse_ate"],
            "mise_ite": summary["mise_ite"],
            "identical_up_to_flip": identical,
        })
    return pd.DataFrame(rows)
