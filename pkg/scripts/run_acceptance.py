#!/usr/bin/env python
"""
Acceptance Runner for the Spanning-Tree Designs.

Runs the desk-scale Monte Carlo comparisons and the runtime study, prints a
pass/fail line per check and writes a summary CSV. The exact property
suites live in tests/test_acceptance.py.

Usage:
    python scripts/run_acceptance.py
    python scripts/run_acceptance.py --reps 20 --output acceptance.csv
    python scripts/run_acceptance.py --only ite_twocircles runtime_softblock
"""

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.seeds import DEFAULT_SEED, derive_seed
from src.log import configure_logging
from src.simulate import run_replication, runtime_scaling



@dataclass
class Comparison:
    """Two (method, estimator) arms compared on one DGP and metric; the first must win."""
    name: str
    dgp: str
    n: int
    metric: str  # 'mise_ite' or 'mse_ate'
    candidate: tuple
    baseline: tuple
    reps: int = 100
    expected: bool = True  # False for a known deviation: reported, not counted as a failure

@dataclass
class CheckResult:
    name: str
    passed: bool
    candidate: float
    baseline: float
    seconds: float
    expected: bool = True

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "expected": self.expected,
            "candidate": self.candidate,
            "baseline": self.baseline,
            "seconds": self.seconds,
        }

# =============================================================================
# MONTE CARLO COMPARISONS
# =============================================================================

COMPARISONS: List[Comparison] = [
    Comparison("ite_twocircles", "twocircles", 1024, "mise_ite",
               ("softblock", "design"), ("bernoulli", "knn"), expected=False),
    Comparison("ite_sinusoidal", "sinusoidal", 1024, "mise_ite",
               ("softblock", "design"), ("bernoulli", "knn")),
    Comparison("ate_quickblock_256", "quickblock", 256, "mse_ate",
               ("softblock", "design"), ("bernoulli", "dim"), reps=200),
    Comparison("ate_quickblock_1024", "quickblock", 1024, "mse_ate",
               ("softblock", "design"), ("bernoulli", "dim"), reps=200),
]

def _error(result, metric: str) -> float:
    if metric == "mise_ite":
        return result.ite_mse
    return result.ate_error ** 2

def run_comparison(comparison: Comparison, seed: int, reps: Optional[int], progress: bool) -> CheckResult:
    reps = reps or comparison.reps
    start = time.perf_counter()
    candidate, baseline = [], []
    for rep in tqdm(range(reps), desc=comparison.name, disable=not progress, file=sys.stderr):
        rep_seed = derive_seed(seed, rep)
        method, estimator = comparison.candidate
        candidate.append(_error(
            run_replication(comparison.dgp, comparison.n, method, estimator, rep_seed), comparison.metric
        ))
        method, estimator = comparison.baseline
        baseline.append(_error(
            run_replication(comparison.dgp, comparison.n, method, estimator, rep_seed), comparison.metric
        ))
    cand, base = float(np.mean(candidate)), float(np.mean(baseline))
    return CheckResult(comparison.name, cand < base, cand, base, time.perf_counter() - start,
                       comparison.expected)

# =============================================================================
# RUNTIME SCALING
# =============================================================================

RUNTIME_LIMITS: Dict[str, float] = {
    "softblock": 2.3,
    "greedy": 1.5,
}
RUNTIME_GRID = [500, 1000, 2000, 4000, 8000]
SOFTBLOCK_BUDGET_MS = 5000.0

def run_runtime(method: str, seed: int) -> CheckResult:
    start = time.perf_counter()
    result = runtime_scaling(method, RUNTIME_GRID, reps=3, seed=seed)
    passed = result.slope <= RUNTIME_LIMITS[method]
    if method == "softblock":
        single = runtime_scaling(method, [5000], reps=1, seed=seed).points[0][1]
        passed = passed and single < SOFTBLOCK_BUDGET_MS
    return CheckResult(f"runtime_{method}", passed, result.slope, RUNTIME_LIMITS[method],
                       time.perf_counter() - start)

CHECKS: Dict[str, Callable[..., CheckResult]] = {}
for _comparison in COMPARISONS:
    CHECKS[_comparison.name] = (
        lambda seed, reps, progress, c=_comparison: run_comparison(c, seed, reps, progress)
    )
for _method in RUNTIME_LIMITS:
    CHECKS[f"runtime_{_method}"] = lambda seed, reps, progress, m=_method: run_runtime(m, seed)

def main():
    parser = argparse.ArgumentParser(description='Run the Monte Carlo and runtime acceptance checks')
    parser.add_argument('--only', nargs='+', choices=sorted(CHECKS), help='Run a subset of checks')
    parser.add_argument('--reps', type=int, default=None, help='Override replications per comparison')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Master seed')
    parser.add_argument('--output', type=str, default=None, help='Summary CSV')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    args = parser.parse_args()

    configure_logging(args.verbose)
    names = args.only or list(CHECKS)
    progress = sys.stderr.isatty()

    results = []
    for name in names:
        result = CHECKS[name](args.seed, args.reps, progress)
        status = '✅' if result.passed else ('❌' if result.expected else '⚠️')
        print(f"{status} {name:<22} {result.candidate:12.6g} vs {result.baseline:12.6g}"
              f"   ({result.seconds:.1f} s)")
        results.append(result)

    if args.output:
        pd.DataFrame([r.to_dict() for r in results]).to_csv(args.output, index=False, lineterminator='\n')
        print(f"💾 Saved to {args.output}")

    failed = [r.name for r in results if not r.passed and r.expected]
    known = [r.name for r in results if not r.passed and not r.expected]
    print(f"\n📊 {len(results) - len(failed) - len(known)}/{len(results)} checks passed")
    if known:
        print(f"⚠️  Known deviations: {', '.join(known)}")
    return 1 if failed else 0

if __name__ == '__main__':
    sys.exit(main())
