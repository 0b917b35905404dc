"""
Covariate and outcome tables.

CSV is the only ingestion format: comma separated, UTF-8, optional single
header row, '.' as decimal point. Row order defines the unit index.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.core.sample import Assignment, CovariateMatrix, OutcomeVector
from src.errors import InvalidInput, MissingFile, NonNumericField, RaggedRows

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Floats are written with 17 significant digits so a write/read cycle is exact.
FLOAT_FORMAT = "%.17g"

ASSIGNMENT_COLUMNS = ["unit_index", "arm", "component_id"]


def _field_counts(path: Path) -> List[Tuple[int, int]]:
    """(line number, field count) of every non-blank line, 1-based."""
    try:
        with path.open(encoding="utf-8") as fh:
            return [
                (number, line.count(",") + 1)
                for number, line in enumerate(fh, start=1)
                if line.strip()
            ]
    except UnicodeDecodeError as exc:
        raise InvalidInput(f"{path} is not valid UTF-8: {exc}")


def _read_numeric_table(path: PathLike, has_header: bool) -> np.ndarray:
    """Parse a rectangular CSV of finite reals; row/col in errors are 1-based file positions."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))

    counts = _field_counts(path)
    header_line = counts[0][0] if has_header and counts else None
    if has_header:
        counts = counts[1:]
    if not counts:
        raise InvalidInput(f"{path} contains no data rows")

    expected = counts[0][1]
    for line, found in counts:
        if found != expected:
            raise RaggedRows(line, expected, found)
    lines = [line for line, _ in counts]

    try:
        table = pd.read_csv(
            path,
            header=None,
            skiprows=[header_line - 1] if header_line else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise InvalidInput(f"Could not parse {path}: {exc}")
    if table.shape[0] != len(lines):
        raise InvalidInput(f"{path}: whitespace-only lines are not allowed between rows")

    values = np.empty(table.shape, dtype=float)
    for col in range(table.shape[1]):
        raw = table.iloc[:, col].str.strip()
        checked = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
        bad = ~np.isfinite(checked)
        if bad.any():
            row = int(np.argmax(bad))
            raise NonNumericField(lines[row], col + 1, str(table.iat[row, col]))
        # float() is correctly rounded, so %.17g output reads back bit for bit
        values[:, col] = [float(field) for field in raw]
    return values


def load_covariates(path: PathLike, has_header: bool = False) -> CovariateMatrix:
    """
    Load a covariate matrix from CSV.

    Args:
        path: CSV file path
        has_header: Skip the first row

    Returns:
        CovariateMatrix in file row order

    Raises:
        MissingFile, RaggedRows, NonNumericField
    """
    values = _read_numeric_table(path, has_header)
    logger.info("Loaded %d units x %d covariates from %s", values.shape[0], values.shape[1], path)
    return CovariateMatrix(values)


def load_outcomes(path: PathLike, has_header: bool = False) -> OutcomeVector:
    """Load a single-column outcome CSV."""
    values = _read_numeric_table(path, has_header)
    if values.shape[1] != 1:
        raise InvalidInput(f"Outcome file must have one column, found {values.shape[1]}")
    return OutcomeVector(values[:, 0])


def write_covariates(
    X: CovariateMatrix,
    path: PathLike,
    header: Optional[Sequence[str]] = None
) -> None:
    """Write covariates as CSV (no header unless column names are given)."""
    frame = pd.DataFrame(X.values)
    frame.to_csv(
        path,
        index=False,
        header=list(header) if header is not None else False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
    )


def write_outcomes(y: OutcomeVector, path: PathLike) -> None:
    """Write outcomes as a single-column CSV with header 'y'."""
    pd.DataFrame({"y": y.y}).to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )


def constant_columns(X: CovariateMatrix) -> List[int]:
    """Indices of columns with zero range."""
    return [int(j) for j in np.flatnonzero(np.ptp(X.values, axis=0) == 0)]


def standardize(
    X: CovariateMatrix,
    return_warnings: bool = False
) -> Union[CovariateMatrix, Tuple[CovariateMatrix, List[str]]]:
    """
    Center and scale each varying column to sample mean 0 and sd 1.

    Constant columns pass through unchanged and are reported.

    Args:
        X: Covariates
        return_warnings: Also return the list of warning messages

    Returns:
        Standardized covariates (and warnings if requested)
    """
    values = X.values.copy()
    constant = constant_columns(X)
    varying = np.setdiff1d(np.arange(X.D), constant)

    if varying.size:
        block = values[:, varying]
        mean = block.mean(axis=0)
        sd = block.std(axis=0, ddof=1)
        values[:, varying] = (block - mean) / sd

    warnings = [f"column {j} is constant and was not standardized" for j in constant]
    for message in warnings:
        logger.warning(message)

    result = CovariateMatrix(values)
    if return_warnings:
        return result, warnings
    return result


def write_assignment(
    assignment: Assignment,
    path: PathLike,
    component_ids: Optional[np.ndarray] = None
) -> None:
    """Write (unit_index, arm, component_id); component_id is 0 when there is no graph."""
    if component_ids is None:
        component_ids = np.zeros(assignment.n, dtype=int)
    frame = pd.DataFrame({
        "unit_index": np.arange(assignment.n),
        "arm": assignment.a.astype(int),
        "component_id": np.asarray(component_ids, dtype=int),
    })
    frame.to_csv(path, index=False, lineterminator="\n")


def load_assignment(path: PathLike) -> Assignment:
    """Read an assignment CSV written by write_assignment."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    frame = pd.read_csv(path)
    missing = [c for c in ASSIGNMENT_COLUMNS[:2] if c not in frame.columns]
    if missing:
        raise InvalidInput(f"{path} is missing columns {missing}")
    index = frame["unit_index"].to_numpy()
    if not np.array_equal(index, np.arange(len(frame))):
        raise InvalidInput(f"{path}: unit_index must run 0..n-1 in order")
    return Assignment(frame["arm"].to_numpy())
