"""
Complexity Regression
Ordinary least squares of uniform complexity on the similarity weights and
the cluster count, with 95% confidence intervals and R².
"""
import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from rich.table import Table
from scipy import stats

from models import InterceptMode, RegressionReport, SweepRecord
from exceptions import AnalysisError, RankDeficientError

logger = logging.getLogger("MikadoRegression")

TERMS = ["A", "W", "R", "S", "N"]
CONSTANT = "cons"
MIN_RECORDS = 7

# Singular values below this fraction of the largest count as zero.
_RANK_TOLERANCE = 1e-10


def design_matrix(records: Sequence[SweepRecord], intercept: InterceptMode) -> Tuple[np.ndarray, np.ndarray, List[str]]:
    """
    Regressors and response for a set of sweep records.

    Returns:
        (X, y, column names); the constant column comes last when requested
    """
    rows = [[*record.weights.as_tuple(), record.n_clusters] for record in records]
    x = np.asarray(rows, dtype=float).reshape(len(rows), len(TERMS))
    names = list(TERMS)
    if intercept is InterceptMode.PSEUDOINVERSE:
        x = np.column_stack([x, np.ones(len(rows))])
        names.append(CONSTANT)
    y = np.asarray([record.uniform_complexity for record in records], dtype=float)
    return x, y, names


def _dependency(x: np.ndarray, names: List[str]) -> str:
    """Describe a null-space direction of X as a linear relation between columns."""
    _, _, vt = np.linalg.svd(x)
    direction = vt[-1]
    direction = direction / np.max(np.abs(direction))
    terms = [
        f"{coef:+.3g}*{name}"
        for coef, name in zip(direction, names)
        if abs(coef) > 1e-8
    ]
    return " ".join(terms) + " = 0"


def ols_fit(records: Sequence[SweepRecord], intercept: InterceptMode = InterceptMode.NONE) -> RegressionReport:
    """
    Fit uniformComplexity ~ A + W + R + S + N (+ constant).

    With NONE the design must have full column rank. PSEUDOINVERSE adds a
    constant and reports the minimum-norm solution together with the
    condition number of the design.

    Args:
        records: Sweep records, at least seven
        intercept: Constant-term handling

    Returns:
        RegressionReport

    Raises:
        AnalysisError: If there are too few records
        RankDeficientError: If the design is rank deficient under NONE
    """
    if len(records) < MIN_RECORDS:
        raise AnalysisError(
            f"Regression needs at least {MIN_RECORDS} records, got {len(records)}",
            component="Regression",
            context={"records": len(records)}
        )

    x, y, names = design_matrix(records, intercept)
    n, k = x.shape
    singular = np.linalg.svd(x, compute_uv=False)
    rank = int(np.sum(singular > _RANK_TOLERANCE * singular[0])) if singular[0] > 0 else 0
    condition_number = float(singular[0] / singular[-1]) if singular[-1] > 0 else float("inf")

    if intercept is InterceptMode.NONE:
        if rank < k:
            dependency = _dependency(x, names)
            raise RankDeficientError(
                f"Design matrix has rank {rank} < {k}: {dependency}",
                component="Regression",
                code="RANK_DEFICIENT",
                context={"rank": rank, "columns": names, "dependency": dependency}
            )
        beta, *_ = np.linalg.lstsq(x, y, rcond=None)
    else:
        beta = np.linalg.pinv(x) @ y
        if rank < k:
            logger.warning(
                f"Design matrix is collinear (rank {rank} of {k}, condition number {condition_number:.3g}); "
                f"reporting the minimum-norm solution"
            )

    residuals = y - x @ beta
    rss = float(residuals @ residuals)
    dof = n - rank
    if dof <= 0:
        raise AnalysisError(
            f"No residual degrees of freedom ({n} records, rank {rank})",
            component="Regression"
        )
    sigma2 = rss / dof
    standard_errors = np.sqrt(np.clip(np.diag(np.linalg.pinv(x.T @ x)) * sigma2, 0.0, None))
    t_critical = float(stats.t.ppf(0.975, dof))

    tss = float(np.sum((y - y.mean()) ** 2))
    if tss > 0:
        r_squared = 1.0 - rss / tss
    else:
        r_squared = 1.0 if rss <= 1e-24 else 0.0
    r_squared = min(max(r_squared, 0.0), 1.0)

    df_model = rank - 1
    if df_model <= 0 or tss <= 0:
        f_statistic, f_p_value = 0.0, 1.0
    elif sigma2 == 0:
        f_statistic, f_p_value = float("inf"), 0.0
    else:
        f_statistic = max(tss - rss, 0.0) / df_model / sigma2
        f_p_value = float(stats.f.sf(f_statistic, df_model, dof))

    logger.info(f"OLS fit on {n} records: R²={r_squared:.4f}, dof={dof}, cond={condition_number:.3g}")

    return RegressionReport(
        intercept=intercept,
        coefficients={name: float(b) for name, b in zip(names, beta)},
        standard_errors={name: float(se) for name, se in zip(names, standard_errors)},
        confidence_intervals_95={
            name: (float(b - t_critical * se), float(b + t_critical * se))
            for name, b, se in zip(names, beta, standard_errors)
        },
        r_squared=r_squared,
        condition_number=condition_number,
        sample_size=n,
        degrees_of_freedom=dof,
        f_statistic=float(f_statistic),
        f_p_value=float(f_p_value),
    )


def regression_to_dict(report: RegressionReport) -> Dict[str, Any]:
    data = report.model_dump(mode="json")
    data["confidence_intervals_95"] = {
        name: list(bounds) for name, bounds in report.confidence_intervals_95.items()
    }
    # JSON has no infinity
    for key in ("condition_number", "f_statistic"):
        if not np.isfinite(getattr(report, key)):
            data[key] = None
    return data


def render_regression_table(report: RegressionReport, title: str = "Uniform complexity") -> Table:
    """Coefficient table: Coef. and 95% interval per term, then R²."""
    table = Table(title=title)
    table.add_column("Term", style="cyan")
    table.add_column("Coef.", justify="right")
    table.add_column("Std. Err.", justify="right")
    table.add_column("95% Conf. Interval", justify="right")

    for name, coef in report.coefficients.items():
        low, high = report.confidence_intervals_95[name]
        table.add_row(name, f"{coef:.6f}", f"{report.standard_errors[name]:.6f}", f"{low:.6f}  {high:.6f}")

    table.add_section()
    table.add_row("R²", f"{report.r_squared:.4f}", "", "")
    table.add_row("N obs.", str(report.sample_size), "", "")
    if report.intercept is InterceptMode.PSEUDOINVERSE:
        table.add_row("Cond. no.", f"{report.condition_number:.3g}", "", "")
    return table
