"""Sublinear ridge regression for PSD systems.

The route: a rank-k spectral-error approximation B = M N^T with
||A - B||_2^2 <= eps^2 * lambda makes the two ridge objectives agree within
1 +/- 2 eps pointwise, so solving the factored problem exactly (cheap via a
small SVD) nearly minimizes the true objective. The rank comes from an
upper bound on the statistical dimension.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import PsdMatrix, PsdOracle, ValidationError
from .lowrank import LowRankFactor, RunReport, algorithm2_spectral
from .pcp import column_pcp
from .sampling import AlgoConfig

PINV_RTOL = 1e-10
RIDGE_INNER_EPS = 0.5  # constant error parameter for the inner spectral run


@dataclass(frozen=True)
class RidgeProblem:
    """A PSD ridge system: minimize ||A x - y||^2 + lam ||x||^2."""

    oracle: PsdOracle
    y: np.ndarray
    lam: float
    s_lambda_hint: float | None = None  # upper bound on the statistical dim

    def __post_init__(self):
        if self.lam <= 0:
            raise ValidationError("lam must be positive")
        if self.y.shape != (self.oracle.n,):
            raise ValidationError(f"y must have shape ({self.oracle.n},)")


def ridge_via_factor(factor: LowRankFactor, y: np.ndarray, lam: float
                     ) -> np.ndarray:
    """Exact ridge minimizer for a rank-k operator B = left @ right^T.

    Diagonalizes B through QR of its factors; with B = U S V^T the solution
    is x = V S (S^2 + lam)^{-1} U^T y (components of x outside range(V)
    are zero because lam > 0 penalizes any motion there).
    """
    if lam <= 0:
        raise ValidationError("lam must be positive")
    right = factor.left if factor.symmetric_psd else factor.right
    qm, rm = np.linalg.qr(factor.left)
    qn, rn = np.linalg.qr(right)
    u_small, sig, vt_small = np.linalg.svd(rm @ rn.T)
    u = qm @ u_small
    v = qn @ vt_small.T
    coef = sig / (sig**2 + lam)
    return v @ (coef * (u.T @ y))


def factored_objective(factor: LowRankFactor, y: np.ndarray, lam: float,
                       x: np.ndarray) -> float:
    right = factor.left if factor.symmetric_psd else factor.right
    r = factor.left @ (right.T @ x) - y
    return float(r @ r + lam * (x @ x))


def sublinear_ridge(problem: RidgeProblem, eps: float, config: AlgoConfig,
                    seed: int) -> tuple[np.ndarray, RunReport]:
    """Approximately solve the PSD ridge system reading few entries of A.

    Sets k = ceil(c_stat * s_hint / eps^2), obtains a rank-k spectral-error
    approximation with a constant inner error parameter, and solves the
    factored problem exactly. Requires ``s_lambda_hint``; when the derived
    k reaches n/4 the solver falls back to a dense exact solve and flags it.
    """
    if not (0.0 < eps < 1.0):
        raise ValidationError("eps must be in (0, 1)")
    if problem.s_lambda_hint is None:
        raise ValidationError("provide s_lambda_hint (see "
                              "estimate_statistical_dimension)")
    oracle = problem.oracle
    n = oracle.n
    t0 = time.perf_counter()
    c0 = oracle.access_count

    k = max(1, math.ceil(config.c_stat * problem.s_lambda_hint / eps**2))
    report = RunReport(algorithm="ridge", n=n, k=k, eps=eps, seed=seed,
                       constants=config.to_dict())

    if k >= n / 4:
        report.flags.append("dense_fallback")
        from .exact import exact_ridge_regression

        a = PsdMatrix.from_dense(oracle.full())
        x, _ = exact_ridge_regression(a, problem.y, problem.lam)
        report.accesses = oracle.access_count - c0
        report.wall_ms = (time.perf_counter() - t0) * 1e3
        return x, report

    factor, inner = algorithm2_spectral(oracle, k, RIDGE_INNER_EPS, config,
                                        seed)
    x = ridge_via_factor(factor, problem.y, problem.lam)

    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    report.retries = inner.retries
    report.flags.extend(inner.flags)
    report.internals = {"factor": factor, "inner_report": inner}
    return x, report


def estimate_statistical_dimension(oracle: PsdOracle, lam: float,
                                   config: AlgoConfig, seed: int
                                   ) -> tuple[float, RunReport]:
    """Constant-factor upper estimate of the statistical dimension.

    Doubles a candidate rank k; for each candidate builds a column sketch
    and accepts once the sketch's (k+1)-th singular value squared falls
    below eps^2 * lam / 2 at eps = 1/2 (a proxy for the spectral tail of
    A). Returns the accepted rank rescaled by eps^2 as the hint. Makes no
    sublinearity claim beyond the column-sketch cost; if the search
    exhausts k >= n/2 it returns n with a flag.
    """
    if lam <= 0:
        raise ValidationError("lam must be positive")
    n = oracle.n
    t0 = time.perf_counter()
    c0 = oracle.access_count
    report = RunReport(algorithm="stat_dim", n=n, k=0, eps=0.5, seed=seed,
                       constants=config.to_dict())
    eps = 0.5
    threshold = eps**2 * lam / 2.0

    k = 1
    estimate = None
    while k < n / 2:
        sketch = column_pcp(oracle, k, eps, config, seed, scheme="plain")
        sig = np.linalg.svd(sketch.sketch, compute_uv=False)
        tail_spec = float(sig[k] ** 2) if len(sig) > k else 0.0
        if tail_spec <= threshold:
            estimate = max(k * eps**2, 1.0)
            report.k = k
            break
        k *= 2
    if estimate is None:
        report.flags.append("search_exhausted")
        report.k = n
        estimate = float(n)

    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return estimate, report


def objective_sandwich_bounds(a: PsdMatrix, factor: LowRankFactor,
                              y: np.ndarray, lam: float, x: np.ndarray
                              ) -> tuple[float, float, float]:
    """(true objective, factored objective, eps_eff) for one test point,
    where eps_eff = sqrt(||A - B||_2^2 / lam) is the sandwich parameter."""
    from .exact import ridge_objective, spec_norm_sq

    true_obj = ridge_objective(a, y, lam, x)
    fact_obj = factored_objective(factor, y, lam, x)
    eps_eff = math.sqrt(spec_norm_sq(a.values - factor.apply()) / lam)
    return true_obj, fact_obj, eps_eff
