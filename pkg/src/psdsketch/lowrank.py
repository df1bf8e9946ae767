"""End-to-end sublinear low-rank approximation pipelines.

Four entry points: the Frobenius-error pipeline, the spectral-error
pipeline, the PSD-constrained output, and the square-root-route baseline
that trades a factor ~sqrt(n) of extra reads for a simpler construction.
Each returns a factor pair plus a telemetry report; exact error fields are
filled in afterwards by :func:`evaluate_report`, which needs the dense
matrix and so belongs to test / CLI verification time.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    NumericalError,
    PsdMatrix,
    PsdOracle,
    ValidationError,
    gen_counterexample_pair,
    substream,
)
from .exact import best_rank_k, eig_psd, frob_sq, matrix_sqrt, spec_norm_sq
from .sampling import (
    AlgoConfig,
    SampleSet,
    sample_or_full,
    scores_to_sampleset,
    sqrt_ridge_scores_multi,
)

PINV_RTOL = 1e-10


@dataclass(frozen=True)
class LowRankFactor:
    """A rank-k factorization left @ right^T.

    When ``symmetric_psd`` is set the approximation is left @ left^T and
    ``right`` merely mirrors ``left`` for serialization.
    """

    left: np.ndarray
    right: np.ndarray
    symmetric_psd: bool = False

    @property
    def n(self) -> int:
        return self.left.shape[0]

    @property
    def k(self) -> int:
        return self.left.shape[1]

    def apply(self) -> np.ndarray:
        """Materialize the approximation (dense, test-time use)."""
        if self.symmetric_psd:
            return self.left @ self.left.T
        return self.left @ self.right.T


@dataclass
class RunReport:
    """Per-run telemetry; error fields are exact-oracle results."""

    algorithm: str
    n: int
    k: int
    eps: float
    seed: int
    accesses: int = 0
    wall_ms: float = 0.0
    frob_err_sq: float | None = None
    spec_err_sq: float | None = None
    opt_frob_tail_sq: float | None = None
    opt_spec_tail_sq: float | None = None
    ratio: float | None = None
    constants: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    retries: int = 0
    internals: dict = field(default_factory=dict)  # never serialized

    def report_fields(self) -> dict:
        """The fixed serialized schema, in order."""
        return {
            "n": self.n,
            "k": self.k,
            "eps": self.eps,
            "seed": self.seed,
            "accesses": self.accesses,
            "wall_ms": self.wall_ms,
            "frob_err_sq": self.frob_err_sq,
            "spec_err_sq": self.spec_err_sq,
            "opt_frob_tail_sq": self.opt_frob_tail_sq,
            "opt_spec_tail_sq": self.opt_spec_tail_sq,
            "ratio": self.ratio,
            "constants": dict(self.constants),
            "algorithm": self.algorithm,
            "flags": list(self.flags),
            "retries": self.retries,
        }


def evaluate_report(report: RunReport, factor: LowRankFactor,
                    matrix: PsdMatrix) -> RunReport:
    """Fill in exact error fields by comparing against the dense matrix.

    ``ratio`` is attained error over the exact optimum: the Frobenius
    quotient for Frobenius-target algorithms, and the quotient against
    (1+eps) * spectral tail + eps/k * Frobenius tail for the spectral one.
    """
    resid = matrix.values - factor.apply()
    report.frob_err_sq = frob_sq(resid)
    report.spec_err_sq = spec_norm_sq(resid)
    _, tail_f, tail_s = best_rank_k(matrix, report.k)
    report.opt_frob_tail_sq = tail_f
    report.opt_spec_tail_sq = tail_s
    if report.algorithm == "spectral":
        allowed = (1.0 + report.eps) * tail_s + report.eps / report.k * tail_f
        report.ratio = report.spec_err_sq / max(allowed, 1e-30)
    else:
        report.ratio = report.frob_err_sq / max(tail_f, 1e-30)
    return report


# ---------------------------------------------------------------------------
# Separately testable sub-operations
# ---------------------------------------------------------------------------

def sketch_rank_span(ahat: np.ndarray, k1: int,
                     return_singular_values: bool = False):
    """Orthonormal right span of the top-k1 singular directions of a small
    sketch, by exact SVD, singular-value ordered.

    The exact factorization attains both the Frobenius and spectral
    residual optima, so it satisfies the pipeline's span requirement with
    slack; a sketched solver could be plugged here instead.
    """
    _, sig, vt = np.linalg.svd(ahat, full_matrices=False)
    k1 = min(k1, vt.shape[0])
    z = vt[:k1].T.copy()
    if return_singular_values:
        return z, sig[:k1].copy()
    return z


def rank_k_truncate(m: np.ndarray, k: int) -> np.ndarray:
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    r = min(k, len(s))
    return (u[:, :r] * s[:r]) @ vt[:r]


def constrained_rank_k_regression(p: np.ndarray, b: np.ndarray,
                                  z: np.ndarray, k: int) -> np.ndarray:
    """Exact minimizer over rank-k W of ||P W Z^T - B||_F for orthonormal Z.

    Writing P = U S V^T, the residual splits as
    ||S V^T W - U^T B Z||_F^2 plus terms W cannot affect, so the optimum is
    W = V S^{-1} [U^T B Z]_k. Truncating after rotating into P's left basis
    is what makes this exact; truncating P^+ B Z directly distorts the
    metric by P's conditioning.
    """
    u, s, vt = np.linalg.svd(p, full_matrices=False)
    cut = PINV_RTOL * max(s[0] if len(s) else 0.0, 1e-300)
    live = s > cut
    u, s, vt = u[:, live], s[live], vt[live]
    y = rank_k_truncate(u.T @ b @ z, k)
    return vt.T @ (y / s[:, None])


def sampled_regression(q: np.ndarray, sample: SampleSet,
                       a_rows_weighted: np.ndarray) -> np.ndarray:
    """Solve min_N || S^T Q N^T - S^T A ||_F from sampled rows only.

    ``a_rows_weighted`` holds the weighted sampled rows of the right-hand
    side. Returns N with one row per column of A.
    """
    qs = q[sample.indices] * sample.weights[:, None]
    return (np.linalg.pinv(qs, rcond=PINV_RTOL) @ a_rows_weighted).T


def orthonormal_columns(m: np.ndarray, max_rank: int) -> np.ndarray:
    """Orthonormal basis of range(m), trimmed of numerically null
    directions, at most max_rank columns."""
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    cut = PINV_RTOL * max(s[0] if len(s) else 0.0, 1e-300)
    r = max(1, min(max_rank, int((s > cut).sum())))
    return u[:, :r].copy()


def _pad_columns(m: np.ndarray, k: int) -> np.ndarray:
    if m.shape[1] >= k:
        return m[:, :k]
    out = np.zeros((m.shape[0], k))
    out[:, : m.shape[1]] = m
    return out


def access_budget(n: int, k: int, eps: float, config: AlgoConfig) -> int:
    """A-priori worst-case distinct-entry budget for the Frobenius pipeline.

    Sums the reads of every stage (scores, the small cross sketch, the
    column and row regressions) with retried stages charged once per
    allowed retry. The measured counter never exceeds this.
    """
    s = config.score_sample_size(k, n)
    bottom = config.score_bottom_size(k, n)
    k1 = config.rank_inflation(k, eps, power=1)
    t1 = config.alg1_t1(n, k, eps)
    t2 = config.alg1_t2(n, k1, eps)
    t3 = config.alg1_t3(k, eps, cap=min(t1, n))
    t4 = config.alg1_t4(t3, n)
    t5 = config.alg1_t5(k, eps, n)
    scores = n + 2 * n * s + bottom * bottom
    fixed = scores + t1 * t2
    per_try = n * t3 + t4 * t1 + n * t5
    total = fixed + (1 + config.max_retries) * per_try
    return min(total, n * (n + 1) // 2)


# ---------------------------------------------------------------------------
# Frobenius-error pipeline
# ---------------------------------------------------------------------------

def _dense_fallback(oracle: PsdOracle, k: int, report: RunReport
                    ) -> LowRankFactor:
    """Exact truncated eigendecomposition after a full read (small-n path)."""
    report.flags.append("dense_fallback")
    a = PsdMatrix.from_dense(oracle.full())
    factor, _, _ = best_rank_k(a, k)
    return LowRankFactor(left=factor.left, right=factor.right)


def algorithm1_frobenius(oracle: PsdOracle, k: int, eps: float,
                         config: AlgoConfig, seed: int,
                         keep_internals: bool = False
                         ) -> tuple[LowRankFactor, RunReport]:
    """Relative-error rank-k approximation reading far fewer than n^2
    entries.

    Stages: estimate sqrt ridge scores at ranks k and c'*k1; sample the
    mixed-score column set S1 and row set S2; take the top right span Z of
    the small cross sketch S2^T A S1; sample columns by Z's row norms and
    rows by the resulting basis's row norms to pin a rank-k middle factor;
    orthonormalize into Q and regress A onto it from a final row sample.
    Returns (Q, N) with the approximation Q @ N^T.
    """
    n = oracle.n
    if not (1 <= k < n / 4):
        raise ValidationError(f"need 1 <= k < n/4, got k={k}, n={n}")
    if not (0.0 < eps <= 1.0):
        raise ValidationError("eps must be in (0, 1]")

    t0 = time.perf_counter()
    c0 = oracle.access_count
    report = RunReport(algorithm="frobenius", n=n, k=k, eps=eps, seed=seed,
                       constants=config.to_dict())

    k1 = config.rank_inflation(k, eps, power=1)
    r2 = min(n - 1, math.ceil(config.c_prime * k1))
    t1 = config.alg1_t1(n, k, eps)
    t2 = config.alg1_t2(n, k1, eps)

    if t1 >= n and t2 >= n:
        factor = _dense_fallback(oracle, k, report)
        report.accesses = oracle.access_count - c0
        report.wall_ms = (time.perf_counter() - t0) * 1e3
        return factor, report

    multi = sqrt_ridge_scores_multi(oracle, (k, r2), config, seed,
                                    sample_rank=k)
    ell1 = (
        math.sqrt(n / k) * multi[k].values
        + math.sqrt(n * eps**4 / k1) * multi[r2].values
    )
    ell2 = math.sqrt(n / k1) * multi[r2].values

    s1 = sample_or_full(ell1, t1, n, seed, f"alg1-s1:k={k}", "alg1-s1")
    s2 = sample_or_full(ell2, t2, n, seed, f"alg1-s2:k1={k1}", "alg1-s2")
    if s1.is_exhaustive or s2.is_exhaustive:
        report.flags.append("clamped_sample")

    cross = oracle.submatrix(s2.indices, s1.indices)
    ahat = cross * np.outer(s2.weights, s1.weights)
    z, sig = sketch_rank_span(ahat, min(k1, min(ahat.shape)),
                              return_singular_values=True)

    last_err: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            stream = (seed + 0x9E3779B97F4A7C15 * attempt) % 2**63
            factor, internals = _alg1_refine(
                oracle, k, eps, config, stream, s1, z, sig
            )
            report.retries = attempt
            break
        except (np.linalg.LinAlgError, NumericalError) as exc:
            last_err = exc
    else:
        raise NumericalError(
            f"rank-deficient samples after {config.max_retries} retries"
        ) from last_err

    if keep_internals:
        internals.update({"s1": s1, "s2": s2, "ahat": ahat, "z": z})
        report.internals = internals
    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return factor, report


def _alg1_refine(oracle: PsdOracle, k: int, eps: float, config: AlgoConfig,
                 seed: int, s1: SampleSet, z: np.ndarray, sig: np.ndarray
                 ) -> tuple[LowRankFactor, dict]:
    """Steps 5-8: pin the rank-k factor inside span(Z) and project A onto it."""
    n = oracle.n
    t1_len = s1.t

    # Columns of A S1 sampled by energy-weighted row norms of Z's leading
    # singular directions. The rank-k factor the regression extracts lives
    # in the top directions; plain rank-k1 row norms dilute them by k/k1,
    # and unweighted norms let sampling-noise directions drown weakly
    # represented signal columns.
    width = min(z.shape[1], k + 4)
    wcol = sig[:width] / max(sig[0], 1e-300)
    lead = z[:, :width] * wcol[None, :]
    zn = np.maximum(np.sum(lead * lead, axis=1), 1e-300)
    t3 = config.alg1_t3(k, eps, cap=t1_len)
    s3 = sample_or_full(zn, t3, t1_len, seed, "alg1-s3", "alg1-s3")
    cols13 = s1.indices[s3.indices]
    w13 = s1.weights[s3.indices] * s3.weights
    as13 = oracle.columns(cols13) * w13[None, :]

    v = orthonormal_columns(as13, max_rank=s3.t)

    # Rows sampled by the basis's row norms give an affine embedding for the
    # middle-factor regression.
    vn = np.maximum(np.sum(v * v, axis=1), 1e-300)
    t4 = config.alg1_t4(s3.t, n)
    s4 = sample_or_full(vn, t4, n, seed, "alg1-s4", "alg1-s4")
    rows4 = s4.indices
    a41 = oracle.submatrix(rows4, s1.indices) * np.outer(s4.weights, s1.weights)
    p43 = oracle.submatrix(rows4, cols13) * np.outer(s4.weights, w13)

    if np.linalg.matrix_rank(p43, tol=1e-8 * max(1.0, float(np.abs(p43).max()))) < 1:
        raise NumericalError("degenerate sampled regression block")

    w = constrained_rank_k_regression(p43, a41, z, k)

    # Left span of W gives the t3 x k seed of the output column space.
    uw, sw, _ = np.linalg.svd(w, full_matrices=False)
    wl = uw[:, : min(k, uw.shape[1])]
    q = orthonormal_columns(as13 @ wl, max_rank=k)
    q = _pad_columns(q, k)

    qn = np.maximum(np.sum(q * q, axis=1), 1e-300)
    t5 = config.alg1_t5(k, eps, n)
    s5 = sample_or_full(qn, t5, n, seed, "alg1-s5", "alg1-s5")
    a5 = oracle.rows(s5.indices) * s5.weights[:, None]
    nmat = sampled_regression(q, s5, a5)

    if not np.isfinite(nmat).all():
        raise NumericalError("non-finite regression output")

    factor = LowRankFactor(left=q, right=nmat)
    internals = {"s3": s3, "s4": s4, "s5": s5, "v": v, "w": w, "q": q}
    return factor, internals


# ---------------------------------------------------------------------------
# Spectral-error pipeline
# ---------------------------------------------------------------------------

def algorithm2_spectral(oracle: PsdOracle, k: int, eps: float,
                        config: AlgoConfig, seed: int,
                        keep_internals: bool = False
                        ) -> tuple[LowRankFactor, RunReport]:
    """Rank-k approximation with a spectral-norm guarantee: the residual
    spectral norm lands within (1+eps) of the optimum plus eps/k times the
    Frobenius tail.

    A single score family at inflated rank k1 = ceil(c_rank * k / eps^2)
    drives both the column and row samples; the rank-k span of the small
    cross sketch is refined by two leverage-sampled regressions.
    """
    n = oracle.n
    if not (1 <= k < n / 4):
        raise ValidationError(f"need 1 <= k < n/4, got k={k}, n={n}")
    if not (0.0 < eps <= 1.0):
        raise ValidationError("eps must be in (0, 1]")

    t0 = time.perf_counter()
    c0 = oracle.access_count
    report = RunReport(algorithm="spectral", n=n, k=k, eps=eps, seed=seed,
                       constants=config.to_dict())

    k1 = min(n - 1, config.rank_inflation(k, eps, power=2))
    t12 = config.alg2_t12(n, k1)
    if t12 >= n:
        factor = _dense_fallback(oracle, k, report)
        report.accesses = oracle.access_count - c0
        report.wall_ms = (time.perf_counter() - t0) * 1e3
        return factor, report

    scores = sqrt_ridge_scores_multi(oracle, (k1,), config, seed,
                                     sample_rank=k)[k1]
    ell = 4.0 * eps * math.sqrt(n / k) * scores.values
    s1 = sample_or_full(ell, t12, n, seed, f"alg2-s1:k1={k1}", "alg2-s1")
    s2 = sample_or_full(ell, t12, n, seed, f"alg2-s2:k1={k1}", "alg2-s2")

    cross = oracle.submatrix(s2.indices, s1.indices)
    ahat = cross * np.outer(s2.weights, s1.weights)
    z = sketch_rank_span(ahat, k)

    last_err: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            stream = (seed + 0x9E3779B97F4A7C15 * attempt) % 2**63
            factor, internals = _alg2_refine(oracle, k, eps, config, stream,
                                             s1, z)
            report.retries = attempt
            break
        except (np.linalg.LinAlgError, NumericalError) as exc:
            last_err = exc
    else:
        raise NumericalError(
            f"rank-deficient samples after {config.max_retries} retries"
        ) from last_err

    if keep_internals:
        internals.update({"s1": s1, "s2": s2, "ahat": ahat, "z": z})
        report.internals = internals
    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return factor, report


def _alg2_refine(oracle: PsdOracle, k: int, eps: float, config: AlgoConfig,
                 seed: int, s1: SampleSet, z: np.ndarray
                 ) -> tuple[LowRankFactor, dict]:
    n = oracle.n
    t1_len = s1.t

    zn = np.maximum(np.sum(z * z, axis=1), 1e-300)
    t3 = config.alg2_t34(k, eps, n)
    s3 = sample_or_full(zn, min(t3, t1_len), t1_len, seed, "alg2-s3", "alg2-s3")
    cols13 = s1.indices[s3.indices]
    w13 = s1.weights[s3.indices] * s3.weights
    as13 = oracle.columns(cols13) * w13[None, :]

    zs = (z[s3.indices] * s3.weights[:, None]).T  # k x t3
    m = as13 @ np.linalg.pinv(zs, rcond=PINV_RTOL)
    q = _pad_columns(orthonormal_columns(m, max_rank=k), k)

    qn = np.maximum(np.sum(q * q, axis=1), 1e-300)
    t4 = config.alg2_t34(k, eps, n)
    s4 = sample_or_full(qn, t4, n, seed, "alg2-s4", "alg2-s4")
    a4 = oracle.rows(s4.indices) * s4.weights[:, None]
    nmat = sampled_regression(q, s4, a4)

    if not np.isfinite(nmat).all():
        raise NumericalError("non-finite regression output")
    factor = LowRankFactor(left=q, right=nmat)
    return factor, {"s3": s3, "s4": s4, "m": m, "q": q}


# ---------------------------------------------------------------------------
# PSD-constrained output
# ---------------------------------------------------------------------------

def psd_output(oracle: PsdOracle, k: int, eps: float, config: AlgoConfig,
               seed: int, keep_internals: bool = False
               ) -> tuple[LowRankFactor, RunReport]:
    """Rank-k approximation M M^T that is PSD by construction.

    Obtains a wider orthonormal span Z (rank ~ k/eps) from the spectral
    pipeline, row-samples by Z's leverage scores to set up a small
    projected problem, symmetrizes it, and keeps only the top-k positive
    eigenvalues, whose square root forms M.
    """
    n = oracle.n
    if not (0.0 < eps <= 1.0):
        raise ValidationError("eps must be in (0, 1]")

    t0 = time.perf_counter()
    c0 = oracle.access_count
    report = RunReport(algorithm="psd_output", n=n, k=k, eps=eps, seed=seed,
                       constants=config.to_dict())

    k_span = max(k, min(math.ceil(config.c_rank * k / eps), (n - 1) // 4))
    inner, inner_report = algorithm2_spectral(
        oracle, k_span, 0.5, config, seed, keep_internals=False
    )
    z = inner.left  # orthonormal n x m
    m_width = z.shape[1]

    t_proj = config.psd_project_t(n, m_width, eps)
    zn = np.maximum(np.sum(z * z, axis=1), 1e-300)
    sproj = sample_or_full(zn, t_proj, n, seed, "psd-proj", "psd-proj")
    a_rows = oracle.rows(sproj.indices) * sproj.weights[:, None]

    sz = z[sproj.indices] * sproj.weights[:, None]
    uz, sigz, vtz = np.linalg.svd(sz, full_matrices=False)
    cut = PINV_RTOL * max(sigz[0] if len(sigz) else 0.0, 1e-300)
    live = sigz > cut
    core = (vtz[live].T / sigz[live]) @ (uz[:, live].T @ (a_rows @ z))
    core = 0.5 * (core + core.T)

    eigvals, eigvecs = np.linalg.eigh(core)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    pos = eigvals[:k] > 0
    kept = int(pos.sum())
    if kept == 0:
        report.flags.append("rank_zero_output")
        left = np.zeros((n, k))
    else:
        left = z @ (eigvecs[:, :k][:, pos] * np.sqrt(eigvals[:k][pos]))
        left = _pad_columns(left, k)

    factor = LowRankFactor(left=left, right=left.copy(), symmetric_psd=True)
    if keep_internals:
        report.internals = {
            "z": z, "core_eigs": eigvals, "inner_report": inner_report,
        }
    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return factor, report


# ---------------------------------------------------------------------------
# Square-root-route baseline
# ---------------------------------------------------------------------------

def sqrt_route_baseline(oracle: PsdOracle, k: int, eps: float, seed: int,
                        config: AlgoConfig | None = None
                        ) -> tuple[LowRankFactor, RunReport]:
    """Nystrom-style baseline: sample ~ k sqrt(n)/eps columns by sqrt ridge
    scores and factor the best rank-k part of A S (S^T A S)^+ S^T A.

    Reads ~ n^{1.5} k / eps entries, a factor ~sqrt(n) more than the
    Frobenius pipeline; the scaling benchmark measures exactly that gap.
    """
    config = config or AlgoConfig()
    n = oracle.n
    if not (1 <= k < n / 4):
        raise ValidationError(f"need 1 <= k < n/4, got k={k}, n={n}")

    t0 = time.perf_counter()
    c0 = oracle.access_count
    report = RunReport(algorithm="sqrt_baseline", n=n, k=k, eps=eps,
                       seed=seed, constants=config.to_dict())

    scores = sqrt_ridge_scores_multi(oracle, (k,), config, seed)[k]
    t = config.baseline_t(n, k, eps)
    s = sample_or_full(scores.values, t, n, seed, "baseline", "baseline")
    if s.is_exhaustive:
        report.flags.append("clamped_sample")

    asw = oracle.columns(s.indices) * s.weights[None, :]
    core = oracle.submatrix(s.indices, s.indices) * np.outer(s.weights, s.weights)

    d, q = np.linalg.eigh(core)
    d = np.clip(d, 0.0, None)
    cut = PINV_RTOL * max(d[-1] if len(d) else 0.0, 1e-300)
    inv_root = np.where(d > cut, 1.0 / np.sqrt(np.maximum(d, cut)), 0.0)
    g = asw @ (q * inv_root)
    u, sig, _ = np.linalg.svd(g, full_matrices=False)
    left = u[:, :k] * sig[:k]
    factor = LowRankFactor(left=left, right=left.copy(), symmetric_psd=True)

    report.accesses = oracle.access_count - c0
    report.wall_ms = (time.perf_counter() - t0) * 1e3
    return factor, report


# ---------------------------------------------------------------------------
# Counterexample demonstration
# ---------------------------------------------------------------------------

def counterexample_demo(n: int, k: int, eps: float, alpha: float,
                        beta: float) -> dict:
    """Quantify how badly a good square-root approximant can serve the
    matrix itself.

    Builds the diagonal pair (A, B), projects A exactly onto B's rowspan,
    and reports the construction identities, the exact projection cost
    ratio, and the documented closed-form lower bound
    1 + eps (n-k-1) alpha^2/beta^2. Note: the closed form overstates the
    exact ratio once n - k - 1 > 4 (the exact ratio grows like
    1 + eps alpha^2/beta^2); the report carries both so callers can see
    the gap. The unboundedness in alpha/beta is real either way.
    """
    a, b = gen_counterexample_pair(n, k, eps, alpha, beta)
    sqrt_a = matrix_sqrt(a)

    sqrt_tail = frob_sq(sqrt_a.values - rank_k_truncate(sqrt_a.values, k))
    sqrt_err = frob_sq(sqrt_a.values - b)

    # Exact best approximation of A with rows restricted to rowspan(B).
    proj = np.linalg.pinv(b, rcond=PINV_RTOL) @ b
    c = a.values @ proj
    cost = frob_sq(a.values - c)
    _, tail_f, _ = best_rank_k(a, k)

    closed_form = 1.0 + eps * (n - k - 1) * alpha**2 / beta**2
    ratio = cost / tail_f
    return {
        "n": n, "k": k, "eps": eps, "alpha": alpha, "beta": beta,
        "sqrt_tail_sq": sqrt_tail,
        "sqrt_tail_expected": (n - k - 1) * beta**2,
        "sqrt_err_sq": sqrt_err,
        "sqrt_err_expected": (1.0 + eps) * (n - k - 1) * beta**2,
        "opt_tail_sq": tail_f,
        "projection_cost_sq": cost,
        "ratio": ratio,
        "closed_form_bound": closed_form,
        "bound_holds": bool(ratio >= closed_form - 1e-9),
    }


def counterexample_bound_limit(n: int, k: int, eps: float) -> float:
    """Value of the closed-form bound as alpha approaches beta from above."""
    return 1.0 + eps * (n - k - 1)
