"""Sublinear estimation of square-root ridge leverage scores through the
entry oracle, weighted sampling-matrix construction, and the subspace
embedding test oracle.

The recursive estimator halves the index set, builds a Nystrom sketch of
each half from the recursively sampled columns, and reads only
O(n * sample_size) entries plus the diagonal. Sample-size laws live on
:class:`AlgoConfig`; every constant the algorithms use is a named field
there, pinned by the acceptance runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from .core import (
    NumericalError,
    PsdOracle,
    ValidationError,
    inverse_cdf_sample,
    substream,
)

SCORE_FLOOR = 1e-12

# Multiplier applied to the sampled-resolvent diagonal so the estimates
# overestimate the true scores without breaching the factor-3 ceiling; the
# spectral sandwich the sample satisfies admits any value in (4/3, 3).
ESTIMATE_MULTIPLIER = 1.7


@dataclass(frozen=True)
class AlgoConfig:
    """Constants and size laws shared by all sampled algorithms.

    The multipliers realize bounds that the analysis states only up to
    "sufficiently large" constants; the defaults here are pinned by the
    acceptance suite, which checks both approximation quality and measured
    entry-access budgets at desk scale (n <= ~8192). All multipliers must
    be >= 1. ``oversample_log`` turns on a log2(n)/10 width factor on the
    big sketches (normalized to 1.0 at n = 1024).
    """

    c_rank: float = 1.0      # rank inflation k1 = ceil(c_rank * k / eps^p)
    c_prime: float = 1.0     # second score-family rank multiplier
    c1: float = 1.25         # column-sketch width
    c2: float = 3.3          # row-sketch width
    c3: float = 1.15         # span-regression sample
    c4: float = 4.0          # affine-embedding rows per span column
    c5: float = 1.3          # final-regression sample
    c_sample: float = 4.0    # score-estimator columns per unit rank
    c_stat: float = 1.0      # rank per unit statistical dimension
    oversample_log: bool = True
    failure_delta: float = 0.01
    max_retries: int = 3
    sketch_solver: str = "svd"  # placeholder for plugging a sketched solver

    def __post_init__(self):
        for name in ("c_rank", "c_prime", "c1", "c2", "c3", "c4", "c5",
                     "c_sample", "c_stat"):
            if getattr(self, name) < 1.0:
                raise ValidationError(f"multiplier {name} must be >= 1")
        if not (0.0 < self.failure_delta < 1.0):
            raise ValidationError("failure_delta must be in (0, 1)")

    # -- width laws -------------------------------------------------------

    def log_factor(self, n: int) -> float:
        if not self.oversample_log:
            return 1.0
        return max(1.0, math.log2(max(n, 2)) / 10.0)

    def score_sample_size(self, k: int, n: int) -> int:
        """Columns kept by the recursive score estimator."""
        return min(n, max(8, math.ceil(self.c_sample * k) + 4))

    def score_bottom_size(self, k: int, n: int) -> int:
        """Index-set size at which the recursion solves scores exactly."""
        return min(n, max(48, 2 * self.score_sample_size(k, n)))

    def rank_inflation(self, k: int, eps: float, power: int) -> int:
        return math.ceil(self.c_rank * k / eps**power)

    def alg1_t1(self, n: int, k: int, eps: float) -> int:
        return min(n, math.ceil(self.c1 * self.log_factor(n) * math.sqrt(n * k) / eps))

    def alg1_t2(self, n: int, k1: int, eps: float) -> int:
        return min(n, math.ceil(
            self.c2 * self.log_factor(n) * eps * math.sqrt(n * k1)
        ))

    def alg1_t3(self, k: int, eps: float, cap: int) -> int:
        return min(cap, max(8, math.ceil(self.c3 * k**1.5 / eps)))

    def alg1_t4(self, t3: int, n: int) -> int:
        return min(n, max(16, math.ceil(self.c4 * t3)))

    def alg1_t5(self, k: int, eps: float, n: int) -> int:
        return min(n, max(8, math.ceil(self.c5 * 0.5 * k**1.7 / eps)))

    def alg2_t12(self, n: int, k1: int) -> int:
        return min(n, math.ceil(self.c1 * self.log_factor(n) * math.sqrt(n * k1)))

    def alg2_t34(self, k: int, eps: float, n: int) -> int:
        return min(n, max(8, math.ceil(self.c3 * k**1.5 / eps)))

    def col_pcp_t(self, n: int, k: int, eps: float) -> int:
        return min(n, math.ceil(self.c1 * self.log_factor(n) * math.sqrt(n * k) / eps))

    def row_pcp_t(self, n: int, k_inflated: int, eps: float) -> int:
        return min(n, math.ceil(
            self.c2 * self.log_factor(n) * math.sqrt(n * k_inflated) / (2.0 * math.sqrt(eps))
        ))

    def baseline_t(self, n: int, k: int, eps: float) -> int:
        return min(n, math.ceil(self.c1 * k * math.sqrt(n) / eps))

    def psd_project_t(self, n: int, m: int, eps: float) -> int:
        return min(n, max(16, math.ceil(
            self.c1 * self.log_factor(n) * m * (1.0 + math.log2(max(m, 2))) / eps
        )))

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = AlgoConfig()


# ---------------------------------------------------------------------------
# Score and sample containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RidgeScores:
    """Per-index ridge leverage scores (exact or overestimates)."""

    values: np.ndarray
    k: int
    target: str            # "of_sqrtA" or "of_A"
    provenance: str = ""   # how the scores were produced, for misuse checks

    def __post_init__(self):
        v = self.values
        if (v <= 0).any() or (v > 1.0 + 1e-9).any():
            raise ValidationError("scores must lie in (0, 1]")

    @property
    def total(self) -> float:
        return float(self.values.sum())


@dataclass(frozen=True)
class SampleSet:
    """A weighted multiset of indices realizing a sampling matrix.

    Draw j carries weight 1/sqrt(t * p[indices[j]]), so the weighted
    selection S satisfies E[S S^T] = I.
    """

    indices: np.ndarray
    weights: np.ndarray
    probabilities: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        if abs(self.probabilities.sum() - 1.0) > 1e-12:
            raise ValidationError("sampling probabilities must sum to 1")

    @property
    def t(self) -> int:
        return len(self.indices)

    @property
    def is_exhaustive(self) -> bool:
        """True for the deterministic all-indices, unit-weight sample."""
        n = len(self.probabilities)
        return (
            self.t == n
            and np.array_equal(self.indices, np.arange(n))
            and np.allclose(self.weights, 1.0)
        )

    @staticmethod
    def full(n: int, provenance: str = "exhaustive") -> "SampleSet":
        """All n indices once each with unit weight (S S^T = I exactly)."""
        return SampleSet(
            indices=np.arange(n, dtype=np.int64),
            weights=np.ones(n),
            probabilities=np.full(n, 1.0 / n),
            provenance=provenance,
        )


def scores_to_sampleset(scores: np.ndarray, t: int, seed: int,
                        provenance: str = "", label: str = "sample"
                        ) -> SampleSet:
    """Draw t indices i.i.d. proportionally to ``scores`` with the matching
    1/sqrt(t p_i) weights. Deterministic given (scores, t, seed)."""
    scores = np.asarray(scores, dtype=np.float64)
    if t < 1:
        raise ValidationError("sample count must be >= 1")
    if (scores <= 0).any():
        raise ValidationError("scores must be strictly positive")
    p = scores / scores.sum()
    gen = substream(seed, label)
    idx = inverse_cdf_sample(p, t, gen)
    w = 1.0 / np.sqrt(t * p[idx])
    return SampleSet(indices=idx, weights=w, probabilities=p,
                     provenance=provenance)


def sample_or_full(scores: np.ndarray, t: int, n: int, seed: int,
                   provenance: str, label: str) -> SampleSet:
    """Sample t indices, or fall back to exhaustive inclusion when t >= n."""
    if t >= n:
        return SampleSet.full(n, provenance=provenance + ":exhaustive")
    return scores_to_sampleset(scores, t, seed, provenance, label)


# ---------------------------------------------------------------------------
# Recursive square-root ridge leverage score estimation
# ---------------------------------------------------------------------------

def _nystrom_diag_and_eigs(block: np.ndarray, core: np.ndarray,
                           lam: float) -> np.ndarray:
    """Diagonal of F (K + lam I)^{-1} F^T for F = block, K = core (PSD)."""
    d, q = np.linalg.eigh(core)
    d = np.clip(d, 0.0, None)
    t = block @ q
    return np.sum(t * t / (d + lam)[None, :], axis=1)


def _nystrom_top_eigs(block: np.ndarray, core: np.ndarray, kmax: int
                      ) -> np.ndarray:
    """Top eigenvalues of the Nystrom approximation F K^+ F^T."""
    d, q = np.linalg.eigh(core)
    d = np.clip(d, 0.0, None)
    cut = 1e-10 * max(d[-1], 1e-300)
    inv_root = np.where(d > cut, 1.0 / np.sqrt(np.maximum(d, cut)), 0.0)
    g = block @ (q * inv_root)
    sv = np.linalg.svd(g, compute_uv=False)
    eigs = sv**2
    return eigs[:kmax]


def _level_scores(diag_active: np.ndarray, block: np.ndarray,
                  core: np.ndarray, weights: np.ndarray, rank: int,
                  lam_floor: float) -> tuple[np.ndarray, float]:
    """Score estimates for one recursion level.

    ``block`` holds A[active, sample] and ``core`` A[sample, sample]; the
    returned scores overestimate the rank-``rank`` sqrt ridge scores of the
    active principal submatrix. The ridge level is the trace-based proxy
    (trace minus top-rank Nystrom eigenvalue mass) / rank, floored.
    """
    fw = block * weights[None, :]
    kw = core * np.outer(weights, weights)
    top = _nystrom_top_eigs(fw, kw, rank)
    lam = (float(diag_active.sum()) - float(top.sum())) / rank
    lam = max(lam, lam_floor)
    nys_diag = _nystrom_diag_and_eigs(fw, kw, lam)
    resid = np.clip(diag_active - nys_diag, 0.0, None)
    scores = np.clip(ESTIMATE_MULTIPLIER * resid / lam, SCORE_FLOOR, 1.0)
    return scores, lam


def _exact_sub_scores(sub: np.ndarray, rank: int) -> np.ndarray:
    """Exact sqrt ridge scores of a principal submatrix (recursion base)."""
    lam, u = np.linalg.eigh(sub)
    lam = np.clip(lam[::-1], 0.0, None)
    u = u[:, ::-1]
    r = min(rank, len(lam) - 1)
    ridge = float(lam[r:].sum()) / max(r, 1)
    ridge = max(ridge, SCORE_FLOOR * max(lam.sum(), 1e-300))
    return np.clip(np.sum(u**2 * (lam / (lam + ridge)), axis=1),
                   SCORE_FLOOR, 1.0)


def _recurse_sample(oracle: PsdOracle, active: np.ndarray, rank: int,
                    s: int, bottom: int, diag: np.ndarray, lam_floor: float,
                    seed: int, depth: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (global indices, weights) of a score sample for ``active``."""
    if depth > math.ceil(math.log2(max(oracle.n, 2))) + 2:
        raise NumericalError("score recursion exceeded expected depth")

    n_act = len(active)
    if n_act <= bottom:
        sub = oracle.submatrix(active, active)
        scores = _exact_sub_scores(sub, rank)
        if s >= n_act:
            return active, np.ones(n_act)
        ss = scores_to_sampleset(scores, s, seed, label=f"rls-bottom-{depth}")
        return active[ss.indices], ss.weights

    gen = substream(seed, f"rls-half-{depth}")
    half = np.sort(active[gen.permutation(n_act)[: n_act // 2]])
    child_idx, child_w = _recurse_sample(
        oracle, half, rank, s, bottom, diag, lam_floor, seed, depth + 1
    )

    block = oracle.submatrix(active, child_idx)
    pos = np.searchsorted(active, child_idx)
    core = block[pos, :]
    scores, _ = _level_scores(diag[active], block, core, child_w, rank,
                              lam_floor)
    ss = scores_to_sampleset(scores, s, seed, label=f"rls-level-{depth}")
    return active[ss.indices], ss.weights


def sqrt_ridge_scores_multi(oracle: PsdOracle, ranks: tuple[int, ...],
                            config: AlgoConfig, seed: int,
                            sample_rank: int | None = None
                            ) -> dict[int, RidgeScores]:
    """Estimate sqrt ridge scores at several ranks from one shared recursion.

    All ranks reuse the same sampled columns; only the ridge level differs.
    Always reads the full diagonal. Entry cost is about
    2 n * score_sample_size plus the recursion base block.
    """
    n = oracle.n
    for r in ranks:
        if not (1 <= r < n):
            raise ValidationError(f"rank {r} out of range for n={n}")
    base = sample_rank if sample_rank is not None else max(ranks)
    s = config.score_sample_size(base, n)
    bottom = config.score_bottom_size(base, n)

    diag = oracle.diagonal()
    lam_floor = SCORE_FLOOR * max(float(diag.sum()), 1e-300)
    sample_idx, sample_w = _recurse_sample(
        oracle, np.arange(n), max(ranks), s, bottom, diag, lam_floor, seed, 0
    )

    block = oracle.submatrix(np.arange(n), sample_idx)
    core = block[sample_idx, :]
    out = {}
    for r in ranks:
        scores, lam = _level_scores(diag, block, core, sample_w, r, lam_floor)
        out[r] = RidgeScores(
            values=scores, k=r, target="of_sqrtA",
            provenance=f"rls:sqrtA:rank={r}:seed={seed}",
        )
    return out


def approx_sqrt_ridge_scores(oracle: PsdOracle, k: int, config: AlgoConfig,
                             seed: int) -> RidgeScores:
    """Overestimates of the rank-k ridge leverage scores of sqrt(A).

    At default constants the estimates land within [tau, 3*tau] of the
    exact scores on most seeded runs, read all n diagonal entries, and
    access O(n k) entries overall.
    """
    return sqrt_ridge_scores_multi(oracle, (k,), config, seed)[k]


# ---------------------------------------------------------------------------
# Subspace embedding test oracle
# ---------------------------------------------------------------------------

def subspace_embedding_check(a_cols: np.ndarray, sample: SampleSet,
                             eps: float) -> bool:
    """Whether the weighted column sample C of A satisfies the two-sided
    spectral comparison on A's row space.

    Computes the generalized eigenvalues of C C^T against A A^T restricted
    to range(A) and checks they all lie in [1-eps, 1+eps]. Test-time oracle
    only; never used on the sublinear path.
    """
    a = np.asarray(a_cols, dtype=np.float64)
    if sample.indices.max(initial=0) >= a.shape[1]:
        raise ValidationError("sample indices exceed column count")
    c = a[:, sample.indices] * sample.weights[None, :]
    u, sig, _ = np.linalg.svd(a, full_matrices=False)
    cut = 1e-10 * max(sig[0] if len(sig) else 0.0, 1e-300)
    live = sig > cut
    u, sig = u[:, live], sig[live]
    t = (u.T @ c) / sig[:, None]
    mu = np.linalg.svd(t, compute_uv=False) ** 2
    if len(mu) < live.sum():
        return False
    return bool((mu >= 1.0 - eps).all() and (mu <= 1.0 + eps).all())
