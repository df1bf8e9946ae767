"""Projection-cost preserving sketches of a PSD matrix through the oracle,
plus the test-time verification battery.

A column sketch C = A S1 preserves ||A - PA||_F^2 for every rank-k
projection P up to 1 +/- eps. A row sketch S2^T A S1 preserves the costs of
A S1 under right projections, up to a fixed offset (Frobenius mode) or an
additive eps/k * tail term (spectral mode). Verification compares against
the exact matrix, which only tests may hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import PsdMatrix, PsdOracle, ValidationError, substream
from .exact import best_rank_k, eig_psd, frob_sq, spec_norm_sq
from .sampling import (
    AlgoConfig,
    RidgeScores,
    SampleSet,
    sample_or_full,
    sqrt_ridge_scores_multi,
)

COLUMN_SCHEMES = ("plain", "mixed", "spectral")


@dataclass(frozen=True)
class PcpSketch:
    """A projection-cost preserving sketch plus the samples that built it."""

    kind: str                    # column_frob | row_frob | row_spectral | column_spectral
    sketch: np.ndarray
    sample: SampleSet            # S1 for column kinds, S2 for row kinds
    base_sample: SampleSet | None  # the column sample a row sketch refines
    eps: float
    k: int
    scheme: str = "plain"
    delta_offset: float | None = None  # fitted only in verification


def _column_weights(oracle: PsdOracle, k: int, eps: float,
                    config: AlgoConfig, seed: int, scheme: str
                    ) -> tuple[np.ndarray, str, int]:
    """Sampling weights, provenance tag, and width for a column sketch."""
    n = oracle.n
    if scheme == "plain":
        scores = sqrt_ridge_scores_multi(oracle, (k,), config, seed)[k]
        ell = 2.0 * math.sqrt(n / k) * scores.values
        t = config.col_pcp_t(n, k, eps)
        tag = f"col:plain:k={k}:eps={eps}"
    elif scheme == "mixed":
        k1 = config.rank_inflation(k, eps, power=1)
        r2 = min(n - 1, math.ceil(config.c_prime * k1))
        multi = sqrt_ridge_scores_multi(oracle, (k, r2), config, seed,
                                        sample_rank=k)
        ell = (
            math.sqrt(n / k) * multi[k].values
            + math.sqrt(n * eps**4 / k1) * multi[r2].values
        )
        t = config.alg1_t1(n, k, eps)
        tag = f"col:mixed:k={k}:k1={k1}:r2={r2}:eps={eps}"
    elif scheme == "spectral":
        k1 = min(n - 1, config.rank_inflation(k, eps, power=2))
        scores = sqrt_ridge_scores_multi(oracle, (k1,), config, seed,
                                         sample_rank=k)[k1]
        ell = 4.0 * eps * math.sqrt(n / k) * scores.values
        t = config.alg2_t12(n, k1)
        tag = f"col:spectral:k={k}:k1={k1}:eps={eps}"
    else:
        raise ValidationError(f"unknown column scheme {scheme!r}")
    return ell, tag, t


def column_pcp(oracle: PsdOracle, k: int, eps: float, config: AlgoConfig,
               seed: int, scheme: str = "plain",
               scores_override: np.ndarray | None = None) -> PcpSketch:
    """Sample a weighted column sketch A S1 that preserves rank-k
    projection costs.

    ``scheme`` selects the sampling-weight family: "plain" for the
    standalone Frobenius column sketch, "mixed" for the sum-of-families
    weights the full pipeline needs, "spectral" for the spectral-error
    family. ``scores_override`` lets tests inject alternative score
    vectors; the width law is unchanged.
    """
    if not (0.0 < eps <= 1.0):
        raise ValidationError("eps must be in (0, 1]")
    n = oracle.n
    ell, tag, t = _column_weights(oracle, k, eps, config, seed, scheme)
    if scores_override is not None:
        ell = np.asarray(scores_override, dtype=np.float64)
        tag += ":override"
    s1 = sample_or_full(ell, t, n, seed, tag, label="pcp-s1")
    sketch = oracle.columns(s1.indices) * s1.weights[None, :]
    kind = "column_spectral" if scheme == "spectral" else "column_frob"
    return PcpSketch(kind=kind, sketch=sketch, sample=s1, base_sample=None,
                     eps=eps, k=k, scheme=scheme)


def row_pcp(oracle: PsdOracle, col_sketch: PcpSketch, k: int, eps: float,
            mode: str, config: AlgoConfig, seed: int) -> PcpSketch:
    """Sample rows of an existing column sketch, producing S2^T A S1.

    ``mode`` is "frobenius" (cost preserved up to a fixed offset) or
    "spectral" (two-sided spectral comparison with an additive
    eps/k * tail term). The column sketch must have been built with a
    compatible score family, which is enforced through its provenance tag.
    """
    if mode not in ("frobenius", "spectral"):
        raise ValidationError(f"unknown row mode {mode!r}")
    n = oracle.n
    need = "mixed" if mode == "frobenius" else "spectral"
    if col_sketch.scheme not in (need,):
        raise ValidationError(
            f"row_pcp({mode}) needs a column sketch with {need!r} scores, "
            f"got {col_sketch.scheme!r}"
        )
    if col_sketch.k != k:
        raise ValidationError("column sketch was built for a different rank")

    if mode == "frobenius":
        k_inf = config.rank_inflation(k, eps, power=1)
        r2 = min(n - 1, math.ceil(config.c_prime * k_inf))
        scores = sqrt_ridge_scores_multi(oracle, (r2,), config, seed,
                                         sample_rank=k)[r2]
        ell = math.sqrt(16.0 * n * eps / k) * scores.values
        kind = "row_frob"
    else:
        k_inf = min(n - 1, config.rank_inflation(k, eps, power=2))
        scores = sqrt_ridge_scores_multi(oracle, (k_inf,), config, seed,
                                         sample_rank=k)[k_inf]
        ell = 4.0 * eps * math.sqrt(n / k) * scores.values
        kind = "row_spectral"

    t2 = config.row_pcp_t(n, k_inf, eps)
    tag = f"row:{mode}:k={k}:k_inf={k_inf}:eps={eps}"
    s2 = sample_or_full(ell, t2, n, seed, tag, label="pcp-s2")
    s1 = col_sketch.sample
    block = oracle.submatrix(s2.indices, s1.indices)
    sketch = block * np.outer(s2.weights, s1.weights)
    return PcpSketch(kind=kind, sketch=sketch, sample=s2, base_sample=s1,
                     eps=eps, k=k, scheme=col_sketch.scheme)


# ---------------------------------------------------------------------------
# Verification battery (test-time only)
# ---------------------------------------------------------------------------

@dataclass
class PcpVerification:
    kind: str
    eps: float
    distortions: np.ndarray       # per tested projection, after any offset
    worst_distortion: float
    delta: float                  # fitted offset (0 unless row_frob)
    delta_bound: float            # 600 * ||A - A_k||_F^2
    delta_ok: bool

    @property
    def passed(self) -> bool:
        return self.worst_distortion <= self.eps and self.delta_ok


def _projection_battery(base: np.ndarray, skt: np.ndarray, k: int,
                        trials: int, seed: int, side: str) -> list[np.ndarray]:
    """Orthonormal blocks spanning the tested rank-k projections.

    Includes seeded random subspaces plus the adversarial directions: the
    top/bottom singular spans of the base matrix and the top span of the
    sketch itself.
    """
    dim = base.shape[0] if side == "left" else base.shape[1]
    gen = substream(seed, "pcp-battery")
    mats: list[np.ndarray] = []
    for _ in range(trials):
        g = gen.standard_normal((dim, k))
        q, _ = np.linalg.qr(g)
        mats.append(q)

    def spans(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u, _, vt = np.linalg.svd(m, full_matrices=False)
        basis = u if side == "left" else vt.T
        return basis[:, :k], basis[:, -k:]

    top_b, bot_b = spans(base)
    mats.extend([top_b, bot_b])
    top_s, _ = spans(skt if side == "left" else skt)
    if (top_s.shape[0]) == dim:
        mats.append(top_s[:, :k])
    return mats


def _residual_costs(base: np.ndarray, skt: np.ndarray, blocks, side: str,
                    norm: str) -> tuple[np.ndarray, np.ndarray]:
    cb, cs = [], []
    for q in blocks:
        if side == "left":
            rb, rs = base - q @ (q.T @ base), skt - q @ (q.T @ skt)
        else:
            rb, rs = base - (base @ q) @ q.T, skt - (skt @ q) @ q.T
        if norm == "frob":
            cb.append(frob_sq(rb))
            cs.append(frob_sq(rs))
        else:
            cb.append(spec_norm_sq(rb))
            cs.append(spec_norm_sq(rs))
    return np.array(cb), np.array(cs)


def verify_pcp(sketch: PcpSketch, a: PsdMatrix, trials: int, seed: int
               ) -> PcpVerification:
    """Measure worst-case projection-cost distortion of a sketch against the
    exact matrix over a finite projection battery.

    Frobenius kinds report |sketch cost - base cost| / base cost; the
    row-Frobenius kind first fits the single best offset across the battery
    (least squares) and reports the residual distortion plus whether the
    offset respects the 600 * tail bound. Spectral kinds normalize by
    base cost + tail/k, matching the additive term in their guarantee.
    """
    k = sketch.k
    _, tail_f, _ = best_rank_k(a, k)

    if sketch.kind.startswith("column"):
        base, skt, side = a.values, sketch.sketch, "left"
    else:
        s1 = sketch.base_sample
        base = a.values[:, s1.indices] * s1.weights[None, :]
        skt, side = sketch.sketch, "right"

    norm = "frob" if sketch.kind.endswith("frob") else "spec"
    blocks = _projection_battery(base, skt, k, trials, seed, side)
    cost_base, cost_skt = _residual_costs(base, skt, blocks, side, norm)

    if norm == "frob":
        denom = np.maximum(cost_base, 1e-30)
    else:
        denom = np.maximum(cost_base + tail_f / k, 1e-30)
    delta = 0.0
    if sketch.kind == "row_frob":
        # Least squares in the relative metric distortion is measured in,
        # so the fit is not drowned by large-cost projections.
        weights = 1.0 / denom**2
        delta = float(np.sum(weights * (cost_base - cost_skt))
                      / np.sum(weights))
    distort = np.abs(cost_skt + delta - cost_base) / denom

    delta_bound = 600.0 * tail_f
    return PcpVerification(
        kind=sketch.kind,
        eps=sketch.eps,
        distortions=distort,
        worst_distortion=float(distort.max()),
        delta=delta,
        delta_bound=delta_bound,
        delta_ok=bool(abs(delta) <= delta_bound + 1e-9),
    )
