"""Sampled low-rank approximation, sketching, and ridge regression for
dense PSD matrices, with entry-access accounting against exact oracles."""

from .core import (
    HardInstanceSpec,
    NotPsdError,
    NumericalError,
    PlantedBlock,
    PsdMatrix,
    PsdOracle,
    SingularMatrixError,
    ValidationError,
    check_diagonal_domination,
    entry,
    gen_counterexample_pair,
    gen_hard_instance,
    gen_identity,
    gen_powerlaw_psd,
    gen_spectrum_psd,
    hard_instance_best_rank_k_tail,
    planted_subset_size,
    substream,
)
from .exact import (
    SpectralData,
    best_rank_k,
    eig_psd,
    exact_ridge_regression,
    exact_ridge_scores,
    exact_sqrt_ridge_scores,
    exact_statistical_dimension,
    matrix_sqrt,
)
from .lowrank import (
    LowRankFactor,
    RunReport,
    access_budget,
    algorithm1_frobenius,
    algorithm2_spectral,
    constrained_rank_k_regression,
    counterexample_demo,
    evaluate_report,
    psd_output,
    sampled_regression,
    sketch_rank_span,
    sqrt_route_baseline,
)
from .pcp import PcpSketch, column_pcp, row_pcp, verify_pcp
from .regression import (
    RidgeProblem,
    estimate_statistical_dimension,
    ridge_via_factor,
    sublinear_ridge,
)
from .sampling import (
    AlgoConfig,
    RidgeScores,
    SampleSet,
    approx_sqrt_ridge_scores,
    scores_to_sampleset,
    subspace_embedding_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
