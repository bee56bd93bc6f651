"""Self-paced symmetric nonnegative matrix factorization for graph clustering."""

from ._core import (
    SpsnmfError,
    accuracy,
    ari,
    build_similarity,
    extract_labels,
    frobenius_norm,
    hard_weights,
    init_lambda_median,
    knn_sets,
    lambda_for_fraction,
    load_csv_dataset,
    nmi,
    pairwise_sq_dists,
    per_sample_loss,
    run_spsnmf,
    soft_weights,
    spectral_norm,
    theta_from_bound,
    weighted_objective,
)

__all__ = [
    "SpsnmfError",
    "accuracy",
    "ari",
    "build_similarity",
    "extract_labels",
    "frobenius_norm",
    "hard_weights",
    "init_lambda_median",
    "knn_sets",
    "lambda_for_fraction",
    "load_csv_dataset",
    "nmi",
    "pairwise_sq_dists",
    "per_sample_loss",
    "run_spsnmf",
    "soft_weights",
    "spectral_norm",
    "theta_from_bound",
    "weighted_objective",
]
