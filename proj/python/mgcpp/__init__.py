"""Compound point process price models for limit order book data."""

from ._core import (
    AssetParams,
    MgcppError,
    PriceChangeSeq,
    TransitionModel,
    a_star,
    approximate_price_fclt2,
    calibrate,
    discretize_changes,
    empirical_std_curve,
    estimate_lambda_bar,
    estimate_sigma_sq,
    estimate_transition_matrix,
    fclt1_residuals,
    fclt1_std,
    fclt2_std,
    hawkes_limit_params,
    lln_drift,
    load_price_changes,
    mse,
    percentage_error,
    sigma_star_general,
    sigma_star_two_state,
    simulate_hawkes,
    simulate_mgcpp,
    simulate_poisson,
    sqrt_regression,
    stationary_distribution,
    window_preset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
