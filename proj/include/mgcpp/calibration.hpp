#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgcpp/lob.hpp"
#include "mgcpp/markov_price.hpp"
#include "mgcpp/price_process.hpp"
#include "mgcpp/validation.hpp"

namespace mgcpp {

struct CalibrationConfig {
    double delta = 0.005;
    int n_states = 2;
    DiscretizationScheme scheme = DiscretizationScheme::TickBuckets;
    // Disjoint-window length for the count variance. The rate and variance
    // estimates depend on it; it is a knob, not a constant.
    double variance_window = 60.0;
};

struct AssetCalibration {
    std::string asset;
    TransitionModel model;
    LimitConstants limits;
    double lambda_bar = 0.0;
    double sigma_sq = 0.0;
    std::size_t n_changes = 0;
    double start = 0.0;
    double end = 0.0;
    bool degenerate_chain = false;
    std::vector<int> uniform_rows{};

    AssetParams params(double delta) const;
};

// Changes with time in (start, end].
PriceChangeSeq slice_changes(const PriceChangeSeq& changes, double start, double end);

// Fits chain (P, pi*, a*, sigma*) and rates (lambda_bar, sigma^2) on (start, end].
AssetCalibration calibrate_asset(const PriceChangeSeq& changes, double start, double end,
                                 const CalibrationConfig& config, std::string asset = {});

struct ValidationConfig {
    CalibrationConfig calibration;
    std::vector<double> windows = window_preset("fine");
    Centralization mode = Centralization::Stochastic;
};

struct AssetValidation {
    AssetCalibration calibration;
    EmpiricalCurve empirical{};
    StdCurve fclt1{};
    StdCurve fclt2{};
    double regression_coefficient = 0.0;
    double model_coefficient = 0.0;  // fclt1 for stochastic, fclt2 otherwise
    double percent_error = 0.0;
    double mse = 0.0;                // against the mode's model curve
};

// Model coefficient (std per sqrt(second)) for a centralization mode.
double model_coefficient(const AssetParams& params, Centralization mode);

// In-sample pipeline: calibrate on (start, end], compare the empirical std curve with the model.
AssetValidation validate_asset(const PriceChangeSeq& changes, double start, double end,
                               const ValidationConfig& config, std::string asset = {});

struct RollingCvConfig {
    double train_minutes = 280.0;
    double fold_minutes = 10.0;
    int folds = 5;
    std::vector<double> windows = window_preset("fine");
    CalibrationConfig calibration;
    Centralization mode = Centralization::Deterministic;
    std::size_t min_test_changes = 10;
    // Evaluate each fold on its own training span (in-sample check).
    bool test_equals_train = false;
};

struct FoldReport {
    int fold = 0;
    double train_start = 0.0;
    double train_end = 0.0;
    double test_start = 0.0;
    double test_end = 0.0;
    std::size_t train_changes = 0;
    std::size_t test_changes = 0;
    double regression_coefficient = 0.0;  // from the test span
    double model_coefficient = 0.0;       // from the training parameters
    double percent_error = 0.0;
    bool degenerate = false;
    std::string note;
};

struct AssetCvReport {
    std::string asset;
    std::vector<FoldReport> folds;
    double mean_error = 0.0;  // NaN when every fold is degenerate
    std::size_t used_folds = 0;
};

/// Rolling (expanding-window) cross-validation: fold k trains on
/// [start, start + train + k * fold) and tests on the next fold-length span.
AssetCvReport rolling_cv(const PriceChangeSeq& changes, double session_start, double session_end,
                         const RollingCvConfig& config, std::string asset = {});

// Mean of the per-asset mean errors, skipping assets with no usable fold.
double overall_test_error(std::span<const AssetCvReport> reports);

}  // namespace mgcpp
