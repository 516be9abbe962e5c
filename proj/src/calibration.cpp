#include "mgcpp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/log.hpp"

namespace mgcpp {

AssetParams AssetCalibration::params(double delta) const {
    AssetParams p;
    p.lambda_bar = lambda_bar;
    p.sigma_sq = sigma_sq;
    p.a_star = limits.a_star;
    p.sigma_star = limits.sigma_star;
    p.delta = delta;
    return p;
}

PriceChangeSeq slice_changes(const PriceChangeSeq& changes, double start, double end) {
    PriceChangeSeq out;
    const auto first = static_cast<std::size_t>(
        std::upper_bound(changes.times.begin(), changes.times.end(), start) - changes.times.begin());
    const auto last = static_cast<std::size_t>(
        std::upper_bound(changes.times.begin(), changes.times.end(), end) - changes.times.begin());
    std::int64_t before = changes.initial_mid_twice;
    for (std::size_t k = 0; k < first; ++k) before += changes.change_units.at(k);
    out.initial_mid_twice = before;
    out.initial_mid = static_cast<double>(before) / kMidTwiceScale;
    out.start_time = start;
    out.end_time = end;
    if (last > first) {
        out.times.assign(changes.times.begin() + static_cast<std::ptrdiff_t>(first),
                         changes.times.begin() + static_cast<std::ptrdiff_t>(last));
        out.changes.assign(changes.changes.begin() + static_cast<std::ptrdiff_t>(first),
                           changes.changes.begin() + static_cast<std::ptrdiff_t>(last));
        if (!changes.change_units.empty()) {
            out.change_units.assign(changes.change_units.begin() + static_cast<std::ptrdiff_t>(first),
                                    changes.change_units.begin() + static_cast<std::ptrdiff_t>(last));
        }
    }
    return out;
}

AssetCalibration calibrate_asset(const PriceChangeSeq& changes, double start, double end,
                                 const CalibrationConfig& config, std::string asset) {
    if (!(end > start)) throw Error(ErrorKind::Parameter, "calibration span must have positive length");
    const PriceChangeSeq span = slice_changes(changes, start, end);
    if (span.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("{}: {} price changes in [{}, {}]", asset, span.size(), start, end));
    }

    const auto discrete = discretize_changes(span.changes, config.n_states, config.delta, config.scheme);
    const auto estimate = estimate_transition_matrix(discrete.states, config.n_states);
    TransitionModel model(discrete.values, estimate.transition);
    LimitConstants limits = sigma_star_general(model);

    EventTimes events;
    events.horizon = end - start;
    events.times.emplace_back();
    events.times[0].reserve(span.size());
    for (double t : span.times) events.times[0].push_back(t - start);

    AssetCalibration out{.asset = std::move(asset), .model = std::move(model), .limits = std::move(limits)};
    out.lambda_bar = estimate_lambda_bar(events, events.horizon)[0];
    out.sigma_sq = estimate_sigma_sq(events, config.variance_window)[0];
    out.n_changes = span.size();
    out.start = start;
    out.end = end;
    out.degenerate_chain = discrete.degenerate;
    out.uniform_rows = estimate.uniform_rows;
    return out;
}

double model_coefficient(const AssetParams& params, Centralization mode) {
    return mode == Centralization::Stochastic ? fclt1_std(params, 1.0) : fclt2_std(params, 1.0);
}

AssetValidation validate_asset(const PriceChangeSeq& changes, double start, double end,
                               const ValidationConfig& config, std::string asset) {
    AssetValidation out{.calibration = calibrate_asset(changes, start, end, config.calibration, asset)};
    const AssetParams params = out.calibration.params(config.calibration.delta);
    out.empirical = empirical_std_curve(changes, params.a_star, config.windows, config.mode, start, end, asset);
    out.fclt1 = model_std_curve(params, out.empirical.curve.windows, CurveKind::Fclt1, asset);
    out.fclt2 = model_std_curve(params, out.empirical.curve.windows, CurveKind::Fclt2, asset);
    out.regression_coefficient = sqrt_regression(out.empirical.curve);
    out.model_coefficient = model_coefficient(params, config.mode);
    out.percent_error = percentage_error(out.model_coefficient, out.regression_coefficient);
    out.mse = mse(out.empirical.curve, config.mode == Centralization::Stochastic ? out.fclt1 : out.fclt2);
    return out;
}

AssetCvReport rolling_cv(const PriceChangeSeq& changes, double session_start, double session_end,
                         const RollingCvConfig& config, std::string asset) {
    if (config.folds < 1) throw Error(ErrorKind::Parameter, "need at least one fold");
    if (!(config.train_minutes > 0.0) || !(config.fold_minutes > 0.0)) {
        throw Error(ErrorKind::Parameter, "train and fold lengths must be positive");
    }
    const double train = config.train_minutes * 60.0;
    const double fold = config.fold_minutes * 60.0;
    const double needed = config.test_equals_train ? train + (config.folds - 1) * fold : train + config.folds * fold;
    if (session_start + needed > session_end + 1e-9) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("{}: schedule needs {} s but the session has {} s", asset, needed,
                                session_end - session_start));
    }

    AssetCvReport report;
    report.asset = asset;
    double error_sum = 0.0;
    for (int k = 0; k < config.folds; ++k) {
        FoldReport f;
        f.fold = k + 1;
        f.train_start = session_start;
        f.train_end = session_start + train + k * fold;
        f.test_start = config.test_equals_train ? f.train_start : f.train_end;
        f.test_end = config.test_equals_train ? f.train_end : f.train_end + fold;
        f.test_changes = slice_changes(changes, f.test_start, f.test_end).size();

        try {
            const auto calibration = calibrate_asset(changes, f.train_start, f.train_end, config.calibration, asset);
            f.train_changes = calibration.n_changes;
            const AssetParams params = calibration.params(config.calibration.delta);
            f.model_coefficient = model_coefficient(params, config.mode);
            if (f.test_changes < config.min_test_changes) {
                throw Error(ErrorKind::Degenerate, fmt::format("only {} price changes in the test span", f.test_changes));
            }
            const auto curve = empirical_std_curve(changes, params.a_star, config.windows, config.mode, f.test_start,
                                                   f.test_end, asset);
            f.regression_coefficient = sqrt_regression(curve.curve);
            f.percent_error = percentage_error(f.model_coefficient, f.regression_coefficient);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Parameter) throw;
            f.degenerate = true;
            f.note = e.what();
            log_warn(fmt::format("{} fold {} excluded: {}", asset, f.fold, e.what()));
        }
        if (!f.degenerate) {
            error_sum += f.percent_error;
            ++report.used_folds;
        }
        report.folds.push_back(std::move(f));
    }
    report.mean_error = report.used_folds == 0 ? std::numeric_limits<double>::quiet_NaN()
                                               : error_sum / static_cast<double>(report.used_folds);
    return report;
}

double overall_test_error(std::span<const AssetCvReport> reports) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& r : reports) {
        if (std::isnan(r.mean_error)) continue;
        sum += r.mean_error;
        ++used;
    }
    return used == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(used);
}

}  // namespace mgcpp
