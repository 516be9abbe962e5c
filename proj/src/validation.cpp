#include "mgcpp/validation.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/log.hpp"

namespace mgcpp {

Centralization parse_centralization(std::string_view name) {
    if (name == "stochastic") return Centralization::Stochastic;
    if (name == "deterministic") return Centralization::Deterministic;
    if (name == "none") return Centralization::None;
    throw Error(ErrorKind::Parameter, fmt::format("unknown centralization '{}'", std::string(name)));
}

std::string_view to_string(Centralization mode) {
    switch (mode) {
        case Centralization::Stochastic: return "stochastic";
        case Centralization::Deterministic: return "deterministic";
        case Centralization::None: return "none";
    }
    return "none";
}

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::Empirical: return "empirical";
        case CurveKind::Fclt1: return "fclt1";
        case CurveKind::Fclt2: return "fclt2";
    }
    return "empirical";
}

std::vector<double> window_preset(std::string_view name) {
    std::vector<double> windows;
    if (name == "fine") {
        for (int k = 1; k <= 120; ++k) windows.push_back(k / 10.0);
    } else if (name == "coarse") {
        for (int k = 1; k <= 120; ++k) windows.push_back(10.0 * k);
    } else {
        throw Error(ErrorKind::Parameter, fmt::format("unknown window preset '{}'", std::string(name)));
    }
    return windows;
}

std::vector<double> parse_windows(std::string_view spec) {
    if (spec == "fine" || spec == "coarse") return window_preset(spec);
    std::vector<double> windows;
    std::size_t begin = 0;
    while (begin <= spec.size()) {
        auto comma = spec.find(',', begin);
        if (comma == std::string_view::npos) comma = spec.size();
        const std::string item(spec.substr(begin, comma - begin));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !(value > 0.0)) {
            throw Error(ErrorKind::Parameter, fmt::format("bad window length '{}'", item));
        }
        if (!windows.empty() && !(value > windows.back())) {
            throw Error(ErrorKind::Parameter, "window lengths must be strictly increasing");
        }
        windows.push_back(value);
        begin = comma + 1;
    }
    return windows;
}

std::size_t window_count(double span, double window) {
    if (!(window > 0.0) || !(span > 0.0)) return 0;
    return static_cast<std::size_t>(std::floor(span / window + 1e-9));
}

double sample_std(std::span<const double> values) {
    if (values.size() < 2) throw Error(ErrorKind::InsufficientData, "need at least 2 values for a standard deviation");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double acc = 0.0;
    for (double x : values) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

EmpiricalCurve empirical_std_curve(std::span<const double> jump_times, std::span<const double> jump_sizes,
                                   double a_star, std::span<const double> windows, Centralization mode,
                                   double start, double end, std::string asset) {
    const double centering = mode == Centralization::Stochastic ? a_star : 0.0;
    EmpiricalCurve out;
    out.curve.asset = std::move(asset);
    out.curve.kind = CurveKind::Empirical;
    for (std::size_t j = 0; j < windows.size(); ++j) {
        if (!(windows[j] > 0.0) || (j > 0 && !(windows[j] > windows[j - 1]))) {
            throw Error(ErrorKind::Parameter, "window lengths must be positive and strictly increasing");
        }
    }
    for (double w : windows) {
        const std::size_t n = window_count(end - start, w);
        if (n < 2) {
            out.omitted.push_back(w);
            log_warn(fmt::format("window {} s gives {} intervals in [{}, {}]; omitted", w, n, start, end));
            continue;
        }
        const auto residuals = fclt1_residuals(jump_times, jump_sizes, centering, w, start, end);
        out.curve.windows.push_back(w);
        out.curve.stds.push_back(sample_std(residuals));
        out.counts.push_back(n);
    }
    return out;
}

EmpiricalCurve empirical_std_curve(const PriceChangeSeq& changes, double a_star, std::span<const double> windows,
                                   Centralization mode, double start, double end, std::string asset) {
    return empirical_std_curve(changes.times, changes.changes, a_star, windows, mode, start, end, std::move(asset));
}

StdCurve model_std_curve(const AssetParams& params, std::span<const double> windows, CurveKind kind,
                         std::string asset) {
    if (kind == CurveKind::Empirical) throw Error(ErrorKind::Parameter, "model curve must be fclt1 or fclt2");
    StdCurve curve;
    curve.asset = std::move(asset);
    curve.kind = kind;
    curve.windows.assign(windows.begin(), windows.end());
    for (double w : windows) curve.stds.push_back(kind == CurveKind::Fclt1 ? fclt1_std(params, w) : fclt2_std(params, w));
    return curve;
}

double sqrt_regression(const StdCurve& curve) {
    if (curve.size() < 2) throw Error(ErrorKind::InsufficientData, "square-root regression needs at least 2 points");
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t j = 0; j < curve.size(); ++j) {
        numerator += curve.stds[j] * std::sqrt(curve.windows[j]);
        denominator += curve.windows[j];
    }
    if (!(denominator > 0.0)) throw Error(ErrorKind::Degenerate, "all windows are zero");
    return numerator / denominator;
}

double mse(const StdCurve& empirical, const StdCurve& model) {
    if (empirical.size() != model.size()) {
        throw Error(ErrorKind::Alignment, fmt::format("curves have {} and {} points", empirical.size(), model.size()));
    }
    if (empirical.size() == 0) throw Error(ErrorKind::InsufficientData, "empty curves");
    double acc = 0.0;
    for (std::size_t j = 0; j < empirical.size(); ++j) {
        const double scale = std::max(std::abs(empirical.windows[j]), 1.0);
        if (std::abs(empirical.windows[j] - model.windows[j]) > 1e-12 * scale) {
            throw Error(ErrorKind::Alignment, fmt::format("window grids differ at index {}", j));
        }
        const double diff = empirical.stds[j] - model.stds[j];
        acc += diff * diff;
    }
    return acc / static_cast<double>(empirical.size());
}

double percentage_error(double model, double reference) {
    if (reference == 0.0 || !std::isfinite(reference)) {
        throw Error(ErrorKind::Degenerate, "percentage error is undefined for a zero reference");
    }
    return 100.0 * std::abs(model - reference) / std::abs(reference);
}

}  // namespace mgcpp
