#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgcpp/lob.hpp"
#include "mgcpp/price_process.hpp"

namespace mgcpp {

// stochastic: center each window by a* times its event count (FCLT I).
// deterministic / none: raw windowed differences (FCLT II compares these).
enum class Centralization { Stochastic, Deterministic, None };

Centralization parse_centralization(std::string_view name);
std::string_view to_string(Centralization mode);

enum class CurveKind { Empirical, Fclt1, Fclt2 };
std::string_view to_string(CurveKind kind);

struct StdCurve {
    std::string asset;
    CurveKind kind = CurveKind::Empirical;
    std::vector<double> windows;  // seconds, strictly increasing
    std::vector<double> stds;     // dollars

    std::size_t size() const { return windows.size(); }
};

// "fine": 0.1 s to 12 s step 0.1 s. "coarse": 10 s to 1200 s step 10 s.
std::vector<double> window_preset(std::string_view name);
// A preset name or a comma-separated list of window lengths in seconds.
std::vector<double> parse_windows(std::string_view spec);

// Disjoint windows of length `window` that fit in `span`.
std::size_t window_count(double span, double window);

double sample_std(std::span<const double> values);

struct EmpiricalCurve {
    StdCurve curve;
    std::vector<std::size_t> counts;  // windows behind each std
    std::vector<double> omitted;      // sizes with fewer than 2 windows
};

EmpiricalCurve empirical_std_curve(std::span<const double> jump_times, std::span<const double> jump_sizes,
                                   double a_star, std::span<const double> windows, Centralization mode,
                                   double start, double end, std::string asset = {});

EmpiricalCurve empirical_std_curve(const PriceChangeSeq& changes, double a_star, std::span<const double> windows,
                                   Centralization mode, double start, double end, std::string asset = {});

StdCurve model_std_curve(const AssetParams& params, std::span<const double> windows, CurveKind kind,
                         std::string asset = {});

// Least squares fit of std = c sqrt(w) without intercept: c = sum(std sqrt(w)) / sum(w).
double sqrt_regression(const StdCurve& curve);

// Mean squared pointwise difference; grids must match.
double mse(const StdCurve& empirical, const StdCurve& model);

// 100 |model - reference| / |reference|.
double percentage_error(double model, double reference);

}  // namespace mgcpp
