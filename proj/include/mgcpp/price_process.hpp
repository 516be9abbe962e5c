#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mgcpp/markov_price.hpp"
#include "mgcpp/point_process.hpp"

namespace mgcpp {

// Limit-theorem inputs for one asset. All matrices in the model are diagonal,
// so assets decouple into these scalars.
struct AssetParams {
    double lambda_bar = 0.0;  // events/second
    double sigma_sq = 0.0;    // events/second, diagonal of Sigma
    double a_star = 0.0;      // dollars per event
    double sigma_star = 0.0;  // dollars
    double delta = 0.005;     // dollars

    // lambda_bar > 0, sigma_sq >= 0, sigma_star >= 0; throws Parameter.
    void validate() const;
};

struct CalibratedParams {
    std::vector<AssetParams> assets;

    std::size_t dimension() const { return assets.size(); }
    void validate() const;
};

// Piecewise-constant prices: prices[i][k] is asset i's price right after its k-th event.
struct PricePath {
    std::vector<std::vector<double>> times;
    std::vector<std::vector<double>> prices;
    std::vector<double> initial;

    std::size_t dimension() const { return initial.size(); }
    double price_at(std::size_t asset, double t) const;
    // Per-event increments of one asset.
    std::vector<double> jumps(std::size_t asset) const;
};

/// S_i(t) = S_i(0) + sum over asset i's events of a_i(X_{i,k}). Each chain
/// starts from a pi* draw and runs on its own stream (seed, asset).
PricePath simulate_mgcpp(const EventTimes& events, std::span<const TransitionModel> models,
                         std::span<const double> s0, std::uint64_t seed);

// n * t * a*_i * lambda_bar_i: the LLN approximation of S_{nt} - S_0.
std::vector<double> lln_drift(const CalibratedParams& params, double t, double n);

// Only the product n * t matters for prediction, so the predictors take the
// physical window length in seconds (window = n t).

// sigma*_i sqrt(lambda_bar_i window).
std::vector<double> fclt1_std(const CalibratedParams& params, double window);
double fclt1_std(const AssetParams& params, double window);

// sqrt(sigma*_i^2 lambda_bar_i window + a*_i^2 sigma_i^2 window).
std::vector<double> fclt2_std(const CalibratedParams& params, double window);
double fclt2_std(const AssetParams& params, double window);

/// Residuals S(b) - S(a) - a* (N(b) - N(a)) over consecutive windows
/// (start + k w, start + (k+1) w] inside [start, end]. Jumps landing exactly on
/// a boundary belong to the window that boundary closes. With a* = 0 these are
/// the raw windowed price differences.
std::vector<double> fclt1_residuals(std::span<const double> jump_times, std::span<const double> jump_sizes,
                                    double a_star, double window, double start, double end);

std::vector<double> fclt1_residuals(const PricePath& path, std::size_t asset, double a_star, double window,
                                    double start, double end);

/// Draws of S_{nt} - S_0 from the FCLT-II diffusion approximation:
/// a* lambda_bar nt + sqrt(nt) (sigma* sqrt(lambda_bar) Z1 + a* sigma Z2),
/// Z1 and Z2 independent standard normals. Rows are paths, columns assets.
Eigen::MatrixXd approximate_price_fclt2(const CalibratedParams& params, double t, double n, std::size_t n_paths,
                                        std::uint64_t seed);

}  // namespace mgcpp
