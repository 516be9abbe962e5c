#include "mgcpp/price_process.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/random.hpp"

namespace mgcpp {

void AssetParams::validate() const {
    if (!(lambda_bar > 0.0)) throw Error(ErrorKind::Parameter, fmt::format("lambda_bar must be positive, got {}", lambda_bar));
    if (!(sigma_sq >= 0.0)) throw Error(ErrorKind::Parameter, "sigma_sq must be non-negative");
    if (!(sigma_star >= 0.0)) throw Error(ErrorKind::Parameter, "sigma_star must be non-negative");
    if (!std::isfinite(a_star)) throw Error(ErrorKind::Parameter, "a_star must be finite");
}

void CalibratedParams::validate() const {
    for (const auto& asset : assets) asset.validate();
}

double PricePath::price_at(std::size_t asset, double t) const {
    const auto& ts = times.at(asset);
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return initial.at(asset);
    return prices[asset][static_cast<std::size_t>(it - ts.begin()) - 1];
}

std::vector<double> PricePath::jumps(std::size_t asset) const {
    const auto& p = prices.at(asset);
    std::vector<double> out(p.size());
    double previous = initial.at(asset);
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] = p[k] - previous;
        previous = p[k];
    }
    return out;
}

PricePath simulate_mgcpp(const EventTimes& events, std::span<const TransitionModel> models,
                         std::span<const double> s0, std::uint64_t seed) {
    const auto d = events.dimension();
    if (models.size() != d || s0.size() != d) {
        throw Error(ErrorKind::Parameter,
                    fmt::format("{} event dimensions but {} models and {} initial prices", d, models.size(), s0.size()));
    }
    PricePath path;
    path.initial.assign(s0.begin(), s0.end());
    path.times = events.times;
    path.prices.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const ChainSampler sampler(models[i]);
        const auto& values = models[i].values();
        Rng rng(seed, i);
        auto& prices = path.prices[i];
        prices.resize(events.count(i));
        double price = s0[i];
        int state = 0;
        for (std::size_t k = 0; k < prices.size(); ++k) {
            state = k == 0 ? sampler.initial(rng) : sampler.next(state, rng);
            price += values[static_cast<std::size_t>(state)];
            prices[k] = price;
        }
    }
    return path;
}

std::vector<double> lln_drift(const CalibratedParams& params, double t, double n) {
    std::vector<double> out;
    out.reserve(params.dimension());
    for (const auto& asset : params.assets) out.push_back(n * t * asset.a_star * asset.lambda_bar);
    return out;
}

double fclt1_std(const AssetParams& params, double window) {
    return params.sigma_star * std::sqrt(params.lambda_bar * window);
}

double fclt2_std(const AssetParams& params, double window) {
    return std::sqrt(params.sigma_star * params.sigma_star * params.lambda_bar * window +
                     params.a_star * params.a_star * params.sigma_sq * window);
}

std::vector<double> fclt1_std(const CalibratedParams& params, double window) {
    std::vector<double> out;
    for (const auto& asset : params.assets) out.push_back(fclt1_std(asset, window));
    return out;
}

std::vector<double> fclt2_std(const CalibratedParams& params, double window) {
    std::vector<double> out;
    for (const auto& asset : params.assets) out.push_back(fclt2_std(asset, window));
    return out;
}

std::vector<double> fclt1_residuals(std::span<const double> jump_times, std::span<const double> jump_sizes,
                                    double a_star, double window, double start, double end) {
    if (jump_times.size() != jump_sizes.size()) {
        throw Error(ErrorKind::Parameter, "jump times and sizes differ in length");
    }
    if (!(window > 0.0)) throw Error(ErrorKind::Parameter, "window must be positive");
    const auto n_windows = static_cast<std::size_t>(std::floor((end - start) / window + 1e-9));
    if (!(end > start) || n_windows == 0) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("window {} s does not fit the span [{}, {}]", window, start, end));
    }

    std::vector<double> residuals(n_windows, 0.0);
    // Skip jumps at or before the first boundary.
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(jump_times.begin(), jump_times.end(), start) - jump_times.begin());
    for (std::size_t w = 0; w < n_windows; ++w) {
        const double right = start + static_cast<double>(w + 1) * window;
        double increment = 0.0;
        std::size_t count = 0;
        while (k < jump_times.size() && jump_times[k] <= right) {
            increment += jump_sizes[k];
            ++count;
            ++k;
        }
        residuals[w] = increment - a_star * static_cast<double>(count);
    }
    return residuals;
}

std::vector<double> fclt1_residuals(const PricePath& path, std::size_t asset, double a_star, double window,
                                    double start, double end) {
    const auto jumps = path.jumps(asset);
    return fclt1_residuals(path.times.at(asset), jumps, a_star, window, start, end);
}

Eigen::MatrixXd approximate_price_fclt2(const CalibratedParams& params, double t, double n, std::size_t n_paths,
                                        std::uint64_t seed) {
    if (n_paths == 0) throw Error(ErrorKind::Parameter, "need at least one path");
    const double horizon = n * t;
    if (!(horizon >= 0.0)) throw Error(ErrorKind::Parameter, "n t must be non-negative");
    const auto d = params.dimension();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(d));
    // One stream per asset; path p consumes draws 2p and 2p+1 of it.
    for (std::size_t i = 0; i < d; ++i) {
        const auto& a = params.assets[i];
        const double drift = a.a_star * a.lambda_bar * horizon;
        const double scale1 = a.sigma_star * std::sqrt(a.lambda_bar * horizon);
        const double scale2 = a.a_star * std::sqrt(a.sigma_sq * horizon);
        Rng rng(seed, i);
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) = drift + scale1 * z1 + scale2 * z2;
        }
    }
    return out;
}

}  // namespace mgcpp
