#include "mgcpp/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/log.hpp"
#include "mgcpp/random.hpp"

namespace mgcpp {

std::size_t EventTimes::total() const {
    std::size_t n = 0;
    for (const auto& dim : times) n += dim.size();
    return n;
}

void validate(const EventTimes& events) {
    if (!(events.horizon >= 0.0)) throw Error(ErrorKind::Parameter, "negative horizon");
    for (std::size_t i = 0; i < events.dimension(); ++i) {
        const auto& t = events.times[i];
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k] < 0.0 || t[k] > events.horizon) {
                throw Error(ErrorKind::Parameter,
                            fmt::format("dimension {}: time {} outside [0, {}]", i, t[k], events.horizon));
            }
            if (k > 0 && !(t[k] > t[k - 1])) {
                throw Error(ErrorKind::Parameter, fmt::format("dimension {}: times not strictly increasing", i));
            }
        }
    }
}

Eigen::MatrixXd HawkesSpec::branching_matrix() const {
    return alpha.cwiseQuotient(beta);
}

double HawkesSpec::spectral_radius() const {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(branching_matrix(), false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void HawkesSpec::validate() const {
    const auto d = base.size();
    if (d == 0) throw Error(ErrorKind::Parameter, "Hawkes spec has no dimensions");
    if (alpha.rows() != d || alpha.cols() != d || beta.rows() != d || beta.cols() != d) {
        throw Error(ErrorKind::Parameter, "alpha and beta must be d x d");
    }
    if ((base.array() <= 0.0).any()) throw Error(ErrorKind::Parameter, "base rates must be positive");
    if ((alpha.array() < 0.0).any()) throw Error(ErrorKind::Parameter, "alpha must be non-negative");
    if ((beta.array() <= 0.0).any()) throw Error(ErrorKind::Parameter, "beta must be positive");
    const double rho = spectral_radius();
    if (!(rho < 1.0)) {
        throw Error(ErrorKind::Instability,
                    fmt::format("spectral radius of the branching matrix is {:.6g} (must be < 1)", rho));
    }
}

EventTimes simulate_poisson(std::span<const double> rates, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be positive");
    EventTimes events;
    events.horizon = horizon;
    events.times.resize(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0)) throw Error(ErrorKind::Parameter, fmt::format("rate {} must be positive", i));
        Rng rng(seed, i);
        auto& out = events.times[i];
        out.reserve(static_cast<std::size_t>(rates[i] * horizon * 1.01) + 16);
        double t = rng.exponential(rates[i]);
        while (t <= horizon) {
            out.push_back(t);
            t += rng.exponential(rates[i]);
        }
    }
    return events;
}

EventTimes simulate_hawkes(const HawkesSpec& spec, double horizon, std::uint64_t seed) {
    spec.validate();
    if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be positive");
    const auto d = spec.dimension();
    Rng rng(seed);

    EventTimes events;
    events.horizon = horizon;
    events.times.resize(d);

    // excitation[i * d + j]: contribution of past dimension-j events to lambda_i at `now`.
    std::vector<double> excitation(d * d, 0.0);
    std::vector<double> intensity(d);
    auto refresh = [&] {
        for (std::size_t i = 0; i < d; ++i) {
            double value = spec.base[static_cast<Eigen::Index>(i)];
            for (std::size_t j = 0; j < d; ++j) value += excitation[i * d + j];
            intensity[i] = value;
        }
    };
    refresh();

    double now = 0.0;
    while (true) {
        const double bound = std::accumulate(intensity.begin(), intensity.end(), 0.0);
        const double candidate = now + rng.exponential(bound);
        if (candidate > horizon) break;

        const double dt = candidate - now;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                excitation[i * d + j] *= std::exp(-spec.beta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * dt);
            }
        }
        refresh();
        now = candidate;

        const double total = std::accumulate(intensity.begin(), intensity.end(), 0.0);
        const double u = rng.uniform() * bound;
        if (u >= total) continue;

        // The accepted point's dimension reuses u against cumulative intensities.
        std::size_t dim = 0;
        double cumulative = intensity[0];
        while (dim + 1 < d && u >= cumulative) cumulative += intensity[++dim];

        events.times[dim].push_back(now);
        for (std::size_t i = 0; i < d; ++i) {
            excitation[i * d + dim] += spec.alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(dim));
        }
        refresh();
    }
    return events;
}

RateParams hawkes_limit_params(const HawkesSpec& spec) {
    spec.validate();
    const auto d = static_cast<Eigen::Index>(spec.dimension());
    const Eigen::MatrixXd i_minus_k = Eigen::MatrixXd::Identity(d, d) - spec.branching_matrix();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(i_minus_k);
    if (!lu.isInvertible()) throw Error(ErrorKind::Instability, "I - K is singular");
    const Eigen::MatrixXd inverse = lu.inverse();
    const Eigen::VectorXd lambda_bar = inverse * spec.base;
    const Eigen::MatrixXd covariance = inverse * lambda_bar.asDiagonal() * inverse.transpose();

    RateParams params;
    params.lambda_bar.assign(lambda_bar.data(), lambda_bar.data() + d);
    params.sigma_sq.resize(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) params.sigma_sq[static_cast<std::size_t>(i)] = covariance(i, i);
    return params;
}

std::vector<double> estimate_lambda_bar(const EventTimes& events, double horizon) {
    if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be positive");
    std::vector<double> rates(events.dimension());
    for (std::size_t i = 0; i < events.dimension(); ++i) {
        if (events.count(i) == 0) log_warn(fmt::format("dimension {} has no events; rate estimate is 0", i));
        rates[i] = static_cast<double>(events.count(i)) / horizon;
    }
    return rates;
}

std::vector<std::vector<double>> window_counts(const EventTimes& events, double window) {
    if (!(window > 0.0)) throw Error(ErrorKind::Parameter, "window must be positive");
    const auto n_windows = static_cast<std::size_t>(std::floor(events.horizon / window + 1e-9));
    std::vector<std::vector<double>> counts(events.dimension(), std::vector<double>(n_windows, 0.0));
    for (std::size_t i = 0; i < events.dimension(); ++i) {
        for (double t : events.times[i]) {
            const auto k = static_cast<std::size_t>(std::floor(t / window));
            if (k < n_windows) counts[i][k] += 1.0;
        }
    }
    return counts;
}

Eigen::MatrixXd window_count_covariance(const EventTimes& events, double window) {
    const auto counts = window_counts(events, window);
    const auto d = events.dimension();
    const std::size_t n = d == 0 ? 0 : counts.front().size();
    if (n < 2) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("only {} windows of length {} fit the horizon {}", n, window, events.horizon));
    }
    if (n < 30) log_warn(fmt::format("variance estimated from only {} windows", n));

    std::vector<double> means(d);
    for (std::size_t i = 0; i < d; ++i) {
        means[i] = std::accumulate(counts[i].begin(), counts[i].end(), 0.0) / static_cast<double>(n);
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += (counts[i][k] - means[i]) * (counts[j][k] - means[j]);
            const double value = acc / static_cast<double>(n - 1) / window;
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    }
    return cov;
}

std::vector<double> estimate_sigma_sq(const EventTimes& events, double window) {
    const Eigen::MatrixXd cov = window_count_covariance(events, window);
    std::vector<double> out(events.dimension());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace mgcpp
