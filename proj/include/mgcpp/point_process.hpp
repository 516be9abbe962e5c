#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mgcpp {

// Arrival times of a d-dimensional point process on [0, horizon].
struct EventTimes {
    std::vector<std::vector<double>> times;
    double horizon = 0.0;

    std::size_t dimension() const { return times.size(); }
    std::size_t count(std::size_t i) const { return times.at(i).size(); }
    std::size_t total() const;
};

// Checks sortedness and the [0, horizon] range; throws Parameter otherwise.
void validate(const EventTimes& events);

/// Linear multivariate Hawkes process with exponential kernels
/// mu_ij(t) = alpha_ij * exp(-beta_ij * t).
struct HawkesSpec {
    Eigen::VectorXd base;   // lambda_i, events/second
    Eigen::MatrixXd alpha;  // 1/second
    Eigen::MatrixXd beta;   // 1/second

    std::size_t dimension() const { return static_cast<std::size_t>(base.size()); }
    // K = integral of mu over [0, inf) = alpha / beta elementwise.
    Eigen::MatrixXd branching_matrix() const;
    double spectral_radius() const;
    // Throws Parameter on shape/sign violations, Instability when rho(K) >= 1.
    void validate() const;
};

// Long-run rate and diagonal of the FCLT covariance of the counts.
struct RateParams {
    std::vector<double> lambda_bar;
    std::vector<double> sigma_sq;
};

EventTimes simulate_poisson(std::span<const double> rates, double horizon, std::uint64_t seed);

// Ogata thinning. Between events every intensity decays, so the total
// intensity just after the current time bounds the process until the next
// candidate point.
EventTimes simulate_hawkes(const HawkesSpec& spec, double horizon, std::uint64_t seed);

// lambda_bar = (I-K)^-1 lambda, sigma_sq = diag((I-K)^-1 D (I-K)^-T) with D = diag(lambda_bar).
RateParams hawkes_limit_params(const HawkesSpec& spec);

// count_i / horizon. Empty dimensions give 0 with a warning.
std::vector<double> estimate_lambda_bar(const EventTimes& events, double horizon);

// Sample variance of counts over disjoint windows [k w, (k+1) w), divided by w.
std::vector<double> estimate_sigma_sq(const EventTimes& events, double window);

// Full sample covariance of disjoint-window counts divided by w. Diagnostic only.
Eigen::MatrixXd window_count_covariance(const EventTimes& events, double window);

// Counts of each dimension over consecutive disjoint windows of length w.
std::vector<std::vector<double>> window_counts(const EventTimes& events, double window);

}  // namespace mgcpp
