#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mgcpp/lob.hpp"
#include "mgcpp/markov_price.hpp"
#include "mgcpp/point_process.hpp"
#include "mgcpp/price_process.hpp"
#include "mgcpp/random.hpp"

namespace mgcpp::test {

inline double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

// Random ergodic chain: entries uniform in (0.1, 1), rows normalized.
inline Eigen::MatrixXd random_transition(int n, std::uint64_t seed) {
    Rng rng(seed, 99);
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) P(i, j) = 0.1 + 0.9 * rng.uniform();
        P.row(i) /= P.row(i).sum();
    }
    return P;
}

// Asymptotic variance through the fundamental matrix Z = (I - P + 1 pi)^-1:
// sigma^2 = b' D (2 Z - I - 1 pi) b with D = diag(pi). Uses an explicit
// inverse, unlike the library's LU solve on (P + Pi - I).
inline double fundamental_matrix_variance(const Eigen::MatrixXd& P, const Eigen::VectorXd& a) {
    const auto n = P.rows();
    // Stationary law by power iteration.
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 100000; ++it) {
        Eigen::RowVectorXd next = pi * P;
        if ((next - pi).cwiseAbs().maxCoeff() < 1e-16) {
            pi = next;
            break;
        }
        pi = next;
    }
    pi /= pi.sum();
    const Eigen::MatrixXd Pi = Eigen::VectorXd::Ones(n) * pi;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Z = (I - P + Pi).inverse();
    const double a_star = pi.dot(a);
    const Eigen::VectorXd b = a - Eigen::VectorXd::Constant(n, a_star);
    const Eigen::MatrixXd D = pi.transpose().asDiagonal();
    return b.dot(D * (2.0 * Z - I - Pi) * b);
}

// Price-change sequence for an asset simulated on (start, start + horizon].
inline PriceChangeSeq synthetic_changes(double lambda, double p_uu, double p_dd, double start, double horizon,
                                        std::uint64_t seed, double delta = 0.005, double s0 = 100.0) {
    const std::vector<double> rates{lambda};
    const auto events = simulate_poisson(rates, horizon, seed);
    const std::vector<TransitionModel> models{TransitionModel::two_state(p_uu, p_dd, delta)};
    const std::vector<double> initial{s0};
    const auto path = simulate_mgcpp(events, models, initial, seed + 1);
    PriceChangeSeq seq;
    seq.initial_mid = s0;
    seq.initial_mid_twice = std::llround(s0 * kMidTwiceScale);
    seq.start_time = start;
    seq.end_time = start + horizon;
    const auto jumps = path.jumps(0);
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        seq.times.push_back(start + events.times[0][k]);
        seq.changes.push_back(jumps[k]);
        seq.change_units.push_back(std::llround(jumps[k] * kMidTwiceScale));
    }
    return seq;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mgcpp_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace mgcpp::test
