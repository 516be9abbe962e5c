#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mgcpp {

class Rng;

/// Embedded jump chain of price-change marks: state values a(k) in dollars,
/// a row-stochastic transition matrix P and its stationary law pi*.
///
/// Construction validates rows (sum to 1 within 1e-12, entries in [0, 1]),
/// requires a single recurrent class, and checks pi* P = pi* within 1e-10.
/// Immutable afterwards.
class TransitionModel {
public:
    TransitionModel(std::vector<double> values, Eigen::MatrixXd transition);
    TransitionModel(std::vector<double> values, Eigen::MatrixXd transition, Eigen::VectorXd pi_star);

    // States ordered (+delta, -delta); P = [[p_uu, 1-p_uu], [1-p_dd, p_dd]].
    static TransitionModel two_state(double p_uu, double p_dd, double delta);

    std::size_t n_states() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const Eigen::MatrixXd& transition() const { return transition_; }
    const Eigen::VectorXd& pi_star() const { return pi_star_; }

    // Same chain with every a(k) shifted by c.
    TransitionModel shifted(double c) const;

private:
    std::vector<double> values_;
    Eigen::MatrixXd transition_;
    Eigen::VectorXd pi_star_;
};

struct LimitConstants {
    double a_star = 0.0;          // dollars per event
    double sigma_star = 0.0;      // dollars
    double sigma_star_sq = 0.0;   // dollars^2
    Eigen::VectorXd b;            // a(k) - a*
    Eigen::VectorXd g;            // (P + Pi* - I)^-1 b; empty for the closed form
    Eigen::VectorXd v;            // per-state variance contributions; empty for the closed form
};

void check_row_stochastic(const Eigen::MatrixXd& transition);

// Number of closed communicating classes of the transition graph.
std::size_t recurrent_class_count(const Eigen::MatrixXd& transition);

// Solves pi (P - I) = 0 with the normalization row replacing the last balance equation.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

double a_star(const TransitionModel& model);

/// Per-event asymptotic variance of the centered mark sum for an n-state chain:
/// b = a - a*, g solves (P + Pi* - I) g = b by partially pivoted LU,
/// v(k) = b(k)^2 + sum_j (g(j)-g(k))^2 P(k,j) - 2 b(k) sum_j (g(j)-g(k)) P(k,j),
/// sigma*^2 = sum_k pi*_k v(k).
LimitConstants sigma_star_general(const TransitionModel& model);

// Two-state (+delta, -delta) closed form with p = p_uu, p_prime = p_dd.
LimitConstants sigma_star_two_state(double p, double p_prime, double delta);

enum class DiscretizationScheme { TickBuckets, Quantile };

DiscretizationScheme parse_scheme(std::string_view name);
std::string_view to_string(DiscretizationScheme scheme);

struct Discretization {
    std::vector<int> states;
    std::vector<double> values;  // a(k), descending
    bool degenerate = false;     // every change had the same sign
};

/// Maps price changes to n_states marks, ordered by descending value.
///
/// tick-buckets: states +m*delta ... +delta, -delta ... -m*delta with
/// m = n_states / 2; larger moves clamp to the extreme state.
/// quantile: per sign, changes ranked by magnitude (ties by arrival order)
/// are split into m equal-count buckets; a(k) is the bucket mean.
Discretization discretize_changes(std::span<const double> changes, int n_states, double delta,
                                  DiscretizationScheme scheme = DiscretizationScheme::TickBuckets);

struct TransitionEstimate {
    Eigen::MatrixXd transition;
    Eigen::MatrixXd counts;
    std::vector<int> uniform_rows;  // states with no outgoing transitions
};

// Frequency estimate P(k, j) = count(k -> j) / count(k -> .).
TransitionEstimate estimate_transition_matrix(std::span<const int> states, int n_states);

// Inverse-CDF sampling of the chain.
class ChainSampler {
public:
    explicit ChainSampler(const TransitionModel& model);

    int initial(Rng& rng) const;
    int next(int state, Rng& rng) const;

private:
    static int draw(const std::vector<double>& cumulative, double u);

    std::vector<double> initial_cdf_;
    std::vector<std::vector<double>> row_cdf_;
};

// {"n_states", "values", "P", "pi_star"}
std::string model_to_json(const TransitionModel& model);
TransitionModel model_from_json(std::string_view text);

}  // namespace mgcpp
