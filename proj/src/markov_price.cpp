#include "mgcpp/markov_price.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "mgcpp/error.hpp"
#include "mgcpp/log.hpp"
#include "mgcpp/random.hpp"

namespace mgcpp {
namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-10;
constexpr double kNegativeVarianceTolerance = 1e-12;

using Index = Eigen::Index;

double stationary_residual(const Eigen::MatrixXd& transition, const Eigen::VectorXd& pi) {
    return (pi.transpose() * transition - pi.transpose()).cwiseAbs().maxCoeff();
}

// Boolean transitive closure; reach[i][j] means j reachable from i in >= 0 steps.
std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& transition) {
    const auto n = static_cast<std::size_t>(transition.rows());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (transition(static_cast<Index>(i), static_cast<Index>(j)) > 0.0) reach[i][j] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    return reach;
}

double clamp_variance(double value) {
    if (value < -kNegativeVarianceTolerance) {
        throw Error(ErrorKind::InternalConsistency, fmt::format("negative asymptotic variance {:.6g}", value));
    }
    return std::max(value, 0.0);
}

}  // namespace

void check_row_stochastic(const Eigen::MatrixXd& transition) {
    if (transition.rows() < 2 || transition.rows() != transition.cols()) {
        throw Error(ErrorKind::Parameter, "transition matrix must be square with at least 2 states");
    }
    for (Index i = 0; i < transition.rows(); ++i) {
        for (Index j = 0; j < transition.cols(); ++j) {
            const double p = transition(i, j);
            if (!(p >= 0.0 && p <= 1.0)) {
                throw Error(ErrorKind::Parameter, fmt::format("P({}, {}) = {} outside [0, 1]", i, j, p));
            }
        }
        const double row_sum = transition.row(i).sum();
        if (std::abs(row_sum - 1.0) > kRowTolerance) {
            throw Error(ErrorKind::Parameter, fmt::format("row {} of P sums to {:.17g}", i, row_sum));
        }
    }
}

std::size_t recurrent_class_count(const Eigen::MatrixXd& transition) {
    const auto reach = reachability(transition);
    const std::size_t n = reach.size();
    std::vector<bool> counted(n, false);
    std::size_t classes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (counted[i]) continue;
        bool closed = true;
        for (std::size_t j = 0; j < n && closed; ++j) {
            if (reach[i][j] && !reach[j][i]) closed = false;
        }
        if (!closed) continue;
        ++classes;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j]) counted[j] = true;
        }
    }
    return classes;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
    check_row_stochastic(transition);
    const std::size_t classes = recurrent_class_count(transition);
    if (classes != 1) {
        throw Error(ErrorKind::NoUniqueStationary, fmt::format("chain has {} recurrent classes", classes));
    }
    const Index n = transition.rows();
    Eigen::MatrixXd system = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = system.partialPivLu().solve(rhs);

    if (pi.minCoeff() < -kStationaryTolerance) {
        throw Error(ErrorKind::InternalConsistency, "stationary solve produced a negative probability");
    }
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    const double residual = stationary_residual(transition, pi);
    if (residual > kStationaryTolerance) {
        throw Error(ErrorKind::InternalConsistency, fmt::format("stationary residual {:.3g}", residual));
    }
    return pi;
}

TransitionModel::TransitionModel(std::vector<double> values, Eigen::MatrixXd transition)
    : values_(std::move(values)), transition_(std::move(transition)) {
    if (static_cast<Index>(values_.size()) != transition_.rows()) {
        throw Error(ErrorKind::Parameter, "state values and transition matrix differ in size");
    }
    pi_star_ = stationary_distribution(transition_);
}

TransitionModel::TransitionModel(std::vector<double> values, Eigen::MatrixXd transition, Eigen::VectorXd pi_star)
    : values_(std::move(values)), transition_(std::move(transition)), pi_star_(std::move(pi_star)) {
    if (static_cast<Index>(values_.size()) != transition_.rows() || pi_star_.size() != transition_.rows()) {
        throw Error(ErrorKind::Parameter, "state values, P and pi* differ in size");
    }
    check_row_stochastic(transition_);
    if (recurrent_class_count(transition_) != 1) {
        throw Error(ErrorKind::NoUniqueStationary, "chain has more than one recurrent class");
    }
    if (pi_star_.minCoeff() < 0.0 || std::abs(pi_star_.sum() - 1.0) > kStationaryTolerance) {
        throw Error(ErrorKind::Parameter, "pi* must be a probability vector");
    }
    if (stationary_residual(transition_, pi_star_) > kStationaryTolerance) {
        throw Error(ErrorKind::Parameter, "pi* is not stationary for P");
    }
}

TransitionModel TransitionModel::two_state(double p_uu, double p_dd, double delta) {
    if (!(p_uu >= 0.0 && p_uu <= 1.0 && p_dd >= 0.0 && p_dd <= 1.0)) {
        throw Error(ErrorKind::Parameter, "two-state probabilities must lie in [0, 1]");
    }
    Eigen::MatrixXd transition(2, 2);
    transition << p_uu, 1.0 - p_uu, 1.0 - p_dd, p_dd;
    return TransitionModel({delta, -delta}, std::move(transition));
}

TransitionModel TransitionModel::shifted(double c) const {
    std::vector<double> values = values_;
    for (auto& value : values) value += c;
    return TransitionModel(std::move(values), transition_, pi_star_);
}

double a_star(const TransitionModel& model) {
    const Eigen::Map<const Eigen::VectorXd> values(model.values().data(), static_cast<Index>(model.n_states()));
    return model.pi_star().dot(values);
}

LimitConstants sigma_star_general(const TransitionModel& model) {
    const Index n = static_cast<Index>(model.n_states());
    const Eigen::MatrixXd& P = model.transition();
    const Eigen::VectorXd& pi = model.pi_star();

    LimitConstants out;
    out.a_star = a_star(model);
    out.b = Eigen::Map<const Eigen::VectorXd>(model.values().data(), n).array() - out.a_star;

    // Pi* has every row equal to pi*.
    const Eigen::MatrixXd system = P + Eigen::VectorXd::Ones(n) * pi.transpose() - Eigen::MatrixXd::Identity(n, n);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    if (!(lu.rcond() > 1e-13)) {
        throw Error(ErrorKind::Ergodicity, fmt::format("P + Pi* - I is singular (rcond {:.3g})", lu.rcond()));
    }
    out.g = lu.solve(out.b);
    const double residual = (system * out.g - out.b).cwiseAbs().maxCoeff();
    if (residual > 1e-10) {
        throw Error(ErrorKind::Ergodicity, fmt::format("fundamental solve residual {:.3g}", residual));
    }

    out.v.resize(n);
    for (Index k = 0; k < n; ++k) {
        double squared = 0.0;
        double linear = 0.0;
        for (Index j = 0; j < n; ++j) {
            const double diff = out.g(j) - out.g(k);
            squared += diff * diff * P(k, j);
            linear += diff * P(k, j);
        }
        out.v(k) = out.b(k) * out.b(k) + squared - 2.0 * out.b(k) * linear;
    }
    out.sigma_star_sq = clamp_variance(pi.dot(out.v));
    out.sigma_star = std::sqrt(out.sigma_star_sq);
    return out;
}

LimitConstants sigma_star_two_state(double p, double p_prime, double delta) {
    if (!(p > 0.0 && p < 1.0 && p_prime > 0.0 && p_prime < 1.0)) {
        throw Error(ErrorKind::Parameter, fmt::format("transition probabilities ({}, {}) must lie in (0, 1)", p, p_prime));
    }
    const double pi = (1.0 - p_prime) / (2.0 - p - p_prime);
    const double denom = p + p_prime - 2.0;

    LimitConstants out;
    out.a_star = delta * (2.0 * pi - 1.0);
    out.sigma_star_sq = clamp_variance(
        4.0 * delta * delta * ((1.0 - p_prime + pi * (p_prime - p)) / (denom * denom) - pi * (1.0 - pi)));
    out.sigma_star = std::sqrt(out.sigma_star_sq);
    out.b.resize(2);
    out.b << delta - out.a_star, -delta - out.a_star;
    return out;
}

DiscretizationScheme parse_scheme(std::string_view name) {
    if (name == "tick-buckets") return DiscretizationScheme::TickBuckets;
    if (name == "quantile") return DiscretizationScheme::Quantile;
    throw Error(ErrorKind::Parameter, fmt::format("unknown discretization scheme '{}'", std::string(name)));
}

std::string_view to_string(DiscretizationScheme scheme) {
    return scheme == DiscretizationScheme::TickBuckets ? "tick-buckets" : "quantile";
}

Discretization discretize_changes(std::span<const double> changes, int n_states, double delta,
                                  DiscretizationScheme scheme) {
    if (n_states < 2 || n_states % 2 != 0) {
        throw Error(ErrorKind::Parameter, fmt::format("n_states must be even and >= 2, got {}", n_states));
    }
    if (!(delta > 0.0)) throw Error(ErrorKind::Parameter, "delta must be positive");
    if (changes.empty()) throw Error(ErrorKind::InsufficientData, "no price changes to discretize");

    const int m = n_states / 2;
    Discretization out;
    out.states.resize(changes.size());
    out.values.resize(static_cast<std::size_t>(n_states));

    std::size_t n_up = 0;
    for (double c : changes) n_up += c > 0.0 ? 1 : 0;
    out.degenerate = n_up == 0 || n_up == changes.size();
    if (out.degenerate) log_warn("all price changes share one sign; the fitted chain is degenerate");

    // Index layout: up state of level L (1..m) at m - L, down state of level L at m - 1 + L.
    auto up_index = [m](int level) { return m - level; };
    auto down_index = [m](int level) { return m - 1 + level; };

    if (scheme == DiscretizationScheme::TickBuckets) {
        for (int level = 1; level <= m; ++level) {
            out.values[static_cast<std::size_t>(up_index(level))] = level * delta;
            out.values[static_cast<std::size_t>(down_index(level))] = -level * delta;
        }
        for (std::size_t k = 0; k < changes.size(); ++k) {
            const double c = changes[k];
            const auto ticks = static_cast<long long>(std::llround(std::abs(c) / delta));
            const int level = static_cast<int>(std::clamp<long long>(ticks, 1, m));
            out.states[k] = c > 0.0 ? up_index(level) : down_index(level);
        }
        return out;
    }

    for (int sign : {+1, -1}) {
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < changes.size(); ++k) {
            if ((sign > 0) == (changes[k] > 0.0)) order.push_back(k);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(changes[a]) < std::abs(changes[b]);
        });
        std::vector<double> sums(static_cast<std::size_t>(m), 0.0);
        std::vector<std::size_t> sizes(static_cast<std::size_t>(m), 0);
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const auto bucket = static_cast<int>(rank * static_cast<std::size_t>(m) / order.size());
            const int level = bucket + 1;
            out.states[order[rank]] = sign > 0 ? up_index(level) : down_index(level);
            sums[static_cast<std::size_t>(bucket)] += changes[order[rank]];
            ++sizes[static_cast<std::size_t>(bucket)];
        }
        for (int level = 1; level <= m; ++level) {
            const auto b = static_cast<std::size_t>(level - 1);
            const int index = sign > 0 ? up_index(level) : down_index(level);
            if (sizes[b] == 0) {
                log_warn(fmt::format("quantile bucket {} is empty; using {} ticks as its value", index, sign * level));
                out.values[static_cast<std::size_t>(index)] = sign * level * delta;
            } else {
                out.values[static_cast<std::size_t>(index)] = sums[b] / static_cast<double>(sizes[b]);
            }
        }
    }
    return out;
}

TransitionEstimate estimate_transition_matrix(std::span<const int> states, int n_states) {
    if (n_states < 2) throw Error(ErrorKind::Parameter, "need at least 2 states");
    if (states.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("need at least 2 observations to count transitions, got {}", states.size()));
    }
    const Index n = n_states;
    TransitionEstimate out;
    out.counts = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k] < 0 || states[k] >= n_states) {
            throw Error(ErrorKind::Parameter, fmt::format("state {} out of range", states[k]));
        }
        if (k > 0) out.counts(states[k - 1], states[k]) += 1.0;
    }
    out.transition = out.counts;
    for (Index i = 0; i < n; ++i) {
        const double row_total = out.counts.row(i).sum();
        if (row_total == 0.0) {
            out.transition.row(i).setConstant(1.0 / static_cast<double>(n));
            out.uniform_rows.push_back(static_cast<int>(i));
            log_warn(fmt::format("state {} has no outgoing transitions; using a uniform row", i));
        } else {
            out.transition.row(i) /= row_total;
        }
    }
    return out;
}

ChainSampler::ChainSampler(const TransitionModel& model) {
    const auto n = model.n_states();
    initial_cdf_.resize(n);
    std::partial_sum(model.pi_star().data(), model.pi_star().data() + n, initial_cdf_.begin());
    row_cdf_.resize(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += model.transition()(static_cast<Index>(i), static_cast<Index>(j));
            row_cdf_[i][j] = acc;
        }
    }
}

int ChainSampler::draw(const std::vector<double>& cumulative, double u) {
    // Last positive-probability state absorbs rounding in the final partial sum.
    for (std::size_t j = 0; j < cumulative.size(); ++j) {
        if (u < cumulative[j]) return static_cast<int>(j);
    }
    std::size_t j = cumulative.size() - 1;
    while (j > 0 && cumulative[j] == cumulative[j - 1]) --j;
    return static_cast<int>(j);
}

int ChainSampler::initial(Rng& rng) const { return draw(initial_cdf_, rng.uniform()); }

int ChainSampler::next(int state, Rng& rng) const {
    return draw(row_cdf_[static_cast<std::size_t>(state)], rng.uniform());
}

std::string model_to_json(const TransitionModel& model) {
    nlohmann::ordered_json j;
    const auto n = model.n_states();
    j["n_states"] = n;
    j["values"] = model.values();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n);
        for (std::size_t c = 0; c < n; ++c) row[c] = model.transition()(static_cast<Index>(i), static_cast<Index>(c));
        rows.push_back(row);
    }
    j["P"] = rows;
    j["pi_star"] = std::vector<double>(model.pi_star().data(), model.pi_star().data() + n);
    return j.dump(2);
}

TransitionModel model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    try {
        const auto n = j.at("n_states").get<std::size_t>();
        auto values = j.at("values").get<std::vector<double>>();
        const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
        if (values.size() != n || rows.size() != n) throw Error(ErrorKind::Parse, "model arrays disagree with n_states");
        Eigen::MatrixXd transition(static_cast<Index>(n), static_cast<Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw Error(ErrorKind::Parse, "P is not square");
            for (std::size_t c = 0; c < n; ++c) transition(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
        }
        if (j.contains("pi_star")) {
            const auto pi = j.at("pi_star").get<std::vector<double>>();
            if (pi.size() != n) throw Error(ErrorKind::Parse, "pi_star length disagrees with n_states");
            return TransitionModel(std::move(values), std::move(transition),
                                   Eigen::Map<const Eigen::VectorXd>(pi.data(), static_cast<Index>(n)));
        }
        return TransitionModel(std::move(values), std::move(transition));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

}  // namespace mgcpp
