#include <cmath>

#include <gtest/gtest.h>

#include "mgcpp/error.hpp"
#include "mgcpp/price_process.hpp"
#include "support.hpp"

using namespace mgcpp;

namespace {

constexpr double kDelta = 0.005;

// Reference INTC parameters.
AssetParams intc() {
    return AssetParams{.lambda_bar = 0.1366, .sigma_sq = 2.0680, .a_star = -2.5023e-4, .sigma_star = 0.005626,
                       .delta = kDelta};
}

CalibratedParams one(AssetParams a) { return CalibratedParams{{a}}; }

}  // namespace

TEST(SimulateMgcpp, NoEventsKeepsInitialPrice) {
    EventTimes ev;
    ev.horizon = 10;
    ev.times = {{}, {}};
    const std::vector<TransitionModel> models(2, TransitionModel::two_state(0.6, 0.6, kDelta));
    const std::vector<double> s0{10.0, 20.0};
    const auto path = simulate_mgcpp(ev, models, s0, 1);
    EXPECT_DOUBLE_EQ(path.price_at(0, 5.0), 10.0);
    EXPECT_DOUBLE_EQ(path.price_at(1, 10.0), 20.0);
}

TEST(SimulateMgcpp, ConstantMarksAddUp) {
    const std::vector<double> rates{3.0};
    const auto ev = simulate_poisson(rates, 100, 2);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Constant(2, 2, 0.5);
    const std::vector<TransitionModel> models{TransitionModel({kDelta, kDelta}, P)};
    const std::vector<double> s0{50.0};
    const auto path = simulate_mgcpp(ev, models, s0, 3);
    EXPECT_NEAR(path.prices[0].back(), 50.0 + kDelta * static_cast<double>(ev.count(0)), 1e-9);
}

TEST(SimulateMgcpp, PiecewiseConstantBetweenEvents) {
    const std::vector<double> rates{1.0};
    const auto ev = simulate_poisson(rates, 50, 4);
    const std::vector<TransitionModel> models{TransitionModel::two_state(0.6, 0.4, kDelta)};
    const std::vector<double> s0{1.0};
    const auto path = simulate_mgcpp(ev, models, s0, 5);
    const auto& t = ev.times[0];
    ASSERT_GE(t.size(), 3u);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double mid = 0.5 * (t[k] + t[k + 1]);
        EXPECT_DOUBLE_EQ(path.price_at(0, mid), path.prices[0][k]);
        EXPECT_DOUBLE_EQ(path.price_at(0, t[k]), path.prices[0][k]);
    }
    EXPECT_DOUBLE_EQ(path.price_at(0, 0.5 * t[0]), 1.0);
}

TEST(SimulateMgcpp, DimensionMismatch) {
    const std::vector<double> rates{1.0, 1.0};
    const auto ev = simulate_poisson(rates, 10, 1);
    const std::vector<TransitionModel> models{TransitionModel::two_state(0.6, 0.4, kDelta)};
    const std::vector<double> s0{1.0, 1.0};
    EXPECT_THROW(simulate_mgcpp(ev, models, s0, 1), Error);
}

TEST(SimulateMgcpp, DeterministicPerSeed) {
    const std::vector<double> rates{1.0, 2.0};
    const auto ev = simulate_poisson(rates, 100, 1);
    const std::vector<TransitionModel> models(2, TransitionModel::two_state(0.6, 0.4, kDelta));
    const std::vector<double> s0{1.0, 2.0};
    EXPECT_EQ(simulate_mgcpp(ev, models, s0, 9).prices, simulate_mgcpp(ev, models, s0, 9).prices);
}

TEST(SimulateMgcpp, SymmetricChainTerminalSkewNearZero) {
    // Fixed number of events per path keeps this fast; symmetry is a property of the chain.
    const TransitionModel model = TransitionModel::two_state(0.7, 0.7, kDelta);
    const ChainSampler sampler(model);
    Rng rng(31);
    const int paths = 100000, steps = 40;
    std::vector<double> terminal(paths);
    for (int p = 0; p < paths; ++p) {
        int s = sampler.initial(rng);
        double x = model.values()[s];
        for (int k = 1; k < steps; ++k) {
            s = sampler.next(s, rng);
            x += model.values()[s];
        }
        terminal[p] = x;
    }
    const double m = test::mean(terminal);
    double m2 = 0, m3 = 0;
    for (double x : terminal) {
        m2 += (x - m) * (x - m);
        m3 += (x - m) * (x - m) * (x - m);
    }
    m2 /= paths;
    m3 /= paths;
    EXPECT_LT(std::abs(m3 / std::pow(m2, 1.5)), 0.05);
}

TEST(Predictors, LlnDrift) {
    EXPECT_NEAR(lln_drift(one(intc()), 23400, 1)[0], -0.79985, 5e-5);
    auto flat = intc();
    flat.a_star = 0;
    EXPECT_EQ(lln_drift(one(flat), 100, 3)[0], 0.0);
    EXPECT_DOUBLE_EQ(lln_drift(one(intc()), 10, 2)[0], 2 * lln_drift(one(intc()), 10, 1)[0]);
}

TEST(Predictors, Fclt1Coefficient) {
    EXPECT_NEAR(fclt1_std(intc(), 1.0), 0.0020794, 1e-7);
    EXPECT_EQ(fclt1_std(intc(), 0.0), 0.0);
    EXPECT_NEAR(fclt1_std(intc(), 40.0), 2.0 * fclt1_std(intc(), 10.0), 1e-15);
}

TEST(Predictors, Fclt2Coefficient) {
    EXPECT_NEAR(fclt2_std(intc(), 1.0), 0.0021103, 1e-7);
    auto p = intc();
    p.a_star = 0;
    EXPECT_DOUBLE_EQ(fclt2_std(p, 7.0), fclt1_std(p, 7.0));
    p = intc();
    p.sigma_sq = 0;
    EXPECT_DOUBLE_EQ(fclt2_std(p, 7.0), fclt1_std(p, 7.0));
}

TEST(Predictors, OrderingAndMonotonicity) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        AssetParams p{.lambda_bar = 0.01 + rng.uniform(), .sigma_sq = 3 * rng.uniform(),
                      .a_star = 0.01 * (rng.uniform() - 0.5), .sigma_star = 0.01 * rng.uniform(), .delta = kDelta};
        const double w = 0.1 + 100 * rng.uniform();
        EXPECT_GE(fclt2_std(p, w), fclt1_std(p, w));
        EXPECT_GT(fclt1_std(p, 1.1 * w), fclt1_std(p, w));
        EXPECT_GT(fclt2_std(p, 1.1 * w), fclt2_std(p, w));
        auto q = p;
        q.sigma_star *= 1.1;
        EXPECT_GT(fclt1_std(q, w), fclt1_std(p, w));
        EXPECT_GT(fclt2_std(q, w), fclt2_std(p, w));
        q = p;
        q.lambda_bar *= 1.1;
        EXPECT_GT(fclt1_std(q, w), fclt1_std(p, w));
        EXPECT_GT(fclt2_std(q, w), fclt2_std(p, w));
    }
}

TEST(Predictors, VectorOverloads) {
    CalibratedParams params{{intc(), intc()}};
    params.assets[1].sigma_star = 0.001;
    const auto f1 = fclt1_std(params, 4.0);
    ASSERT_EQ(f1.size(), 2u);
    EXPECT_DOUBLE_EQ(f1[1], fclt1_std(params.assets[1], 4.0));
    EXPECT_DOUBLE_EQ(fclt2_std(params, 4.0)[0], fclt2_std(params.assets[0], 4.0));
}

TEST(Params, Validation) {
    auto p = intc();
    EXPECT_NO_THROW(p.validate());
    p.lambda_bar = 0;
    EXPECT_THROW(p.validate(), Error);
    p = intc();
    p.sigma_star = -1;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Residuals, RawDifferencesWhenNoDrift) {
    const std::vector<double> t{0.5, 1.0, 1.5, 2.5, 3.9};
    const std::vector<double> j{0.005, -0.005, 0.01, 0.005, -0.005};
    const auto r = fclt1_residuals(t, j, 0.0, 1.0, 0.0, 4.0);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_DOUBLE_EQ(r[0], 0.0);    // (0, 1]: boundary event at 1.0 belongs here
    EXPECT_DOUBLE_EQ(r[1], 0.01);   // (1, 2]
    EXPECT_DOUBLE_EQ(r[2], 0.005);  // (2, 3]
    EXPECT_DOUBLE_EQ(r[3], -0.005);
}

TEST(Residuals, ExactCancellation) {
    const std::vector<double> t{1, 2, 3};
    const std::vector<double> j{kDelta, kDelta, kDelta};
    const auto r = fclt1_residuals(t, j, kDelta, 10.0, 0.0, 10.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 0.0, 1e-18);
}

TEST(Residuals, WindowLargerThanSpan) {
    const std::vector<double> t{1};
    const std::vector<double> j{kDelta};
    EXPECT_THROW(fclt1_residuals(t, j, 0.0, 20.0, 0.0, 10.0), Error);
}

TEST(Residuals, MatchFclt1StdOnSimulatedPath) {
    const std::vector<double> rates{1.0};
    const auto ev = simulate_poisson(rates, 1e5, 6);
    const auto model = TransitionModel::two_state(0.55, 0.55, kDelta);
    const std::vector<TransitionModel> models{model};
    const std::vector<double> s0{100.0};
    const auto path = simulate_mgcpp(ev, models, s0, 7);
    const auto lc = sigma_star_general(model);
    const auto r = fclt1_residuals(path, 0, lc.a_star, 10.0, 0.0, 1e5);
    const AssetParams p{.lambda_bar = 1.0, .sigma_sq = 1.0, .a_star = lc.a_star, .sigma_star = lc.sigma_star,
                        .delta = kDelta};
    // 10^4 windows: 3 sigma of the std estimate is about 2%, plus the finite-window bias.
    EXPECT_NEAR(std::sqrt(test::variance(r)) / fclt1_std(p, 10.0), 1.0, 0.04);
}

TEST(Residuals, Fclt2Decomposition) {
    // Raw windowed variance = residual variance + a*^2 count variance (cross-term vanishes).
    const std::vector<double> rates{1.0};
    const double horizon = 2e5, w = 10.0;
    const auto ev = simulate_poisson(rates, horizon, 16);
    const auto model = TransitionModel::two_state(0.8, 0.4, kDelta);
    const std::vector<TransitionModel> models{model};
    const std::vector<double> s0{100.0};
    const auto path = simulate_mgcpp(ev, models, s0, 17);
    const double a = a_star(model);
    const auto raw = fclt1_residuals(path, 0, 0.0, w, 0.0, horizon);
    const auto centered = fclt1_residuals(path, 0, a, w, 0.0, horizon);
    std::vector<double> counts(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) counts[k] = (raw[k] - centered[k]) / a;
    const double lhs = test::variance(raw);
    const double rhs = test::variance(centered) + a * a * test::variance(counts);
    EXPECT_NEAR(lhs / rhs, 1.0, 0.05);
}

TEST(ApproximatePrice, DeterministicWhenNoNoise) {
    auto p = intc();
    p.sigma_star = 0;
    p.sigma_sq = 0;
    const auto draws = approximate_price_fclt2(one(p), 1.0, 1000, 5, 1);
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(draws(i, 0), lln_drift(one(p), 1.0, 1000)[0]);
}

TEST(ApproximatePrice, MomentsMatchPredictors) {
    const auto params = one(intc());
    const std::size_t paths = 1'000'000;
    const auto draws = approximate_price_fclt2(params, 1.0, 600, paths, 4);
    const Eigen::VectorXd col = draws.col(0);
    const double m = col.mean();
    const double sd = std::sqrt((col.array() - m).square().sum() / static_cast<double>(paths - 1));
    const double target = fclt2_std(params.assets[0], 600.0);
    EXPECT_NEAR(sd / target, 1.0, 0.005);
    EXPECT_NEAR(m, lln_drift(params, 1.0, 600)[0], 3.0 * target / std::sqrt(static_cast<double>(paths)));
}

TEST(ApproximatePrice, Shape) {
    const auto draws = approximate_price_fclt2(CalibratedParams{{intc(), intc(), intc()}}, 1.0, 10, 7, 2);
    EXPECT_EQ(draws.rows(), 7);
    EXPECT_EQ(draws.cols(), 3);
    EXPECT_THROW(approximate_price_fclt2(one(intc()), 1.0, 10, 0, 2), Error);
}
