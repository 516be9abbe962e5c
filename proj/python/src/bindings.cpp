#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mgcpp/calibration.hpp"
#include "mgcpp/error.hpp"
#include "mgcpp/lob.hpp"
#include "mgcpp/markov_price.hpp"
#include "mgcpp/point_process.hpp"
#include "mgcpp/price_process.hpp"
#include "mgcpp/validation.hpp"

namespace py = pybind11;
using namespace mgcpp;

namespace {

StdCurve make_curve(std::vector<double> windows, std::vector<double> stds) {
    StdCurve c;
    c.windows = std::move(windows);
    c.stds = std::move(stds);
    return c;
}

EventTimes make_events(std::vector<std::vector<double>> times, double horizon) {
    EventTimes ev{std::move(times), horizon};
    validate(ev);
    return ev;
}

py::dict limits_dict(const LimitConstants& lc) {
    py::dict d;
    d["a_star"] = lc.a_star;
    d["sigma_star"] = lc.sigma_star;
    d["sigma_star_sq"] = lc.sigma_star_sq;
    d["b"] = lc.b;
    d["g"] = lc.g;
    d["v"] = lc.v;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compound point process price models for limit order book data";

    static py::exception<Error> error(m, "MgcppError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error.ptr())(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    // Markov chain
    py::class_<TransitionModel>(m, "TransitionModel")
        .def(py::init<std::vector<double>, Eigen::MatrixXd>(), py::arg("values"), py::arg("transition"))
        .def_static("two_state", &TransitionModel::two_state, py::arg("p_uu"), py::arg("p_dd"),
                    py::arg("delta") = 0.005)
        .def_property_readonly("n_states", &TransitionModel::n_states)
        .def_property_readonly("values", &TransitionModel::values)
        .def_property_readonly("transition", &TransitionModel::transition)
        .def_property_readonly("pi_star", &TransitionModel::pi_star)
        .def("shifted", &TransitionModel::shifted, py::arg("c"))
        .def("to_json", [](const TransitionModel& t) { return model_to_json(t); })
        .def_static("from_json", [](const std::string& s) { return model_from_json(s); })
        .def("__repr__", [](const TransitionModel& t) {
            return "<TransitionModel n_states=" + std::to_string(t.n_states()) + ">";
        });

    m.def("stationary_distribution", &stationary_distribution, py::arg("transition"));
    m.def("a_star", &a_star, py::arg("model"));
    m.def("sigma_star_general", [](const TransitionModel& t) { return limits_dict(sigma_star_general(t)); },
          py::arg("model"));
    m.def("sigma_star_two_state",
          [](double p, double pp, double delta) { return limits_dict(sigma_star_two_state(p, pp, delta)); },
          py::arg("p_uu"), py::arg("p_dd"), py::arg("delta") = 0.005);
    m.def(
        "discretize_changes",
        [](const std::vector<double>& changes, int n_states, double delta, const std::string& scheme) {
            const auto d = discretize_changes(changes, n_states, delta, parse_scheme(scheme));
            return py::make_tuple(d.states, d.values, d.degenerate);
        },
        py::arg("changes"), py::arg("n_states") = 2, py::arg("delta") = 0.005, py::arg("scheme") = "tick-buckets");
    m.def(
        "estimate_transition_matrix",
        [](const std::vector<int>& states, int n) { return estimate_transition_matrix(states, n).transition; },
        py::arg("states"), py::arg("n_states"));

    // Point processes
    m.def(
        "simulate_poisson",
        [](const std::vector<double>& rates, double horizon, std::uint64_t seed) {
            return simulate_poisson(rates, horizon, seed).times;
        },
        py::arg("rates"), py::arg("horizon"), py::arg("seed") = 0);
    m.def(
        "simulate_hawkes",
        [](const Eigen::VectorXd& base, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta, double horizon,
           std::uint64_t seed) { return simulate_hawkes(HawkesSpec{base, alpha, beta}, horizon, seed).times; },
        py::arg("base"), py::arg("alpha"), py::arg("beta"), py::arg("horizon"), py::arg("seed") = 0);
    m.def(
        "hawkes_limit_params",
        [](const Eigen::VectorXd& base, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta) {
            const auto p = hawkes_limit_params(HawkesSpec{base, alpha, beta});
            return py::make_tuple(p.lambda_bar, p.sigma_sq);
        },
        py::arg("base"), py::arg("alpha"), py::arg("beta"));
    m.def(
        "estimate_lambda_bar",
        [](std::vector<std::vector<double>> times, double horizon) {
            return estimate_lambda_bar(make_events(std::move(times), horizon), horizon);
        },
        py::arg("times"), py::arg("horizon"));
    m.def(
        "estimate_sigma_sq",
        [](std::vector<std::vector<double>> times, double horizon, double window) {
            return estimate_sigma_sq(make_events(std::move(times), horizon), window);
        },
        py::arg("times"), py::arg("horizon"), py::arg("window"));

    // Price process and predictors
    py::class_<AssetParams>(m, "AssetParams")
        .def(py::init([](double lambda_bar, double sigma_sq, double a_star, double sigma_star, double delta) {
                 AssetParams p{lambda_bar, sigma_sq, a_star, sigma_star, delta};
                 p.validate();
                 return p;
             }),
             py::arg("lambda_bar"), py::arg("sigma_sq"), py::arg("a_star"), py::arg("sigma_star"),
             py::arg("delta") = 0.005)
        .def_readonly("lambda_bar", &AssetParams::lambda_bar)
        .def_readonly("sigma_sq", &AssetParams::sigma_sq)
        .def_readonly("a_star", &AssetParams::a_star)
        .def_readonly("sigma_star", &AssetParams::sigma_star)
        .def_readonly("delta", &AssetParams::delta);

    m.def(
        "simulate_mgcpp",
        [](std::vector<std::vector<double>> times, double horizon, const std::vector<TransitionModel>& models,
           const std::vector<double>& s0, std::uint64_t seed) {
            const auto path = simulate_mgcpp(make_events(std::move(times), horizon), models, s0, seed);
            return path.prices;
        },
        py::arg("times"), py::arg("horizon"), py::arg("models"), py::arg("s0"), py::arg("seed") = 0);
    m.def(
        "fclt1_std", [](const AssetParams& p, double w) { return fclt1_std(p, w); }, py::arg("params"),
        py::arg("window"));
    m.def(
        "fclt2_std", [](const AssetParams& p, double w) { return fclt2_std(p, w); }, py::arg("params"),
        py::arg("window"));
    m.def(
        "lln_drift",
        [](const std::vector<AssetParams>& p, double t, double n) { return lln_drift(CalibratedParams{p}, t, n); },
        py::arg("params"), py::arg("t"), py::arg("n") = 1.0);
    m.def(
        "approximate_price_fclt2",
        [](const std::vector<AssetParams>& p, double t, double n, std::size_t paths, std::uint64_t seed) {
            return approximate_price_fclt2(CalibratedParams{p}, t, n, paths, seed);
        },
        py::arg("params"), py::arg("t"), py::arg("n"), py::arg("n_paths"), py::arg("seed") = 0);
    m.def(
        "fclt1_residuals",
        [](const std::vector<double>& t, const std::vector<double>& j, double a, double w, double start, double end) {
            return fclt1_residuals(std::span<const double>(t), std::span<const double>(j), a, w, start, end);
        },
        py::arg("jump_times"), py::arg("jump_sizes"), py::arg("a_star"), py::arg("window"), py::arg("start"),
          py::arg("end"));

    // Validation
    m.def(
        "window_preset", [](const std::string& name) { return window_preset(name); }, py::arg("name"));
    m.def(
        "sqrt_regression",
        [](std::vector<double> w, std::vector<double> s) { return sqrt_regression(make_curve(w, s)); },
        py::arg("windows"), py::arg("stds"));
    m.def(
        "mse",
        [](std::vector<double> w1, std::vector<double> s1, std::vector<double> w2, std::vector<double> s2) {
            return mse(make_curve(w1, s1), make_curve(w2, s2));
        },
        py::arg("windows"), py::arg("empirical"), py::arg("model_windows"), py::arg("model"));
    m.def("percentage_error", &percentage_error, py::arg("model"), py::arg("reference"));
    m.def(
        "empirical_std_curve",
        [](const std::vector<double>& t, const std::vector<double>& j, double a, const std::vector<double>& windows,
           const std::string& mode, double start, double end) {
            const auto e = empirical_std_curve(t, j, a, windows, parse_centralization(mode), start, end);
            return py::make_tuple(e.curve.windows, e.curve.stds);
        },
        py::arg("jump_times"), py::arg("jump_sizes"), py::arg("a_star"), py::arg("windows"),
        py::arg("mode") = "stochastic", py::arg("start"), py::arg("end"));

    // Order book ingestion
    py::class_<PriceChangeSeq>(m, "PriceChangeSeq")
        .def_readonly("times", &PriceChangeSeq::times)
        .def_readonly("changes", &PriceChangeSeq::changes)
        .def_readonly("initial_mid", &PriceChangeSeq::initial_mid)
        .def("__len__", &PriceChangeSeq::size);
    m.def(
        "load_price_changes",
        [](const std::filesystem::path& message, const std::filesystem::path& orderbook, double session_start,
           double session_end, bool merge_simultaneous) {
            const auto quotes = read_lobster_pair(message, orderbook);
            const auto kept = restrict_to_session(quotes, SessionBounds{session_start, session_end});
            return price_change_events(mid_price_series(kept), merge_simultaneous);
        },
        py::arg("message"), py::arg("orderbook"), py::arg("session_start") = 34200.0,
        py::arg("session_end") = 57600.0, py::arg("merge_simultaneous") = true);
    m.def(
        "calibrate",
        [](const PriceChangeSeq& changes, double start, double end, int n_states, double variance_window) {
            CalibrationConfig cfg;
            cfg.n_states = n_states;
            cfg.variance_window = variance_window;
            const auto c = calibrate_asset(changes, start, end, cfg);
            py::dict d;
            d["model"] = c.model;
            d["a_star"] = c.limits.a_star;
            d["sigma_star"] = c.limits.sigma_star;
            d["lambda_bar"] = c.lambda_bar;
            d["sigma_sq"] = c.sigma_sq;
            d["n_changes"] = c.n_changes;
            return d;
        },
        py::arg("changes"), py::arg("start"), py::arg("end"), py::arg("n_states") = 2,
        py::arg("variance_window") = 60.0);
}
