#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mgcpp/event_io.hpp"
#include "mgcpp/log.hpp"
#include "mgcpp/random.hpp"
#include "mgcpp/reports.hpp"

namespace fs = std::filesystem;

namespace mgcpp::cli {
namespace {

// Holds <out>/.mgcpp.lock for the lifetime of a command.
class OutputLock {
public:
    explicit OutputLock(const fs::path& dir) : path_(dir / ".mgcpp.lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
        file_ = std::fopen(path_.c_str(), "wx");
        if (!file_) {
            throw Error(ErrorKind::Io, fmt::format("output directory '{}' is locked by another run (remove '{}' if stale)",
                                                   dir.string(), path_.string()));
        }
    }
    ~OutputLock() {
        std::fclose(file_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    fs::path path_;
    std::FILE* file_ = nullptr;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
    out << content;
    if (!out) throw Error(ErrorKind::Io, fmt::format("write failed for '{}'", path.string()));
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ostringstream buffer;
    fn(buffer);
    write_file(path, buffer.str());
}

void write_manifest(const RunConfig& config, std::string_view command) {
    std::string text = fmt::format("command = {}\nschema_version = {}\n\n[config file]\n", command, kReportSchemaVersion);
    text += config.source_text;
    if (!config.source_text.empty() && config.source_text.back() != '\n') text += '\n';
    text += "\n[resolved]\n" + config.to_text();
    write_file(config.out / "manifest.txt", text);
}

CalibrationConfig calibration_config(const RunConfig& config) {
    return CalibrationConfig{.delta = config.delta,
                             .n_states = config.n_states,
                             .scheme = config.scheme,
                             .variance_window = config.variance_window};
}

void require_assets(const RunConfig& config) {
    if (config.assets.empty()) throw Error(ErrorKind::Parameter, "no assets configured (use --asset or asset.T.* keys)");
}

std::vector<double> row_values(std::string_view row) { return parse_list(row); }

Eigen::MatrixXd parse_matrix(const std::string& text, std::size_t d, std::string_view name) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    std::vector<std::vector<double>> rows;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        auto semi = text.find(';', begin);
        if (semi == std::string::npos) semi = text.size();
        rows.push_back(row_values(std::string_view(text).substr(begin, semi - begin)));
        begin = semi + 1;
    }
    if (rows.size() != d) throw Error(ErrorKind::Parameter, fmt::format("{} needs {} rows, got {}", name, d, rows.size()));
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) {
            throw Error(ErrorKind::Parameter, fmt::format("{} row {} needs {} entries, got {}", name, i, d, rows[i].size()));
        }
        for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::int64_t to_mid_twice(double price) {
    // Nearest even unit, so a one-tick spread gives integral quotes.
    return 2 * static_cast<std::int64_t>(std::llround(price * kMidTwiceScale / 2.0));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:
        case ErrorKind::Parse:
        case ErrorKind::MalformedRow:
        case ErrorKind::Alignment:
        case ErrorKind::CrossedBook:
            return kExitIo;
        case ErrorKind::Parameter:
        case ErrorKind::Instability:
            return kExitParameter;
        case ErrorKind::InsufficientData:
        case ErrorKind::NoUniqueStationary:
        case ErrorKind::Ergodicity:
        case ErrorKind::InternalConsistency:
        case ErrorKind::Degenerate:
            return kExitValidation;
    }
    return kExitValidation;
}

std::string error_json(const Error& error) {
    nlohmann::ordered_json j;
    j["status"] = "error";
    j["kind"] = std::string(to_string(error.kind()));
    j["exit_code"] = exit_code_for(error.kind());
    j["message"] = error.detail();
    return j.dump();
}

std::vector<LoadedAsset> load_assets(const RunConfig& config) {
    require_assets(config);
    std::vector<LoadedAsset> out;
    for (const auto& asset : config.assets) {
        if (asset.message.empty() || asset.orderbook.empty()) {
            throw Error(ErrorKind::Parameter, fmt::format("asset {} needs both message and orderbook paths", asset.ticker));
        }
        std::vector<Quote> quotes;
        try {
            quotes = read_lobster_pair(asset.message, asset.orderbook, ParseOptions{config.skip_empty_levels});
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Io) throw;
            throw Error(e.kind(), fmt::format("{} / {}: {}", asset.message.string(), asset.orderbook.string(), e.detail()));
        }
        const auto session = restrict_to_session(quotes, config.session);
        if (session.empty()) {
            throw Error(ErrorKind::InsufficientData,
                        fmt::format("{}: no quotes inside the session [{}, {}]", asset.orderbook.string(),
                                    config.session.start, config.session.end));
        }
        out.push_back(LoadedAsset{asset.ticker,
                                  price_change_events(mid_price_series(session), config.merge_simultaneous)});
        log_info(fmt::format("{}: {} quotes, {} price changes", asset.ticker, session.size(), out.back().changes.size()));
    }
    return out;
}

std::vector<AssetCalibration> cmd_calibrate(const RunConfig& config) {
    config.validate();
    const auto loaded = load_assets(config);
    const auto cal = calibration_config(config);

    std::vector<AssetCalibration> results;
    for (const auto& asset : loaded) {
        results.push_back(calibrate_asset(asset.changes, config.session.start, config.session.end, cal, asset.ticker));
    }

    OutputLock lock(config.out);
    write_manifest(config, "calibrate");
    write_with(config.out / "table2.csv", [&](std::ostream& o) { write_rates_csv(o, results); });
    if (config.n_states == 2) {
        write_with(config.out / "table3.csv", [&](std::ostream& o) { write_two_state_csv(o, results); });
    }
    write_with(config.out / "limits.csv", [&](std::ostream& o) { write_limits_csv(o, results); });
    fs::create_directories(config.out / "models");
    for (const auto& r : results) write_file(config.out / "models" / (r.asset + ".json"), model_to_json(r.model));
    write_file(config.out / "calibration.json", calibration_json(results, config.delta));

    std::cout << "ticker,n_changes,lambda_bar,sigma_sq,a_star,sigma_star\n";
    for (const auto& r : results) {
        std::cout << fmt::format("{},{},{:.6g},{:.6g},{:.6g},{:.6g}\n", r.asset, r.n_changes, r.lambda_bar, r.sigma_sq,
                                 r.limits.a_star, r.limits.sigma_star);
    }
    return results;
}

std::vector<AssetValidation> cmd_validate(const RunConfig& config) {
    config.validate();
    const auto loaded = load_assets(config);
    const ValidationConfig vcfg{.calibration = calibration_config(config),
                                .windows = config.window_grid(),
                                .mode = config.mode.value_or(Centralization::Stochastic)};

    std::vector<AssetValidation> results;
    for (const auto& asset : loaded) {
        results.push_back(validate_asset(asset.changes, config.session.start, config.session.end, vcfg, asset.ticker));
    }

    std::vector<AssetParams> params;
    std::vector<std::string> names;
    for (const auto& r : results) {
        params.push_back(r.calibration.params(config.delta));
        names.push_back(r.calibration.asset);
    }

    OutputLock lock(config.out);
    write_manifest(config, "validate");
    write_with(config.out / "curves.csv", [&](std::ostream& o) { write_curves_csv(o, results); });
    write_with(config.out / "predictors.csv",
               [&](std::ostream& o) { write_predictors_csv(o, params, names, vcfg.windows); });
    if (vcfg.mode == Centralization::Stochastic) {
        write_with(config.out / "table4.csv", [&](std::ostream& o) { write_mse_csv(o, results); });
        write_with(config.out / "table5.csv", [&](std::ostream& o) { write_coefficients_csv(o, results); });
    } else {
        write_with(config.out / "table7.csv", [&](std::ostream& o) { write_coefficients_csv(o, results, true); });
    }
    write_file(config.out / "validation.json", validation_json(results, vcfg.mode));

    std::cout << "ticker,model_coefficient,regression_coefficient,percent_error,mse\n";
    for (const auto& r : results) {
        std::cout << fmt::format("{},{:.6g},{:.6g},{:.4f},{:.6g}\n", r.calibration.asset, r.model_coefficient,
                                 r.regression_coefficient, r.percent_error, r.mse);
    }
    return results;
}

std::vector<AssetCvReport> cmd_crossval(const RunConfig& config) {
    config.validate();
    const auto loaded = load_assets(config);
    const RollingCvConfig cv{.train_minutes = config.train_minutes,
                             .fold_minutes = config.fold_minutes,
                             .folds = config.folds,
                             .windows = config.window_grid(),
                             .calibration = calibration_config(config),
                             .mode = config.mode.value_or(Centralization::Deterministic),
                             .min_test_changes = config.min_test_changes,
                             .test_equals_train = false};

    std::vector<AssetCvReport> reports;
    for (const auto& asset : loaded) {
        reports.push_back(rolling_cv(asset.changes, config.session.start, config.session.end, cv, asset.ticker));
    }

    OutputLock lock(config.out);
    write_manifest(config, "crossval");
    write_with(config.out / "cv.csv", [&](std::ostream& o) { write_cv_csv(o, reports); });
    write_with(config.out / "cv_summary.csv", [&](std::ostream& o) { write_cv_summary_csv(o, reports); });
    write_file(config.out / "cv.json", cv_json(reports));

    std::cout << "ticker,used_folds,mean_error\n";
    for (const auto& r : reports) std::cout << fmt::format("{},{},{:.4f}\n", r.asset, r.used_folds, r.mean_error);
    std::cout << fmt::format("overall,,{:.4f}\n", overall_test_error(reports));
    return reports;
}

SimulationResult cmd_simulate(const RunConfig& config) {
    if (!(config.delta > 0.0)) throw Error(ErrorKind::Parameter, "delta must be positive");
    const auto& sim = config.simulation;
    const double horizon = sim.horizon.value_or(config.session.length());
    if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be positive");

    const std::size_t d = sim.lambda.size();
    if (d == 0) throw Error(ErrorKind::Parameter, "simulate needs lambda (one rate per asset)");

    SimulationResult result;
    result.names = sim.names;
    if (result.names.empty()) {
        for (std::size_t i = 0; i < d; ++i) result.names.push_back(fmt::format("A{}", i));
    }
    if (result.names.size() != d) throw Error(ErrorKind::Parameter, "names and lambda differ in length");

    std::optional<HawkesSpec> hawkes;
    if (sim.process == "hawkes") {
        HawkesSpec spec;
        spec.base = Eigen::Map<const Eigen::VectorXd>(sim.lambda.data(), static_cast<Eigen::Index>(d));
        spec.alpha = parse_matrix(sim.alpha, d, "alpha");
        spec.beta = parse_matrix(sim.beta, d, "beta");
        spec.validate();
        hawkes = std::move(spec);
    } else if (sim.process != "poisson") {
        throw Error(ErrorKind::Parameter, fmt::format("unknown process '{}' (poisson | hawkes)", sim.process));
    }

    for (std::size_t i = 0; i < d; ++i) {
        const auto it = sim.models.find(result.names[i]);
        if (it != sim.models.end()) {
            result.models.push_back(model_from_json(read_text(it->second)));
            continue;
        }
        if (sim.p_uu.size() != d || sim.p_dd.size() != d) {
            throw Error(ErrorKind::Parameter,
                        fmt::format("asset {} has no model file; p_uu and p_dd need {} entries", result.names[i], d));
        }
        result.models.push_back(TransitionModel::two_state(sim.p_uu[i], sim.p_dd[i], config.delta));
    }

    std::vector<double> s0 = sim.s0;
    if (s0.empty()) s0.assign(d, 100.0);
    if (s0.size() != d) throw Error(ErrorKind::Parameter, "s0 and lambda differ in length");

    const auto event_seed = derive_seed(config.seed, 0);
    result.events = hawkes ? simulate_hawkes(*hawkes, horizon, event_seed) : simulate_poisson(sim.lambda, horizon, event_seed);
    result.prices = simulate_mgcpp(result.events, result.models, s0, derive_seed(config.seed, 1));

    OutputLock lock(config.out);
    write_manifest(config, "simulate");
    write_with(config.out / "events.csv", [&](std::ostream& o) { write_events_csv(o, result.events); });
    write_with(config.out / "events.bin", [&](std::ostream& o) { write_events_binary(o, result.events); });
    write_with(config.out / "prices.bin", [&](std::ostream& o) { write_prices_binary(o, result.prices, horizon); });

    // LOBSTER-style files so the simulated day feeds calibrate/validate directly.
    std::string conf = fmt::format("# simulated day, seed {}\ndelta = {}\nsession_start = {}\nsession_end = {}\n",
                                   config.seed, config.delta, config.session.start, config.session.start + horizon);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> times{config.session.start};
        std::vector<std::int64_t> mids{to_mid_twice(s0[i])};
        for (std::size_t k = 0; k < result.events.count(i); ++k) {
            times.push_back(config.session.start + result.events.times[i][k]);
            mids.push_back(to_mid_twice(result.prices.prices[i][k]));
        }
        const auto quotes = synthetic_quotes(times, mids);
        const auto msg_path = config.out / (result.names[i] + "_message.csv");
        const auto ob_path = config.out / (result.names[i] + "_orderbook.csv");
        std::ostringstream msg, ob;
        write_lobster_pair(msg, ob, quotes);
        write_file(msg_path, msg.str());
        write_file(ob_path, ob.str());
        conf += fmt::format("asset.{}.message = {}\nasset.{}.orderbook = {}\n", result.names[i],
                            fs::absolute(msg_path).lexically_normal().string(), result.names[i],
                            fs::absolute(ob_path).lexically_normal().string());
    }
    write_file(config.out / "assets.conf", conf);

    std::cout << "asset,events,final_price\n";
    for (std::size_t i = 0; i < d; ++i) {
        const auto& p = result.prices.prices[i];
        std::cout << fmt::format("{},{},{:.4f}\n", result.names[i], result.events.count(i), p.empty() ? s0[i] : p.back());
    }
    return result;
}

}  // namespace mgcpp::cli
