#include "mgcpp/reports.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace mgcpp {
namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    return fmt::format("{:.10g}", x);
}

nlohmann::ordered_json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

void write_rates_csv(std::ostream& out, std::span<const AssetCalibration> assets) {
    out << "ticker,sigma,sigma_sq,lambda_bar\n";
    for (const auto& a : assets) {
        out << fmt::format("{},{},{},{}\n", a.asset, num(std::sqrt(a.sigma_sq)), num(a.sigma_sq), num(a.lambda_bar));
    }
}

void write_two_state_csv(std::ostream& out, std::span<const AssetCalibration> assets) {
    out << "ticker,p_uu,p_dd,sigma_star,a_star\n";
    for (const auto& a : assets) {
        if (a.model.n_states() != 2) continue;
        const auto& P = a.model.transition();
        out << fmt::format("{},{},{},{},{}\n", a.asset, num(P(0, 0)), num(P(1, 1)), num(a.limits.sigma_star),
                           num(a.limits.a_star));
    }
}

void write_limits_csv(std::ostream& out, std::span<const AssetCalibration> assets) {
    out << "ticker,n_states,lambda_bar,sigma_sq,a_star,sigma_star\n";
    for (const auto& a : assets) {
        out << fmt::format("{},{},{},{},{},{}\n", a.asset, a.model.n_states(), num(a.lambda_bar), num(a.sigma_sq),
                           num(a.limits.a_star), num(a.limits.sigma_star));
    }
}

std::string calibration_json(std::span<const AssetCalibration> assets, double delta) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["delta"] = delta;
    auto list = nlohmann::ordered_json::array();
    for (const auto& a : assets) {
        nlohmann::ordered_json item;
        item["ticker"] = a.asset;
        item["span"] = {a.start, a.end};
        item["n_changes"] = a.n_changes;
        item["lambda_bar"] = a.lambda_bar;
        item["sigma_sq"] = a.sigma_sq;
        item["a_star"] = a.limits.a_star;
        item["sigma_star"] = a.limits.sigma_star;
        item["model"] = nlohmann::ordered_json::parse(model_to_json(a.model));
        item["degenerate_chain"] = a.degenerate_chain;
        item["uniform_rows"] = a.uniform_rows;
        list.push_back(std::move(item));
    }
    j["assets"] = std::move(list);
    return j.dump(2) + "\n";
}

void write_curves_csv(std::ostream& out, std::span<const AssetValidation> assets) {
    out << "asset,window_s,empirical,fclt1,fclt2\n";
    for (const auto& a : assets) {
        const auto& e = a.empirical.curve;
        for (std::size_t j = 0; j < e.size(); ++j) {
            out << fmt::format("{},{},{},{},{}\n", a.calibration.asset, num(e.windows[j]), num(e.stds[j]),
                               num(a.fclt1.stds[j]), num(a.fclt2.stds[j]));
        }
    }
}

void write_predictors_csv(std::ostream& out, std::span<const AssetParams> params, std::span<const std::string> names,
                          std::span<const double> windows) {
    out << "asset,window_s,std_fclt1,std_fclt2\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        for (double w : windows) {
            out << fmt::format("{},{},{},{}\n", names[i], num(w), num(fclt1_std(params[i], w)), num(fclt2_std(params[i], w)));
        }
    }
}

void write_mse_csv(std::ostream& out, std::span<const AssetValidation> assets) {
    out << "ticker,mse\n";
    for (const auto& a : assets) out << fmt::format("{},{}\n", a.calibration.asset, num(a.mse));
}

void write_coefficients_csv(std::ostream& out, std::span<const AssetValidation> assets, bool with_mse) {
    out << "ticker,model_coefficient,regression_coefficient,percent_error" << (with_mse ? ",mse\n" : "\n");
    for (const auto& a : assets) {
        out << fmt::format("{},{},{},{}", a.calibration.asset, num(a.model_coefficient), num(a.regression_coefficient),
                           num(a.percent_error));
        out << (with_mse ? "," + num(a.mse) + "\n" : std::string("\n"));
    }
}

std::string validation_json(std::span<const AssetValidation> assets, Centralization mode) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["mode"] = std::string(to_string(mode));
    auto list = nlohmann::ordered_json::array();
    double error_sum = 0.0;
    for (const auto& a : assets) {
        nlohmann::ordered_json item;
        item["ticker"] = a.calibration.asset;
        item["model_coefficient"] = a.model_coefficient;
        item["regression_coefficient"] = a.regression_coefficient;
        item["percent_error"] = a.percent_error;
        item["mse"] = a.mse;
        item["omitted_windows"] = a.empirical.omitted;
        error_sum += a.percent_error;
        list.push_back(std::move(item));
    }
    j["assets"] = std::move(list);
    j["overall_percent_error"] = assets.empty() ? nlohmann::ordered_json(nullptr)
                                                : json_number(error_sum / static_cast<double>(assets.size()));
    return j.dump(2) + "\n";
}

void write_cv_csv(std::ostream& out, std::span<const AssetCvReport> reports) {
    out << "ticker,fold,train_start,train_end,test_start,test_end,train_changes,test_changes,"
           "regression_coefficient,model_coefficient,percent_error,degenerate\n";
    for (const auto& r : reports) {
        for (const auto& f : r.folds) {
            out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.asset, f.fold, num(f.train_start),
                               num(f.train_end), num(f.test_start), num(f.test_end), f.train_changes, f.test_changes,
                               num(f.regression_coefficient), num(f.model_coefficient), num(f.percent_error),
                               f.degenerate ? 1 : 0);
        }
    }
}

void write_cv_summary_csv(std::ostream& out, std::span<const AssetCvReport> reports) {
    std::size_t folds = 0;
    for (const auto& r : reports) folds = std::max(folds, r.folds.size());
    out << "ticker";
    for (std::size_t k = 1; k <= folds; ++k) out << ",fold_" << k;
    out << ",mean_error\n";
    for (const auto& r : reports) {
        out << r.asset;
        for (std::size_t k = 0; k < folds; ++k) {
            out << ',';
            if (k < r.folds.size() && !r.folds[k].degenerate) out << num(r.folds[k].percent_error);
        }
        out << ',' << num(r.mean_error) << '\n';
    }
    out << "overall";
    for (std::size_t k = 0; k < folds; ++k) out << ',';
    out << ',' << num(overall_test_error(reports)) << '\n';
}

std::string cv_json(std::span<const AssetCvReport> reports) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    auto list = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json item;
        item["ticker"] = r.asset;
        auto folds = nlohmann::ordered_json::array();
        for (const auto& f : r.folds) {
            nlohmann::ordered_json fj;
            fj["fold"] = f.fold;
            fj["train"] = {f.train_start, f.train_end};
            fj["test"] = {f.test_start, f.test_end};
            fj["train_changes"] = f.train_changes;
            fj["test_changes"] = f.test_changes;
            fj["regression_coefficient"] = json_number(f.regression_coefficient);
            fj["model_coefficient"] = json_number(f.model_coefficient);
            fj["percent_error"] = json_number(f.percent_error);
            fj["degenerate"] = f.degenerate;
            if (!f.note.empty()) fj["note"] = f.note;
            folds.push_back(std::move(fj));
        }
        item["folds"] = std::move(folds);
        item["mean_error"] = json_number(r.mean_error);
        list.push_back(std::move(item));
    }
    j["assets"] = std::move(list);
    j["overall_test_error"] = json_number(overall_test_error(reports));
    return j.dump(2) + "\n";
}

}  // namespace mgcpp
