#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "mgcpp/calibration.hpp"

namespace mgcpp {

inline constexpr int kReportSchemaVersion = 1;

// ticker,sigma,sigma_sq,lambda_bar
void write_rates_csv(std::ostream& out, std::span<const AssetCalibration> assets);
// ticker,p_uu,p_dd,sigma_star,a_star (two-state models only)
void write_two_state_csv(std::ostream& out, std::span<const AssetCalibration> assets);
// ticker,n_states,lambda_bar,sigma_sq,a_star,sigma_star
void write_limits_csv(std::ostream& out, std::span<const AssetCalibration> assets);
std::string calibration_json(std::span<const AssetCalibration> assets, double delta);

// asset,window_s,empirical,fclt1,fclt2
void write_curves_csv(std::ostream& out, std::span<const AssetValidation> assets);
// asset,window_s,std_fclt1,std_fclt2
void write_predictors_csv(std::ostream& out, std::span<const AssetParams> params, std::span<const std::string> names,
                          std::span<const double> windows);
// ticker,mse
void write_mse_csv(std::ostream& out, std::span<const AssetValidation> assets);
// ticker,model_coefficient,regression_coefficient,percent_error[,mse]
void write_coefficients_csv(std::ostream& out, std::span<const AssetValidation> assets, bool with_mse = false);
std::string validation_json(std::span<const AssetValidation> assets, Centralization mode);

// One row per fold.
void write_cv_csv(std::ostream& out, std::span<const AssetCvReport> reports);
// ticker,fold_1..fold_K,mean_error plus an "overall" row.
void write_cv_summary_csv(std::ostream& out, std::span<const AssetCvReport> reports);
std::string cv_json(std::span<const AssetCvReport> reports);

}  // namespace mgcpp
