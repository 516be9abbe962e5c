#pragma once

#include <string>
#include <vector>

#include "mgcpp/calibration.hpp"
#include "mgcpp/error.hpp"
#include "run_config.hpp"

namespace mgcpp::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitIo = 2,
    kExitParameter = 3,
};

int exit_code_for(ErrorKind kind);
// One-line JSON for stderr.
std::string error_json(const Error& error);

struct LoadedAsset {
    std::string ticker;
    PriceChangeSeq changes;
};

// Parses each configured LOBSTER pair, keeps the session and extracts mid-price changes.
// Errors are re-raised with the offending path in the message.
std::vector<LoadedAsset> load_assets(const RunConfig& config);

// Each command writes into config.out and returns the per-asset results it reported.
std::vector<AssetCalibration> cmd_calibrate(const RunConfig& config);
std::vector<AssetValidation> cmd_validate(const RunConfig& config);
std::vector<AssetCvReport> cmd_crossval(const RunConfig& config);

struct SimulationResult {
    std::vector<std::string> names;
    EventTimes events;
    PricePath prices;
    std::vector<TransitionModel> models;
};
SimulationResult cmd_simulate(const RunConfig& config);

}  // namespace mgcpp::cli
