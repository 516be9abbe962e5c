#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgcpp/lob.hpp"
#include "mgcpp/markov_price.hpp"
#include "mgcpp/validation.hpp"

namespace mgcpp::cli {

struct AssetInput {
    std::string ticker;
    std::filesystem::path message;
    std::filesystem::path orderbook;
};

// Inputs for `simulate`; lists are per asset.
struct SimulationSpec {
    std::string process = "poisson";  // poisson | hawkes
    std::vector<double> lambda;
    std::string alpha;  // matrix rows separated by ';', entries by ','
    std::string beta;
    std::optional<double> horizon;  // defaults to the session length
    std::vector<double> p_uu;
    std::vector<double> p_dd;
    std::vector<double> s0;
    std::map<std::string, std::filesystem::path> models;  // ticker -> model JSON
    std::vector<std::string> names;
};

/// Flat key = value configuration. Flags applied after the file win.
struct RunConfig {
    std::vector<AssetInput> assets;
    double delta = 0.005;
    int n_states = 2;
    DiscretizationScheme scheme = DiscretizationScheme::TickBuckets;
    std::string windows = "fine";
    std::optional<Centralization> mode;  // validate: stochastic, crossval: deterministic
    std::uint64_t seed = 0;
    std::filesystem::path out = "mgcpp_out";
    SessionBounds session;
    double variance_window = 60.0;
    bool merge_simultaneous = true;
    bool skip_empty_levels = false;
    double train_minutes = 280.0;
    double fold_minutes = 10.0;
    int folds = 5;
    std::size_t min_test_changes = 10;
    SimulationSpec simulation;

    std::string source_text;  // config file contents, echoed into the manifest

    // Throws Parameter on invariant violations (delta, n_states, distinct paths).
    void validate() const;
    std::vector<double> window_grid() const { return parse_windows(windows); }
    // Resolved settings in config-file syntax.
    std::string to_text() const;
};

// Applies one key; throws Parameter for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// "TICKER" selects a configured asset; "TICKER=message.csv,orderbook.csv" defines one inline.
void apply_asset_flags(RunConfig& config, const std::vector<std::string>& flags);

std::vector<double> parse_list(std::string_view text);

}  // namespace mgcpp::cli
