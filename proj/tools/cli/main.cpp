#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> assets;
    std::optional<std::string> windows;
    std::optional<int> states;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config, "key = value config file");
    cmd->add_option("--asset", flags.assets, "TICKER from the config, or TICKER=MESSAGE,ORDERBOOK (repeatable)");
    cmd->add_option("--windows", flags.windows, "fine | coarse | comma-separated seconds");
    cmd->add_option("--states", flags.states, "number of chain states (even)");
    cmd->add_option("--mode", flags.mode, "stochastic | deterministic");
    cmd->add_option("--seed", flags.seed, "root seed");
    cmd->add_option("--out", flags.out, "output directory");
}

mgcpp::cli::RunConfig resolve(const Flags& flags) {
    using namespace mgcpp::cli;
    RunConfig config = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    apply_asset_flags(config, flags.assets);
    if (flags.windows) apply_setting(config, "windows", *flags.windows);
    if (flags.states) config.n_states = *flags.states;
    if (flags.mode) apply_setting(config, "mode", *flags.mode);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.out) config.out = *flags.out;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov-modulated compound point process price models for limit order book data"};
    app.require_subcommand(1);
    Flags flags;
    auto* calibrate = app.add_subcommand("calibrate", "estimate rates and chain parameters per asset");
    auto* validate = app.add_subcommand("validate", "compare empirical and predicted std curves");
    auto* crossval = app.add_subcommand("crossval", "rolling cross-validation of the std predictor");
    auto* simulate = app.add_subcommand("simulate", "simulate events and prices from a config");
    for (auto* cmd : {calibrate, validate, crossval, simulate}) add_flags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mgcpp::cli::kExitParameter;
    }

    try {
        const auto config = resolve(flags);
        if (calibrate->parsed()) mgcpp::cli::cmd_calibrate(config);
        else if (validate->parsed()) mgcpp::cli::cmd_validate(config);
        else if (crossval->parsed()) mgcpp::cli::cmd_crossval(config);
        else mgcpp::cli::cmd_simulate(config);
    } catch (const mgcpp::Error& e) {
        std::cerr << mgcpp::cli::error_json(e) << "\n";
        return mgcpp::cli::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << mgcpp::cli::error_json(mgcpp::Error(mgcpp::ErrorKind::Io, e.what())) << "\n";
        return mgcpp::cli::kExitIo;
    }
    return mgcpp::cli::kExitOk;
}
