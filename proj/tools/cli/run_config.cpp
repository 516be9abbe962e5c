#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mgcpp/error.hpp"

namespace mgcpp::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

double to_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::Parameter, fmt::format("{}: '{}' is not a number", key, std::string(value)));
    }
    return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::Parameter, fmt::format("{}: '{}' is not an integer", key, std::string(value)));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error(ErrorKind::Parameter, fmt::format("{}: '{}' is not a boolean", key, std::string(value)));
}

std::vector<std::string> split_names(std::string_view text) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        auto comma = text.find(',', begin);
        if (comma == std::string_view::npos) comma = text.size();
        const auto item = trim(text.substr(begin, comma - begin));
        if (!item.empty()) out.emplace_back(item);
        begin = comma + 1;
    }
    return out;
}

AssetInput& asset_slot(RunConfig& config, const std::string& ticker) {
    auto it = std::find_if(config.assets.begin(), config.assets.end(),
                           [&](const AssetInput& a) { return a.ticker == ticker; });
    if (it != config.assets.end()) return *it;
    config.assets.push_back(AssetInput{ticker, {}, {}});
    return config.assets.back();
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + fmt::format("{}", values[i]);
    return out;
}

}  // namespace

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_names(text)) out.push_back(to_double("list", item));
    return out;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw) {
    const auto value = trim(raw);
    const std::string k(key);

    if (k.rfind("asset.", 0) == 0) {
        const auto dot = k.rfind('.');
        const std::string ticker = k.substr(6, dot - 6);
        const std::string field = k.substr(dot + 1);
        if (ticker.empty() || dot <= 6) throw Error(ErrorKind::Parameter, fmt::format("bad asset key '{}'", k));
        if (field == "message") {
            asset_slot(c, ticker).message = std::string(value);
        } else if (field == "orderbook") {
            asset_slot(c, ticker).orderbook = std::string(value);
        } else if (field == "model") {
            c.simulation.models[ticker] = std::string(value);
        } else {
            throw Error(ErrorKind::Parameter, fmt::format("unknown asset field '{}'", field));
        }
        return;
    }

    if (k == "delta") c.delta = to_double(k, value);
    else if (k == "states") c.n_states = to_int<int>(k, value);
    else if (k == "scheme") c.scheme = parse_scheme(value);
    else if (k == "windows") c.windows = std::string(value);
    else if (k == "mode") c.mode = parse_centralization(value);
    else if (k == "seed") c.seed = to_int<std::uint64_t>(k, value);
    else if (k == "out") c.out = std::string(value);
    else if (k == "session_start") c.session.start = to_double(k, value);
    else if (k == "session_end") c.session.end = to_double(k, value);
    else if (k == "variance_window") c.variance_window = to_double(k, value);
    else if (k == "merge_simultaneous") c.merge_simultaneous = to_bool(k, value);
    else if (k == "skip_empty_levels") c.skip_empty_levels = to_bool(k, value);
    else if (k == "train_minutes") c.train_minutes = to_double(k, value);
    else if (k == "fold_minutes") c.fold_minutes = to_double(k, value);
    else if (k == "folds") c.folds = to_int<int>(k, value);
    else if (k == "min_test_changes") c.min_test_changes = to_int<std::size_t>(k, value);
    else if (k == "process") c.simulation.process = std::string(value);
    else if (k == "lambda") c.simulation.lambda = parse_list(value);
    else if (k == "alpha") c.simulation.alpha = std::string(value);
    else if (k == "beta") c.simulation.beta = std::string(value);
    else if (k == "horizon") c.simulation.horizon = to_double(k, value);
    else if (k == "p_uu") c.simulation.p_uu = parse_list(value);
    else if (k == "p_dd") c.simulation.p_dd = parse_list(value);
    else if (k == "s0") c.simulation.s0 = parse_list(value);
    else if (k == "names") c.simulation.names = split_names(value);
    else throw Error(ErrorKind::Parameter, fmt::format("unknown config key '{}'", k));
}

RunConfig parse_config_text(std::string_view text) {
    RunConfig config;
    config.source_text = std::string(text);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Parameter, fmt::format("config line {}: expected key = value", row));
        }
        apply_setting(config, trim(body.substr(0, eq)), body.substr(eq + 1));
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

void apply_asset_flags(RunConfig& config, const std::vector<std::string>& flags) {
    if (flags.empty()) return;
    std::vector<AssetInput> selected;
    for (const auto& flag : flags) {
        const auto eq = flag.find('=');
        if (eq == std::string::npos) {
            const auto it = std::find_if(config.assets.begin(), config.assets.end(),
                                         [&](const AssetInput& a) { return a.ticker == flag; });
            if (it == config.assets.end()) {
                throw Error(ErrorKind::Parameter, fmt::format("asset '{}' is not defined in the config", flag));
            }
            selected.push_back(*it);
            continue;
        }
        const auto paths = flag.substr(eq + 1);
        const auto comma = paths.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::Parameter, fmt::format("--asset {}: expected TICKER=MESSAGE,ORDERBOOK", flag));
        }
        selected.push_back(AssetInput{flag.substr(0, eq), paths.substr(0, comma), paths.substr(comma + 1)});
    }
    config.assets = std::move(selected);
}

void RunConfig::validate() const {
    if (!(delta > 0.0)) throw Error(ErrorKind::Parameter, "delta must be positive");
    if (n_states < 2 || n_states % 2 != 0) throw Error(ErrorKind::Parameter, "states must be even and >= 2");
    if (!(session.end > session.start)) throw Error(ErrorKind::Parameter, "session_end must exceed session_start");
    if (!(variance_window > 0.0)) throw Error(ErrorKind::Parameter, "variance_window must be positive");
    (void)window_grid();
    std::set<std::filesystem::path> seen;
    for (const auto& a : assets) {
        for (const auto& p : {a.message, a.orderbook}) {
            if (p.empty()) continue;
            if (!seen.insert(p.lexically_normal()).second) {
                throw Error(ErrorKind::Parameter, fmt::format("path '{}' is referenced twice", p.string()));
            }
        }
    }
}

std::string RunConfig::to_text() const {
    std::string out;
    auto line = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
    for (const auto& a : assets) {
        line("asset." + a.ticker + ".message", a.message.string());
        line("asset." + a.ticker + ".orderbook", a.orderbook.string());
    }
    line("delta", fmt::format("{}", delta));
    line("states", fmt::format("{}", n_states));
    line("scheme", std::string(to_string(scheme)));
    line("windows", windows);
    if (mode) line("mode", std::string(to_string(*mode)));
    line("seed", fmt::format("{}", seed));
    line("out", this->out.string());
    line("session_start", fmt::format("{}", session.start));
    line("session_end", fmt::format("{}", session.end));
    line("variance_window", fmt::format("{}", variance_window));
    line("merge_simultaneous", merge_simultaneous ? "true" : "false");
    line("skip_empty_levels", skip_empty_levels ? "true" : "false");
    line("train_minutes", fmt::format("{}", train_minutes));
    line("fold_minutes", fmt::format("{}", fold_minutes));
    line("folds", fmt::format("{}", folds));
    line("min_test_changes", fmt::format("{}", min_test_changes));
    line("process", simulation.process);
    if (!simulation.lambda.empty()) line("lambda", join(simulation.lambda));
    if (!simulation.alpha.empty()) line("alpha", simulation.alpha);
    if (!simulation.beta.empty()) line("beta", simulation.beta);
    if (simulation.horizon) line("horizon", fmt::format("{}", *simulation.horizon));
    if (!simulation.p_uu.empty()) line("p_uu", join(simulation.p_uu));
    if (!simulation.p_dd.empty()) line("p_dd", join(simulation.p_dd));
    if (!simulation.s0.empty()) line("s0", join(simulation.s0));
    for (const auto& [ticker, path] : simulation.models) line("asset." + ticker + ".model", path.string());
    if (!simulation.names.empty()) {
        std::string names;
        for (std::size_t i = 0; i < simulation.names.size(); ++i) names += (i ? "," : "") + simulation.names[i];
        line("names", names);
    }
    return out;
}

}  // namespace mgcpp::cli
