#include "mgcpp/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace mgcpp {
namespace {

LogLevel level_from_env() {
    const char* env = std::getenv("MGCPP_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    if (value == "off") return LogLevel::Off;
    return LogLevel::Warn;
}

std::atomic<LogLevel>& current_level() {
    static std::atomic<LogLevel> level{level_from_env()};
    return level;
}

void emit(LogLevel level, std::string_view tag, std::string_view message) {
    if (level < current_level().load()) return;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::cerr << "[mgcpp " << tag << "] " << message << '\n';
}

}  // namespace

LogLevel log_level() { return current_level().load(); }
void set_log_level(LogLevel level) { current_level().store(level); }

void log_debug(std::string_view message) { emit(LogLevel::Debug, "debug", message); }
void log_info(std::string_view message) { emit(LogLevel::Info, "info", message); }
void log_warn(std::string_view message) { emit(LogLevel::Warn, "warn", message); }

}  // namespace mgcpp
