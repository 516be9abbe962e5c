#pragma once

#include <string_view>

namespace mgcpp {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Off = 3 };

// Level comes from MGCPP_LOG (debug|info|warn|off), default warn. All output goes to stderr.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_debug(std::string_view message);
void log_info(std::string_view message);
void log_warn(std::string_view message);

}  // namespace mgcpp
