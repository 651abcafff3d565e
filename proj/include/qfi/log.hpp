#pragma once

#include <string>

namespace qfi::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Active level, read once from the QFI_LOG environment variable
/// (error|warn|info|debug, default warn).
Level level();

void error(const std::string& msg);
void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace qfi::log
