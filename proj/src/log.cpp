#include "qfi/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace qfi::log {

namespace {

Level read_level() {
  const char* env = std::getenv("QFI_LOG");
  if (!env) return Level::Warn;
  const std::string v(env);
  if (v == "error") return Level::Error;
  if (v == "warn") return Level::Warn;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

std::mutex& mutex() {
  static std::mutex m;
  return m;
}

void emit(Level lvl, const char* tag, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  std::scoped_lock lock(mutex());
  std::cerr << "[qfi " << tag << "] " << msg << "\n";
}

}  // namespace

Level level() {
  static const Level lvl = read_level();
  return lvl;
}

void error(const std::string& msg) { emit(Level::Error, "error", msg); }
void warn(const std::string& msg) { emit(Level::Warn, "warn", msg); }
void info(const std::string& msg) { emit(Level::Info, "info", msg); }
void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }

}  // namespace qfi::log
