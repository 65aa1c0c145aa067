#include "matdist/log.hpp"

#include <cstdlib>
#include <iostream>

namespace matdist {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MATDIST_LOG");
    if (!env) return LogLevel::Warn;
    const std::string s(env);
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  const char* tag = "warn";
  switch (level) {
    case LogLevel::Error: tag = "error"; break;
    case LogLevel::Warn: tag = "warn"; break;
    case LogLevel::Info: tag = "info"; break;
    case LogLevel::Debug: tag = "debug"; break;
  }
  std::cerr << "[matdist][" << tag << "] " << message << '\n';
}

}  // namespace matdist
