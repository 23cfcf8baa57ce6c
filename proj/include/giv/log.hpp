#pragma once

#include <atomic>
#include <iostream>
#include <string_view>

namespace giv {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

inline std::atomic<int>& log_level_storage() {
  static std::atomic<int> level{static_cast<int>(LogLevel::Info)};
  return level;
}

inline void set_log_level(LogLevel level) { log_level_storage() = static_cast<int>(level); }

inline void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) <= log_level_storage().load()) std::clog << "[giv] " << message << '\n';
}

}  // namespace giv
