#pragma once

#include <atomic>
#include <iostream>
#include <mutex>
#include <string>

namespace qnsp {

enum class LogLevel { quiet = 0, warning = 1, info = 2 };

inline std::atomic<int>& log_level_storage() {
  static std::atomic<int> level{static_cast<int>(LogLevel::warning)};
  return level;
}

inline void set_log_level(LogLevel l) { log_level_storage() = static_cast<int>(l); }

inline void log_message(LogLevel l, const std::string& msg) {
  if (static_cast<int>(l) > log_level_storage().load()) return;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  std::cerr << (l == LogLevel::warning ? "warning: " : "") << msg << '\n';
}

inline void log_warning(const std::string& msg) { log_message(LogLevel::warning, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::info, msg); }

}  // namespace qnsp
