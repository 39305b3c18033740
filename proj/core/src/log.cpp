#include "voxelrun/log.hpp"

#include <iostream>
#include <mutex>

namespace voxelrun {
namespace {

std::mutex g_mutex;
LogLevel g_level = LogLevel::warning;
LogSink g_sink;

const char* prefix(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warning: return "warning";
    case LogLevel::error: return "error";
    case LogLevel::silent: break;
  }
  return "";
}

}  // namespace

void set_log_level(LogLevel level) {
  std::lock_guard lock(g_mutex);
  g_level = level;
}

LogLevel log_level() {
  std::lock_guard lock(g_mutex);
  return g_level;
}

void set_log_sink(LogSink sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void log(LogLevel level, std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (level < g_level || level == LogLevel::silent) return;
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::cerr << "voxelrun: " << prefix(level) << ": " << message << '\n';
}

}  // namespace voxelrun
