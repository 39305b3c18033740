#pragma once

#include <functional>
#include <string_view>

namespace voxelrun {

enum class LogLevel { debug, info, warning, error, silent };

using LogSink = std::function<void(LogLevel, std::string_view)>;

// Default sink writes warnings and errors to stderr.
void set_log_level(LogLevel level);
LogLevel log_level();
void set_log_sink(LogSink sink);

void log(LogLevel level, std::string_view message);
inline void log_info(std::string_view m) { log(LogLevel::info, m); }
inline void log_warning(std::string_view m) { log(LogLevel::warning, m); }

}  // namespace voxelrun
