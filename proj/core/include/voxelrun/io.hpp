#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace voxelrun {

namespace fs = std::filesystem;

/// Reads a whole file as bytes. Throws Errc::io_error.
std::string read_file(const fs::path& path);

/// Writes `contents` to a temporary file in the destination directory and
/// renames it over `path`, so readers never observe a partially written
/// file. Parent directories are created as needed.
void write_file_atomic(const fs::path& path, std::string_view contents);

/// Shortest round-trip text for a double, with 17 significant digits.
std::string format_real(double value);

/// One value per line, each newline-terminated.
std::string format_lines(std::span<const double> values);

}  // namespace voxelrun
