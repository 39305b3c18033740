#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace voxelrun::fetch {

namespace fs = std::filesystem;

enum class FetchOutcome { downloaded, cached };

/// Downloads `url` (http, https or file scheme) to `dest_path`.
///
/// The body is streamed into a temporary file next to the destination,
/// checked against `expected_digest` when one is given, then renamed into
/// place. When the destination already exists with the expected digest the
/// call returns `cached` without touching it.
///
/// Throws network_error, digest_mismatch (temporary file removed), io_error
/// and invalid_argument for other URL schemes.
FetchOutcome fetch(const std::string& url, const fs::path& dest_path,
                   const std::optional<std::string>& expected_digest = std::nullopt);

/// Joins a base URL and a relative '/'-separated path.
std::string join_url(const std::string& base, const std::string& relative);

}  // namespace voxelrun::fetch
