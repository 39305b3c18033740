#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voxelrun::manifest {

namespace fs = std::filesystem;

/// Lowercase hex SHA-256 of a byte buffer.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex SHA-256 of a file's contents. Throws io_error.
std::string sha256_file(const fs::path& path);

bool is_sha256_hex(std::string_view digest);

/// Flat map of relative '/'-separated path -> lowercase sha256 hex.
struct HashManifest {
  std::map<std::string, std::string> entries;
};

/// Parses a hashes.json object. Throws malformed_manifest.
HashManifest parse_manifest(std::string_view json_text);
HashManifest load_manifest(const fs::path& path);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string format_manifest(const HashManifest& manifest);
void save_manifest(const HashManifest& manifest, const fs::path& path);

/// Digest of every regular file under root (recursively), keyed by its
/// path relative to root.
HashManifest build_manifest(const fs::path& root);

enum class FileStatus { ok, missing, mismatch };

const char* to_string(FileStatus status) noexcept;

struct FileCheck {
  std::string path;
  FileStatus status = FileStatus::ok;
  std::string expected_digest;
  std::string actual_digest;  // empty when missing
};

/// Checks every entry against the file at root / path, in key order.
std::vector<FileCheck> validate_files(const HashManifest& manifest,
                                      const fs::path& root);

bool all_ok(std::span<const FileCheck> results);

/// "<status> <path>[ <actual digest>]" per line.
std::string format_results(std::span<const FileCheck> results);

}  // namespace voxelrun::manifest
