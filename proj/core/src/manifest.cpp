#include "voxelrun/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <json.hpp>
#include <memory>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"

namespace voxelrun::manifest {
namespace {

using json = nlohmann::json;

struct DigestContext {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free};
  DigestContext() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
      fail(Errc::io_error, "cannot initialise SHA-256");
    }
  }
  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx.get(), data, size) != 1) {
      fail(Errc::io_error, "SHA-256 update failed");
    }
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
      fail(Errc::io_error, "SHA-256 finalisation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 0xF];
    }
    return out;
  }
};

bool valid_relative_path(const std::string& path) {
  if (path.empty() || path.front() == '/' || path.find('\\') != std::string::npos) {
    return false;
  }
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const std::size_t end = std::min(path.find('/', pos), path.size());
    const std::string_view part(path.data() + pos, end - pos);
    if (part.empty() || part == "..") return false;
    pos = end + 1;
  }
  return true;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  DigestContext ctx;
  ctx.update(bytes.data(), bytes.size());
  return ctx.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  DigestContext ctx;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    const auto n = in.gcount();
    if (n > 0) ctx.update(buf.data(), static_cast<std::size_t>(n));
  }
  if (in.bad()) fail(Errc::io_error, "read failed for " + path.string());
  return ctx.hex();
}

bool is_sha256_hex(std::string_view digest) {
  return digest.size() == 64 &&
         std::all_of(digest.begin(), digest.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

HashManifest parse_manifest(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(Errc::malformed_manifest, e.what());
  }
  if (!doc.is_object()) fail(Errc::malformed_manifest, "top level must be an object");
  HashManifest m;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) {
      fail(Errc::malformed_manifest, "value for '" + key + "' is not a string");
    }
    const auto digest = value.get<std::string>();
    if (!is_sha256_hex(digest)) {
      fail(Errc::malformed_manifest,
           "digest for '" + key + "' is not 64 lowercase hex characters");
    }
    if (!valid_relative_path(key)) {
      fail(Errc::malformed_manifest, "'" + key + "' is not a relative path");
    }
    m.entries.emplace(key, digest);
  }
  return m;
}

HashManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_file(path));
}

std::string format_manifest(const HashManifest& manifest) {
  json doc = json::object();
  for (const auto& [path, digest] : manifest.entries) doc[path] = digest;
  return doc.dump(2) + "\n";
}

void save_manifest(const HashManifest& manifest, const fs::path& path) {
  write_file_atomic(path, format_manifest(manifest));
}

HashManifest build_manifest(const fs::path& root) {
  HashManifest m;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file()) continue;
    const std::string rel = fs::relative(it->path(), root).generic_string();
    m.entries.emplace(rel, sha256_file(it->path()));
  }
  if (ec) fail(Errc::io_error, "cannot walk " + root.string());
  return m;
}

const char* to_string(FileStatus status) noexcept {
  switch (status) {
    case FileStatus::ok: return "ok";
    case FileStatus::missing: return "missing";
    case FileStatus::mismatch: return "mismatch";
  }
  return "unknown";
}

std::vector<FileCheck> validate_files(const HashManifest& manifest,
                                      const fs::path& root) {
  std::vector<FileCheck> out;
  out.reserve(manifest.entries.size());
  for (const auto& [rel, expected] : manifest.entries) {
    FileCheck check{rel, FileStatus::ok, expected, {}};
    const fs::path file = root / fs::path(rel);
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) {
      check.status = FileStatus::missing;
    } else {
      check.actual_digest = sha256_file(file);
      if (check.actual_digest != expected) check.status = FileStatus::mismatch;
    }
    out.push_back(std::move(check));
  }
  return out;
}

bool all_ok(std::span<const FileCheck> results) {
  return std::all_of(results.begin(), results.end(),
                     [](const FileCheck& c) { return c.status == FileStatus::ok; });
}

std::string format_results(std::span<const FileCheck> results) {
  std::string out;
  for (const auto& c : results) {
    out += to_string(c.status);
    out += ' ';
    out += c.path;
    if (c.status == FileStatus::mismatch) {
      out += ' ';
      out += c.actual_digest;
    }
    out += '\n';
  }
  return out;
}

}  // namespace voxelrun::manifest
