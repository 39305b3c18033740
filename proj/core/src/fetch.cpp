#include "voxelrun/fetch.hpp"

#include <curl/curl.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <vector>

#include "voxelrun/error.hpp"
#include "voxelrun/manifest.hpp"

namespace voxelrun::fetch {
namespace {

class TempFile {
 public:
  explicit TempFile(const fs::path& dest) {
    const fs::path dir = dest.has_parent_path() ? dest.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(Errc::io_error, "cannot create " + dir.string());
    std::string templ = (dir / ("." + dest.filename().string() + ".part-XXXXXX")).string();
    std::vector<char> name(templ.begin(), templ.end());
    name.push_back('\0');
    const int fd = ::mkstemp(name.data());
    if (fd < 0) fail(Errc::io_error, "cannot create temporary file in " + dir.string());
    path_ = name.data();
    file_ = ::fdopen(fd, "wb");
    if (file_ == nullptr) {
      ::close(fd);
      remove();
      fail(Errc::io_error, "cannot open temporary file");
    }
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() {
    close();
    if (!committed_) remove();
  }

  std::FILE* handle() { return file_; }
  const fs::path& path() const { return path_; }

  void close() {
    if (file_ != nullptr) {
      const bool ok = std::fclose(file_) == 0;
      file_ = nullptr;
      if (!ok) fail(Errc::io_error, "cannot flush " + path_.string());
    }
  }

  void commit(const fs::path& dest) {
    close();
    std::error_code ec;
    fs::permissions(path_,
                    fs::perms::owner_read | fs::perms::owner_write |
                        fs::perms::group_read | fs::perms::others_read,
                    ec);
    fs::rename(path_, dest, ec);
    if (ec) fail(Errc::io_error, "cannot rename into " + dest.string());
    committed_ = true;
  }

 private:
  void remove() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

  fs::path path_;
  std::FILE* file_ = nullptr;
  bool committed_ = false;
};

std::string scheme_of(const std::string& url) {
  const auto pos = url.find("://");
  if (pos == std::string::npos) return {};
  std::string scheme = url.substr(0, pos);
  for (char& c : scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return scheme;
}

fs::path file_url_path(const std::string& url) {
  std::string rest = url.substr(std::strlen("file://"));
  if (rest.rfind("localhost/", 0) == 0) rest = rest.substr(std::strlen("localhost"));
  if (rest.empty() || rest.front() != '/') {
    fail(Errc::invalid_argument, "file URL must hold an absolute path: " + url);
  }
  std::string decoded;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '%' && i + 2 < rest.size() &&
        std::isxdigit(static_cast<unsigned char>(rest[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(rest[i + 2]))) {
      decoded += static_cast<char>(std::stoi(rest.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      decoded += rest[i];
    }
  }
  return decoded;
}

void copy_local(const fs::path& source, std::FILE* out) {
  std::ifstream in(source, std::ios::binary);
  if (!in) fail(Errc::network_error, "cannot open " + source.string());
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto n = static_cast<std::size_t>(in.gcount());
    if (n > 0 && std::fwrite(buf.data(), 1, n, out) != n) {
      fail(Errc::io_error, "write failed");
    }
  }
  if (in.bad()) fail(Errc::network_error, "read failed for " + source.string());
}

std::size_t write_body(char* data, std::size_t size, std::size_t nmemb, void* user) {
  return std::fwrite(data, size, nmemb, static_cast<std::FILE*>(user));
}

void download_http(const std::string& url, std::FILE* out) {
  static std::once_flag init;
  std::call_once(init, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(),
                                                           &curl_easy_cleanup);
  if (!curl) fail(Errc::network_error, "cannot initialise libcurl");
  char err[CURL_ERROR_SIZE] = {0};
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, &write_body);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, out);
  curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_ERRORBUFFER, err);
  curl_easy_setopt(curl.get(), CURLOPT_NOSIGNAL, 1L);
  const CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) {
    fail(Errc::network_error, url + ": " + (err[0] ? err : curl_easy_strerror(rc)));
  }
}

}  // namespace

std::string join_url(const std::string& base, const std::string& relative) {
  if (base.empty()) return relative;
  if (base.back() == '/') return base + relative;
  return base + "/" + relative;
}

FetchOutcome fetch(const std::string& url, const fs::path& dest_path,
                   const std::optional<std::string>& expected_digest) {
  const std::string scheme = scheme_of(url);
  if (scheme != "http" && scheme != "https" && scheme != "file") {
    fail(Errc::invalid_argument, "unsupported URL scheme: " + url);
  }
  std::error_code ec;
  if (expected_digest && fs::is_regular_file(dest_path, ec) &&
      manifest::sha256_file(dest_path) == *expected_digest) {
    return FetchOutcome::cached;
  }

  TempFile tmp(dest_path);
  if (scheme == "file") {
    copy_local(file_url_path(url), tmp.handle());
  } else {
    download_http(url, tmp.handle());
  }
  tmp.close();
  if (expected_digest) {
    const std::string actual = manifest::sha256_file(tmp.path());
    if (actual != *expected_digest) {
      fail(Errc::digest_mismatch, url + ": expected " + *expected_digest +
                                      ", got " + actual);
    }
  }
  tmp.commit(dest_path);
  return FetchOutcome::downloaded;
}

}  // namespace voxelrun::fetch
