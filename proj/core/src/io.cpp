#include "voxelrun/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "voxelrun/error.hpp"

namespace voxelrun {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(Errc::io_error, "read failed for " + path.string());
  return std::move(buffer).str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  std::error_code ec;
  const fs::path parent =
      path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(parent, ec);
  if (ec) fail(Errc::io_error, "cannot create " + parent.string());

  std::string templ = (parent / ("." + path.filename().string() + ".XXXXXX"))
                          .string();
  std::vector<char> name(templ.begin(), templ.end());
  name.push_back('\0');
  const int fd = ::mkstemp(name.data());
  if (fd < 0) {
    fail(Errc::io_error, "cannot create temporary file in " + parent.string() +
                             ": " + std::strerror(errno));
  }
  const fs::path tmp(name.data());

  std::size_t written = 0;
  while (written < contents.size()) {
    const ssize_t n =
        ::write(fd, contents.data() + written, contents.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      fs::remove(tmp, ec);
      fail(Errc::io_error, "write failed for " + path.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::close(fd) != 0) {
    fs::remove(tmp, ec);
    fail(Errc::io_error, "close failed for " + path.string());
  }
  fs::permissions(tmp,
                  fs::perms::owner_read | fs::perms::owner_write |
                      fs::perms::group_read | fs::perms::others_read,
                  ec);
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::io_error, "cannot rename into " + path.string());
  }
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_lines(std::span<const double> values) {
  std::string out;
  for (double v : values) {
    out += format_real(v);
    out += '\n';
  }
  return out;
}

}  // namespace voxelrun
