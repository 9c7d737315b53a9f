#include "apsense/common/fs.hpp"

#include <fstream>

#include "apsense/common/error.hpp"

namespace apsense::fs {

namespace stdfs = std::filesystem;

std::vector<std::uint8_t> read_bytes(const stdfs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::string read_text(const stdfs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open file: " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void atomic_write(const stdfs::path& path, const void* data,
                  std::size_t size) {
  if (path.has_parent_path()) stdfs::create_directories(path.parent_path());
  const stdfs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot open file for writing: " + tmp.string());
    out.write(static_cast<const char*>(data),
              static_cast<std::streamsize>(size));
    if (!out) fail_io("short write: " + tmp.string());
  }
  stdfs::rename(tmp, path);
}

void atomic_write(const stdfs::path& path, const std::string& text) {
  atomic_write(path, text.data(), text.size());
}

void atomic_write(const stdfs::path& path,
                  const std::vector<std::uint8_t>& bytes) {
  atomic_write(path, bytes.data(), bytes.size());
}

}  // namespace apsense::fs
