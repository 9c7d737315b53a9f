#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace apsense::fs {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const void* data,
                  std::size_t size);
void atomic_write(const std::filesystem::path& path, const std::string& text);
void atomic_write(const std::filesystem::path& path,
                  const std::vector<std::uint8_t>& bytes);

}  // namespace apsense::fs
