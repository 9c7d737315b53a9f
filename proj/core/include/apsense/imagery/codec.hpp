#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apsense/imagery/image.hpp"

namespace apsense::imagery {

/// Decodes PNG or JPEG bytes. 3-channel results are RGB; single
/// channel stays gray. Undecodable input is an invalid-input error.
ImageU8 decode_image(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_png(const ImageU8& img);
std::vector<std::uint8_t> encode_jpeg(const ImageU8& img, int quality = 92);

ImageU8 read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageU8& img);

}  // namespace apsense::imagery
