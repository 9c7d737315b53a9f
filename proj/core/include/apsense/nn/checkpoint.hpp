#pragma once

#include <filesystem>
#include <string>

#include "apsense/nn/classifier.hpp"

namespace apsense::nn {

/// Self-describing binary checkpoint: a JSON header records the
/// architecture (backbone name, attention variant, compression), the
/// body stores every named parameter and buffer as little-endian
/// doubles. Writes are atomic (temp file + rename).
void save_checkpoint(AbmClassifier& model, const std::filesystem::path& path);

/// Rebuilds the architecture from the header and restores weights.
/// Unknown or missing parameter names and shape mismatches are
/// reported as I/O errors.
AbmClassifier load_checkpoint(const std::filesystem::path& path);

}  // namespace apsense::nn
