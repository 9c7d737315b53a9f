#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apsense/imagery/plan.hpp"

namespace apsense::imagery {

enum class Split { train, test, val };

Split split_from_string(const std::string& s);
std::string to_string(Split s);

struct ManifestEntry {
  std::string path;
  SceneLabel label = SceneLabel::non_hotspot;
  Split split = Split::train;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> for_split(Split s) const;
};

struct SplitFractions {
  double train = 0.7;
  double test = 0.2;
  double val = 0.1;
};

struct LabeledImage {
  std::string path;
  SceneLabel label = SceneLabel::non_hotspot;
};

// Deterministic stratified split. Global split sizes come from largest-remainder
// rounding of the fractions (ties favor train, then test, then val), so ten
// images under the default fractions land exactly 7/2/1. Items are shuffled
// per class with a single seeded generator, interleaved so every manifest
// prefix stays within one image of the class proportions, then cut into
// train/test/val in that order. Per-split class counts therefore stay within
// one of the stratified ideal.
DatasetManifest build_manifest(const std::vector<LabeledImage>& images,
                               const SplitFractions& fractions, std::uint64_t seed);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace apsense::imagery
