#include "apsense/imagery/manifest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::imagery {

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  if (s == "val") return Split::val;
  fail_input("unknown split: " + s);
}

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::val: return "val";
  }
  fail_input("invalid split value");
}

std::vector<ManifestEntry> DatasetManifest::for_split(Split s) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.split == s) out.push_back(e);
  }
  return out;
}

namespace {

// Largest-remainder apportionment of n items over the three fractions.
// Remainder ties are broken in declaration order: train, test, val.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitFractions& f) {
  const std::array<double, 3> frac = {f.train, f.test, f.val};
  for (double x : frac) {
    if (!std::isfinite(x) || x < 0.0) fail_input("split fractions must be finite and non-negative");
  }
  const double sum = frac[0] + frac[1] + frac[2];
  if (std::abs(sum - 1.0) > 1e-9) fail_input("split fractions must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * frac[i];
    sizes[static_cast<std::size_t>(i)] = static_cast<std::size_t>(std::floor(exact));
    remainder[static_cast<std::size_t>(i)] = exact - std::floor(exact);
    assigned += sizes[static_cast<std::size_t>(i)];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[static_cast<std::size_t>(a)] > remainder[static_cast<std::size_t>(b)]; });
  for (std::size_t k = 0; assigned < n; ++k) {
    ++sizes[static_cast<std::size_t>(order[k % 3])];
    ++assigned;
  }
  return sizes;
}

}  // namespace

DatasetManifest build_manifest(const std::vector<LabeledImage>& images,
                               const SplitFractions& fractions, std::uint64_t seed) {
  if (images.empty()) fail_input("cannot build a manifest from zero images");

  std::vector<const LabeledImage*> hot;
  std::vector<const LabeledImage*> non;
  for (const auto& img : images) {
    (img.label == SceneLabel::hotspot ? hot : non).push_back(&img);
  }

  std::mt19937_64 rng(seed);
  std::shuffle(hot.begin(), hot.end(), rng);
  std::shuffle(non.begin(), non.end(), rng);

  // Interleave the two shuffled class lists so any prefix of the combined
  // order tracks the overall class proportions within one item; cutting the
  // order into contiguous splits then keeps each split balanced within one.
  const std::size_t n = images.size();
  std::vector<const LabeledImage*> ordered;
  ordered.reserve(n);
  std::size_t ih = 0;
  std::size_t in = 0;
  while (ih < hot.size() || in < non.size()) {
    bool pick_hot;
    if (ih >= hot.size()) {
      pick_hot = false;
    } else if (in >= non.size()) {
      pick_hot = true;
    } else {
      const double hot_err = static_cast<double>(ih + 1) / static_cast<double>(hot.size());
      const double non_err = static_cast<double>(in + 1) / static_cast<double>(non.size());
      pick_hot = hot_err <= non_err;
    }
    ordered.push_back(pick_hot ? hot[ih++] : non[in++]);
  }

  const auto sizes = split_sizes(n, fractions);
  DatasetManifest manifest;
  manifest.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Split s = Split::val;
    if (i < sizes[0]) {
      s = Split::train;
    } else if (i < sizes[0] + sizes[1]) {
      s = Split::test;
    }
    manifest.entries.push_back({ordered[i]->path, ordered[i]->label, s});
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    arr.push_back({{"path", e.path},
                   {"label", to_string(e.label)},
                   {"split", to_string(e.split)}});
  }
  fs::atomic_write(path, arr.dump(2) + "\n");
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open manifest: " + path.string());
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    fail_io("invalid manifest JSON in " + path.string() + ": " + e.what());
  }
  if (!arr.is_array()) fail_io("manifest must be a JSON array: " + path.string());

  DatasetManifest manifest;
  manifest.entries.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("path") || !item.contains("label") ||
        !item.contains("split")) {
      fail_io("manifest entries need path, label and split: " + path.string());
    }
    ManifestEntry e;
    e.path = item.at("path").get<std::string>();
    e.label = scene_label_from_string(item.at("label").get<std::string>());
    e.split = split_from_string(item.at("split").get<std::string>());
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace apsense::imagery
