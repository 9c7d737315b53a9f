#include "apsense/nn/checkpoint.hpp"

#include <cstring>
#include <map>
#include <string_view>

#include <nlohmann/json.hpp>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::nn {
namespace {

constexpr char kMagic[4] = {'A', 'P', 'S', 'N'};
constexpr std::uint32_t kVersion = 1;

// Fields are serialized in host byte order; the toolchain targets
// little-endian platforms only.
template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(std::string_view data, std::size_t& off) {
  if (off + sizeof(T) > data.size()) fail_io("truncated checkpoint file");
  T value;
  std::memcpy(&value, data.data() + off, sizeof(T));
  off += sizeof(T);
  return value;
}

std::string take_bytes(std::string_view data, std::size_t& off, std::size_t n) {
  if (off + n > data.size()) fail_io("truncated checkpoint file");
  std::string out(data.substr(off, n));
  off += n;
  return out;
}

}  // namespace

void save_checkpoint(AbmClassifier& model, const std::filesystem::path& path) {
  nlohmann::json meta;
  meta["backbone"] = model.backbone().name();
  meta["variant"] = to_string(model.variant());
  meta["compression"] = model.compression();
  const std::string meta_str = meta.dump();

  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta_str.size()));
  out += meta_str;

  const std::vector<Param*> params = model.params();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out += p->name;
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->w.size()));
    const char* raw = reinterpret_cast<const char*>(p->w.data());
    out.append(raw, p->w.size() * sizeof(double));
  }
  apsense::fs::atomic_write(path, out);
}

AbmClassifier load_checkpoint(const std::filesystem::path& path) {
  const std::string data = apsense::fs::read_text(path);
  std::size_t off = 0;

  const std::string magic = take_bytes(data, off, 4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    fail_io("not a checkpoint file: " + path.string());
  const auto version = take<std::uint32_t>(data, off);
  if (version != kVersion)
    fail_io("unsupported checkpoint version " + std::to_string(version));

  const auto meta_len = take<std::uint32_t>(data, off);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(take_bytes(data, off, meta_len));
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("bad checkpoint header: ") + e.what());
  }
  if (!meta.contains("backbone") || !meta.contains("variant") ||
      !meta.contains("compression"))
    fail_io("checkpoint header is missing architecture fields");

  AbmClassifier model = make_classifier(
      meta["backbone"].get<std::string>(),
      abm_variant_from_string(meta["variant"].get<std::string>()),
      meta["compression"].get<int>(), /*seed=*/0);

  std::map<std::string, Param*> by_name;
  for (Param* p : model.params()) by_name[p->name] = p;

  const auto count = take<std::uint32_t>(data, off);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = take<std::uint32_t>(data, off);
    const std::string name = take_bytes(data, off, name_len);
    const auto n = take<std::uint64_t>(data, off);
    auto it = by_name.find(name);
    if (it == by_name.end())
      fail_io("checkpoint parameter '" + name + "' does not match the model");
    if (it->second->w.size() != n)
      fail_io("checkpoint parameter '" + name + "' has the wrong size");
    const std::string raw =
        take_bytes(data, off, static_cast<std::size_t>(n) * sizeof(double));
    std::memcpy(it->second->w.data(), raw.data(), raw.size());
    by_name.erase(it);
  }
  if (!by_name.empty())
    fail_io("checkpoint is missing parameters for this architecture");
  return model;
}

}  // namespace apsense::nn
