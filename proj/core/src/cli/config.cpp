#include "apsense/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "apsense/common/error.hpp"
#include "apsense/common/hash.hpp"

namespace apsense::cli {

namespace {

nlohmann::json default_tree() {
  return nlohmann::json{
      {"seed", 1},
      {"run_records", "out/runs.jsonl"},
      {"cluster",
       {
           {"collisions_csv", ""},
           {"epsilon", 0.0003},
           {"min_points", 50},
           {"k_for_curve", 50},
           {"write_k_distance", false},
           {"out_dir", "out/cluster"},
       }},
      {"fetch",
       {
           {"hotspot_csv", "out/cluster/hotspots.csv"},
           {"noise_csv", "out/cluster/noise.csv"},
           {"mode", "mock"},  // "mock" or "live"
           {"fixture_dir", ""},
           {"host", "https://maps.googleapis.com"},
           {"api_key_env", "STREETVIEW_API_KEY"},
           {"fov_deg", 0.0},  // 0 = service default
           {"max_per_class", 0},  // 0 = only cap non-hotspots to balance
           {"cache_dir", "out/cache"},
           {"parallelism", 4},
           {"requests_per_second", 10.0},
           {"burst", 10},
           {"max_retries", 3},
           {"train_fraction", 0.7},
           {"test_fraction", 0.2},
           {"val_fraction", 0.1},
           {"manifest", "out/fetch/manifest.json"},
       }},
      {"train",
       {
           {"manifest", "out/fetch/manifest.json"},
           {"backbone", "tiny3"},
           {"variant", "c"},
           {"compression", 16},
           {"input_size", 0},  // 0 = backbone preferred size
           {"epochs", 10},
           {"batch_size", 8},
           {"learning_rate", 0.001},
           {"momentum", 0.9},
           {"fc_only", false},
           {"checkpoint", "out/train/model.apsn"},
           {"log_csv", "out/train/train_log.csv"},
       }},
      {"explain",
       {
           {"checkpoint", "out/train/model.apsn"},
           {"manifest", "out/fetch/manifest.json"},
           {"split", "test"},
           {"max_images", 0},  // 0 = whole split
           {"input_size", 0},
           {"methods", nlohmann::json::array({"gradcam", "gradcampp", "scorecam"})},
           {"cam_target", "abm_output"},
           {"target_class", "hotspot"},  // hotspot | non_hotspot | predicted
           {"threshold", 0.5},
           {"use_otsu", false},
           {"out_dir", "out/explain"},
       }},
      {"evaluate",
       {
           {"checkpoint", "out/train/model.apsn"},
           {"manifest", "out/fetch/manifest.json"},
           {"split", "test"},
           {"max_images", 0},
           {"input_size", 0},
           {"methods", nlohmann::json::array({"gradcam", "gradcampp", "scorecam"})},
           {"cam_target", "abm_output"},
           {"target_class", "hotspot"},
           {"threshold", 0.5},
           {"use_otsu", false},
           {"strategies", nlohmann::json::array(
                              {"black_patch", "explain_only", "inverse_cam",
                               "road_imputation"})},
           {"road_thresholds", nlohmann::json::array({10.0, 20.0, 30.0})},
           {"saliency_dir", ""},  // optional <image-stem>.png gaze maps
           {"out_csv", "out/evaluate/metrics.csv"},
       }},
      {"simulate",
       {
           {"plan", ""},
           {"out_csv", "out/simulate/steps.csv"},
       }},
      {"monitor",
       {
           {"trace_csv", ""},
           {"hotspot_csv", "out/cluster/hotspots.csv"},
           {"radius_m", 200.0},
           {"hysteresis_m", 0.0},
           {"out_csv", "out/monitor/events.csv"},
       }},
  };
}

bool same_kind(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) return true;  // int vs double is fine
  return a.type() == b.type();
}

void merge_checked(nlohmann::json& base, const nlohmann::json& incoming,
                   const std::string& prefix) {
  if (!incoming.is_object()) {
    fail_config("config section must be an object: " +
                (prefix.empty() ? std::string("<root>") : prefix));
  }
  for (const auto& [key, value] : incoming.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = base.find(key);
    if (it == base.end()) fail_config("unknown config key: " + path);
    if (it->is_object()) {
      merge_checked(*it, value, path);
    } else {
      if (!same_kind(*it, value)) {
        fail_config("config key " + path + " expects a " +
                    std::string(it->type_name()) + ", got " +
                    std::string(value.type_name()));
      }
      *it = value;
    }
  }
}

std::vector<std::string> split_dotted(const std::string& dotted) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(dotted);
  while (std::getline(in, part, '.')) parts.push_back(part);
  if (parts.empty()) fail_config("empty config path");
  return parts;
}

}  // namespace

RunConfig::RunConfig() : root_(default_tree()) {}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open config file: " + path.string());
  nlohmann::json loaded;
  try {
    in >> loaded;
  } catch (const nlohmann::json::exception& e) {
    fail_config("invalid config JSON in " + path.string() + ": " + e.what());
  }
  RunConfig cfg;
  merge_checked(cfg.root_, loaded, "");
  return cfg;
}

void RunConfig::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail_config("override must look like key.path=value: " + assignment);
  }
  const std::string dotted = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded() || value.is_object()) value = raw;  // plain string

  // Wrap the value in nested objects so the merge reuses the same
  // unknown-key and type checks as file loading.
  auto parts = split_dotted(dotted);
  nlohmann::json wrapped = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    wrapped = nlohmann::json{{*it, wrapped}};
  }
  merge_checked(root_, wrapped, "");
}

const nlohmann::json& RunConfig::at(const std::string& dotted) const {
  const nlohmann::json* node = &root_;
  for (const auto& part : split_dotted(dotted)) {
    if (!node->is_object()) fail_config("config path " + dotted + " is not reachable");
    auto it = node->find(part);
    if (it == node->end()) fail_config("missing config key: " + dotted);
    node = &*it;
  }
  return *node;
}

double RunConfig::number(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_number()) fail_config("config key " + dotted + " must be a number");
  return n.get<double>();
}

int RunConfig::integer(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_number_integer()) fail_config("config key " + dotted + " must be an integer");
  return n.get<int>();
}

std::uint64_t RunConfig::u64(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_number_integer() ||
      (!n.is_number_unsigned() && n.get<std::int64_t>() < 0)) {
    fail_config("config key " + dotted + " must be a non-negative integer");
  }
  return n.get<std::uint64_t>();
}

bool RunConfig::boolean(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_boolean()) fail_config("config key " + dotted + " must be a boolean");
  return n.get<bool>();
}

std::string RunConfig::str(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_string()) fail_config("config key " + dotted + " must be a string");
  return n.get<std::string>();
}

std::vector<std::string> RunConfig::string_list(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_array()) fail_config("config key " + dotted + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : n) {
    if (!item.is_string()) fail_config("config key " + dotted + " must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<double> RunConfig::number_list(const std::string& dotted) const {
  const auto& n = at(dotted);
  if (!n.is_array()) fail_config("config key " + dotted + " must be an array");
  std::vector<double> out;
  for (const auto& item : n) {
    if (!item.is_number()) fail_config("config key " + dotted + " must hold numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

std::string RunConfig::hash() const { return fnv1a64_hex(root_.dump()); }

}  // namespace apsense::cli
