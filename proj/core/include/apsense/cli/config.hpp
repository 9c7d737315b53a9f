#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace apsense::cli {

/// Hierarchical run configuration with one section per subcommand.
/// Every key a config file or override may set exists in the default
/// tree; anything else is rejected, so typos never pass silently.
class RunConfig {
 public:
  RunConfig();  // defaults

  /// Defaults deep-merged with the file's values. Unknown keys and
  /// type mismatches are config errors.
  static RunConfig from_file(const std::filesystem::path& path);

  /// Applies one "dotted.path=value" override. The value is parsed as
  /// JSON when possible (numbers, booleans, arrays), else as a string.
  void set_override(const std::string& assignment);

  const nlohmann::json& root() const { return root_; }

  /// Lookup by dotted path; missing path is a config error.
  const nlohmann::json& at(const std::string& dotted) const;

  double number(const std::string& dotted) const;
  int integer(const std::string& dotted) const;
  std::uint64_t u64(const std::string& dotted) const;
  bool boolean(const std::string& dotted) const;
  std::string str(const std::string& dotted) const;
  std::vector<std::string> string_list(const std::string& dotted) const;
  std::vector<double> number_list(const std::string& dotted) const;

  /// FNV-1a of the canonical (key-sorted) serialization; recorded in
  /// run-records so replays can be matched to their configuration.
  std::string hash() const;

 private:
  nlohmann::json root_;
};

}  // namespace apsense::cli
