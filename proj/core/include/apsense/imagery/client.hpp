#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apsense/imagery/plan.hpp"

namespace apsense::imagery {

struct FetchResponse {
  enum class Status {
    ok,         // bytes hold an encoded image
    missing,    // no panorama at this location: a skip marker, not an error
    retryable,  // transient failure (HTTP 5xx, quota); safe to retry
  };
  Status status = Status::retryable;
  std::vector<std::uint8_t> bytes;
  std::optional<std::string> panorama_id;
  std::string message;
};

/// Street-view image source. Implementations must be safe to call from
/// multiple threads.
class StreetViewClient {
 public:
  virtual ~StreetViewClient() = default;
  virtual FetchResponse get(const ImageRequest& request) = 0;
};

/// Serves fixture files from a directory, keyed exactly like the live
/// service: "<request_key>.png" or "<request_key>.jpg". A missing
/// fixture is a missing panorama. Bytes are returned verbatim.
class MockClient final : public StreetViewClient {
 public:
  explicit MockClient(std::filesystem::path fixture_dir);
  FetchResponse get(const ImageRequest& request) override;

 private:
  std::filesystem::path dir_;
};

/// Live HTTP client for the street-view static API. The key is passed
/// by the caller (typically from an environment variable; it never
/// lands in config files or logs).
class HttpStreetViewClient final : public StreetViewClient {
 public:
  HttpStreetViewClient(std::string host, std::string api_key);
  ~HttpStreetViewClient() override;
  FetchResponse get(const ImageRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace apsense::imagery
