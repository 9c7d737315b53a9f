#pragma once

#include <filesystem>
#include <vector>

#include "apsense/imagery/client.hpp"
#include "apsense/imagery/plan.hpp"

namespace apsense::imagery {

struct FetcherOptions {
  std::filesystem::path cache_dir;
  int parallelism = 4;
  double requests_per_second = 10.0;  // <= 0 disables rate limiting
  int burst = 10;
  int max_retries = 3;
};

struct FetchedImage {
  ImageRequest request;
  SceneLabel label = SceneLabel::non_hotspot;
  std::filesystem::path path;  // cached file; empty when skipped
  bool from_cache = false;
  bool skipped = false;  // no panorama at this location
};

/// 16-hex-character content address for a request's cache entry.
std::string request_hash(const ImageRequest& request);

/// Fetches every request through the cache. Each distinct acquisition
/// hits the client at most once per run (duplicates and cache hits are
/// served from disk, bit-exactly). Client calls run on up to
/// `parallelism` threads behind a token-bucket rate limit; retryable
/// failures are retried up to max_retries before raising an HTTP error
/// that echoes the request. Results align with the input order.
std::vector<FetchedImage> fetch_all(const std::vector<ImageRequest>& requests,
                                    StreetViewClient& client,
                                    const FetcherOptions& options);

}  // namespace apsense::imagery
