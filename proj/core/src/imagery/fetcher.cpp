#include "apsense/imagery/fetcher.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/common/hash.hpp"

namespace apsense::imagery {
namespace {

class TokenBucket {
 public:
  TokenBucket(double rate_per_s, int burst)
      : rate_(rate_per_s),
        capacity_(static_cast<double>(std::max(burst, 1))),
        tokens_(capacity_),
        last_(Clock::now()) {}

  void acquire() {
    if (rate_ <= 0.0) return;
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const double deficit = (1.0 - tokens_) / rate_;
      lock.unlock();
      std::this_thread::sleep_for(std::chrono::duration<double>(deficit));
      lock.lock();
    }
  }

 private:
  using Clock = std::chrono::steady_clock;

  void refill() {
    const auto now = Clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
  }

  double rate_;
  double capacity_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

const char* sniff_extension(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' &&
      bytes[2] == 'N' && bytes[3] == 'G')
    return ".png";
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8)
    return ".jpg";
  fail_input("fetched payload is neither PNG nor JPEG");
}

std::filesystem::path cache_lookup(const std::filesystem::path& dir,
                                   const std::string& hash) {
  for (const char* ext : {".png", ".jpg"}) {
    const std::filesystem::path candidate = dir / (hash + ext);
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return {};
}

}  // namespace

std::string request_hash(const ImageRequest& request) {
  return apsense::fnv1a64_hex(request_key(request));
}

std::vector<FetchedImage> fetch_all(const std::vector<ImageRequest>& requests,
                                    StreetViewClient& client,
                                    const FetcherOptions& options) {
  if (options.cache_dir.empty()) fail_config("fetch cache directory is not set");
  if (options.parallelism < 1) fail_config("fetch parallelism must be >= 1");
  std::filesystem::create_directories(options.cache_dir);

  // One fetch per distinct acquisition; duplicates share the result.
  std::vector<std::size_t> unique_of(requests.size());
  std::vector<std::size_t> unique_indices;
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      const std::string key = request_key(requests[i]);
      auto [it, inserted] = seen.emplace(key, unique_indices.size());
      if (inserted) unique_indices.push_back(i);
      unique_of[i] = it->second;
    }
  }

  struct UniqueResult {
    std::filesystem::path path;
    bool from_cache = false;
    bool skipped = false;
  };
  std::vector<UniqueResult> results(unique_indices.size());

  TokenBucket bucket(options.requests_per_second, options.burst);
  std::atomic<std::size_t> cursor{0};
  std::mutex error_mu;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t u = cursor.fetch_add(1);
      if (u >= unique_indices.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error) return;
      }
      try {
        const ImageRequest& req = requests[unique_indices[u]];
        const std::string hash = request_hash(req);

        const std::filesystem::path hit = cache_lookup(options.cache_dir, hash);
        if (!hit.empty()) {
          results[u] = {hit, true, false};
          continue;
        }

        FetchResponse resp;
        int attempts = 0;
        for (;;) {
          bucket.acquire();
          resp = client.get(req);
          if (resp.status != FetchResponse::Status::retryable) break;
          if (++attempts > options.max_retries)
            fail_http("fetch failed after " +
                      std::to_string(options.max_retries) + " retries (" +
                      resp.message + "): " + request_key(req));
        }
        if (resp.status == FetchResponse::Status::missing) {
          results[u] = {{}, false, true};
          continue;
        }
        const std::filesystem::path path =
            options.cache_dir / (hash + sniff_extension(resp.bytes));
        apsense::fs::atomic_write(path, resp.bytes);
        results[u] = {path, false, false};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n_threads = std::min<std::size_t>(
      static_cast<std::size_t>(options.parallelism),
      std::max<std::size_t>(unique_indices.size(), 1));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::vector<FetchedImage> out;
  out.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const UniqueResult& r = results[unique_of[i]];
    FetchedImage f;
    f.request = requests[i];
    f.label = requests[i].label;
    f.path = r.path;
    f.from_cache = r.from_cache;
    f.skipped = r.skipped;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace apsense::imagery
