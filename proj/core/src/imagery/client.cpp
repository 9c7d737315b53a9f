#include "apsense/imagery/client.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::imagery {

MockClient::MockClient(std::filesystem::path fixture_dir)
    : dir_(std::move(fixture_dir)) {
  if (!std::filesystem::is_directory(dir_))
    fail_config("fixture directory does not exist: " + dir_.string());
}

FetchResponse MockClient::get(const ImageRequest& request) {
  const std::string key = request_key(request);
  for (const char* ext : {".png", ".jpg"}) {
    const std::filesystem::path candidate = dir_ / (key + ext);
    if (std::filesystem::exists(candidate)) {
      FetchResponse r;
      r.status = FetchResponse::Status::ok;
      r.bytes = apsense::fs::read_bytes(candidate);
      return r;
    }
  }
  FetchResponse r;
  r.status = FetchResponse::Status::missing;
  r.message = "no fixture for " + key;
  return r;
}

struct HttpStreetViewClient::Impl {
  httplib::Client http;
  std::string api_key;

  Impl(const std::string& host, std::string key)
      : http(host), api_key(std::move(key)) {
    http.set_connection_timeout(10);
    http.set_read_timeout(30);
  }
};

HttpStreetViewClient::HttpStreetViewClient(std::string host, std::string api_key)
    : impl_(std::make_unique<Impl>(host, std::move(api_key))) {
  if (impl_->api_key.empty()) fail_config("street-view API key is empty");
}

HttpStreetViewClient::~HttpStreetViewClient() = default;

FetchResponse HttpStreetViewClient::get(const ImageRequest& request) {
  httplib::Params params{
      {"location", csv::format_double(request.lat) + "," +
                       csv::format_double(request.lon)},
      {"heading", csv::format_double(request.heading_offset)},
      {"size",
       std::to_string(request.size) + "x" + std::to_string(request.size)},
      {"key", impl_->api_key},
  };
  if (request.fov_deg) params.emplace("fov", csv::format_double(*request.fov_deg));

  const httplib::Result res =
      impl_->http.Get("/maps/api/streetview", params, httplib::Headers{});

  FetchResponse out;
  if (!res) {
    out.status = FetchResponse::Status::retryable;
    out.message = "transport error: " + httplib::to_string(res.error());
    return out;
  }
  if (res->status == 200) {
    out.status = FetchResponse::Status::ok;
    out.bytes.assign(res->body.begin(), res->body.end());
    return out;
  }
  if (res->status == 404) {
    out.status = FetchResponse::Status::missing;
    out.message = "no panorama for " + request_key(request);
    return out;
  }
  if (res->status == 429 || res->status >= 500) {
    out.status = FetchResponse::Status::retryable;
    out.message = "HTTP " + std::to_string(res->status) + " for " +
                  request_key(request);
    return out;
  }
  fail_http("HTTP " + std::to_string(res->status) + " fetching " +
            request_key(request));
}

}  // namespace apsense::imagery
