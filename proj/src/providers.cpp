#include <cstdlib>
#include <string>
#include <utility>

#include "httplib.h"

#include "gene_atlas/error.hpp"
#include "gene_atlas/json_codec.hpp"
#include "gene_atlas/narrative.hpp"

namespace gene_atlas {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorCode::kInvalidArgument, "provider endpoint must be an http:// URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteProvider::RemoteProvider(RemoteProviderConfig config) : config_(std::move(config)) {
  split_endpoint(config_.endpoint);
}

ProviderResponse RemoteProvider::complete(const ProviderRequest& request) {
  const auto endpoint = split_endpoint(config_.endpoint);
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    if (const char* token = std::getenv(config_.credential_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  const Json body = {{"story_prompt", request.story_prompt},
                     {"image_prompt", request.image_prompt},
                     {"seed", request.seed},
                     {"max_length", request.max_length}};
  auto result = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::kProviderTimeout,
                "provider unreachable: " + httplib::to_string(result.error()));
  }
  if (result->status == 429 || result->status >= 500) {
    throw Error(ErrorCode::kProviderTimeout,
                "provider unavailable: HTTP " + std::to_string(result->status));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::kProviderRefusal,
                "provider rejected the request: HTTP " + std::to_string(result->status));
  }

  Json doc;
  try {
    doc = Json::parse(result->body);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::kProviderRefusal, "provider returned a non-JSON body");
  }
  if (!doc.is_object()) throw Error(ErrorCode::kProviderRefusal, "provider returned a non-object body");

  ProviderResponse response;
  if (auto it = doc.find("refusal_reason"); it != doc.end() && it->is_string()) {
    response.refusal_reason = it->get<std::string>();
    return response;
  }
  const auto story = doc.find("story");
  if (story == doc.end() || !story->is_string()) {
    throw Error(ErrorCode::kProviderRefusal, "provider response has no story");
  }
  response.story = story->get<std::string>();
  if (auto it = doc.find("image_descriptor"); it != doc.end() && it->is_string()) {
    response.image_descriptor = it->get<std::string>();
  }
  return response;
}

}  // namespace gene_atlas
