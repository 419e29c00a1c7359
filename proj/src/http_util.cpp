// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/http_util.hpp"

#include <httplib.h>

#include "proxgen/error.hpp"

namespace proxgen {

UrlParts split_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.compare(0, scheme.size(), scheme) != 0) {
    throw Error(ErrorCode::InvalidConfig, "only http:// endpoints are supported: '" + url + "'");
  }
  const std::size_t slash = url.find('/', scheme.size());
  if (slash == std::string::npos) return UrlParts{url, "/"};
  return UrlParts{url.substr(0, slash), url.substr(slash)};
}

nlohmann::json post_json(const std::string& url, const nlohmann::json& body, int timeout_s) {
  const UrlParts parts = split_url(url);
  httplib::Client client(parts.base);
  client.set_connection_timeout(timeout_s);
  client.set_read_timeout(timeout_s);
  client.set_write_timeout(timeout_s);
  auto res = client.Post(parts.path, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::IOFailure, "POST " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::IOFailure, "POST " + url + " returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw Error(ErrorCode::IOFailure, "POST " + url + " returned a non-JSON body");
  return reply;
}

}  // namespace proxgen
