// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include <string>

namespace proxgen {

struct UrlParts {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

// Only http:// URLs are accepted. Throws InvalidConfig.
UrlParts split_url(const std::string& url);

// POST a JSON body and parse the JSON reply. Throws IOFailure on transport
// errors or non-2xx status.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body, int timeout_s);

}  // namespace proxgen
