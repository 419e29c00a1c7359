// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/review_server.hpp"

#include <httplib.h>

#include "proxgen/error.hpp"

namespace proxgen {

using nlohmann::json;

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownItem: return 404;
    case ErrorCode::ConcurrentEditConflict: return 409;
    case ErrorCode::IllegalTransition:
    case ErrorCode::InvalidArgument: return 422;
    case ErrorCode::IOFailure: return 500;
    default: return 400;
  }
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& detail) {
  res.status = status_for(code);
  res.set_content(json{{"error", to_string(code)}, {"detail", detail}}.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    send_error(res, e.code(), e.detail());
  } catch (const std::exception& e) {
    send_error(res, ErrorCode::UsageError, e.what());
  }
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw Error(ErrorCode::UsageError, std::string("bad '") + name + "' parameter");
  return static_cast<std::size_t>(n);
}

}  // namespace

struct ReviewServer::Impl {
  explicit Impl(ReviewStore& s) : store(s) {}
  ReviewStore& store;
  httplib::Server server;
};

ReviewServer::ReviewServer(ReviewStore& store) : impl_(std::make_unique<Impl>(store)) {
  httplib::Server& s = impl_->server;
  ReviewStore& st = impl_->store;

  s.Get("/items", [&st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::optional<ReviewStatus> status;
      if (req.has_param("status")) {
        status = parse_review_status(req.get_param_value("status"));
        if (!status) throw Error(ErrorCode::UsageError, "unknown status filter");
      }
      const std::size_t offset = size_param(req, "offset", 0);
      const std::size_t limit = std::min<std::size_t>(size_param(req, "limit", 50), 500);
      const ItemPage page = st.list(status, offset, limit);
      json items = json::array();
      for (const auto& [item, state] : page.entries) {
        json row = {{"id", item->id},
                    {"category", category_name(item->category)},
                    {"status", review_status_name(state.status)},
                    {"version", version_token(state.version)}};
        if (!item->is_chain()) row["proximity_kind"] = proximity_kind_name(item->proximity_kind);
        items.push_back(row);
      }
      res.set_content(json{{"total", page.total}, {"offset", offset}, {"limit", limit}, {"items", items}}.dump(),
                      "application/json");
    });
  });

  s.Get(R"(/items/([^/]+))", [&st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json view = st.view(req.matches[1]);
      res.set_header("X-Version-Token", view.at("version").get<std::string>());
      res.set_content(view.dump(), "application/json");
    });
  });

  s.Post(R"(/items/([^/]+)/verdict)", [&st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_header("X-Version-Token")) throw Error(ErrorCode::UsageError, "missing X-Version-Token header");
      if (!req.has_header("X-Reviewer-Id")) throw Error(ErrorCode::UsageError, "missing X-Reviewer-Id header");
      const json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("verdict") || !body["verdict"].is_string()) {
        throw Error(ErrorCode::UsageError, "body must be an object with a 'verdict' string");
      }
      Verdict v;
      v.action = body["verdict"].get<std::string>();
      if (body.contains("note") && body["note"].is_string()) v.note = body["note"].get<std::string>();
      if (body.contains("payload") && !body["payload"].is_null()) v.payload = body["payload"];
      const ReviewState state = st.submit(req.matches[1], v, req.get_header_value("X-Version-Token"),
                                          req.get_header_value("X-Reviewer-Id"));
      res.set_header("X-Version-Token", version_token(state.version));
      res.set_content(json{{"state", review_state_to_json(state)}, {"version", version_token(state.version)}}.dump(),
                      "application/json");
    });
  });

  s.Get("/export", [&st](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(serialize_items(st.export_items()), "application/x-ndjson"); });
  });
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::IOFailure, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::IOFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ReviewServer::listen() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace proxgen
