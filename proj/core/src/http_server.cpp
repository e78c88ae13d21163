// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <mutex>

#include <fmt/format.h>
#include <httplib.h>

#include "cohortkg/api.hpp"

namespace cohortkg::service {
namespace {

std::mutex g_mutex;
httplib::Server* g_server = nullptr;

std::string allowed_origin(const ServerConfig& config, const httplib::Request& request) {
  const auto& list = config.cors_allowlist;
  if (std::find(list.begin(), list.end(), "*") != list.end()) return "*";
  const std::string origin = request.get_header_value("Origin");
  if (!origin.empty() && std::find(list.begin(), list.end(), origin) != list.end()) {
    return origin;
  }
  return {};
}

}  // namespace

void serve(const Api& api, const ServerConfig& config,
           const std::function<void(const std::string&)>& on_ready) {
  const BindAddress bind = parse_bind(config.bind_address);
  httplib::Server server;

  auto dispatch = [&api](const httplib::Request& request, httplib::Response& response) {
    Response r = api.handle(request.method, request.path, request.body);
    response.status = r.status;
    response.set_content(r.body.dump(), "application/json");
  };
  server.Get(R"(/api/.*)", dispatch);
  server.Post(R"(/api/.*)", dispatch);
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& response) {
    response.status = 204;
  });
  server.set_post_routing_handler([&config](const httplib::Request& request,
                                            httplib::Response& response) {
    const std::string origin = allowed_origin(config, request);
    if (origin.empty()) return;
    response.set_header("Access-Control-Allow-Origin", origin);
    response.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    response.set_header("Access-Control-Allow-Headers", "Content-Type");
    if (origin != "*") response.set_header("Vary", "Origin");
  });
  if (config.static_dir) server.set_mount_point("/", config.static_dir->string());

  if (!server.bind_to_port(bind.host, bind.port)) {
    throw std::runtime_error(fmt::format("cannot bind {}", config.bind_address));
  }
  {
    std::lock_guard lock(g_mutex);
    g_server = &server;
  }
  if (on_ready) on_ready(fmt::format("{}:{}", bind.host, bind.port));
  server.listen_after_bind();
  std::lock_guard lock(g_mutex);
  g_server = nullptr;
}

void stop_server() {
  std::lock_guard lock(g_mutex);
  if (g_server) g_server->stop();
}

}  // namespace cohortkg::service
