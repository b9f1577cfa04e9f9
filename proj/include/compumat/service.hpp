#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "compumat/config.hpp"

namespace compumat {

inline constexpr int kDefaultServicePort = 4617;

struct ServiceOptions {
  ProjectConfig config{};
  std::chrono::milliseconds budget{30000};
  std::size_t max_grid_n = 128;
};

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string filename;  // set for file downloads
  std::string request_id;
};

/// Maps a check/validation/budget code to its HTTP status.
int http_status_for(int error_code);

/// Pure request handler behind every /api route. Request bodies are
/// {"id": ..., "payload": {...}}; JSON responses are {"id", "payload", "error"}.
/// File exports answer with the raw bytes.
ServiceResponse handle_api(std::string_view path, std::string_view body, const ServiceOptions& options);

/// HTTP front end. Binds to loopback unless told otherwise.
class Server {
 public:
  explicit Server(ServiceOptions options, std::optional<std::string> static_dir = std::nullopt);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host = "127.0.0.1", int port = kDefaultServicePort);
  /// Serves until stop(); blocks the calling thread.
  void listen();
  /// Serves on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace compumat
