#pragma once

#include "rentbound/http_handler.hpp"
#include "rentbound/request_log.hpp"
#include "rentbound/ruleset.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace rentbound {

struct ServerConfig {
  std::uint16_t port = 4322;  // 0 picks an ephemeral port
  std::string bind_address = "0.0.0.0";
  std::chrono::milliseconds header_timeout{10'000};
  std::chrono::milliseconds body_timeout{30'000};
  std::size_t max_body = 64 * 1024;
  std::size_t max_header = 16 * 1024;
  std::filesystem::path ruleset_path;
  std::filesystem::path log_path;
  bool strict_status = false;
  bool extra_routes = true;
  /// Reverse-resolve client addresses for the log (slow; off by default).
  bool resolve_peers = false;

  /// Throws std::invalid_argument on non-positive timeouts or max_body == 0.
  void validate() const;
  HandlerOptions handler_options() const;
};

class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sequential HTTP/1.0 service: one connection at a time, each read under a
/// header deadline and a body deadline, answered, closed and logged.
class HttpServer {
 public:
  /// `log` may be null; it must outlive the server otherwise.
  HttpServer(ServerConfig config, Ruleset ruleset, RequestLog* log);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and listens; returns the bound port. Throws ServerError.
  std::uint16_t listen();
  /// Accept loop; returns after stop(). Calls listen() if needed.
  void run();
  /// Safe from other threads and signal handlers.
  void stop() noexcept { stopping_.store(true); }

  std::uint16_t port() const noexcept { return port_; }
  std::size_t handled() const noexcept { return handled_.load(); }
  std::size_t count(Outcome outcome) const noexcept { return counts_[static_cast<std::size_t>(outcome)].load(); }

 private:
  void serve_connection(int fd, std::string peer);
  void finish(int fd, const HandleResult& result, std::string peer);

  ServerConfig config_;
  Ruleset ruleset_;
  HandlerOptions options_;
  RequestLog* log_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> handled_{0};
  std::array<std::atomic<std::size_t>, 5> counts_{};
};

}  // namespace rentbound
