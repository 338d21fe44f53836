#include "rentbound/http_server.hpp"

#include "rentbound/form_codec.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace rentbound {

using Clock = std::chrono::steady_clock;

void ServerConfig::validate() const {
  if (header_timeout.count() <= 0) throw std::invalid_argument("header timeout must be positive");
  if (body_timeout.count() <= 0) throw std::invalid_argument("body timeout must be positive");
  if (max_body < 1) throw std::invalid_argument("max body must be at least 1 byte");
  if (max_header < 16) throw std::invalid_argument("max header too small");
}

HandlerOptions ServerConfig::handler_options() const {
  HandlerOptions o;
  o.max_body = max_body;
  o.strict_status = strict_status;
  o.extra_routes = extra_routes;
  return o;
}

HttpServer::HttpServer(ServerConfig config, Ruleset ruleset, RequestLog* log)
    : config_(std::move(config)), ruleset_(std::move(ruleset)), log_(log) {
  config_.validate();
  options_ = config_.handler_options();
}

HttpServer::~HttpServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::uint16_t HttpServer::listen() {
  if (listen_fd_ >= 0) return port_;
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw ServerError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(config_.port);
  if (::inet_pton(AF_INET, config_.bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw ServerError("invalid bind address '" + config_.bind_address + "'");
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw ServerError("bind to port " + std::to_string(config_.port) + ": " + err);
  }
  if (::listen(fd, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw ServerError("listen: " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  listen_fd_ = fd;
  port_ = ntohs(addr.sin_port);
  return port_;
}

namespace {

enum class ReadStatus { ok, timeout, eof, overflow };

// Waits for readability until the deadline, then reads what is available.
ReadStatus read_some(int fd, std::string& buffer, Clock::time_point deadline, std::size_t limit) {
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) return ReadStatus::timeout;
    pollfd p{fd, POLLIN, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (ready == 0) return ReadStatus::timeout;
    char chunk[4096];
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return ReadStatus::eof;
    }
    if (n == 0) return ReadStatus::eof;
    buffer.append(chunk, static_cast<std::size_t>(n));
    return buffer.size() > limit ? ReadStatus::overflow : ReadStatus::ok;
  }
}

void send_all(int fd, std::string_view data, Clock::time_point deadline) {
  while (!data.empty()) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) return;
    pollfd p{fd, POLLOUT, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(remaining.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) return;
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::string peer_name(const sockaddr_storage& addr, socklen_t len, bool resolve) {
  char host[NI_MAXHOST];
  if (resolve &&
      ::getnameinfo(reinterpret_cast<const sockaddr*>(&addr), len, host, sizeof host, nullptr, 0,
                    NI_NAMEREQD) == 0) {
    return host;
  }
  if (::getnameinfo(reinterpret_cast<const sockaddr*>(&addr), len, host, sizeof host, nullptr, 0,
                    NI_NUMERICHOST) == 0) {
    return host;
  }
  return "anonymous";
}

std::string language_of(std::string_view body) {
  try {
    for (const auto& [name, value] : decode_body(body)) {
      if (name == "Language") return value;
    }
  } catch (const FormError&) {
  }
  return {};
}

}  // namespace

void HttpServer::run() {
  listen();
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, 100);
    if (ready <= 0) continue;
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    const int fd = ::accept4(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len, SOCK_CLOEXEC);
    if (fd < 0) continue;
    std::string peer = peer_name(addr, len, config_.resolve_peers);
    try {
      serve_connection(fd, std::move(peer));
    } catch (...) {
      // A broken connection never stops the loop.
    }
    ::close(fd);
  }
}

void HttpServer::finish(int fd, const HandleResult& result, std::string peer) {
  send_all(fd, result.response.serialize(), Clock::now() + config_.body_timeout);
  ::shutdown(fd, SHUT_WR);
  RequestRecord record;
  record.timestamp = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  record.outcome = result.outcome;
  record.peer = std::move(peer);
  record.user_agent = result.user_agent;
  record.language = result.language;
  counts_[static_cast<std::size_t>(result.outcome)].fetch_add(1);
  handled_.fetch_add(1);
  if (log_) log_->append(record);
}

void HttpServer::serve_connection(int fd, std::string peer) {
  std::string buffer;
  const auto header_deadline = Clock::now() + config_.header_timeout;
  std::optional<std::size_t> header_end;
  while (!(header_end = find_header_end(buffer))) {
    const ReadStatus st = read_some(fd, buffer, header_deadline, config_.max_header);
    if (st == ReadStatus::ok) continue;
    if (st == ReadStatus::timeout) {
      finish(fd, error_result(Outcome::timeout_header, "timeout while reading the request header",
                              Language::German, options_),
             std::move(peer));
      return;
    }
    if (st == ReadStatus::overflow) {
      finish(fd, error_result(Outcome::wrong_request, "request header too large", Language::German, options_),
             std::move(peer));
      return;
    }
    // eof: hand the fragment to handle(), which classifies it.
    finish(fd, handle(buffer, ruleset_, options_), std::move(peer));
    return;
  }

  std::size_t wanted = 0;
  std::string user_agent;
  if (auto head = parse_request_head(std::string_view(buffer).substr(0, *header_end))) {
    if (const std::string* ua = head->header("User-Agent")) user_agent = *ua;
    try {
      wanted = content_length(*head).value_or(0);
    } catch (const std::invalid_argument&) {
      wanted = 0;
    }
    if (head->method != "POST") wanted = 0;
  }
  if (wanted > options_.max_body) wanted = 0;  // handle() rejects it without the body

  const auto body_deadline = Clock::now() + config_.body_timeout;
  while (buffer.size() - *header_end < wanted) {
    const ReadStatus st = read_some(fd, buffer, body_deadline, *header_end + wanted);
    if (st == ReadStatus::ok || st == ReadStatus::overflow) continue;
    if (st == ReadStatus::timeout) {
      HandleResult r = error_result(Outcome::timeout_body, "timeout while reading the request body",
                                    resolve_language(language_of(std::string_view(buffer).substr(*header_end))),
                                    options_);
      r.user_agent = user_agent;
      finish(fd, r, std::move(peer));
      return;
    }
    break;  // eof: truncated body, handle() reports it
  }
  finish(fd, handle(buffer, ruleset_, options_), std::move(peer));
}

}  // namespace rentbound
