#include "ifgen/proto/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "ifgen/error.hpp"
#include "ifgen/proto/wire.hpp"

namespace ifgen::proto {

namespace {

std::string errno_text() { return std::strerror(errno); }

bool wait_for(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd p{fd, events, 0};
  int ms = timeout.count() > 0 ? static_cast<int>(timeout.count()) : -1;
  for (;;) {
    int r = ::poll(&p, 1, ms);
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) throw Error(ErrorCode::transport, "poll: " + errno_text());
    return r > 0;
  }
}

}  // namespace

Socket::Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

Socket::~Socket() { close(); }

Socket Socket::connect(const std::string& host, int port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  auto where = host + ":" + std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::unreachable, "resolve " + where + ": " + ::gai_strerror(rc));
  }
  int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw Error(ErrorCode::transport, "socket: " + errno_text());
  }
  Socket s(fd);
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0 && errno != EINPROGRESS) throw Error(ErrorCode::unreachable, "connect " + where + ": " + errno_text());
  if (rc < 0) {
    if (!wait_for(fd, POLLOUT, timeout)) throw Error(ErrorCode::unreachable, "connect " + where + ": timed out");
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) throw Error(ErrorCode::unreachable, "connect " + where + ": " + std::strerror(err));
  }
  ::fcntl(fd, F_SETFL, flags);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return s;
}

void Socket::send_raw(std::string_view bytes) {
  if (fd_ < 0) throw Error(ErrorCode::transport, "socket closed");
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    auto n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::transport, "send: " + errno_text());
    sent += static_cast<std::size_t>(n);
  }
}

void Socket::send_frame(std::string_view payload) { send_raw(frame(payload)); }

bool Socket::read_exact(char* out, std::size_t n, std::chrono::milliseconds timeout) {
  std::size_t got = 0;
  while (got < n) {
    if (timeout.count() > 0 && !wait_for(fd_, POLLIN, timeout)) throw Error(ErrorCode::timeout, "read timed out");
    auto r = ::recv(fd_, out + got, n - got, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) throw Error(ErrorCode::transport, "recv: " + errno_text());
    if (r == 0) {
      if (got == 0) return false;
      throw Error(ErrorCode::transport, "connection closed mid-frame");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

std::optional<std::string> Socket::recv_frame(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw Error(ErrorCode::transport, "socket closed");
  unsigned char head[4];
  if (!read_exact(reinterpret_cast<char*>(head), 4, timeout)) return std::nullopt;
  std::uint32_t n = (std::uint32_t{head[0]} << 24) | (std::uint32_t{head[1]} << 16) | (std::uint32_t{head[2]} << 8) | head[3];
  if (n > kMaxFrame) throw Error(ErrorCode::transport, "frame length " + std::to_string(n) + " exceeds limit");
  std::string payload(n, '\0');
  if (n > 0 && !read_exact(payload.data(), n, timeout)) throw Error(ErrorCode::transport, "connection closed mid-frame");
  return payload;
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Listener::Listener(const std::string& host, int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(ErrorCode::transport, "socket: " + errno_text());
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    close();
    throw Error(ErrorCode::config, "bad listen address " + host);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 64) < 0) {
    auto msg = errno_text();
    close();
    throw Error(ErrorCode::transport, "listen " + host + ":" + std::to_string(port) + ": " + msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() { close(); }

std::optional<Socket> Listener::accept(std::chrono::milliseconds timeout) {
  if (fd_ < 0) return std::nullopt;
  if (!wait_for(fd_, POLLIN, timeout)) return std::nullopt;
  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return Socket(fd);
}

void Listener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace ifgen::proto
