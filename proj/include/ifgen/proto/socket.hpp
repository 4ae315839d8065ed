#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ifgen::proto {

/// Blocking TCP stream that speaks length-prefixed frames. Failures throw
/// Error(transport), or Error(unreachable) on connect.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  static Socket connect(const std::string& host, int port, std::chrono::milliseconds timeout = std::chrono::seconds(5));

  bool valid() const { return fd_ >= 0; }
  void send_frame(std::string_view payload);
  /// Next frame, or nullopt when the peer closed cleanly between frames.
  /// A read timeout of zero waits indefinitely.
  std::optional<std::string> recv_frame(std::chrono::milliseconds timeout = std::chrono::milliseconds(0));
  void send_raw(std::string_view bytes);
  /// Unblocks pending reads; safe from another thread.
  void shutdown();
  void close();

 private:
  bool read_exact(char* out, std::size_t n, std::chrono::milliseconds timeout);

  int fd_ = -1;
};

class Listener {
 public:
  /// Port 0 binds an ephemeral port.
  Listener(const std::string& host, int port);
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  int port() const { return port_; }
  /// Waits up to `timeout` for a connection.
  std::optional<Socket> accept(std::chrono::milliseconds timeout);
  void close();

 private:
  int fd_ = -1;
  int port_ = 0;
};

}  // namespace ifgen::proto
