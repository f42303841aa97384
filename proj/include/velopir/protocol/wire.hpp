#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "velopir/torus/container.hpp"

namespace velopir::protocol {

/// Malformed or unexpected framing.
class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Socket-level failure (refused, reset, closed mid-frame).
class ConnectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MsgType : std::uint16_t { meta = 1, pk = 2, encdb_ack = 3, query = 4, response = 5, error = 6 };
const char* msg_name(MsgType t);

enum class ErrorCode : std::uint32_t { malformed = 1, out_of_order = 2, session_mismatch = 3, internal = 4 };

inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr std::size_t kHeaderSize = 16;
inline constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 32;

struct Frame {
  MsgType type = MsgType::error;
  Bytes payload;
};

/// "VLPW" | u16 version | u16 type | u64 length | payload, little-endian.
Bytes encode_frame(const Frame& f);

struct FrameHeader {
  MsgType type;
  std::uint64_t length;
};
/// Throws WireError on bad magic, version, unknown type or oversize length.
FrameHeader parse_header(std::span<const std::uint8_t> header);
/// Whole-frame parse; the buffer must hold exactly one frame.
Frame decode_frame(std::span<const std::uint8_t> bytes);

/// ERROR payload: u32 code then UTF-8 message.
Bytes error_payload(ErrorCode code, std::string_view message);
std::pair<ErrorCode, std::string> parse_error(std::span<const std::uint8_t> payload);

/// Owning TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  /// Throws ConnectionError.
  static Socket connect(const std::string& host, std::uint16_t port);
  /// Port 0 picks an ephemeral port.
  static Socket listen(const std::string& host, std::uint16_t port, int backlog = 16);
  /// Invalid socket once shut down.
  Socket accept() const;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  std::uint16_t local_port() const;

  void send_all(std::span<const std::uint8_t> bytes) const;
  /// Reads until `out` is full or the peer closes; returns the byte count.
  std::size_t recv_exact(std::span<std::uint8_t> out) const;
  void shutdown() const;
  void close();

 private:
  int fd_ = -1;
};

/// Framed connection; optionally appends every byte sent and received, in
/// order, to a transcript.
class Channel {
 public:
  explicit Channel(Socket s, Bytes* transcript = nullptr) : sock_(std::move(s)), transcript_(transcript) {}

  void send(const Frame& f);
  void send(MsgType t, Bytes payload) { send(Frame{t, std::move(payload)}); }
  /// Throws WireError for malformed or truncated frames and
  /// ConnectionError for a connection closed between frames or broken.
  Frame receive();

  Socket& socket() { return sock_; }

 private:
  Socket sock_;
  Bytes* transcript_;
};

}  // namespace velopir::protocol
