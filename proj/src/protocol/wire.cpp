#include "velopir/protocol/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

namespace velopir::protocol {

namespace {

constexpr std::uint8_t kMagic[4] = {'V', 'L', 'P', 'W'};

void put16(Bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put64(Bytes& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t pos, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= std::uint64_t{b[pos + i]} << (8 * i);
  return v;
}

std::string os_error(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

const char* msg_name(MsgType t) {
  switch (t) {
    case MsgType::meta: return "META";
    case MsgType::pk: return "PK";
    case MsgType::encdb_ack: return "ENCDB_ACK";
    case MsgType::query: return "QUERY";
    case MsgType::response: return "RESPONSE";
    case MsgType::error: return "ERROR";
  }
  return "?";
}

Bytes encode_frame(const Frame& f) {
  Bytes out;
  out.reserve(kHeaderSize + f.payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put16(out, kWireVersion);
  put16(out, static_cast<std::uint16_t>(f.type));
  put64(out, f.payload.size());
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

FrameHeader parse_header(std::span<const std::uint8_t> h) {
  if (h.size() < kHeaderSize) throw WireError("frame header truncated");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), h.begin())) throw WireError("bad frame magic");
  const auto version = static_cast<std::uint16_t>(get_le(h, 4, 2));
  if (version != kWireVersion) throw WireError("unsupported wire version " + std::to_string(version));
  const auto type = static_cast<std::uint16_t>(get_le(h, 6, 2));
  if (type < 1 || type > 6) throw WireError("unknown message type " + std::to_string(type));
  const std::uint64_t length = get_le(h, 8, 8);
  if (length > kMaxPayload) throw WireError("frame length " + std::to_string(length) + " exceeds limit");
  return {static_cast<MsgType>(type), length};
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  const FrameHeader h = parse_header(bytes);
  if (bytes.size() - kHeaderSize != h.length) throw WireError("frame length disagrees with buffer");
  return Frame{h.type, Bytes(bytes.begin() + kHeaderSize, bytes.end())};
}

Bytes error_payload(ErrorCode code, std::string_view message) {
  Bytes b;
  put32(b, static_cast<std::uint32_t>(code));
  b.insert(b.end(), message.begin(), message.end());
  return b;
}

std::pair<ErrorCode, std::string> parse_error(std::span<const std::uint8_t> payload) {
  if (payload.size() < 4) throw WireError("ERROR payload truncated");
  return {static_cast<ErrorCode>(get_le(payload, 0, 4)), std::string(payload.begin() + 4, payload.end())};
}

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::shutdown() const {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket Socket::connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
    throw ConnectionError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  std::string last = "no addresses";
  for (addrinfo* a = res; a; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return Socket(fd);
    }
    last = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw ConnectionError("cannot connect to " + host + ":" + service + ": " + last);
}

Socket Socket::listen(const std::string& host, std::uint16_t port, int backlog) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0)
    throw ConnectionError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  std::string last = "no addresses";
  for (addrinfo* a = res; a; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, backlog) == 0) {
      ::freeaddrinfo(res);
      return Socket(fd);
    }
    last = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw ConnectionError("cannot listen on " + host + ":" + service + ": " + last);
}

Socket Socket::accept() const {
  for (;;) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return Socket(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return Socket();
  }
}

std::uint16_t Socket::local_port() const {
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) throw ConnectionError(os_error("getsockname"));
  if (addr.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

void Socket::send_all(std::span<const std::uint8_t> bytes) const {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(os_error("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t Socket::recv_exact(std::span<std::uint8_t> out) const {
  std::size_t got = 0;
  while (got < out.size()) {
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(os_error("recv"));
    }
    if (n == 0) break;
    got += static_cast<std::size_t>(n);
  }
  return got;
}

void Channel::send(const Frame& f) {
  const Bytes bytes = encode_frame(f);
  if (transcript_) transcript_->insert(transcript_->end(), bytes.begin(), bytes.end());
  sock_.send_all(bytes);
}

Frame Channel::receive() {
  std::uint8_t header[kHeaderSize];
  const std::size_t got = sock_.recv_exact(header);
  if (got == 0) throw ConnectionError("connection closed");
  if (got < kHeaderSize) throw WireError("frame header truncated");
  const FrameHeader h = parse_header(header);
  Frame f{h.type, {}};
  // Grow with the data actually received so a bogus length cannot force a
  // huge allocation up front.
  constexpr std::size_t kChunk = std::size_t{1} << 20;
  while (f.payload.size() < h.length) {
    const std::size_t start = f.payload.size();
    const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, h.length - start));
    f.payload.resize(start + want);
    if (sock_.recv_exact(std::span(f.payload).subspan(start)) < want) throw WireError("frame payload truncated");
  }
  if (transcript_) {
    transcript_->insert(transcript_->end(), std::begin(header), std::end(header));
    transcript_->insert(transcript_->end(), f.payload.begin(), f.payload.end());
  }
  return f;
}

}  // namespace velopir::protocol
