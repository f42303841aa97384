#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "velopir/protocol/pir.hpp"
#include "velopir/protocol/wire.hpp"

namespace velopir::protocol {

/// ERROR frame received from the peer.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorCode code, const std::string& msg)
      : std::runtime_error("server error " + std::to_string(static_cast<int>(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  engine::OptimizationConfig opt;
  boot::MuxMode mux = boot::MuxMode::native;
  /// Seeds session ids; system entropy when unset.
  std::optional<std::uint64_t> seed;
};

/// Serves one plaintext database. Each connection is a session running
///   S->C META, C->S PK (public key material plus evk), S->C ENCDB_ACK,
///   then any number of C->S QUERY / S->C RESPONSE pairs.
/// Out-of-order frames get ERROR code 2 and malformed frames code 1; both
/// close the connection. The server never receives secret-key material.
class Server {
 public:
  Server(data::PlainDatabase db, ServerConfig cfg);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting on a background thread.
  void start();
  /// Stops accepting, closes open connections and joins every thread.
  void stop();
  std::uint16_t port() const { return port_; }
  const data::SessionMeta& meta() const { return db_.meta; }

  /// Called with every frame the server receives, before it is handled.
  void set_input_observer(std::function<void(const Frame&)> fn) { observer_ = std::move(fn); }

  std::uint64_t sessions_started() const { return sessions_.load(); }
  std::uint64_t queries_answered() const { return queries_.load(); }
  std::uint64_t errors_sent() const { return errors_.load(); }

 private:
  struct Connection;
  void accept_loop();
  void handle(Channel& ch);
  std::uint64_t next_session_id();

  data::PlainDatabase db_;
  ServerConfig cfg_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<Connection>> connections_;
  std::atomic<bool> stopping_{false};
  std::function<void(const Frame&)> observer_;
  std::mutex id_mutex_;
  Entropy ids_;
  std::atomic<std::uint64_t> sessions_{0}, queries_{0}, errors_{0};
};

/// Client side of one session.
class Client {
 public:
  /// Connects and reads the META frame. `transcript`, when given, receives
  /// every byte sent and received.
  Client(const std::string& host, std::uint16_t port, Bytes* transcript = nullptr);

  const data::SessionMeta& meta() const { return meta_; }
  std::uint64_t session_id() const { return session_; }

  /// Sends fresh public key material and the evk, then waits for the
  /// server to encrypt its database. Returns the session id.
  std::uint64_t preprocess(const boot::KeyBundle& keys, Entropy& entropy);
  BitVectorCiphertext query_raw(const TfheQuery& q);
  Retrieved query(const data::PlainQuery& q, Entropy& entropy);

  Channel& channel() { return channel_; }

 private:
  Frame expect(MsgType type);

  Channel channel_;
  data::SessionMeta meta_;
  std::uint64_t session_ = 0;
  const boot::KeyBundle* keys_ = nullptr;
};

/// PK frame payload: META, PKI, PKS, then the evk sections.
Bytes pk_payload(const PublicKeyMaterial& pk, const boot::EvaluationKeySet& evk);

}  // namespace velopir::protocol
