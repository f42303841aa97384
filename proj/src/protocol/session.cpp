#include "velopir/protocol/session.hpp"

#include <spdlog/spdlog.h>
#include <sys/socket.h>

#include "velopir/protocol/serialize.hpp"

namespace velopir::protocol {

namespace {

Bytes container_bytes(std::initializer_list<Section> sections) {
  Container c;
  for (const auto& s : sections) c.add(s);
  return c.encode();
}

}  // namespace

Bytes pk_payload(const PublicKeyMaterial& pk, const boot::EvaluationKeySet& evk) {
  Container c = to_container(pk);
  boot::append_sections(c, evk);
  return c.encode();
}

struct Server::Connection {
  int fd = -1;  // guarded by Server::mutex_; -1 once the handler closed it
  std::thread thread;
  std::atomic<bool> done{false};
};

Server::Server(data::PlainDatabase db, ServerConfig cfg)
    : db_(std::move(db)), cfg_(std::move(cfg)), ids_(cfg_.seed ? Entropy::seeded(*cfg_.seed) : Entropy::system()) {
  data::validate_database(db_);
}

Server::~Server() { stop(); }

void Server::start() {
  listener_ = Socket::listen(cfg_.host, cfg_.port);
  port_ = listener_.local_port();
  spdlog::info("serving {} records ({} mode, l_I={}, l_S={}) on {}:{}", db_.meta.M, data::mode_name(db_.meta.mode),
               db_.meta.l_I, db_.meta.l_S, cfg_.host, port_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  listener_.close();
  std::vector<std::unique_ptr<Connection>> open;
  {
    std::lock_guard lock(mutex_);
    for (auto& c : connections_)
      if (c->fd >= 0) ::shutdown(c->fd, SHUT_RDWR);
    open.swap(connections_);
  }
  for (auto& c : open)
    if (c->thread.joinable()) c->thread.join();
}

std::uint64_t Server::next_session_id() {
  std::lock_guard lock(id_mutex_);
  return ids_.next_u64();
}

void Server::accept_loop() {
  while (!stopping_) {
    Socket s = listener_.accept();
    if (!s.valid()) break;
    std::lock_guard lock(mutex_);
    if (stopping_) break;
    std::erase_if(connections_, [](const auto& c) {
      if (!c->done) return false;
      c->thread.join();
      return true;
    });
    auto c = std::make_unique<Connection>();
    c->fd = s.fd();
    Connection* raw = c.get();
    c->thread = std::thread([this, raw, sock = std::move(s)]() mutable {
      {
        Channel ch(std::move(sock));
        try {
          handle(ch);
        } catch (const std::exception& e) {
          spdlog::warn("connection ended: {}", e.what());
        }
        std::lock_guard lock(mutex_);
        raw->fd = -1;
      }
      raw->done = true;
    });
    connections_.push_back(std::move(c));
  }
}

void Server::handle(Channel& ch) {
  sessions_.fetch_add(1);

  enum class State { awaiting_pk, ready } state = State::awaiting_pk;
  std::optional<boot::TfheBackend> backend;
  std::optional<TfheDatabase> edb;
  std::uint64_t session = 0;

  auto fail = [&](ErrorCode code, const std::string& msg) {
    errors_.fetch_add(1);
    spdlog::warn("closing session: error {} ({})", static_cast<int>(code), msg);
    try {
      ch.send(MsgType::error, error_payload(code, msg));
    } catch (const std::exception&) {
    }
  };

  ch.send(MsgType::meta, container_bytes({to_section(db_.meta)}));
  for (;;) {
    Frame f;
    try {
      f = ch.receive();
    } catch (const WireError& e) {
      fail(ErrorCode::malformed, e.what());
      break;
    } catch (const ConnectionError&) {
      break;
    }
    if (observer_) observer_(f);

    if (f.type == MsgType::pk && state == State::awaiting_pk) {
      try {
        const Container c = Container::decode(f.payload);
        PublicKeyMaterial pk = public_key_from(c);
        boot::EvaluationKeySet evk = boot::evaluation_keys_from(c);
        if (!(pk.meta == db_.meta)) throw FormatError("public key material does not match the served database");
        if (!pk.pk_I.empty() && pk.pk_I.front().dimension() != evk.params().lwe.n)
          throw FormatError("public key dimension differs from the evaluation key");
        spdlog::info("PK received: {} bytes, {} pk samples", f.payload.size(), pk.pk_I.size() + pk.pk_S.size());
        edb = server_enc(db_, pk);
        backend.emplace(evk, cfg_.mux);
      } catch (const std::exception& e) {
        fail(ErrorCode::malformed, e.what());
        break;
      }
      session = next_session_id();
      state = State::ready;
      ch.send(MsgType::encdb_ack, container_bytes({session_section(session), to_section(db_.meta)}));
      continue;
    }
    if (f.type == MsgType::query && state == State::ready) {
      TfheQuery q;
      try {
        const Container c = Container::decode(f.payload);
        if (session_from(c) != session) {
          fail(ErrorCode::session_mismatch, "unknown session id");
          break;
        }
        q = query_from_section(c.require(tags::kQuery));
        q.validate(db_.meta);
      } catch (const std::exception& e) {
        fail(ErrorCode::malformed, e.what());
        break;
      }
      BitVectorCiphertext r;
      try {
        r = engine::velopir_eval(*backend, q, *edb, cfg_.opt);
      } catch (const std::exception& e) {
        fail(ErrorCode::internal, e.what());
        break;
      }
      queries_.fetch_add(1);
      ch.send(MsgType::response, container_bytes({session_section(session), response_section(r)}));
      continue;
    }
    if (f.type == MsgType::error) break;
    fail(ErrorCode::out_of_order, std::string(msg_name(f.type)) + " is not valid in this state");
    break;
  }
}

Client::Client(const std::string& host, std::uint16_t port, Bytes* transcript)
    : channel_(Socket::connect(host, port), transcript) {
  const Frame f = expect(MsgType::meta);
  meta_ = meta_from_section(Container::decode(f.payload).require(tags::kMeta));
}

Frame Client::expect(MsgType type) {
  Frame f = channel_.receive();
  if (f.type == MsgType::error) {
    auto [code, msg] = parse_error(f.payload);
    throw ProtocolError(code, msg);
  }
  if (f.type != type)
    throw WireError(std::string("expected ") + msg_name(type) + ", received " + msg_name(f.type));
  return f;
}

std::uint64_t Client::preprocess(const boot::KeyBundle& keys, Entropy& entropy) {
  const PublicKeyMaterial pk = pub_key_gen(keys.params.lwe, keys.lwe_key, meta_, entropy);
  channel_.send(MsgType::pk, pk_payload(pk, keys.evk));
  const Container c = Container::decode(expect(MsgType::encdb_ack).payload);
  session_ = session_from(c);
  keys_ = &keys;
  return session_;
}

BitVectorCiphertext Client::query_raw(const TfheQuery& q) {
  channel_.send(MsgType::query, container_bytes({session_section(session_), to_section(q)}));
  const Container c = Container::decode(expect(MsgType::response).payload);
  if (session_from(c) != session_) throw WireError("response carries another session id");
  return response_from_section(c.require(tags::kResponse));
}

Retrieved Client::query(const data::PlainQuery& q, Entropy& entropy) {
  if (!keys_) throw std::logic_error("query before preprocess");
  const TfheQuery eq = client_encrypt_query(q, keys_->lwe_key, keys_->params.lwe, meta_, entropy);
  return client_decrypt_response(query_raw(eq), keys_->lwe_key, meta_);
}

}  // namespace velopir::protocol
