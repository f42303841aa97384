#include "velopir/protocol/pir.hpp"

#include <algorithm>

#include "velopir/protocol/serialize.hpp"

namespace velopir::protocol {

double PublicKeyMaterial::consumed_fraction() const {
  const std::size_t total = used_I.size() + used_S.size();
  if (total == 0) return 0.0;
  const auto used = std::count(used_I.begin(), used_I.end(), true) + std::count(used_S.begin(), used_S.end(), true);
  return static_cast<double>(used) / static_cast<double>(total);
}

bool PublicKeyMaterial::fully_unused() const {
  return std::none_of(used_I.begin(), used_I.end(), [](bool b) { return b; }) &&
         std::none_of(used_S.begin(), used_S.end(), [](bool b) { return b; });
}

PublicKeyMaterial pub_key_gen(const TlweParams& params, const SecretKey& sk, const SessionMeta& meta,
                              Entropy& entropy) {
  meta.validate();
  PublicKeyMaterial pk;
  pk.meta = meta;
  auto zero = [&] { return tlwe_encrypt_torus(Torus(0u), sk, params.sigma, entropy); };
  pk.pk_I.reserve(PublicKeyMaterial::location_count(meta));
  for (std::size_t i = 0; i < PublicKeyMaterial::location_count(meta); ++i) pk.pk_I.push_back(zero());
  pk.pk_S.reserve(PublicKeyMaterial::service_count(meta));
  for (std::size_t i = 0; i < PublicKeyMaterial::service_count(meta); ++i) pk.pk_S.push_back(zero());
  pk.used_I.assign(pk.pk_I.size(), false);
  pk.used_S.assign(pk.pk_S.size(), false);
  return pk;
}

TfheDatabase server_enc(const data::PlainDatabase& db, PublicKeyMaterial& pk) {
  data::validate_database(db);
  const SessionMeta& m = db.meta;
  if (!(pk.meta == m)) throw data::DataError("public key material was generated for a different session shape");
  if (pk.pk_I.size() != PublicKeyMaterial::location_count(m) || pk.pk_S.size() != PublicKeyMaterial::service_count(m) ||
      pk.used_I.size() != pk.pk_I.size() || pk.used_S.size() != pk.pk_S.size())
    throw PublicKeyError("public key material has the wrong number of samples");
  if (!pk.fully_unused()) throw PublicKeyError("public key material was already used; samples are single-use");

  auto embed = [](bool bit, const TlweSample& z) {
    TlweSample ct = z;
    ct.b += encode_bit(bit);
    return ct;
  };
  TfheDatabase out;
  out.meta = m;
  out.records.reserve(m.M);
  std::size_t next_I = 0, next_S = 0;
  for (const auto& r : db.records) {
    engine::EncryptedRecord<boot::TfheBackend> er;
    er.location.mode = m.mode;
    for (const auto& w : engine::location_bits(r, m)) {
      BitVectorCiphertext cw;
      cw.reserve(w.size());
      for (bool b : w) {
        cw.push_back(embed(b, pk.pk_I[next_I]));
        pk.used_I[next_I++] = true;
      }
      er.location.words.push_back(std::move(cw));
    }
    for (bool b : data::encode_service(r.service, m.l_S)) {
      er.service.push_back(embed(b, pk.pk_S[next_S]));
      pk.used_S[next_S++] = true;
    }
    out.records.push_back(std::move(er));
  }
  return out;
}

TfheQuery client_encrypt_query(const data::PlainQuery& q, const SecretKey& sk, const TlweParams& params,
                               const SessionMeta& meta, Entropy& entropy) {
  return engine::encode_query<boot::TfheBackend>(
      q, meta, [&](bool b) { return tlwe_encrypt(b, sk, params, entropy); });
}

Retrieved interpret(data::ServiceWord w) {
  if (w == 0) return {};
  return {w};
}

data::ServiceWord decrypt_word(const BitVectorCiphertext& r, const SecretKey& sk) {
  return engine::decode_word(r, [&](const TlweSample& c) { return tlwe_decrypt(c, sk); });
}

Retrieved client_decrypt_response(const BitVectorCiphertext& r, const SecretKey& sk, const SessionMeta& meta) {
  if (r.size() != meta.l_S)
    throw std::invalid_argument("response width " + std::to_string(r.size()) + " differs from l_S " +
                                std::to_string(meta.l_S));
  return interpret(decrypt_word(r, sk));
}

void save_keys(const std::filesystem::path& dir, const boot::KeyBundle& keys) {
  std::filesystem::create_directories(dir);
  const KeyPaths paths(dir);
  Container params;
  params.add(velopir::to_section(keys.params.lwe));
  params.add(boot::to_section(keys.params.ring));
  params.save(paths.params);

  Container secret;
  secret.add(velopir::to_section(keys.params.lwe));
  secret.add(velopir::to_section(keys.lwe_key));
  secret.add(boot::to_section(keys.params.ring));
  secret.add(boot::to_section(keys.ring_key));
  secret.save(paths.secret);

  Container evk;
  boot::append_sections(evk, keys.evk);
  evk.save(paths.evk);
}

boot::ParameterSet load_params(const std::filesystem::path& file) {
  const Container c = Container::load(file);
  return boot::ParameterSet{params_from_section(c.require(velopir::tags::kParams)),
                            boot::ring_params_from_section(c.require(boot::tags::kRingParams))};
}

boot::KeyBundle load_keys(const std::filesystem::path& dir) {
  const KeyPaths paths(dir);
  const Container secret = Container::load(paths.secret);
  boot::KeyBundle keys;
  keys.params = {params_from_section(secret.require(velopir::tags::kParams)),
                 boot::ring_params_from_section(secret.require(boot::tags::kRingParams))};
  keys.lwe_key = secret_key_from_section(secret.require(velopir::tags::kSecretKey));
  keys.ring_key = boot::ring_key_from_section(secret.require(boot::tags::kRingKey));
  if (keys.lwe_key.size() != keys.params.lwe.n) throw FormatError("secret key length differs from n");
  if (keys.ring_key.N() != keys.params.ring.N || keys.ring_key.k() != keys.params.ring.k)
    throw FormatError("ring key shape differs from parameters");
  keys.evk = boot::evaluation_keys_from(Container::load(paths.evk));
  if (!(keys.evk.params() == keys.params)) throw FormatError("evaluation keys were made for other parameters");
  return keys;
}

}  // namespace velopir::protocol
