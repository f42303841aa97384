#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "velopir/boot/bootstrap.hpp"
#include "velopir/engine/engine.hpp"

namespace velopir::protocol {

using data::SessionMeta;
using TfheDatabase = engine::EncryptedDatabase<boot::TfheBackend>;
using TfheQuery = engine::EncryptedQuery<boot::TfheBackend>;

/// Raised when public-key samples are missing or already used.
class PublicKeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fresh encryptions of zero the server adds to its plaintext bits.
/// pk_I holds M * location_words * l_I samples ordered (record, word, bit);
/// pk_S holds M * l_S samples ordered (record, bit).
struct PublicKeyMaterial {
  SessionMeta meta;
  std::vector<TlweSample> pk_I;
  std::vector<TlweSample> pk_S;
  std::vector<bool> used_I;
  std::vector<bool> used_S;

  static std::size_t location_count(const SessionMeta& m) {
    return std::size_t{m.M} * m.location_words() * m.l_I;
  }
  static std::size_t service_count(const SessionMeta& m) { return std::size_t{m.M} * m.l_S; }
  /// Fraction of samples already spent.
  double consumed_fraction() const;
  bool fully_unused() const;
};

PublicKeyMaterial pub_key_gen(const TlweParams& params, const SecretKey& sk, const SessionMeta& meta,
                              Entropy& entropy);

/// Embeds every bit as trivial(Ecd(bit)) + a pk sample and marks the sample
/// used. Throws PublicKeyError if the material is short or any sample was
/// used before, and data::DataError on a shape mismatch.
TfheDatabase server_enc(const data::PlainDatabase& db, PublicKeyMaterial& pk);

/// Fresh per-bit encryptions. Throws std::out_of_range for values outside
/// the l_I-bit range.
TfheQuery client_encrypt_query(const data::PlainQuery& q, const SecretKey& sk, const TlweParams& params,
                               const SessionMeta& meta, Entropy& entropy);

/// Decrypted service word; nullopt is "no match" (or a zero-valued service).
struct Retrieved {
  std::optional<data::ServiceWord> value;
  bool matched() const { return value.has_value(); }
};

Retrieved interpret(data::ServiceWord w);
data::ServiceWord decrypt_word(const BitVectorCiphertext& r, const SecretKey& sk);
/// Throws std::invalid_argument when the width is not l_S.
Retrieved client_decrypt_response(const BitVectorCiphertext& r, const SecretKey& sk, const SessionMeta& meta);

/// Key files in a directory: params.vlp1 (PARM, RPRM), secret.vlp1 (PARM,
/// SKEY, RPRM, RKEY) and evk.vlp1 (PARM, RPRM, BSK, KSK).
struct KeyPaths {
  std::filesystem::path params, secret, evk;
  explicit KeyPaths(const std::filesystem::path& dir)
      : params(dir / "params.vlp1"), secret(dir / "secret.vlp1"), evk(dir / "evk.vlp1") {}
};

void save_keys(const std::filesystem::path& dir, const boot::KeyBundle& keys);
boot::KeyBundle load_keys(const std::filesystem::path& dir);
boot::ParameterSet load_params(const std::filesystem::path& file);

}  // namespace velopir::protocol
