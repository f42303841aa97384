#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "velopir/boot/params.hpp"
#include "velopir/boot/ring.hpp"
#include "velopir/torus/container.hpp"
#include "velopir/torus/entropy.hpp"
#include "velopir/torus/tlwe.hpp"

namespace velopir::boot {

namespace tags {
inline constexpr SectionTag kRingParams = make_tag("RPRM");
inline constexpr SectionTag kRingKey = make_tag("RKEY");
inline constexpr SectionTag kBootstrapKey = make_tag("BSK ");
inline constexpr SectionTag kKeySwitchKey = make_tag("KSK ");
}  // namespace tags

/// Key-switching key from an input key s' (dimension in_dim) to the level-0
/// key s. Entry (i, j) encrypts s'_i / base^(j+1) under s.
class KeySwitchKey {
 public:
  KeySwitchKey() = default;
  KeySwitchKey(std::uint32_t in_dim, std::uint32_t out_dim, std::uint32_t base_log,
               std::uint32_t levels);

  std::uint32_t in_dim() const { return in_dim_; }
  std::uint32_t out_dim() const { return out_dim_; }
  std::uint32_t base_log() const { return base_log_; }
  std::uint32_t levels() const { return levels_; }

  /// a-part of entry (i, j), out_dim words followed by the body.
  Torus* entry(std::size_t i, std::size_t j) { return data_.data() + (i * levels_ + j) * (out_dim_ + 1); }
  const Torus* entry(std::size_t i, std::size_t j) const {
    return data_.data() + (i * levels_ + j) * (out_dim_ + 1);
  }
  const std::vector<Torus>& data() const { return data_; }
  std::vector<Torus>& data() { return data_; }

 private:
  std::uint32_t in_dim_ = 0, out_dim_ = 0, base_log_ = 0, levels_ = 0;
  std::vector<Torus> data_;
};

KeySwitchKey gen_key_switch_key(const SecretKey& in_key, const SecretKey& out_key,
                                const RingParams& params, Entropy& entropy);

/// Sample under the input key -> sample of the same phase (plus noise)
/// under the output key.
TlweSample key_switch(const TlweSample& ct, const KeySwitchKey& ksk);

/// Public evaluation material: bootstrapping key (one TRGSW encryption of
/// each level-0 key bit under the ring key) and key-switching key back to
/// the level-0 key. Copies share the underlying storage.
class EvaluationKeySet {
 public:
  EvaluationKeySet() = default;
  EvaluationKeySet(ParameterSet params, std::vector<TrgswSample> bsk, KeySwitchKey ksk);

  bool empty() const { return !impl_; }
  const ParameterSet& params() const { return impl_->params; }
  const std::vector<TrgswSample>& bsk() const { return impl_->bsk; }
  const TrgswSpectrum& bsk_spectrum(std::size_t i) const { return impl_->spectra[i]; }
  const KeySwitchKey& ksk() const { return impl_->ksk; }

 private:
  struct Impl {
    ParameterSet params;
    std::vector<TrgswSample> bsk;
    std::vector<TrgswSpectrum> spectra;
    KeySwitchKey ksk;
  };
  std::shared_ptr<const Impl> impl_;
};

EvaluationKeySet gen_evaluation_keys(const SecretKey& lwe_key, const RingSecretKey& ring_key,
                                     const ParameterSet& params, Entropy& entropy);

/// Convenience bundle of everything a key owner holds.
struct KeyBundle {
  ParameterSet params;
  SecretKey lwe_key;
  RingSecretKey ring_key;
  EvaluationKeySet evk;
};

KeyBundle generate_keys(const ParameterSet& params, Entropy& entropy);

/// round(x * 2N) mod 2N.
std::uint32_t mod_switch(Torus x, std::uint32_t N);

/// X^(-b~ + sum a~_i s_i) * v, where ~ is mod_switch.
TrlweSample blind_rotate(const TrlweSample& v, const TlweSample& ct, const EvaluationKeySet& evk);

/// Fresh sample of +mu if phase(ct) lies in (0, 1/2) and -mu otherwise,
/// under the flattened ring key (dimension k*N).
TlweSample bootstrap_without_keyswitch(const TlweSample& ct, Torus mu, const EvaluationKeySet& evk);

/// bootstrap_without_keyswitch followed by key switching to dimension n.
TlweSample bootstrap(const TlweSample& ct, Torus mu, const EvaluationKeySet& evk);

Section to_section(const RingParams& p);
RingParams ring_params_from_section(const Section& s);
Section to_section(const RingSecretKey& key);
RingSecretKey ring_key_from_section(const Section& s);

/// PARM, RPRM, BSK and KSK sections.
void append_sections(Container& c, const EvaluationKeySet& evk);
EvaluationKeySet evaluation_keys_from(const Container& c);

}  // namespace velopir::boot
