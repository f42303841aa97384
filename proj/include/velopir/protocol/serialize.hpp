#pragma once

#include "velopir/protocol/pir.hpp"
#include "velopir/torus/container.hpp"

namespace velopir::protocol {

namespace tags {
inline constexpr SectionTag kMeta = make_tag("META");
inline constexpr SectionTag kPkLocation = make_tag("PKI ");
inline constexpr SectionTag kPkService = make_tag("PKS ");
inline constexpr SectionTag kEncDb = make_tag("EDB ");
inline constexpr SectionTag kQuery = make_tag("QRY ");
inline constexpr SectionTag kResponse = make_tag("RESP");
inline constexpr SectionTag kSession = make_tag("SESS");
}  // namespace tags

/// Words M, l_I, l_S, d, mode.
Section to_section(const SessionMeta& m);
SessionMeta meta_from_section(const Section& s);

/// Session id as two words.
Section session_section(std::uint64_t id);
std::uint64_t session_from(const Container& c);

/// META, PKI and PKS. Usage flags are not serialized; decoded material is
/// unused.
Container to_container(const PublicKeyMaterial& pk);
PublicKeyMaterial public_key_from(const Container& c);

/// META and EDB: all samples in (record, location words, service) order.
Container to_container(const TfheDatabase& db);
TfheDatabase database_from(const Container& c);

/// QRY: words mode, word count, width, then the samples.
Section to_section(const TfheQuery& q);
TfheQuery query_from_section(const Section& s);

/// RESP: word width, then the samples.
Section response_section(const BitVectorCiphertext& r);
BitVectorCiphertext response_from_section(const Section& s);

/// Container::encode of a single-section container and the inverse.
Bytes encode_single(Section s);

}  // namespace velopir::protocol
