#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace velopir::data {

/// Service payload of up to 128 bits.
using ServiceWord = unsigned __int128;

std::string to_string(ServiceWord w);
/// Decimal or 0x-prefixed hexadecimal. Throws std::invalid_argument.
ServiceWord parse_service(std::string_view s);

/// 2^bits - 1 for bits in 1..128.
ServiceWord max_service(unsigned bits);
bool fits(ServiceWord w, unsigned bits);

/// LSB-first bits. Throws std::out_of_range if w does not fit in l_S bits.
std::vector<bool> encode_service(ServiceWord w, unsigned l_S);
/// Inverse of encode_service. Throws std::out_of_range for more than 128 bits.
ServiceWord decode_service(const std::vector<bool>& bits);

/// UTF-8 bytes packed LSB-first, byte 0 in bits 0..7. Throws
/// std::out_of_range if the text needs more than l_S bits.
ServiceWord encode_text(std::string_view text, unsigned l_S);
std::string decode_text(ServiceWord w);

}  // namespace velopir::data
