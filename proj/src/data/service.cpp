#include "velopir/data/service.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace velopir::data {

std::string to_string(ServiceWord w) {
  if (w == 0) return "0";
  std::string s;
  while (w != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(w % 10)));
    w /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

ServiceWord parse_service(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty service value");
  const ServiceWord limit = ~ServiceWord{0};
  ServiceWord v = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    if (s.size() - 2 > 32) throw std::invalid_argument("service value exceeds 128 bits: " + std::string(s));
    for (char c : s.substr(2)) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw std::invalid_argument("bad hex digit in service value: " + std::string(s));
      v = (v << 4) | static_cast<ServiceWord>(d);
    }
    return v;
  }
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad service value: " + std::string(s));
    const auto d = static_cast<ServiceWord>(c - '0');
    if (v > (limit - d) / 10) throw std::invalid_argument("service value exceeds 128 bits: " + std::string(s));
    v = v * 10 + d;
  }
  return v;
}

ServiceWord max_service(unsigned bits) {
  if (bits < 1 || bits > 128) throw std::invalid_argument("service width must be in 1..128");
  return bits == 128 ? ~ServiceWord{0} : (ServiceWord{1} << bits) - 1;
}

bool fits(ServiceWord w, unsigned bits) { return w <= max_service(bits); }

std::vector<bool> encode_service(ServiceWord w, unsigned l_S) {
  if (!fits(w, l_S))
    throw std::out_of_range("service " + to_string(w) + " does not fit in " + std::to_string(l_S) + " bits");
  std::vector<bool> bits(l_S);
  for (unsigned i = 0; i < l_S; ++i) bits[i] = ((w >> i) & 1) != 0;
  return bits;
}

ServiceWord decode_service(const std::vector<bool>& bits) {
  if (bits.size() > 128) throw std::out_of_range("service words are at most 128 bits");
  ServiceWord w = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) w |= ServiceWord{1} << i;
  return w;
}

ServiceWord encode_text(std::string_view text, unsigned l_S) {
  if (text.size() * 8 > l_S)
    throw std::out_of_range("text of " + std::to_string(text.size()) + " bytes does not fit in " +
                            std::to_string(l_S) + " bits");
  ServiceWord w = 0;
  for (std::size_t i = 0; i < text.size(); ++i)
    w |= static_cast<ServiceWord>(static_cast<unsigned char>(text[i])) << (8 * i);
  return w;
}

std::string decode_text(ServiceWord w) {
  std::string s;
  while (w != 0) {
    s.push_back(static_cast<char>(static_cast<unsigned char>(w & 0xFF)));
    w >>= 8;
  }
  return s;
}

}  // namespace velopir::data
