#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace oped::detail {

template <class T>
using UIntOf = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, void>>;

/// Writes the value's bytes least significant first regardless of host order.
template <class T>
void write_le(std::ostream& out, T value) {
  auto bits = std::bit_cast<UIntOf<T>>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes, sizeof(T));
}

template <class T>
bool read_le(std::istream& in, T& value) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) return false;
  UIntOf<T> bits = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) bits = (bits << 8) | bytes[i];
  value = std::bit_cast<T>(bits);
  return true;
}

}  // namespace oped::detail
