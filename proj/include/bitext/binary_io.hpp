#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>

#include "bitext/error.hpp"

// Little-endian primitives for the binary embedding and index files.

namespace bitext::io {

template <typename T>
T byteswap(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  if constexpr (std::endian::native == std::endian::big) value = byteswap(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void write_le_array(std::ostream& out, std::span<const T> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (const T v : values) write_le(out, v);
  }
}

/// Reads one value; throws TruncatedFile on short read.
template <typename T>
T read_le(std::istream& in, const std::string& what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  BITEXT_CHECK(in.gcount() == static_cast<std::streamsize>(sizeof(T)), TruncatedFile,
               "unexpected end of file while reading " + what);
  if constexpr (std::endian::native == std::endian::big) value = byteswap(value);
  return value;
}

template <typename T>
void read_le_array(std::istream& in, std::span<T> out, const std::string& what) {
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size_bytes()));
  BITEXT_CHECK(in.gcount() == static_cast<std::streamsize>(out.size_bytes()), TruncatedFile,
               "unexpected end of file while reading " + what);
  if constexpr (std::endian::native == std::endian::big) {
    for (T& v : out) v = byteswap(v);
  }
}

}  // namespace bitext::io
