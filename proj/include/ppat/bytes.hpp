#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppat {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string hex_encode(BytesView data);
Bytes hex_decode(std::string_view hex);  // throws EncodingError on bad input

// SHA-256 of the given input.
Bytes sha256(BytesView data);

// Incremental writer for the canonical transcript byte format:
// every field is emitted as a 4-byte big-endian length followed by the raw
// bytes, so that concatenation is unambiguous.
class ByteWriter {
 public:
  void raw(BytesView data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void raw_u8(uint8_t b) { buf_.push_back(b); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void field(BytesView data);  // length-prefixed
  void field(std::string_view s) { field(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size())); }

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Best-effort scrub of secret material.
void secure_wipe(void* p, size_t n);

}  // namespace ppat
