#include "ppat/rng.hpp"

#include <openssl/rand.h>

#include <cstring>

#include "ppat/errors.hpp"

namespace ppat {

void SecureRandom::fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
    throw Error("system random source failed");
}

Drbg::Drbg(BytesView seed) {
  ByteWriter w;
  w.field("ppat/drbg/seed");
  w.field(seed);
  key_ = sha256(w.bytes());
}

Drbg Drbg::fork(std::string_view context) const {
  ByteWriter w;
  w.field("ppat/drbg/fork");
  w.field(key_);
  w.field(context);
  Drbg child{BytesView{}};
  child.key_ = sha256(w.bytes());
  child.counter_ = 0;
  return child;
}

void Drbg::fill(std::span<uint8_t> out) {
  size_t off = 0;
  while (off < out.size()) {
    ByteWriter w;
    w.field("ppat/drbg/block");
    w.field(key_);
    w.u64(counter_++);
    Bytes block = sha256(w.bytes());
    size_t n = std::min(block.size(), out.size() - off);
    std::memcpy(out.data() + off, block.data(), n);
    off += n;
  }
}

}  // namespace ppat
