#pragma once

#include <span>
#include <string_view>

#include "ppat/bytes.hpp"

namespace ppat {

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }
};

// OS-backed randomness (OpenSSL RAND_bytes). Default everywhere.
class SecureRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

// Deterministic SHA-256 counter generator for seeded test runs. Never use
// for a real election; the CLI only enables it behind --insecure-seed.
class Drbg final : public RandomSource {
 public:
  explicit Drbg(BytesView seed);
  explicit Drbg(std::string_view seed) : Drbg(to_bytes(seed)) {}

  // Independent child stream; used to keep multi-item workloads
  // deterministic regardless of processing order.
  Drbg fork(std::string_view context) const;

  void fill(std::span<uint8_t> out) override;

 private:
  Bytes key_;
  uint64_t counter_ = 0;
};

}  // namespace ppat
