#pragma once

#include <stdexcept>
#include <string>

namespace ppat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or non-canonical encodings (off-curve points, out-of-range
// scalars, wrong lengths). The message names the offending location.
struct EncodingError : Error {
  using Error::Error;
};

// File or JSON level problems.
struct ParseError : Error {
  using Error::Error;
};

// A ballot failed validation and was not posted.
struct BallotRejected : Error {
  using Error::Error;
};

// Discrete log target outside the configured search bound.
struct DlNotFound : Error {
  using Error::Error;
};

// A threshold partial decryption failed its proof; carries the index.
struct InvalidPartial : Error {
  InvalidPartial(uint32_t index, const std::string& what)
      : Error(what), index(index) {}
  uint32_t index;
};

}  // namespace ppat
