#pragma once

#include <span>

#include "ppat/group.hpp"

// Perfectly hiding commitments with group-element openings. Commitments
// live in G2 (d = h1^r h2^v) and openings in G1 (a = g1^r); an opening is
// checked with the pairing equation e(a, h1) = e(g1, d / h2^v) instead of
// by revealing r.
namespace ppat {

struct Commitment {
  G2Elem d;
  friend bool operator==(const Commitment&, const Commitment&) = default;
};

struct Opening {
  G1Elem a;
  friend bool operator==(const Opening&, const Opening&) = default;
};

Commitment commit(const GroupParams& params, const Scalar& v, const Scalar& r);
Opening opening_for(const GroupParams& params, const Scalar& r);
bool verify_opening(const GroupParams& params, const Commitment& d, const Opening& a,
                    const Scalar& v);

// Componentwise products; openings add under the hood, so the combined
// commitment opens to the sum of the committed values.
Commitment combine(const GroupParams& params, std::span<const Commitment> ds);
Opening combine_openings(const GroupParams& params, std::span<const Opening> as);

}  // namespace ppat
