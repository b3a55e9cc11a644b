#include "ppat/commitment.hpp"

#include <array>

#include "ppat/errors.hpp"

namespace ppat {

Commitment commit(const GroupParams& params, const Scalar& v, const Scalar& r) {
  std::array<G2Elem, 2> bases{params.h1(), params.h2()};
  std::array<Scalar, 2> exps{r, v};
  return Commitment{params.multiexp_g2(bases, exps)};
}

Opening opening_for(const GroupParams& params, const Scalar& r) {
  return Opening{params.exp_g1(params.g1(), r)};
}

bool verify_opening(const GroupParams& params, const Commitment& d, const Opening& a,
                    const Scalar& v) {
  // e(a, h1) == e(g1, d / h2^v)
  G2Elem rhs = params.div_g2(d.d, params.exp_g2(params.h2(), v));
  return params.pair(a.a, params.h1()) == params.pair(params.g1(), rhs);
}

Commitment combine(const GroupParams& params, std::span<const Commitment> ds) {
  if (ds.empty()) throw Error("combine requires a non-empty list");
  G2Elem acc = ds[0].d;
  for (size_t i = 1; i < ds.size(); i++) acc = params.mul_g2(acc, ds[i].d);
  return Commitment{acc};
}

Opening combine_openings(const GroupParams& params, std::span<const Opening> as) {
  if (as.empty()) throw Error("combine requires a non-empty list");
  G1Elem acc = as[0].a;
  for (size_t i = 1; i < as.size(); i++) acc = params.mul_g1(acc, as[i].a);
  return Opening{acc};
}

}  // namespace ppat
