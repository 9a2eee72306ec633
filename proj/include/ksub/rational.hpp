#pragma once

#include <gmpxx.h>

#include <cmath>

namespace ksub {

// Exact rational arithmetic for expectation trees and acceptance comparisons.
// A double is a dyadic rational, so this conversion is lossless: wherever the
// oracle's doubles are the ground truth, arithmetic in Rational is exact.
using Rational = mpq_class;

inline Rational rational_of(double v) {
  Rational r(v);
  r.canonicalize();
  return r;
}

inline bool is_integer_value(double v) {
  return std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 0x1p52;
}

}  // namespace ksub
