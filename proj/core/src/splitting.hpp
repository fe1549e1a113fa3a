#pragma once

// Coefficients of symmetric operator-splitting schemes
//
//   exp(h(A+B)) ~ e^{a_0 h A} e^{b_0 h B} e^{a_1 h A} ... e^{b_{m-1} h B} e^{a_m h A}.

#include <cmath>
#include <vector>

#include "rabi/periodic.hpp"

namespace rabi::detail {

struct SplittingScheme {
  std::vector<double> a;  // m + 1 entries
  std::vector<double> b;  // m entries
};

inline SplittingScheme splitting_scheme(SplitOrder order) {
  if (order == SplitOrder::second) return {{0.5, 0.5}, {1.0}};
  // Triple jump: S(w1 h) S(w0 h) S(w1 h) with S the second-order step.
  const double c = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - c);
  const double w0 = -c / (2.0 - c);
  return {{0.5 * w1, 0.5 * (w1 + w0), 0.5 * (w1 + w0), 0.5 * w1}, {w1, w0, w1}};
}

}  // namespace rabi::detail
