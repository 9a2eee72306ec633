#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksub/core.hpp"

namespace ksub {

// Numeric policy for the solver. Residuals and pivots compare against
// kFeasTol; solution entries below kSnapTol are snapped to exact zero before
// support counting, making the "p > 0" test of the distribution update sharp.
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kSnapTol = 1e-12;

// The per-iteration feasibility LP over p_{i,s}, i = 1..k, s indexing the
// current support of size m:
//
//   (C1)  for each l:  sum_s Pr[s] * [ (1-1/k) * sum_i p_{i,s} y_i(s)
//                                      + p_{l,s} y_l(s) ]  >=  sum_s Pr[s] y_l(s)
//   (C2)  for each s:  sum_i p_{i,s} = 1
//   (C3)  p_{i,s} >= 0
//
// Variables are ordered lexicographically by (support index, part index);
// constraints (C1) by l, then (C2) by support index, then the sign
// constraints (C3) in variable order.
struct ExtremeLP {
  int m = 0;
  int k = 0;
  std::vector<double> probs;               // m, sums to 1
  std::vector<std::vector<double>> gains;  // m x k, gains[s][i-1] = y_i(s) >= 0

  int num_vars() const { return m * k; }
  int var_index(int s, int part) const { return s * k + (part - 1); }

  // Coefficient of p_{part,s} in inequality row l (both parts 1-based).
  double row_coeff(int l, int s, int part) const;
  double rhs(int l) const;
};

ExtremeLP assemble(const std::vector<double>& probs,
                   const std::vector<std::vector<double>>& gains);

// The feasibility witness from the randomized algorithm's distribution:
// per support vector, p_{i,s} = y_i(s)^(k-1) / sum_i y_i(s)^(k-1), falling
// back to p_{1,s} = 1 when all gains vanish. Satisfies (C1)-(C3) but is
// generally not a vertex.
std::vector<double> feasible_witness(const ExtremeLP& lp);

struct BasicSolution {
  std::vector<double> values;  // km entries in variable order, snapped
  // Tight constraints in global order: (C1) rows 0..k-1, (C2) rows
  // k..k+m-1, (C3) rows k+m..k+m+km-1.
  std::vector<int> tight_set;
  int support_size = 0;
  // Largest feasibility violation across (C1)-(C3).
  double max_residual = 0.0;

  double p(const ExtremeLP& lp, int s, int part) const {
    return values[static_cast<std::size_t>(lp.var_index(s, part))];
  }
};

// Phase-one simplex with Bland's smallest-index rule: deterministic,
// cycle-free, cold-started. All-zero-gain LPs short-circuit to the vertex
// p_{1,s} = 1. Which vertex is returned when several exist is pinned only by
// the pivot rule (the underlying math permits any extreme point).
// Throws InternalError if the LP is infeasible (impossible for gains >= 0)
// or on numerical failure, with residual diagnostics.
BasicSolution find_extreme_point(const ExtremeLP& lp);

// Re-checks feasibility (residuals <= kFeasTol), vertex-ness (>= km linearly
// independent tight constraints) and the support bound m + k. Report-only.
PropertyReport verify_basic(const ExtremeLP& lp, const BasicSolution& sol);

// Residual evaluation for an arbitrary point: max violation of (C1)-(C3).
double max_violation(const ExtremeLP& lp, const std::vector<double>& values);

// Debug dump {k, probs, gains} to reproduce solver issues offline.
nlohmann::json lp_debug_dump(const ExtremeLP& lp);
ExtremeLP lp_from_debug_dump(const nlohmann::json& j);

}  // namespace ksub
