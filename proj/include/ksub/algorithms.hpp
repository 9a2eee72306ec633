#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ksub/core.hpp"
#include "ksub/lp.hpp"
#include "ksub/rational.hpp"

namespace ksub {

// One support vector of a maintained distribution D_j, with its memoized
// oracle value (children inherit parent value + gain, so each vector costs
// exactly one query over its lifetime).
struct SupportEntry {
  double prob = 0.0;
  KVector vec;
  double value = 0.0;
};

// The distribution D_j: after iteration j every vector assigns exactly the
// first j elements of the run's order, probabilities are positive and sum to
// 1 (within 1e-9 after renormalization), vectors are pairwise distinct, and
// |D_j| <= jk + 1.
struct WeightedSupport {
  std::vector<SupportEntry> entries;
  int iteration = 0;

  double expected_value() const;
};

struct AlgorithmConfig {
  // Permutation of 0..n-1 defining e^(1..n); empty means input order.
  std::vector<int> element_order;
  // Randomized algorithm only.
  std::uint64_t seed = 0;

  // Both are pinned by the analysis, not tunable.
  static double ratio_c(int k) { return 1.0 - 1.0 / k; }
  static int exponent_t(int k) { return k - 1; }
  // The approximation guarantee k/(2k-1).
  static double guarantee(int k) { return double(k) / double(2 * k - 1); }
};

struct TraceRecord {
  int j = 0;
  int support = 0;
  long long queries = 0;  // cumulative
  std::optional<double> lp_residual;
  std::optional<double> min_certificate_margin;
};

// Full per-iteration state of a deterministic run, kept for certificate
// replay and LP re-verification.
struct IterationDetail {
  int element = 0;  // ground-set position of e^(j)
  ExtremeLP lp;
  BasicSolution solution;
  WeightedSupport support_after;
};

struct RunReport {
  KVector solution;
  double value = 0.0;
  long long total_queries = 0;
  std::vector<TraceRecord> trace;
  std::vector<IterationDetail> details;  // deterministic runs only
  std::vector<int> element_order;
};

// The randomized k/(2k-1)-approximation greedy: assigns each element to part
// i with probability proportional to y_i^(k-1), defaulting to part 1 when all
// gains vanish. Deterministic in config.seed; 1 + kn oracle queries.
RunReport randomized_greedy(const ValueOracle& f, const GroundSet& ground,
                            const AlgorithmConfig& config);

// E[f(s)] for the randomized greedy, by expanding the full k^n outcome tree
// with the per-step probabilities in exact rational arithmetic. Exact with
// respect to the oracle's returned values. Refuses when k^n > budget.
struct Expectation {
  Rational exact;
  double value = 0.0;
};
Expectation exact_expectation(const ValueOracle& f, const GroundSet& ground,
                              const AlgorithmConfig& config,
                              std::uint64_t budget = 1'000'000);

// The derandomized greedy: maintains a distribution over partial solutions,
// replacing each random choice by an extreme point of the feasibility LP,
// and returns the best vector in the final support (ties: lexicographically
// smallest). Query count is at most k(k n(n+1)/2 + n).
RunReport deterministic_greedy(const ValueOracle& f, const GroundSet& ground,
                               const AlgorithmConfig& config);

// Exact maximizer over all of {0,...,k}^V, lexicographically smallest among
// ties. Refuses when (k+1)^n > budget.
struct BruteForceResult {
  KVector argmax;
  double value = 0.0;
};
BruteForceResult brute_force_opt(const ValueOracle& f, const GroundSet& ground,
                                 std::uint64_t budget = 10'000'000);

// Test-side proof certificate for one iteration of the deterministic
// algorithm, replayed against a fully assigned reference optimum o.
// Three margin groups, each nonnegative (>= -1e-9) on valid runs:
//   pointwise:  y_{i*}(s) - (a_{i*}(s) - a_i(s)) over all s, i
//   lemma:      (1-1/k) E[sum_i y_i p_{i,s}] - E[sum_i (a_{i*}-a_i) p_{i,s}]
//   aggregate:  (1-1/k)(E_{D_j}[f] - E_{D_{j-1}}[f])
//                 - (E_{D_{j-1}}[f(o[s])] - E_{D_j}[f(o[s'])])
struct CertificateMargins {
  double pointwise = 0.0;
  double lemma = 0.0;
  double aggregate = 0.0;

  double min_slack() const;
};
CertificateMargins certificate_check(const ValueOracle& f, const GroundSet& ground,
                                     const KVector& optimum,
                                     const WeightedSupport& before,
                                     const WeightedSupport& after,
                                     const ExtremeLP& lp, const BasicSolution& sol,
                                     int element);

// Fully assigned vector with every unassigned coordinate set to `part`.
// For monotone f this preserves optimality of a maximizer.
KVector complete_with_part(const KVector& x, int part = 1);

}  // namespace ksub
