#pragma once

// Shared test helpers: an independent set-family implementation of the
// lattice operations (the oracle the vector versions are checked against),
// small deterministic generators, and the fixed instance suite used by the
// algorithm and acceptance tests.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "ksub/algorithms.hpp"
#include "ksub/core.hpp"
#include "ksub/instances.hpp"
#include "ksub/random.hpp"

namespace ksub_test {

// ---- Set-family reference model -------------------------------------------
//
// Represents x as the tuple (X_1,...,X_k) of disjoint index sets and applies
// the set-form definitions literally. Deliberately independent of the
// KVector code paths.

using SetFamily = std::vector<std::set<int>>;  // size k

inline SetFamily to_sets(const ksub::KVector& x, int k) {
  SetFamily out(static_cast<std::size_t>(k));
  for (int e = 0; e < x.size(); ++e) {
    if (x[e] != 0) out[static_cast<std::size_t>(x[e] - 1)].insert(e);
  }
  return out;
}

inline ksub::KVector from_sets(const SetFamily& fam, int n) {
  ksub::KVector x(n);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (int e : fam[i]) x.set(e, static_cast<int>(i) + 1);
  }
  return x;
}

inline SetFamily set_meet(const SetFamily& a, const SetFamily& b) {
  SetFamily out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int e : a[i]) {
      if (b[i].count(e)) out[i].insert(e);
    }
  }
  return out;
}

inline SetFamily set_join(const SetFamily& a, const SetFamily& b) {
  SetFamily out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::set<int> uni = a[i];
    uni.insert(b[i].begin(), b[i].end());
    for (int e : uni) {
      bool claimed_elsewhere = false;
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (j == i) continue;
        if (a[j].count(e) || b[j].count(e)) claimed_elsewhere = true;
      }
      if (!claimed_elsewhere) out[i].insert(e);
    }
  }
  return out;
}

inline bool set_leq(const SetFamily& a, const SetFamily& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int e : a[i]) {
      if (!b[i].count(e)) return false;
    }
  }
  return true;
}

// ---- Generators ------------------------------------------------------------

// Unstructured random table: mostly not k-submodular at these sizes. Used
// where both outcomes must occur.
inline ksub::TableOracle random_raw_table(std::mt19937_64& rng, int n, int k, int hi = 20) {
  auto ground = ksub::make_ground_set(
      [&] {
        std::vector<std::string> names;
        for (int i = 1; i <= n; ++i) names.push_back("e" + std::to_string(i));
        return names;
      }(),
      k);
  std::uint64_t count = 1;
  for (int e = 0; e < n; ++e) count *= std::uint64_t(k + 1);
  std::vector<double> table(count);
  for (auto& v : table) v = double(ksub::rnd::range(rng, 0, hi));
  table[0] = 0.0;
  return ksub::TableOracle(std::move(ground), std::move(table));
}

// Mixed pool for the Theorem-1 equivalence check: valid instances and raw
// tables in roughly equal measure.
inline ksub::TableOracle equivalence_sample(std::mt19937_64& rng, int n, int k) {
  if (ksub::rnd::below(rng, 2) == 0) {
    return random_raw_table(rng, n, k);
  }
  const auto inst =
      ksub::random_monotone_instance(rng(), n, k,
                                     {ksub::Family::AssignmentModular,
                                      ksub::Family::SeparableCoverage, ksub::Family::Table});
  return ksub::TableOracle::materialize(*inst.oracle, inst.ground);
}

// ---- Fixed instance suite ---------------------------------------------------
//
// n in {2..5} x k in {1..3} for the constructed families, tables at n <= 3,
// fixed seeds: 300 instances total.

struct SuiteCase {
  ksub::Instance instance;
  std::uint64_t seed = 0;
};

inline std::vector<SuiteCase> build_suite() {
  std::vector<SuiteCase> suite;
  const int kSeedsConstructed = 10;
  const int kSeedsTable = 10;
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (const auto family :
           {ksub::Family::AssignmentModular, ksub::Family::SeparableCoverage}) {
        for (int s = 1; s <= kSeedsConstructed; ++s) {
          const std::uint64_t seed = std::uint64_t(n) * 1'000'000 +
                                     std::uint64_t(k) * 10'000 +
                                     std::uint64_t(static_cast<int>(family)) * 100 +
                                     std::uint64_t(s);
          suite.push_back({ksub::random_monotone_instance(seed, n, k, {family}), seed});
        }
      }
      if (n <= 3) {
        for (int s = 1; s <= kSeedsTable; ++s) {
          const std::uint64_t seed = std::uint64_t(n) * 1'000'000 +
                                     std::uint64_t(k) * 10'000 + 200 + std::uint64_t(s);
          suite.push_back(
              {ksub::random_monotone_instance(seed, n, k, {ksub::Family::Table}), seed});
        }
      }
    }
  }
  return suite;
}

}  // namespace ksub_test
