#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksub/errors.hpp"

namespace ksub {

// The ground set V with a fixed element order e^(1),...,e^(n) and the number
// of parts k. Assignment vectors live in {0,1,...,k}^V, 0 = unassigned.
struct GroundSet {
  std::vector<std::string> elements;
  int k = 1;

  int n() const { return static_cast<int>(elements.size()); }
  // Position of an element id, or -1.
  int index_of(const std::string& id) const;
};

// Validates uniqueness, n >= 1, k >= 1.
GroundSet make_ground_set(std::vector<std::string> elements, int k);

// An assignment vector over a ground set. Identified with the disjoint
// k-tuple (X_1,...,X_k) by X_i = { e | x(e) = i }.
class KVector {
 public:
  KVector() = default;
  explicit KVector(int n, int fill = 0) : v_(static_cast<std::size_t>(n), fill) {}
  explicit KVector(std::vector<int> values) : v_(std::move(values)) {}

  static KVector zeros(int n) { return KVector(n); }

  int size() const { return static_cast<int>(v_.size()); }
  int operator[](int pos) const { return v_[static_cast<std::size_t>(pos)]; }
  void set(int pos, int part) { v_[static_cast<std::size_t>(pos)] = part; }
  const std::vector<int>& values() const { return v_; }

  bool fully_assigned() const;
  bool is_zero() const;

  // Default ordering is lexicographic in element order, which is exactly the
  // tie-break the algorithms need.
  friend auto operator<=>(const KVector&, const KVector&) = default;

 private:
  std::vector<int> v_;
};

// Componentwise agreement: result(e) = x(e) if x(e) = y(e), else 0.
// Equals (X_1 cap Y_1, ..., X_k cap Y_k).
KVector meet(const KVector& x, const KVector& y);

// Conflict-zeroing union: result(e) = the common/only nonzero value of
// x(e), y(e), or 0 when both are nonzero and differ.
KVector join(const KVector& x, const KVector& y);

// Partial order: x <= y iff every assigned coordinate of x agrees with y.
bool leq(const KVector& x, const KVector& y);

// (o join s) join s: coordinates assigned in s keep s's value, coordinates
// assigned only in o keep o's value.
KVector project_optimal(const KVector& o, const KVector& s);

// Copy of x with position e set to part i.
KVector with_element(const KVector& x, int e, int part);

// Mixed-radix increment over {0..k}^n in ascending lexicographic order
// (first coordinate most significant). Returns false on wraparound to zero.
bool advance(KVector& x, int k);

// Black-box value oracle f: {0,...,k}^V -> R.
class ValueOracle {
 public:
  virtual ~ValueOracle() = default;
  virtual double value(const KVector& x) const = 0;
};

// Delta_{e,i} f(x) = f(x with e -> i) - f(x). Two oracle queries.
// Requires x(e) = 0 and i >= 1.
double marginal_gain(const ValueOracle& f, const KVector& x, int e, int part);
// Same with f(x) already known; one query.
double marginal_gain(const ValueOracle& f, const KVector& x, int e, int part, double fx);

// The k marginal gains of one element at once; gains[i-1] = Delta_{e,i}f(x).
struct MarginalProfile {
  std::vector<double> gains;
};
MarginalProfile marginal_profile(const ValueOracle& f, const GroundSet& ground,
                                 const KVector& x, int e, double fx);

// Dense table oracle over the full lattice, indexed in lexicographic vector
// order. The only oracle kind the exhaustive checkers accept.
class TableOracle final : public ValueOracle {
 public:
  TableOracle(GroundSet ground, std::vector<double> table);

  // Evaluate an arbitrary oracle on every vector. Refuses when
  // (k+1)^n > max_entries.
  static TableOracle materialize(const ValueOracle& f, const GroundSet& ground,
                                 std::uint64_t max_entries = 10'000'000);

  double value(const KVector& x) const override;
  std::size_t index(const KVector& x) const;

  const GroundSet& ground() const { return ground_; }
  const std::vector<double>& table() const { return table_; }
  std::uint64_t entries() const { return table_.size(); }
  // True when every value is an exactly representable integer; checkers then
  // compare exactly instead of with the 1e-9 tolerance.
  bool integer_valued() const { return integer_valued_; }

 private:
  GroundSet ground_;
  std::vector<double> table_;
  bool integer_valued_ = false;
};

// Counterexample found by a checker. Which fields are set depends on the
// checked inequality: pair checks fill x and y; marginal checks fill x,
// element and the part(s).
struct Witness {
  KVector x;
  std::optional<KVector> y;
  std::optional<int> element;
  std::optional<int> part_i;
  std::optional<int> part_j;
};

struct PropertyReport {
  bool holds = true;
  std::optional<Witness> witness;
  std::uint64_t checks_performed = 0;
};

struct CheckOptions {
  // Guard on (k+1)^(2n); enumeration is refused beyond it.
  std::uint64_t budget = 100'000'000;
  // Comparison slack; defaults to 0 for integer-valued tables, 1e-9 otherwise.
  std::optional<double> tolerance;
};

// Definition check: f(x) + f(y) >= f(x meet y) + f(x join y) over all pairs.
PropertyReport check_k_submodular(const TableOracle& f, const CheckOptions& opt = {});
// Delta_{e,i}f(x) >= Delta_{e,i}f(y) for all x <= y with e unassigned in y.
PropertyReport check_orthant_submodular(const TableOracle& f, const CheckOptions& opt = {});
// Delta_{e,i}f(x) + Delta_{e,j}f(x) >= 0 for distinct parts i, j.
PropertyReport check_pairwise_monotone(const TableOracle& f, const CheckOptions& opt = {});
// f(x) <= f(y) for all comparable pairs x <= y.
PropertyReport check_monotone(const TableOracle& f, const CheckOptions& opt = {});
// f >= 0 everywhere. Optional, not part of the k-submodularity definition.
PropertyReport check_nonnegative(const TableOracle& f, const CheckOptions& opt = {});

}  // namespace ksub
