#include "ksub/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ksub {

namespace {

void require_same_size(const KVector& x, const KVector& y) {
  if (x.size() != y.size()) {
    throw ValidationError("dimension mismatch: " + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()));
  }
}

double checker_tolerance(const TableOracle& f, const CheckOptions& opt) {
  if (opt.tolerance) return *opt.tolerance;
  return f.integer_valued() ? 0.0 : 1e-9;
}

std::uint64_t pair_space(const TableOracle& f) {
  return f.entries() * f.entries();
}

void require_budget(const TableOracle& f, const CheckOptions& opt, const char* what) {
  if (pair_space(f) > opt.budget) {
    throw BudgetExceeded(std::string(what) + ": (k+1)^(2n) = " +
                         std::to_string(pair_space(f)) + " exceeds budget " +
                         std::to_string(opt.budget));
  }
}

// Witnesses are re-evaluated before being reported; a witness that does not
// reproduce its violation is a checker bug.
void require_replay(bool violates, const char* what) {
  if (!violates) {
    throw InternalError(std::string("witness replay failed in ") + what);
  }
}

// Enumerates all x <= y by walking subsets of y's assigned coordinates.
template <typename Fn>
void for_each_below(const KVector& y, Fn&& fn) {
  std::vector<int> assigned;
  for (int e = 0; e < y.size(); ++e) {
    if (y[e] != 0) assigned.push_back(e);
  }
  const std::size_t count = std::size_t(1) << assigned.size();
  KVector x = y;
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t b = 0; b < assigned.size(); ++b) {
      x.set(assigned[b], (mask >> b) & 1 ? y[assigned[b]] : 0);
    }
    fn(x);
  }
}

}  // namespace

int GroundSet::index_of(const std::string& id) const {
  auto it = std::find(elements.begin(), elements.end(), id);
  return it == elements.end() ? -1 : static_cast<int>(it - elements.begin());
}

GroundSet make_ground_set(std::vector<std::string> elements, int k) {
  if (elements.empty()) throw ValidationError("ground set must have n >= 1");
  if (k < 1) throw ValidationError("k must be >= 1");
  std::unordered_set<std::string> seen;
  for (const auto& e : elements) {
    if (!seen.insert(e).second) {
      throw ValidationError("duplicate ground element: " + e);
    }
  }
  return GroundSet{std::move(elements), k};
}

bool KVector::fully_assigned() const {
  return std::all_of(v_.begin(), v_.end(), [](int v) { return v != 0; });
}

bool KVector::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](int v) { return v == 0; });
}

KVector meet(const KVector& x, const KVector& y) {
  require_same_size(x, y);
  KVector out(x.size());
  for (int e = 0; e < x.size(); ++e) {
    if (x[e] == y[e]) out.set(e, x[e]);
  }
  return out;
}

KVector join(const KVector& x, const KVector& y) {
  require_same_size(x, y);
  KVector out(x.size());
  for (int e = 0; e < x.size(); ++e) {
    if (x[e] == 0) {
      out.set(e, y[e]);
    } else if (y[e] == 0 || y[e] == x[e]) {
      out.set(e, x[e]);
    }  // conflicting nonzero parts cancel to 0
  }
  return out;
}

bool leq(const KVector& x, const KVector& y) {
  require_same_size(x, y);
  for (int e = 0; e < x.size(); ++e) {
    if (x[e] != 0 && x[e] != y[e]) return false;
  }
  return true;
}

KVector project_optimal(const KVector& o, const KVector& s) {
  return join(join(o, s), s);
}

KVector with_element(const KVector& x, int e, int part) {
  KVector out = x;
  out.set(e, part);
  return out;
}

bool advance(KVector& x, int k) {
  for (int pos = x.size() - 1; pos >= 0; --pos) {
    if (x[pos] < k) {
      x.set(pos, x[pos] + 1);
      return true;
    }
    x.set(pos, 0);
  }
  return false;
}

double marginal_gain(const ValueOracle& f, const KVector& x, int e, int part) {
  return marginal_gain(f, x, e, part, f.value(x));
}

double marginal_gain(const ValueOracle& f, const KVector& x, int e, int part, double fx) {
  if (e < 0 || e >= x.size()) throw ValidationError("marginal_gain: element out of range");
  if (x[e] != 0) throw ValidationError("marginal_gain: element already assigned");
  if (part < 1) throw ValidationError("marginal_gain: part must be >= 1");
  return f.value(with_element(x, e, part)) - fx;
}

MarginalProfile marginal_profile(const ValueOracle& f, const GroundSet& ground,
                                 const KVector& x, int e, double fx) {
  MarginalProfile out;
  out.gains.reserve(static_cast<std::size_t>(ground.k));
  for (int i = 1; i <= ground.k; ++i) {
    out.gains.push_back(marginal_gain(f, x, e, i, fx));
  }
  return out;
}

TableOracle::TableOracle(GroundSet ground, std::vector<double> table)
    : ground_(std::move(ground)), table_(std::move(table)) {
  std::uint64_t expected = 1;
  for (int e = 0; e < ground_.n(); ++e) expected *= std::uint64_t(ground_.k + 1);
  if (table_.size() != expected) {
    throw ValidationError("table size " + std::to_string(table_.size()) +
                          " != (k+1)^n = " + std::to_string(expected));
  }
  integer_valued_ = std::all_of(table_.begin(), table_.end(), [](double v) {
    return std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 0x1p52;
  });
}

TableOracle TableOracle::materialize(const ValueOracle& f, const GroundSet& ground,
                                     std::uint64_t max_entries) {
  std::uint64_t count = 1;
  for (int e = 0; e < ground.n(); ++e) {
    count *= std::uint64_t(ground.k + 1);
    if (count > max_entries) {
      throw BudgetExceeded("materialize: (k+1)^n exceeds budget " +
                           std::to_string(max_entries));
    }
  }
  std::vector<double> table;
  table.reserve(count);
  KVector x(ground.n());
  do {
    table.push_back(f.value(x));
  } while (advance(x, ground.k));
  return TableOracle(ground, std::move(table));
}

double TableOracle::value(const KVector& x) const { return table_[index(x)]; }

std::size_t TableOracle::index(const KVector& x) const {
  if (x.size() != ground_.n()) throw ValidationError("table lookup: dimension mismatch");
  std::size_t idx = 0;
  for (int e = 0; e < x.size(); ++e) {
    const int v = x[e];
    if (v < 0 || v > ground_.k) throw ValidationError("table lookup: part out of range");
    idx = idx * std::size_t(ground_.k + 1) + std::size_t(v);
  }
  return idx;
}

PropertyReport check_k_submodular(const TableOracle& f, const CheckOptions& opt) {
  require_budget(f, opt, "check_k_submodular");
  const double tol = checker_tolerance(f, opt);
  const int k = f.ground().k;
  PropertyReport report;

  KVector x(f.ground().n());
  do {
    const double fx = f.value(x);
    KVector y = x;  // unordered pairs: start at x
    do {
      ++report.checks_performed;
      const double lhs = fx + f.value(y);
      const double rhs = f.value(meet(x, y)) + f.value(join(x, y));
      if (lhs < rhs - tol) {
        require_replay(f.value(x) + f.value(y) <
                           f.value(meet(x, y)) + f.value(join(x, y)) - tol,
                       "check_k_submodular");
        report.holds = false;
        report.witness = Witness{x, y, {}, {}, {}};
        return report;
      }
    } while (advance(y, k));
  } while (advance(x, k));
  return report;
}

PropertyReport check_orthant_submodular(const TableOracle& f, const CheckOptions& opt) {
  require_budget(f, opt, "check_orthant_submodular");
  const double tol = checker_tolerance(f, opt);
  const int k = f.ground().k;
  const int n = f.ground().n();
  PropertyReport report;

  KVector y(n);
  do {
    const double fy = f.value(y);
    bool violated = false;
    Witness w;
    for_each_below(y, [&](const KVector& x) {
      if (violated) return;
      const double fx = f.value(x);
      for (int e = 0; e < n && !violated; ++e) {
        if (y[e] != 0) continue;
        for (int i = 1; i <= k; ++i) {
          ++report.checks_performed;
          const double gx = f.value(with_element(x, e, i)) - fx;
          const double gy = f.value(with_element(y, e, i)) - fy;
          if (gx < gy - tol) {
            violated = true;
            w = Witness{x, y, e, i, {}};
            break;
          }
        }
      }
    });
    if (violated) {
      require_replay(marginal_gain(f, w.x, *w.element, *w.part_i) <
                         marginal_gain(f, *w.y, *w.element, *w.part_i) - tol,
                     "check_orthant_submodular");
      report.holds = false;
      report.witness = w;
      return report;
    }
  } while (advance(y, k));
  return report;
}

PropertyReport check_pairwise_monotone(const TableOracle& f, const CheckOptions& opt) {
  require_budget(f, opt, "check_pairwise_monotone");
  const double tol = checker_tolerance(f, opt);
  const int k = f.ground().k;
  const int n = f.ground().n();
  PropertyReport report;

  KVector x(n);
  std::vector<double> gains(static_cast<std::size_t>(k));
  do {
    const double fx = f.value(x);
    for (int e = 0; e < n; ++e) {
      if (x[e] != 0) continue;
      for (int i = 1; i <= k; ++i) {
        gains[std::size_t(i - 1)] = f.value(with_element(x, e, i)) - fx;
      }
      for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
          ++report.checks_performed;
          if (gains[std::size_t(i - 1)] + gains[std::size_t(j - 1)] < -tol) {
            require_replay(marginal_gain(f, x, e, i) + marginal_gain(f, x, e, j) < -tol,
                           "check_pairwise_monotone");
            report.holds = false;
            report.witness = Witness{x, {}, e, i, j};
            return report;
          }
        }
      }
    }
  } while (advance(x, k));
  return report;
}

PropertyReport check_monotone(const TableOracle& f, const CheckOptions& opt) {
  require_budget(f, opt, "check_monotone");
  const double tol = checker_tolerance(f, opt);
  const int k = f.ground().k;
  PropertyReport report;

  KVector y(f.ground().n());
  do {
    const double fy = f.value(y);
    bool violated = false;
    Witness w;
    for_each_below(y, [&](const KVector& x) {
      if (violated) return;
      ++report.checks_performed;
      if (f.value(x) > fy + tol) {
        violated = true;
        w = Witness{x, y, {}, {}, {}};
      }
    });
    if (violated) {
      require_replay(leq(w.x, *w.y) && f.value(w.x) > f.value(*w.y) + tol,
                     "check_monotone");
      report.holds = false;
      report.witness = w;
      return report;
    }
  } while (advance(y, k));
  return report;
}

PropertyReport check_nonnegative(const TableOracle& f, const CheckOptions& opt) {
  require_budget(f, opt, "check_nonnegative");
  const double tol = checker_tolerance(f, opt);
  PropertyReport report;
  KVector x(f.ground().n());
  do {
    ++report.checks_performed;
    if (f.value(x) < -tol) {
      report.holds = false;
      report.witness = Witness{x, {}, {}, {}, {}};
      return report;
    }
  } while (advance(x, f.ground().k));
  return report;
}

}  // namespace ksub
