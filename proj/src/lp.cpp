#include "ksub/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ksub {

namespace {

constexpr int kMaxPivots = 200'000;

std::string residual_diag(const ExtremeLP& lp, const std::vector<double>& values) {
  std::ostringstream os;
  os << "m=" << lp.m << " k=" << lp.k << " max_violation=" << max_violation(lp, values);
  return os.str();
}

int rank_of(std::vector<std::vector<double>> rows, int cols) {
  // Scale rows so the pivot tolerance is relative.
  for (auto& r : rows) {
    double mx = 0.0;
    for (double v : r) mx = std::max(mx, std::abs(v));
    if (mx > 0) {
      for (double& v : r) v /= mx;
    }
  }
  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    double best = 1e-7;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (std::abs(rows[std::size_t(r)][std::size_t(c)]) > best) {
        best = std::abs(rows[std::size_t(r)][std::size_t(c)]);
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[std::size_t(rank)], rows[std::size_t(pivot)]);
    const auto& pr = rows[std::size_t(rank)];
    const double pv = pr[std::size_t(c)];
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      const double factor = rows[std::size_t(r)][std::size_t(c)] / pv;
      if (factor == 0.0) continue;
      for (int cc = c; cc < cols; ++cc) {
        rows[std::size_t(r)][std::size_t(cc)] -= factor * pr[std::size_t(cc)];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

double ExtremeLP::row_coeff(int l, int s, int part) const {
  const double y = gains[std::size_t(s)][std::size_t(part - 1)];
  double c = (1.0 - 1.0 / k) * y;
  if (part == l) c += gains[std::size_t(s)][std::size_t(l - 1)];
  return probs[std::size_t(s)] * c;
}

double ExtremeLP::rhs(int l) const {
  double b = 0.0;
  for (int s = 0; s < m; ++s) {
    b += probs[std::size_t(s)] * gains[std::size_t(s)][std::size_t(l - 1)];
  }
  return b;
}

ExtremeLP assemble(const std::vector<double>& probs,
                   const std::vector<std::vector<double>>& gains) {
  if (probs.empty() || probs.size() != gains.size()) {
    throw ValidationError("assemble: probs/gains dimension mismatch");
  }
  const std::size_t k = gains.front().size();
  if (k == 0) throw ValidationError("assemble: k must be >= 1");
  double total = 0.0;
  for (double p : probs) {
    if (p <= 0) throw ValidationError("assemble: probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > kFeasTol) {
    throw ValidationError("assemble: probabilities sum to " + std::to_string(total));
  }
  ExtremeLP lp;
  lp.m = static_cast<int>(probs.size());
  lp.k = static_cast<int>(k);
  lp.probs = probs;
  lp.gains = gains;
  for (auto& row : lp.gains) {
    if (row.size() != k) throw ValidationError("assemble: ragged gains matrix");
    for (double& y : row) {
      if (y < -kFeasTol) {
        throw ValidationError("assemble: negative gain " + std::to_string(y));
      }
      if (y < 0) y = 0.0;  // rounding noise on a monotone oracle
    }
  }
  return lp;
}

std::vector<double> feasible_witness(const ExtremeLP& lp) {
  const int t = lp.k - 1;
  std::vector<double> p(std::size_t(lp.num_vars()), 0.0);
  for (int s = 0; s < lp.m; ++s) {
    double beta = 0.0;
    for (int i = 1; i <= lp.k; ++i) {
      beta += std::pow(lp.gains[std::size_t(s)][std::size_t(i - 1)], t);
    }
    if (beta > 0.0) {
      for (int i = 1; i <= lp.k; ++i) {
        p[std::size_t(lp.var_index(s, i))] =
            std::pow(lp.gains[std::size_t(s)][std::size_t(i - 1)], t) / beta;
      }
    } else {
      p[std::size_t(lp.var_index(s, 1))] = 1.0;
    }
  }
  return p;
}

double max_violation(const ExtremeLP& lp, const std::vector<double>& values) {
  double worst = 0.0;
  for (int l = 1; l <= lp.k; ++l) {
    double lhs = 0.0;
    for (int s = 0; s < lp.m; ++s) {
      for (int i = 1; i <= lp.k; ++i) {
        lhs += lp.row_coeff(l, s, i) * values[std::size_t(lp.var_index(s, i))];
      }
    }
    worst = std::max(worst, lp.rhs(l) - lhs);
  }
  for (int s = 0; s < lp.m; ++s) {
    double sum = 0.0;
    for (int i = 1; i <= lp.k; ++i) sum += values[std::size_t(lp.var_index(s, i))];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (double v : values) worst = std::max(worst, -v);
  return worst;
}

namespace {

BasicSolution finish_solution(const ExtremeLP& lp, std::vector<double> values) {
  BasicSolution sol;
  for (double& v : values) {
    if (std::abs(v) < kSnapTol) v = 0.0;
  }
  sol.values = std::move(values);
  sol.support_size = static_cast<int>(
      std::count_if(sol.values.begin(), sol.values.end(), [](double v) { return v > 0.0; }));
  sol.max_residual = max_violation(lp, sol.values);

  const int km = lp.num_vars();
  for (int l = 1; l <= lp.k; ++l) {
    double lhs = 0.0;
    for (int s = 0; s < lp.m; ++s) {
      for (int i = 1; i <= lp.k; ++i) {
        lhs += lp.row_coeff(l, s, i) * sol.values[std::size_t(lp.var_index(s, i))];
      }
    }
    if (std::abs(lhs - lp.rhs(l)) <= kFeasTol) sol.tight_set.push_back(l - 1);
  }
  for (int s = 0; s < lp.m; ++s) sol.tight_set.push_back(lp.k + s);
  for (int v = 0; v < km; ++v) {
    if (sol.values[std::size_t(v)] == 0.0) sol.tight_set.push_back(lp.k + lp.m + v);
  }
  return sol;
}

}  // namespace

BasicSolution find_extreme_point(const ExtremeLP& lp) {
  const int km = lp.num_vars();

  // All-zero gains: every constraint (C1) reads 0 >= 0; return the simplex
  // vertex p_{1,s} = 1 without pivoting.
  bool any_gain = false;
  for (const auto& row : lp.gains) {
    for (double y : row) {
      if (y > 0.0) any_gain = true;
    }
  }
  if (!any_gain) {
    std::vector<double> values(std::size_t(km), 0.0);
    for (int s = 0; s < lp.m; ++s) values[std::size_t(lp.var_index(s, 1))] = 1.0;
    return finish_solution(lp, std::move(values));
  }

  const int rows = lp.k + lp.m;
  const int n_struct = km + lp.k;        // p variables + surplus on (C1)
  const int n_total = n_struct + rows;   // + one artificial per row
  const int rhs_col = n_total;

  std::vector<std::vector<double>> tab(
      std::size_t(rows), std::vector<double>(std::size_t(n_total + 1), 0.0));
  for (int l = 1; l <= lp.k; ++l) {
    auto& row = tab[std::size_t(l - 1)];
    for (int s = 0; s < lp.m; ++s) {
      for (int i = 1; i <= lp.k; ++i) {
        row[std::size_t(lp.var_index(s, i))] = lp.row_coeff(l, s, i);
      }
    }
    row[std::size_t(km + (l - 1))] = -1.0;            // surplus
    row[std::size_t(n_struct + (l - 1))] = 1.0;       // artificial
    row[std::size_t(rhs_col)] = lp.rhs(l);
  }
  for (int s = 0; s < lp.m; ++s) {
    auto& row = tab[std::size_t(lp.k + s)];
    for (int i = 1; i <= lp.k; ++i) row[std::size_t(lp.var_index(s, i))] = 1.0;
    row[std::size_t(n_struct + lp.k + s)] = 1.0;
    row[std::size_t(rhs_col)] = 1.0;
  }

  // Phase-one objective: minimize the sum of artificials. The reduced-cost
  // row starts as minus the sum of all constraint rows so that the artificial
  // basis prices out to zero.
  std::vector<double> z(std::size_t(n_total + 1), 0.0);
  for (const auto& row : tab) {
    for (int c = 0; c <= n_total; ++c) z[std::size_t(c)] -= row[std::size_t(c)];
  }
  for (int r = 0; r < rows; ++r) z[std::size_t(n_struct + r)] = 0.0;

  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) basis[std::size_t(r)] = n_struct + r;

  // Bland's rule: entering = smallest-index non-artificial column with a
  // negative reduced cost; leaving = min ratio, ties by smallest basic index.
  for (int iter = 0;; ++iter) {
    if (iter > kMaxPivots) {
      throw InternalError("find_extreme_point: pivot limit reached; " +
                          residual_diag(lp, feasible_witness(lp)));
    }
    int enter = -1;
    for (int c = 0; c < n_struct; ++c) {
      if (z[std::size_t(c)] < -kFeasTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      const double a = tab[std::size_t(r)][std::size_t(enter)];
      if (a > kFeasTol) {
        const double ratio = tab[std::size_t(r)][std::size_t(rhs_col)] / a;
        if (ratio < best_ratio - kFeasTol ||
            (ratio < best_ratio + kFeasTol &&
             (leave < 0 || basis[std::size_t(r)] < basis[std::size_t(leave)]))) {
          best_ratio = std::min(best_ratio, ratio);
          leave = r;
        }
      }
    }
    if (leave < 0) {
      throw InternalError("find_extreme_point: phase one unbounded (cannot happen); " +
                          residual_diag(lp, feasible_witness(lp)));
    }

    auto& prow = tab[std::size_t(leave)];
    const double pv = prow[std::size_t(enter)];
    for (double& v : prow) v /= pv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double factor = tab[std::size_t(r)][std::size_t(enter)];
      if (factor == 0.0) continue;
      for (int c = 0; c <= n_total; ++c) {
        tab[std::size_t(r)][std::size_t(c)] -= factor * prow[std::size_t(c)];
      }
    }
    const double zf = z[std::size_t(enter)];
    if (zf != 0.0) {
      for (int c = 0; c <= n_total; ++c) z[std::size_t(c)] -= zf * prow[std::size_t(c)];
    }
    basis[std::size_t(leave)] = enter;
  }

  const double infeasibility = -z[std::size_t(rhs_col)];
  if (infeasibility > 1e-7) {
    throw InternalError(
        "find_extreme_point: LP infeasible (monotone k-submodular input cannot "
        "produce this); phase-one objective = " +
        std::to_string(infeasibility));
  }

  // Drive any leftover zero-level artificials out of the basis; a row with no
  // eligible pivot is redundant and can be ignored.
  for (int r = 0; r < rows; ++r) {
    if (basis[std::size_t(r)] < n_struct) continue;
    int enter = -1;
    for (int c = 0; c < n_struct; ++c) {
      if (std::abs(tab[std::size_t(r)][std::size_t(c)]) > 1e-7) {
        enter = c;
        break;
      }
    }
    if (enter < 0) continue;
    auto& prow = tab[std::size_t(r)];
    const double pv = prow[std::size_t(enter)];
    for (double& v : prow) v /= pv;
    for (int rr = 0; rr < rows; ++rr) {
      if (rr == r) continue;
      const double factor = tab[std::size_t(rr)][std::size_t(enter)];
      if (factor == 0.0) continue;
      for (int c = 0; c <= n_total; ++c) {
        tab[std::size_t(rr)][std::size_t(c)] -= factor * prow[std::size_t(c)];
      }
    }
    basis[std::size_t(r)] = enter;
  }

  std::vector<double> values(std::size_t(km), 0.0);
  for (int r = 0; r < rows; ++r) {
    if (basis[std::size_t(r)] < km) {
      values[std::size_t(basis[std::size_t(r)])] = tab[std::size_t(r)][std::size_t(rhs_col)];
    }
  }
  BasicSolution sol = finish_solution(lp, std::move(values));
  if (sol.max_residual > kFeasTol) {
    throw InternalError("find_extreme_point: numerical failure, " +
                        residual_diag(lp, sol.values));
  }
  return sol;
}

PropertyReport verify_basic(const ExtremeLP& lp, const BasicSolution& sol) {
  PropertyReport report;
  const int km = lp.num_vars();
  if (static_cast<int>(sol.values.size()) != km) {
    report.holds = false;
    return report;
  }

  ++report.checks_performed;
  if (max_violation(lp, sol.values) > kFeasTol) {
    report.holds = false;
    return report;
  }

  ++report.checks_performed;
  if (sol.support_size > lp.m + lp.k) {
    report.holds = false;
    return report;
  }

  // Vertex test: tight constraints must span R^(km). Equalities (C2) are
  // always tight; add (C1) rows with zero residual and zero variables.
  std::vector<std::vector<double>> rows;
  for (int s = 0; s < lp.m; ++s) {
    std::vector<double> row(std::size_t(km), 0.0);
    for (int i = 1; i <= lp.k; ++i) row[std::size_t(lp.var_index(s, i))] = 1.0;
    rows.push_back(std::move(row));
  }
  for (int l = 1; l <= lp.k; ++l) {
    double lhs = 0.0;
    for (int s = 0; s < lp.m; ++s) {
      for (int i = 1; i <= lp.k; ++i) {
        lhs += lp.row_coeff(l, s, i) * sol.values[std::size_t(lp.var_index(s, i))];
      }
    }
    if (std::abs(lhs - lp.rhs(l)) <= kFeasTol) {
      std::vector<double> row(std::size_t(km), 0.0);
      for (int s = 0; s < lp.m; ++s) {
        for (int i = 1; i <= lp.k; ++i) {
          row[std::size_t(lp.var_index(s, i))] = lp.row_coeff(l, s, i);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  for (int v = 0; v < km; ++v) {
    if (sol.values[std::size_t(v)] == 0.0) {
      std::vector<double> row(std::size_t(km), 0.0);
      row[std::size_t(v)] = 1.0;
      rows.push_back(std::move(row));
    }
  }

  ++report.checks_performed;
  if (rank_of(std::move(rows), km) < km) {
    report.holds = false;
    return report;
  }
  return report;
}

nlohmann::json lp_debug_dump(const ExtremeLP& lp) {
  return nlohmann::json{{"k", lp.k}, {"probs", lp.probs}, {"gains", lp.gains}};
}

ExtremeLP lp_from_debug_dump(const nlohmann::json& j) {
  return assemble(j.at("probs").get<std::vector<double>>(),
                  j.at("gains").get<std::vector<std::vector<double>>>());
}

}  // namespace ksub
