#include "ksub/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "ksub/random.hpp"

namespace ksub {

namespace {

std::vector<int> resolve_order(const GroundSet& ground, const AlgorithmConfig& config) {
  const int n = ground.n();
  if (config.element_order.empty()) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  if (static_cast<int>(config.element_order.size()) != n) {
    throw ValidationError("element_order must be a permutation of 0..n-1");
  }
  std::vector<char> seen(std::size_t(n), 0);
  for (int e : config.element_order) {
    if (e < 0 || e >= n || seen[std::size_t(e)]) {
      throw ValidationError("element_order must be a permutation of 0..n-1");
    }
    seen[std::size_t(e)] = 1;
  }
  return config.element_order;
}

// Marginal gains of one element over a partial solution. A monotone oracle
// cannot produce a negative gain; tolerate rounding noise down to -1e-9 and
// flag anything worse as a contract violation.
std::vector<double> clamped_gains(const ValueOracle& f, const KVector& vec, double fvec,
                                  int e, int k, long long& queries,
                                  std::vector<double>* child_values) {
  std::vector<double> gains(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    const double child = f.value(with_element(vec, e, i));
    ++queries;
    double y = child - fvec;
    if (y < 0) {
      if (y < -1e-9) {
        throw InternalError("negative marginal gain " + std::to_string(y) +
                            ": oracle is not monotone");
      }
      y = 0.0;
    }
    gains[std::size_t(i - 1)] = y;
    if (child_values) (*child_values)[std::size_t(i - 1)] = child;
  }
  return gains;
}

}  // namespace

double WeightedSupport::expected_value() const {
  double e = 0.0;
  for (const auto& entry : entries) e += entry.prob * entry.value;
  return e;
}

double CertificateMargins::min_slack() const {
  return std::min(pointwise, std::min(lemma, aggregate));
}

KVector complete_with_part(const KVector& x, int part) {
  KVector out = x;
  for (int e = 0; e < out.size(); ++e) {
    if (out[e] == 0) out.set(e, part);
  }
  return out;
}

RunReport randomized_greedy(const ValueOracle& f, const GroundSet& ground,
                            const AlgorithmConfig& config) {
  const int n = ground.n();
  const int k = ground.k;
  const int t = AlgorithmConfig::exponent_t(k);
  const std::vector<int> order = resolve_order(ground, config);
  std::mt19937_64 rng(config.seed);

  RunReport report;
  report.element_order = order;

  KVector s(n);
  long long queries = 0;
  double fs = f.value(s);
  ++queries;

  std::vector<double> child_values(static_cast<std::size_t>(k));
  for (int j = 1; j <= n; ++j) {
    const int e = order[std::size_t(j - 1)];
    const std::vector<double> gains =
        clamped_gains(f, s, fs, e, k, queries, &child_values);

    std::vector<double> probs(std::size_t(k), 0.0);
    double beta = 0.0;
    for (double y : gains) beta += std::pow(y, t);
    if (beta != 0.0) {
      for (int i = 0; i < k; ++i) probs[std::size_t(i)] = std::pow(gains[std::size_t(i)], t) / beta;
    } else {
      probs[0] = 1.0;
    }

    const double u = rnd::unit(rng);
    int pick = k;  // guard against cumulative rounding
    double cum = 0.0;
    for (int i = 1; i <= k; ++i) {
      cum += probs[std::size_t(i - 1)];
      if (u < cum) {
        pick = i;
        break;
      }
    }
    s.set(e, pick);
    fs = child_values[std::size_t(pick - 1)];

    report.trace.push_back(TraceRecord{j, 1, queries, std::nullopt, std::nullopt});
  }

  report.solution = std::move(s);
  report.value = fs;
  report.total_queries = queries;
  return report;
}

Expectation exact_expectation(const ValueOracle& f, const GroundSet& ground,
                              const AlgorithmConfig& config, std::uint64_t budget) {
  const int n = ground.n();
  const int k = ground.k;
  const int t = AlgorithmConfig::exponent_t(k);
  const std::vector<int> order = resolve_order(ground, config);

  std::uint64_t leaves = 1;
  for (int j = 0; j < n; ++j) {
    leaves *= std::uint64_t(k);
    if (leaves > budget) {
      throw BudgetExceeded("exact_expectation: k^n exceeds budget " + std::to_string(budget));
    }
  }

  Rational acc(0);
  KVector s(n);
  long long queries = 0;

  auto walk = [&](auto&& self, int j, double fs, const Rational& prob) -> void {
    if (j > n) {
      acc += prob * rational_of(fs);
      return;
    }
    const int e = order[std::size_t(j - 1)];
    std::vector<double> child_values(static_cast<std::size_t>(k));
    const std::vector<double> gains =
        clamped_gains(f, s, fs, e, k, queries, &child_values);

    Rational beta(0);
    std::vector<Rational> powers(std::size_t(k), Rational(0));
    for (int i = 0; i < k; ++i) {
      Rational p(1);
      const Rational y = rational_of(gains[std::size_t(i)]);
      for (int rep = 0; rep < t; ++rep) p *= y;
      powers[std::size_t(i)] = p;
      beta += p;
    }

    if (beta == 0) {
      s.set(e, 1);
      self(self, j + 1, child_values[0], prob);
      s.set(e, 0);
      return;
    }
    for (int i = 1; i <= k; ++i) {
      if (powers[std::size_t(i - 1)] == 0) continue;  // zero-probability branch
      s.set(e, i);
      self(self, j + 1, child_values[std::size_t(i - 1)],
           prob * powers[std::size_t(i - 1)] / beta);
      s.set(e, 0);
    }
  };

  const double f0 = f.value(s);
  ++queries;
  walk(walk, 1, f0, Rational(1));

  Expectation out;
  out.exact = acc;
  out.value = acc.get_d();
  return out;
}

RunReport deterministic_greedy(const ValueOracle& f, const GroundSet& ground,
                               const AlgorithmConfig& config) {
  const int n = ground.n();
  const int k = ground.k;
  const std::vector<int> order = resolve_order(ground, config);

  RunReport report;
  report.element_order = order;

  long long queries = 0;
  WeightedSupport support;
  {
    KVector zero(n);
    const double f0 = f.value(zero);
    ++queries;
    support.entries.push_back(SupportEntry{1.0, std::move(zero), f0});
    support.iteration = 0;
  }

  for (int j = 1; j <= n; ++j) {
    const int e = order[std::size_t(j - 1)];
    const int m = static_cast<int>(support.entries.size());

    std::vector<double> probs(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> gains(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> child_values(
        static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(k)));
    for (int s = 0; s < m; ++s) {
      const auto& entry = support.entries[std::size_t(s)];
      probs[std::size_t(s)] = entry.prob;
      gains[std::size_t(s)] = clamped_gains(f, entry.vec, entry.value, e, k, queries,
                                            &child_values[std::size_t(s)]);
    }

    ExtremeLP lp = assemble(probs, gains);
    BasicSolution sol = find_extreme_point(lp);

    // Distribution update: children (p_{i,s} * Pr[s], s with e -> i) for the
    // strictly positive LP entries, then renormalize away the snap loss.
    WeightedSupport next;
    next.iteration = j;
    double mass = 0.0;
    for (int s = 0; s < m; ++s) {
      for (int i = 1; i <= k; ++i) {
        const double p = sol.p(lp, s, i);
        if (p <= 0.0) continue;
        const double prob = p * probs[std::size_t(s)];
        next.entries.push_back(SupportEntry{
            prob, with_element(support.entries[std::size_t(s)].vec, e, i),
            child_values[std::size_t(s)][std::size_t(i - 1)]});
        mass += prob;
      }
    }
    for (auto& entry : next.entries) entry.prob /= mass;

    // Theorem-backed invariants; failures signal solver corruption.
    const int next_size = static_cast<int>(next.entries.size());
    if (next_size > m + k) {
      throw InternalError("support grew by more than k: " + std::to_string(m) + " -> " +
                          std::to_string(next_size));
    }
    if (next_size > j * k + 1) {
      throw InternalError("support size " + std::to_string(next_size) +
                          " exceeds jk+1 at iteration " + std::to_string(j));
    }
    {
      std::set<std::vector<int>> distinct;
      for (const auto& entry : next.entries) distinct.insert(entry.vec.values());
      if (static_cast<int>(distinct.size()) != next_size) {
        throw InternalError("duplicate vectors in distribution support");
      }
    }

    report.trace.push_back(
        TraceRecord{j, next_size, queries, sol.max_residual, std::nullopt});
    report.details.push_back(IterationDetail{e, std::move(lp), std::move(sol), next});
    support = std::move(next);
  }

  // argmax over the final support; ties go to the lexicographically smallest.
  const SupportEntry* best = &support.entries.front();
  for (const auto& entry : support.entries) {
    if (entry.value > best->value ||
        (entry.value == best->value && entry.vec < best->vec)) {
      best = &entry;
    }
  }
  report.solution = best->vec;
  report.value = best->value;
  report.total_queries = queries;
  return report;
}

BruteForceResult brute_force_opt(const ValueOracle& f, const GroundSet& ground,
                                 std::uint64_t budget) {
  std::uint64_t count = 1;
  for (int e = 0; e < ground.n(); ++e) {
    count *= std::uint64_t(ground.k + 1);
    if (count > budget) {
      throw BudgetExceeded("brute_force_opt: (k+1)^n exceeds budget " + std::to_string(budget));
    }
  }
  // Lexicographic scan with strict improvement keeps the first (smallest)
  // maximizer.
  BruteForceResult best;
  KVector x(ground.n());
  best.argmax = x;
  best.value = f.value(x);
  while (advance(x, ground.k)) {
    const double v = f.value(x);
    if (v > best.value) {
      best.value = v;
      best.argmax = x;
    }
  }
  return best;
}

CertificateMargins certificate_check(const ValueOracle& f, const GroundSet& ground,
                                     const KVector& optimum,
                                     const WeightedSupport& before,
                                     const WeightedSupport& after,
                                     const ExtremeLP& lp, const BasicSolution& sol,
                                     int element) {
  if (!optimum.fully_assigned()) {
    throw ValidationError("certificate_check: reference optimum must be fully assigned");
  }
  const int k = ground.k;
  const double c = AlgorithmConfig::ratio_c(k);
  const int istar = optimum[element];

  CertificateMargins margins;
  margins.pointwise = std::numeric_limits<double>::infinity();

  double lemma_lhs = 0.0, lemma_rhs = 0.0;
  double e_opt_before = 0.0;

  for (int s = 0; s < static_cast<int>(before.entries.size()); ++s) {
    const auto& entry = before.entries[std::size_t(s)];

    // r = o[s] with e^(j) cleared; a_i = marginal gain of e^(j) at r.
    const KVector os = project_optimal(optimum, entry.vec);
    e_opt_before += entry.prob * f.value(os);
    KVector r = os;
    r.set(element, 0);
    const double fr = f.value(r);
    std::vector<double> a(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
      a[std::size_t(i - 1)] = f.value(with_element(r, element, i)) - fr;
    }

    std::vector<double> y(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
      y[std::size_t(i - 1)] = f.value(with_element(entry.vec, element, i)) - entry.value;
    }

    const double astar = a[std::size_t(istar - 1)];
    const double ystar = y[std::size_t(istar - 1)];
    double step_lhs = 0.0, step_rhs = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double ai = a[std::size_t(i - 1)];
      margins.pointwise = std::min(margins.pointwise, ystar - (astar - ai));
      const double p = sol.p(lp, s, i);
      step_lhs += (astar - ai) * p;
      step_rhs += y[std::size_t(i - 1)] * p;
    }
    lemma_lhs += entry.prob * step_lhs;
    lemma_rhs += entry.prob * c * step_rhs;
  }
  margins.lemma = lemma_rhs - lemma_lhs;

  double e_opt_after = 0.0;
  for (const auto& entry : after.entries) {
    e_opt_after += entry.prob * f.value(project_optimal(optimum, entry.vec));
  }
  const double gain_term = c * (after.expected_value() - before.expected_value());
  margins.aggregate = gain_term - (e_opt_before - e_opt_after);
  return margins;
}

}  // namespace ksub
