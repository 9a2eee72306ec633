#include <doctest.h>

#include "ksub/core.hpp"
#include "ksub/instances.hpp"
#include "test_util.hpp"

using namespace ksub;
using ksub_test::from_sets;
using ksub_test::set_join;
using ksub_test::set_leq;
using ksub_test::set_meet;
using ksub_test::to_sets;

namespace {

KVector kv(std::vector<int> v) { return KVector(std::move(v)); }

GroundSet tiny(int n, int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("e" + std::to_string(i));
  return make_ground_set(std::move(names), k);
}

}  // namespace

TEST_CASE("meet matches componentwise intersection") {
  CHECK(meet(kv({1, 0, 2}), kv({1, 2, 0})) == kv({1, 0, 0}));
  const KVector x = kv({2, 1, 0});
  CHECK(meet(x, x) == x);
  CHECK(meet(kv({1, 2}), kv({2, 1})) == kv({0, 0}));
  CHECK_THROWS_AS(meet(kv({1}), kv({1, 2})), ValidationError);
}

TEST_CASE("join unions parts and zeroes conflicts") {
  CHECK(join(kv({1, 0, 2}), kv({1, 2, 0})) == kv({1, 2, 2}));
  CHECK(join(kv({1, 2}), kv({2, 1})) == kv({0, 0}));
  const KVector x = kv({2, 0, 1});
  CHECK(join(x, KVector(3)) == x);
  CHECK_THROWS_AS(join(kv({1}), kv({1, 2})), ValidationError);
}

TEST_CASE("leq is containment per part") {
  CHECK(leq(kv({1, 0, 0}), kv({1, 2, 0})));
  CHECK_FALSE(leq(kv({1, 0}), kv({2, 0})));
  CHECK(leq(KVector(4), kv({1, 2, 0, 2})));
  CHECK_THROWS_AS(leq(kv({1}), kv({1, 2})), ValidationError);
}

TEST_CASE("lattice ops agree with the set-family definitions exhaustively") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      KVector x(n);
      do {
        KVector y(n);
        do {
          const auto sx = to_sets(x, k);
          const auto sy = to_sets(y, k);
          CHECK(meet(x, y) == from_sets(set_meet(sx, sy), n));
          CHECK(join(x, y) == from_sets(set_join(sx, sy), n));
          CHECK(leq(x, y) == set_leq(sx, sy));
          // order facts from the definitions
          CHECK(leq(meet(x, y), x));
          CHECK(leq(meet(x, y), join(x, y)));
        } while (advance(y, k));
      } while (advance(x, k));
    }
  }
}

TEST_CASE("project_optimal keeps s on its support and o elsewhere") {
  CHECK(project_optimal(kv({1, 2, 1}), kv({2, 0, 0})) == kv({2, 2, 1}));
  const KVector o = kv({1, 2, 1});
  CHECK(project_optimal(o, KVector(3)) == o);
  const KVector total = kv({2, 1, 2});
  CHECK(project_optimal(o, total) == total);

  // s's support always wins, exhaustively
  for (int k = 1; k <= 2; ++k) {
    KVector a(3);
    do {
      KVector s(3);
      do {
        const KVector proj = project_optimal(a, s);
        for (int e = 0; e < 3; ++e) {
          if (s[e] != 0) CHECK(proj[e] == s[e]);
          if (s[e] == 0) CHECK(proj[e] == a[e]);
        }
      } while (advance(s, k));
    } while (advance(a, k));
  }
}

TEST_CASE("marginal gains") {
  auto inst = build_assignment_modular(
      make_ground_set({"a", "b"}, 2),
      {{"a", {1, 2}}, {"b", {3, 1}}});
  const KVector zero(2);
  CHECK(marginal_gain(*inst.oracle, zero, 1, 1) == doctest::Approx(3.0));

  auto cov = build_separable_coverage(
      make_ground_set({"a", "b"}, 2), {"u1", "u2", "u3"},
      {{"a", {"u1", "u2"}}, {"b", {"u2", "u3"}}},
      {{{"u1", 1.0}, {"u2", 1.0}, {"u3", 1.0}}, {{"u1", 1.0}, {"u2", 1.0}, {"u3", 1.0}}});
  const KVector a1 = kv({1, 0});
  CHECK(marginal_gain(*cov.oracle, a1, 1, 1) == doctest::Approx(1.0));
  CHECK(marginal_gain(*cov.oracle, a1, 1, 2) == doctest::Approx(2.0));

  CHECK_THROWS_AS(marginal_gain(*inst.oracle, kv({1, 0}), 0, 1), ValidationError);
  CHECK_THROWS_AS(marginal_gain(*inst.oracle, zero, 0, 0), ValidationError);
}

TEST_CASE("advance enumerates the lattice in lexicographic order") {
  KVector x(2);
  std::vector<std::vector<int>> seen;
  do {
    seen.push_back(x.values());
  } while (advance(x, 1));
  CHECK(seen == std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(x.is_zero());
}

TEST_CASE("checkers accept the constructed families") {
  auto modular = build_assignment_modular(
      tiny(3, 3), {{"e1", {1, 4, 2}}, {"e2", {0, 3, 3}}, {"e3", {5, 1, 0}}});
  auto table = TableOracle::materialize(*modular.oracle, modular.ground);
  CHECK(table.integer_valued());
  CHECK(check_k_submodular(table).holds);
  CHECK(check_orthant_submodular(table).holds);
  CHECK(check_pairwise_monotone(table).holds);
  CHECK(check_monotone(table).holds);
  CHECK(check_nonnegative(table).holds);

  auto cov = build_separable_coverage(
      tiny(3, 2), {"u1", "u2", "u3"},
      {{"e1", {"u1", "u2"}}, {"e2", {"u2", "u3"}}, {"e3", {"u3"}}},
      {{{"u1", 2.0}, {"u2", 1.0}}, {{"u2", 1.0}, {"u3", 3.0}}});
  auto cov_table = TableOracle::materialize(*cov.oracle, cov.ground);
  CHECK(check_k_submodular(cov_table).holds);
  CHECK(check_monotone(cov_table).holds);
}

TEST_CASE("definition checker rejects a supermodular table with a replayable witness") {
  // n=2, k=1: f(e1)=f(e2)=0 but f(e1,e2)=1 is strictly supermodular.
  TableOracle f(tiny(2, 1), {0, 0, 0, 1});
  const auto report = check_k_submodular(f);
  REQUIRE_FALSE(report.holds);
  REQUIRE(report.witness.has_value());
  const auto& w = *report.witness;
  REQUIRE(w.y.has_value());
  CHECK(f.value(w.x) + f.value(*w.y) <
        f.value(meet(w.x, *w.y)) + f.value(join(w.x, *w.y)));
}

TEST_CASE("pairwise monotonicity fails when every part has a negative marginal") {
  // n=1, k=2 with f(0) = 5: both single-element marginals are -5.
  TableOracle f(tiny(1, 2), {5, 0, 0});
  const auto report = check_pairwise_monotone(f);
  REQUIRE_FALSE(report.holds);
  REQUIRE(report.witness.has_value());
  const auto& w = *report.witness;
  REQUIRE(w.element.has_value());
  REQUIRE(w.part_i.has_value());
  REQUIRE(w.part_j.has_value());
  CHECK(marginal_gain(f, w.x, *w.element, *w.part_i) +
            marginal_gain(f, w.x, *w.element, *w.part_j) <
        0);
  // this f is monotone-violating too
  CHECK_FALSE(check_monotone(f).holds);
}

TEST_CASE("orthant checker produces a replayable witness") {
  // Gain of e2 grows once e1 is assigned: violates diminishing returns.
  // n=2, k=1: f(00)=0 f(01)=1 f(10)=1 f(11)=5.
  TableOracle f(tiny(2, 1), {0, 1, 1, 5});
  const auto report = check_orthant_submodular(f);
  REQUIRE_FALSE(report.holds);
  const auto& w = *report.witness;
  CHECK(leq(w.x, *w.y));
  CHECK(marginal_gain(f, w.x, *w.element, *w.part_i) <
        marginal_gain(f, *w.y, *w.element, *w.part_i));
}

TEST_CASE("theorem-1 equivalence on random tables") {
  std::mt19937_64 rng(4242);
  int violations_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rnd::below(rng, 3));
    const int k = 1 + static_cast<int>(rnd::below(rng, 3));
    const auto f = ksub_test::equivalence_sample(rng, n, k);
    const bool def = check_k_submodular(f).holds;
    const bool conj =
        check_orthant_submodular(f).holds && check_pairwise_monotone(f).holds;
    CHECK(def == conj);
    if (!def) ++violations_seen;
  }
  CHECK(violations_seen > 0);  // the pool must exercise both outcomes
}

TEST_CASE("checker budget guard refuses oversized enumerations") {
  auto modular = build_assignment_modular(
      tiny(3, 2), {{"e1", {1, 2}}, {"e2", {3, 1}}, {"e3", {2, 2}}});
  auto table = TableOracle::materialize(*modular.oracle, modular.ground);
  CheckOptions opt;
  opt.budget = 10;  // (k+1)^(2n) = 27^2 = 729 > 10
  CHECK_THROWS_AS(check_k_submodular(table, opt), BudgetExceeded);
  CHECK_THROWS_AS(check_monotone(table, opt), BudgetExceeded);
}

TEST_CASE("materialize budget guard") {
  auto modular = build_assignment_modular(
      tiny(3, 2), {{"e1", {1, 2}}, {"e2", {3, 1}}, {"e3", {2, 2}}});
  CHECK_THROWS_AS(TableOracle::materialize(*modular.oracle, modular.ground, 5),
                  BudgetExceeded);
}

TEST_CASE("ground set validation") {
  CHECK_THROWS_AS(make_ground_set({}, 2), ValidationError);
  CHECK_THROWS_AS(make_ground_set({"a", "a"}, 2), ValidationError);
  CHECK_THROWS_AS(make_ground_set({"a"}, 0), ValidationError);
  const auto g = make_ground_set({"a", "b"}, 3);
  CHECK(g.index_of("b") == 1);
  CHECK(g.index_of("zzz") == -1);
}
