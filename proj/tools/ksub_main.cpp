// Command-line front end: solve instances with the randomized or
// derandomized greedy, verify k-submodularity properties exhaustively,
// compute brute-force optima, benchmark query counts against the proven
// bounds, and generate random instances.
//
// Exit codes: 0 success, 2 usage/parse error, 3 budget refusal, 4 internal
// invariant violation.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ksub/algorithms.hpp"
#include "ksub/instances.hpp"
#include "ksub/lp.hpp"
#include "ksub/rational.hpp"
#include "ksub/version.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kBruteReportBudget = 1'000'000;

struct CommonOpts {
  std::string instance_path;
  std::string algorithm = "det";
  std::optional<std::uint64_t> seed;
  std::string order_path;
  std::string out_path;
  std::uint64_t budget = kBruteReportBudget;
};

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ksub::ValidationError("cannot write output file: " + out_path);
  out << text;
}

std::vector<int> load_order(const std::string& path, const ksub::GroundSet& ground) {
  std::ifstream in(path);
  if (!in) throw ksub::ValidationError("cannot open order file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ksub::ValidationError(std::string("order file is not valid JSON: ") + e.what());
  }
  std::vector<int> order;
  for (const auto& name : j.get<std::vector<std::string>>()) {
    const int idx = ground.index_of(name);
    if (idx < 0) throw ksub::ValidationError("order file names unknown element: " + name);
    order.push_back(idx);
  }
  return order;
}

json trace_to_json(const std::vector<ksub::TraceRecord>& trace) {
  json rows = json::array();
  for (const auto& t : trace) {
    json row;
    row["j"] = t.j;
    row["support"] = t.support;
    row["queries"] = t.queries;
    row["lp_residual"] = t.lp_residual ? json(*t.lp_residual) : json(nullptr);
    row["min_certificate_margin"] =
        t.min_certificate_margin ? json(*t.min_certificate_margin) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_to_json(const CommonOpts& opts, const ksub::Instance& inst,
                    const std::vector<int>& order) {
  json cfg;
  cfg["instance"] = opts.instance_path;
  cfg["algorithm"] = opts.algorithm == "det" ? "deterministic" : "randomized";
  cfg["seed"] = opts.seed ? json(*opts.seed) : json(nullptr);
  json names = json::array();
  for (int e : order) names.push_back(inst.ground.elements[std::size_t(e)]);
  cfg["order"] = std::move(names);
  cfg["budget"] = opts.budget;
  return cfg;
}

int cmd_solve(const CommonOpts& opts) {
  ksub::Instance inst = ksub::load_instance_file(opts.instance_path);
  const bool randomized = opts.algorithm == "rand";
  if (randomized && !opts.seed) {
    std::cerr << "solve: --seed is required with --algorithm rand\n";
    return 2;
  }

  ksub::AlgorithmConfig config;
  if (!opts.order_path.empty()) config.element_order = load_order(opts.order_path, inst.ground);
  if (opts.seed) config.seed = *opts.seed;

  ksub::CountingOracle counted(*inst.oracle);
  ksub::RunReport run = randomized
                            ? ksub::randomized_greedy(counted, inst.ground, config)
                            : ksub::deterministic_greedy(counted, inst.ground, config);

  json report;
  report["version"] = ksub::kVersion;
  report["config"] = config_to_json(opts, inst, run.element_order);
  json solution;
  for (int e = 0; e < inst.ground.n(); ++e) {
    solution[inst.ground.elements[std::size_t(e)]] = run.solution[e];
  }
  report["solution"] = std::move(solution);
  report["value"] = run.value;
  report["total_queries"] = counted.count();

  // Brute-force comparison only when the lattice is small enough; ratio
  // fields stay null otherwise rather than being estimated.
  std::uint64_t lattice = 1;
  bool small = true;
  for (int e = 0; e < inst.ground.n() && small; ++e) {
    lattice *= std::uint64_t(inst.ground.k + 1);
    if (lattice > opts.budget) small = false;
  }
  if (small) {
    const auto opt = ksub::brute_force_opt(*inst.oracle, inst.ground, opts.budget);
    const double bound = ksub::AlgorithmConfig::guarantee(inst.ground.k);
    report["optimum"] = opt.value;
    report["ratio"] = opt.value > 0 ? json(run.value / opt.value) : json(nullptr);
    report["bound"] = bound;
    // Exact comparison (2k-1) * value >= k * optimum; both sides are exact
    // rationals of the oracle's doubles.
    const ksub::Rational lhs =
        ksub::Rational(2 * inst.ground.k - 1) * ksub::rational_of(run.value);
    const ksub::Rational rhs = ksub::Rational(inst.ground.k) * ksub::rational_of(opt.value);
    report["bound_pass"] = lhs >= rhs;

    if (!randomized) {
      const ksub::KVector o = ksub::complete_with_part(opt.argmax);
      const ksub::WeightedSupport* before = nullptr;
      ksub::WeightedSupport d0;
      d0.entries.push_back(
          {1.0, ksub::KVector(inst.ground.n()), inst.oracle->value(ksub::KVector(inst.ground.n()))});
      for (std::size_t j = 0; j < run.details.size(); ++j) {
        const auto& det = run.details[j];
        before = j == 0 ? &d0 : &run.details[j - 1].support_after;
        const auto margins = ksub::certificate_check(*inst.oracle, inst.ground, o, *before,
                                                     det.support_after, det.lp, det.solution,
                                                     det.element);
        run.trace[j].min_certificate_margin = margins.min_slack();
      }
    }
  } else {
    report["optimum"] = nullptr;
    report["ratio"] = nullptr;
    report["bound"] = ksub::AlgorithmConfig::guarantee(inst.ground.k);
    report["bound_pass"] = nullptr;
  }
  report["trace"] = trace_to_json(run.trace);

  write_output(opts.out_path, report.dump(2) + "\n");
  return 0;
}

int cmd_verify(const CommonOpts& opts) {
  ksub::Instance inst = ksub::load_instance_file(opts.instance_path);
  const std::uint64_t pair_budget = opts.budget == kBruteReportBudget
                                        ? ksub::CheckOptions{}.budget
                                        : opts.budget;
  ksub::TableOracle table =
      ksub::TableOracle::materialize(*inst.oracle, inst.ground, pair_budget);
  ksub::CheckOptions check{pair_budget, std::nullopt};

  const auto mono = ksub::check_monotone(table, check);
  const auto ksubm = ksub::check_k_submodular(table, check);
  const auto orth = ksub::check_orthant_submodular(table, check);
  const auto pair = ksub::check_pairwise_monotone(table, check);
  const auto nonneg = ksub::check_nonnegative(table, check);

  auto witness_json = [&](const ksub::PropertyReport& r) -> json {
    if (!r.witness) return nullptr;
    json w;
    w["x"] = r.witness->x.values();
    if (r.witness->y) w["y"] = r.witness->y->values();
    if (r.witness->element) {
      w["element"] = inst.ground.elements[std::size_t(*r.witness->element)];
    }
    if (r.witness->part_i) w["part_i"] = *r.witness->part_i;
    if (r.witness->part_j) w["part_j"] = *r.witness->part_j;
    return w;
  };
  auto report_json = [&](const ksub::PropertyReport& r) {
    return json{{"holds", r.holds},
                {"checks_performed", r.checks_performed},
                {"witness", witness_json(r)}};
  };

  json report;
  report["version"] = ksub::kVersion;
  report["instance"] = opts.instance_path;
  report["monotone"] = report_json(mono);
  report["k_submodular"] = report_json(ksubm);
  report["orthant_submodular"] = report_json(orth);
  report["pairwise_monotone"] = report_json(pair);
  report["nonnegative"] = report_json(nonneg);
  report["theorem1_consistent"] = ksubm.holds == (orth.holds && pair.holds);

  write_output(opts.out_path, report.dump(2) + "\n");
  return 0;
}

int cmd_brute(const CommonOpts& opts) {
  ksub::Instance inst = ksub::load_instance_file(opts.instance_path);
  const auto opt = ksub::brute_force_opt(*inst.oracle, inst.ground, opts.budget);
  json report;
  report["version"] = ksub::kVersion;
  report["instance"] = opts.instance_path;
  json solution;
  for (int e = 0; e < inst.ground.n(); ++e) {
    solution[inst.ground.elements[std::size_t(e)]] = opt.argmax[e];
  }
  report["solution"] = std::move(solution);
  report["value"] = opt.value;
  write_output(opts.out_path, report.dump(2) + "\n");
  return 0;
}

struct BenchSpec {
  std::vector<int> ns{2, 3, 4, 5};
  std::vector<int> ks{1, 2, 3};
  std::vector<ksub::Family> families{ksub::Family::AssignmentModular,
                                     ksub::Family::SeparableCoverage, ksub::Family::Table};
  int seeds = 3;
};

std::vector<int> parse_int_list(const std::string& text) {
  // "2..5" or "2,3,5"
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

BenchSpec parse_rows_spec(const std::string& spec) {
  BenchSpec out;
  if (spec.empty()) return out;
  std::stringstream ss(spec);
  std::string clause;
  while (std::getline(ss, clause, ';')) {
    const auto eq = clause.find('=');
    if (eq == std::string::npos) {
      throw ksub::ValidationError("bad --rows clause (want key=value): " + clause);
    }
    const std::string key = clause.substr(0, eq);
    const std::string val = clause.substr(eq + 1);
    if (key == "n") {
      out.ns = parse_int_list(val);
    } else if (key == "k") {
      out.ks = parse_int_list(val);
    } else if (key == "seeds") {
      out.seeds = std::stoi(val);
    } else if (key == "families") {
      out.families.clear();
      std::stringstream fs(val);
      std::string fam;
      while (std::getline(fs, fam, ',')) out.families.push_back(ksub::family_from_name(fam));
    } else {
      throw ksub::ValidationError("unknown --rows key: " + key);
    }
  }
  if (out.ns.empty() || out.ks.empty() || out.families.empty() || out.seeds < 1) {
    throw ksub::ValidationError("--rows selects no work");
  }
  return out;
}

long long query_bound(int n, int k) {
  return static_cast<long long>(k) * (static_cast<long long>(k) * n * (n + 1) / 2 + n);
}

int cmd_bench(const CommonOpts& opts, const std::string& rows_spec) {
  const BenchSpec spec = parse_rows_spec(rows_spec);
  std::ostringstream csv;
  csv << "n,k,family,det_value,opt,ratio,queries,query_bound,support_max\n";

  for (const int n : spec.ns) {
    for (const int k : spec.ks) {
      for (const auto family : spec.families) {
        // Table instances stay exhaustive-check friendly.
        if (family == ksub::Family::Table && n > 3) continue;
        for (int s = 1; s <= spec.seeds; ++s) {
          const std::uint64_t seed =
              std::uint64_t(n) * 1'000'000 + std::uint64_t(k) * 10'000 +
              std::uint64_t(static_cast<int>(family)) * 100 + std::uint64_t(s);
          const ksub::Instance inst = ksub::random_monotone_instance(seed, n, k, {family});

          ksub::CountingOracle counted(*inst.oracle);
          const ksub::RunReport run =
              ksub::deterministic_greedy(counted, inst.ground, {});
          const auto opt = ksub::brute_force_opt(*inst.oracle, inst.ground);
          int support_max = 0;
          for (const auto& t : run.trace) support_max = std::max(support_max, t.support);

          csv << n << ',' << k << ',' << family_name(family) << ',' << run.value << ','
              << opt.value << ',';
          if (opt.value > 0) {
            csv << (run.value / opt.value);
          } else {
            csv << "";
          }
          csv << ',' << counted.count() << ',' << query_bound(n, k) << ',' << support_max
              << '\n';
        }
      }
    }
  }
  write_output(opts.out_path, csv.str());
  return 0;
}

int cmd_gen(const CommonOpts& opts, int n, int k, const std::string& family) {
  if (!opts.seed) {
    std::cerr << "gen: --seed is required\n";
    return 2;
  }
  std::vector<ksub::Family> mix;
  if (family == "any") {
    mix = {ksub::Family::AssignmentModular, ksub::Family::SeparableCoverage,
           ksub::Family::Table};
  } else {
    mix = {ksub::family_from_name(family)};
  }
  const ksub::Instance inst = ksub::random_monotone_instance(*opts.seed, n, k, mix);
  const std::string text = ksub::instance_to_json(inst).dump(2) + "\n";
  write_output(opts.out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monotone k-submodular maximization: randomized and derandomized greedy"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string rows_spec;
  int gen_n = 3, gen_k = 2;
  std::string gen_family = "assignment_modular";

  auto add_common = [&](CLI::App* cmd, bool needs_instance) {
    if (needs_instance) {
      cmd->add_option("--instance", opts.instance_path, "instance JSON file")->required();
    }
    cmd->add_option("--out", opts.out_path, "output path (default stdout)");
    cmd->add_option("--budget", opts.budget, "enumeration budget");
    cmd->add_option("--seed", [&opts](const std::vector<std::string>& vals) {
      opts.seed = std::stoull(vals.front());
      return true;
    }, "RNG seed");
  };

  auto* solve = app.add_subcommand("solve", "run an algorithm on an instance");
  add_common(solve, true);
  solve->add_option("--algorithm", opts.algorithm, "det | rand")
      ->check(CLI::IsMember({"det", "rand"}));
  solve->add_option("--order", opts.order_path, "JSON array of element names");

  auto* verify = app.add_subcommand("verify", "exhaustive property checks");
  add_common(verify, true);

  auto* brute = app.add_subcommand("brute", "brute-force optimum");
  add_common(brute, true);

  auto* bench = app.add_subcommand("bench", "CSV benchmark over generated instances");
  add_common(bench, false);
  bench->add_option("--rows", rows_spec,
                    "row spec, e.g. n=2..5;k=1..3;families=assignment_modular;seeds=3");

  auto* gen = app.add_subcommand("gen", "generate a random validated instance");
  add_common(gen, false);
  gen->add_option("--n", gen_n, "ground-set size");
  gen->add_option("--k", gen_k, "number of parts");
  gen->add_option("--family", gen_family,
                  "assignment_modular | separable_coverage | table | any");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (brute->parsed()) return cmd_brute(opts);
    if (bench->parsed()) return cmd_bench(opts, rows_spec);
    if (gen->parsed()) return cmd_gen(opts, gen_n, gen_k, gen_family);
  } catch (const ksub::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ksub::BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const ksub::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
