#include "ksub/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ksub/rational.hpp"
#include "ksub/random.hpp"

namespace ksub {

namespace {

class ModularOracle final : public ValueOracle {
 public:
  // weights[e][i-1] = w(e, i)
  explicit ModularOracle(std::vector<std::vector<double>> weights)
      : weights_(std::move(weights)) {}

  double value(const KVector& x) const override {
    double sum = 0.0;
    for (int e = 0; e < x.size(); ++e) {
      if (x[e] != 0) sum += weights_[std::size_t(e)][std::size_t(x[e] - 1)];
    }
    return sum;
  }

 private:
  std::vector<std::vector<double>> weights_;
};

class CoverageOracle final : public ValueOracle {
 public:
  CoverageOracle(int universe_size, std::vector<std::vector<int>> cover,
                 std::vector<std::vector<double>> topic_weights)
      : universe_size_(universe_size),
        cover_(std::move(cover)),
        topic_weights_(std::move(topic_weights)) {}

  double value(const KVector& x) const override {
    double total = 0.0;
    std::vector<char> hit(static_cast<std::size_t>(universe_size_));
    for (std::size_t part = 0; part < topic_weights_.size(); ++part) {
      std::fill(hit.begin(), hit.end(), 0);
      for (int e = 0; e < x.size(); ++e) {
        if (x[e] != static_cast<int>(part) + 1) continue;
        for (int u : cover_[std::size_t(e)]) hit[std::size_t(u)] = 1;
      }
      for (int u = 0; u < universe_size_; ++u) {
        if (hit[std::size_t(u)]) total += topic_weights_[part][std::size_t(u)];
      }
    }
    return total;
  }

 private:
  int universe_size_;
  std::vector<std::vector<int>> cover_;           // per element, universe indices
  std::vector<std::vector<double>> topic_weights_;  // k x universe
};

bool all_integer(const std::vector<double>& vals) {
  return std::all_of(vals.begin(), vals.end(), is_integer_value);
}

std::string vector_key(const KVector& x) {
  std::string key;
  for (int e = 0; e < x.size(); ++e) {
    if (e) key += ',';
    key += std::to_string(x[e]);
  }
  return key;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::AssignmentModular: return "assignment_modular";
    case Family::SeparableCoverage: return "separable_coverage";
    case Family::Table: return "table";
  }
  throw ValidationError("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "assignment_modular") return Family::AssignmentModular;
  if (name == "separable_coverage") return Family::SeparableCoverage;
  if (name == "table") return Family::Table;
  throw ValidationError("unknown function family: " + name);
}

Instance build_assignment_modular(GroundSet ground,
                                  const std::map<std::string, std::vector<double>>& weights) {
  std::vector<std::vector<double>> w(static_cast<std::size_t>(ground.n()));
  bool integral = true;
  for (int e = 0; e < ground.n(); ++e) {
    auto it = weights.find(ground.elements[std::size_t(e)]);
    if (it == weights.end()) {
      throw ValidationError("missing weights for element " + ground.elements[std::size_t(e)]);
    }
    if (static_cast<int>(it->second.size()) != ground.k) {
      throw ValidationError("weights for " + it->first + " must have k entries");
    }
    for (double v : it->second) {
      if (!(v >= 0)) throw ValidationError("negative weight for " + it->first);
    }
    integral = integral && all_integer(it->second);
    w[std::size_t(e)] = it->second;
  }

  nlohmann::json params;
  params["type"] = family_name(Family::AssignmentModular);
  params["weights"] = weights;

  Instance inst;
  inst.ground = std::move(ground);
  inst.oracle = std::make_shared<ModularOracle>(std::move(w));
  inst.family = Family::AssignmentModular;
  inst.params = std::make_shared<const nlohmann::json>(std::move(params));
  inst.integer_valued = integral;
  return inst;
}

Instance build_separable_coverage(
    GroundSet ground, std::vector<std::string> universe,
    const std::map<std::string, std::vector<std::string>>& cover_sets,
    const std::vector<std::map<std::string, double>>& topic_weights) {
  std::map<std::string, int> uindex;
  for (int u = 0; u < static_cast<int>(universe.size()); ++u) {
    if (!uindex.emplace(universe[std::size_t(u)], u).second) {
      throw ValidationError("duplicate universe element: " + universe[std::size_t(u)]);
    }
  }
  if (static_cast<int>(topic_weights.size()) != ground.k) {
    throw ValidationError("topic_weights must have k entries");
  }

  std::vector<std::vector<int>> cover(static_cast<std::size_t>(ground.n()));
  for (int e = 0; e < ground.n(); ++e) {
    auto it = cover_sets.find(ground.elements[std::size_t(e)]);
    if (it == cover_sets.end()) continue;  // empty cover set is fine
    for (const auto& u : it->second) {
      auto uit = uindex.find(u);
      if (uit == uindex.end()) {
        throw ValidationError("cover set of " + it->first + " names unknown universe element " + u);
      }
      cover[std::size_t(e)].push_back(uit->second);
    }
    std::sort(cover[std::size_t(e)].begin(), cover[std::size_t(e)].end());
    cover[std::size_t(e)].erase(
        std::unique(cover[std::size_t(e)].begin(), cover[std::size_t(e)].end()),
        cover[std::size_t(e)].end());
  }
  for (const auto& [name, _] : cover_sets) {
    if (std::find(ground.elements.begin(), ground.elements.end(), name) ==
        ground.elements.end()) {
      throw ValidationError("cover set for unknown ground element " + name);
    }
  }

  bool integral = true;
  std::vector<std::vector<double>> tw(std::size_t(ground.k),
                                      std::vector<double>(universe.size(), 0.0));
  for (int i = 0; i < ground.k; ++i) {
    for (const auto& [u, wgt] : topic_weights[std::size_t(i)]) {
      auto uit = uindex.find(u);
      if (uit == uindex.end()) {
        throw ValidationError("topic weight names unknown universe element " + u);
      }
      if (!(wgt >= 0)) throw ValidationError("negative topic weight for " + u);
      integral = integral && is_integer_value(wgt);
      tw[std::size_t(i)][std::size_t(uit->second)] = wgt;
    }
  }

  nlohmann::json params;
  params["type"] = family_name(Family::SeparableCoverage);
  params["universe"] = universe;
  params["cover_sets"] = cover_sets;
  params["topic_weights"] = topic_weights;

  Instance inst;
  inst.ground = std::move(ground);
  inst.oracle = std::make_shared<CoverageOracle>(static_cast<int>(universe.size()),
                                                 std::move(cover), std::move(tw));
  inst.family = Family::SeparableCoverage;
  inst.params = std::make_shared<const nlohmann::json>(std::move(params));
  inst.integer_valued = integral;
  return inst;
}

Instance build_table(GroundSet ground, std::vector<double> values, bool validate) {
  auto oracle = std::make_shared<TableOracle>(ground, std::move(values));

  nlohmann::json table_values = nlohmann::json::object();
  KVector x(ground.n());
  do {
    const double v = oracle->value(x);
    if (oracle->integer_valued()) {
      table_values[vector_key(x)] = static_cast<long long>(v);
    } else {
      table_values[vector_key(x)] = v;
    }
  } while (advance(x, ground.k));

  nlohmann::json params;
  params["type"] = family_name(Family::Table);
  params["values"] = std::move(table_values);

  Instance inst;
  inst.ground = std::move(ground);
  inst.family = Family::Table;
  inst.params = std::make_shared<const nlohmann::json>(std::move(params));
  inst.integer_valued = oracle->integer_valued();
  if (validate) {
    auto mono = check_monotone(*oracle);
    auto ksub = check_k_submodular(*oracle);
    if (!mono.holds || !ksub.holds) {
      throw ValidationError(std::string("table instance failed validation: ") +
                            (!mono.holds ? "not monotone" : "not k-submodular"));
    }
    inst.validated = true;
  }
  inst.oracle = std::move(oracle);
  return inst;
}

namespace {

std::vector<std::string> numbered(const char* prefix, int count) {
  std::vector<std::string> out;
  out.reserve(std::size_t(count));
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Instance random_modular(std::mt19937_64& rng, int n, int k) {
  auto ground = make_ground_set(numbered("e", n), k);
  std::map<std::string, std::vector<double>> weights;
  for (const auto& e : ground.elements) {
    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& v : w) v = double(rnd::range(rng, 0, 20));
    weights[e] = std::move(w);
  }
  return build_assignment_modular(std::move(ground), weights);
}

Instance random_coverage(std::mt19937_64& rng, int n, int k) {
  auto ground = make_ground_set(numbered("e", n), k);
  const int u = n + static_cast<int>(rnd::range(rng, 0, n));
  auto universe = numbered("u", u);

  std::map<std::string, std::vector<std::string>> cover_sets;
  for (const auto& e : ground.elements) {
    std::vector<std::string> cs;
    for (const auto& uu : universe) {
      if (rnd::below(rng, 2) == 0) cs.push_back(uu);
    }
    if (cs.empty()) cs.push_back(universe[std::size_t(rnd::below(rng, universe.size()))]);
    cover_sets[e] = std::move(cs);
  }

  std::vector<std::map<std::string, double>> topic_weights(static_cast<std::size_t>(k));
  for (auto& tw : topic_weights) {
    for (const auto& uu : universe) tw[uu] = double(rnd::range(rng, 0, 5));
  }
  return build_separable_coverage(std::move(ground), std::move(universe), cover_sets,
                                  topic_weights);
}

// Table candidates: a backbone that is monotone k-submodular by construction
// (a sum of two truncated modular terms, capped at 100) plus a sparse random
// perturbation. The perturbation can break either property, so every
// candidate still goes through the checkers.
std::vector<double> table_candidate(std::mt19937_64& rng, const GroundSet& ground) {
  const int n = ground.n();
  const int k = ground.k;
  struct Term {
    std::vector<std::vector<long long>> w;
    long long cap;
  };
  std::vector<Term> terms(2);
  for (auto& t : terms) {
    t.w.assign(std::size_t(n), std::vector<long long>(std::size_t(k)));
    for (auto& row : t.w) {
      for (auto& v : row) v = rnd::range(rng, 0, 12);
    }
    t.cap = rnd::range(rng, 8, std::max(9, 12 * n));
  }

  std::vector<double> table;
  KVector x(n);
  do {
    long long sum = 0;
    for (const auto& t : terms) {
      long long tot = 0;
      for (int e = 0; e < n; ++e) {
        if (x[e] != 0) tot += t.w[std::size_t(e)][std::size_t(x[e] - 1)];
      }
      sum += std::min(t.cap, tot);
    }
    table.push_back(double(std::min<long long>(sum, 100)));
  } while (advance(x, k));

  // Perturb two non-bottom entries; index 0 stays f(0) = 0.
  for (int hit = 0; hit < 2 && table.size() > 1; ++hit) {
    const std::size_t idx = 1 + rnd::below(rng, table.size() - 1);
    const long long delta = rnd::range(rng, 1, 2);
    table[idx] = double(std::clamp<long long>(static_cast<long long>(table[idx]) + delta, 0, 100));
  }
  return table;
}

Instance random_table(std::mt19937_64& rng, int n, int k, const GenOptions& opt) {
  auto ground = make_ground_set(numbered("e", n), k);
  CheckOptions check{opt.check_budget, std::nullopt};
  for (int attempt = 0; attempt < opt.rejection_budget; ++attempt) {
    std::vector<double> table = table_candidate(rng, ground);
    TableOracle oracle(ground, table);
    if (!check_monotone(oracle, check).holds) continue;
    if (!check_k_submodular(oracle, check).holds) continue;
    return build_table(std::move(ground), std::move(table), /*validate=*/true);
  }
  throw BudgetExceeded("random_monotone_instance: rejection budget of " +
                       std::to_string(opt.rejection_budget) +
                       " candidates exhausted for table family");
}

}  // namespace

Instance random_monotone_instance(std::uint64_t seed, int n, int k,
                                  const std::vector<Family>& family_mix,
                                  const GenOptions& opt) {
  if (family_mix.empty()) throw ValidationError("family_mix must be nonempty");
  std::mt19937_64 rng(seed);
  const Family family = family_mix[std::size_t(rnd::below(rng, family_mix.size()))];
  switch (family) {
    case Family::AssignmentModular: return random_modular(rng, n, k);
    case Family::SeparableCoverage: return random_coverage(rng, n, k);
    case Family::Table: return random_table(rng, n, k, opt);
  }
  throw ValidationError("unknown family");
}

Instance parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("instance must be a JSON object");
  if (!j.contains("k") || !j.contains("ground") || !j.contains("function")) {
    throw ValidationError("instance requires fields: k, ground, function");
  }
  const int k = j.at("k").get<int>();
  auto ground = make_ground_set(j.at("ground").get<std::vector<std::string>>(), k);
  const auto& fn = j.at("function");
  const Family family = family_from_name(fn.at("type").get<std::string>());

  switch (family) {
    case Family::AssignmentModular: {
      auto weights = fn.at("weights").get<std::map<std::string, std::vector<double>>>();
      return build_assignment_modular(std::move(ground), weights);
    }
    case Family::SeparableCoverage: {
      auto universe = fn.at("universe").get<std::vector<std::string>>();
      auto cover = fn.at("cover_sets").get<std::map<std::string, std::vector<std::string>>>();
      auto tw = fn.at("topic_weights").get<std::vector<std::map<std::string, double>>>();
      return build_separable_coverage(std::move(ground), std::move(universe), cover, tw);
    }
    case Family::Table: {
      const auto& values = fn.at("values");
      std::uint64_t expected = 1;
      for (int e = 0; e < ground.n(); ++e) expected *= std::uint64_t(k + 1);
      if (values.size() != expected) {
        throw ValidationError("table must list all (k+1)^n = " + std::to_string(expected) +
                              " vectors, got " + std::to_string(values.size()));
      }
      std::vector<double> table(expected);
      KVector x(ground.n());
      do {
        const std::string key = vector_key(x);
        if (!values.contains(key)) {
          throw ValidationError("table is missing vector key \"" + key + "\"");
        }
        std::size_t idx = 0;
        for (int e = 0; e < x.size(); ++e) idx = idx * std::size_t(k + 1) + std::size_t(x[e]);
        table[idx] = values.at(key).get<double>();
      } while (advance(x, k));
      return build_table(std::move(ground), std::move(table), /*validate=*/true);
    }
  }
  throw ValidationError("unknown family");
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["k"] = inst.ground.k;
  j["ground"] = inst.ground.elements;
  j["function"] = *inst.params;
  return j;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("instance file " + path + " is not valid JSON: " + e.what());
  }
  return parse_instance(j);
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace ksub
