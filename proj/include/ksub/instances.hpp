#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksub/core.hpp"

namespace ksub {

enum class Family { AssignmentModular, SeparableCoverage, Table };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// A problem instance: ground set, oracle, and the serializable data that
// defines the oracle.
struct Instance {
  GroundSet ground;
  std::shared_ptr<const ValueOracle> oracle;
  Family family = Family::AssignmentModular;
  // The "function" object of the JSON schema, kept verbatim for round-trips.
  std::shared_ptr<const nlohmann::json> params;
  // All defining weights/values are integers; enables exact comparisons.
  bool integer_valued = false;
  // Tables only: set once check_monotone and check_k_submodular have passed.
  bool validated = false;
};

// f(x) = sum over assigned e of w(e, x(e)). weights[id] has exactly k
// entries, w(e,i) at index i-1. All weights must be >= 0.
Instance build_assignment_modular(GroundSet ground,
                                  const std::map<std::string, std::vector<double>>& weights);

// f(X_1,...,X_k) = sum_i w_i(union of cover sets of X_i): a separable sum of
// weighted coverage functions, one per part. topic_weights has k maps from
// universe element to weight; missing entries mean 0.
Instance build_separable_coverage(
    GroundSet ground, std::vector<std::string> universe,
    const std::map<std::string, std::vector<std::string>>& cover_sets,
    const std::vector<std::map<std::string, double>>& topic_weights);

// Explicit table over the full lattice in lexicographic vector order.
// When validate is set, runs check_monotone and check_k_submodular and
// stores the outcome in Instance::validated (throws ValidationError if the
// table fails).
Instance build_table(GroundSet ground, std::vector<double> values, bool validate = true);

struct GenOptions {
  // Table candidates drawn before giving up.
  int rejection_budget = 10'000;
  std::uint64_t check_budget = 100'000'000;
};

// Deterministic in (seed, n, k, mix). Table outputs draw integer values in
// [0,100] with f(0)=0 and are rejection-sampled until check_monotone and
// check_k_submodular both pass. Constructed families never reject.
Instance random_monotone_instance(std::uint64_t seed, int n, int k,
                                  const std::vector<Family>& family_mix,
                                  const GenOptions& opt = {});

// Value-transparent wrapper counting oracle evaluations. Single-writer: the
// algorithms evaluate sequentially, so a plain counter suffices.
class CountingOracle final : public ValueOracle {
 public:
  explicit CountingOracle(const ValueOracle& inner) : inner_(&inner) {}

  double value(const KVector& x) const override {
    ++count_;
    return inner_->value(x);
  }

  long long count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  const ValueOracle* inner_;
  mutable long long count_ = 0;
};

// Instance JSON schema:
//   {"k": int, "ground": [string],
//    "function": {"type": "assignment_modular"|"separable_coverage"|"table", ...}}
// Table values are keyed by comma-joined digit strings, e.g. "1,0,2".
Instance parse_instance(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

Instance load_instance_file(const std::string& path);
void write_instance_file(const Instance& inst, const std::string& path);

}  // namespace ksub
