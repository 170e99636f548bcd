#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "valnet/valuation.hpp"

namespace valnet {

enum class Representation { point, mass };

// Presentation of a single-variable marginal: one row per frame value, with
// calculus-specific labeled columns.
struct MarginalReadout {
  std::string variable;
  std::vector<std::string> values;   // frame values, one per row
  std::vector<std::string> columns;  // e.g. {"p"}, {"bel","pl"}, {"N","Pi"}, {"truth"}
  std::vector<std::vector<double>> rows;
  bool truth_values = false;  // render cells as true/false
  std::optional<double> total;
  std::optional<double> conflict;
};

// Operator bundle instantiating the generic local-computation engine.
//
// The six required functions are the two defaults, combine, marginalize,
// normalize and post_propagate. The remaining members are optional and have
// generic fallbacks:
//   readout   - verbatim table (point) or bel/pl (mass)
//   certainty - 1 on the observed value, 0 elsewhere (point) or a singleton
//               focal set (mass)
//   degenerate - true when normalize() throws
//   sample    - uniform random table or a few random focal sets; used by the
//               axiom checker
struct Calculus {
  std::string name;
  Representation representation = Representation::point;
  PointKind point_kind = PointKind::generic;

  std::function<Valuation(const Scope&)> default_variable;
  std::function<Valuation(const Scope&)> default_relation;
  std::function<Valuation(const Valuation&, const Valuation&)> combine;
  std::function<Valuation(const Valuation&, const Scope&)> marginalize;
  std::function<Valuation(const Valuation&)> normalize;
  std::function<Valuation(const Valuation&)> post_propagate;

  std::function<MarginalReadout(const Valuation&)> readout;
  std::function<Valuation(const Variable&, std::size_t)> certainty;
  std::function<bool(const Valuation&)> degenerate;
  std::function<Valuation(const Scope&, std::mt19937_64&)> sample;
};

Calculus probability_calculus();
Calculus belief_calculus();
Calculus boolean_calculus();
Calculus possibility_calculus();

// Name-indexed set of calculi. Registration is a setup step; lookups are
// const and safe to share between threads afterwards.
class Registry {
 public:
  Registry() = default;
  static Registry with_builtins();

  // Throws duplicate_name or missing_function. Missing optional members are
  // filled with their generic fallbacks.
  const Calculus& add(Calculus calculus);

  bool contains(std::string_view name) const;
  const Calculus& get(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Calculus, std::less<>> calculi_;
};

enum class Role { variable, relation };

// Dispatch helpers that also enforce representation/kind compatibility.
Valuation combine(const Calculus& c, const Valuation& g, const Valuation& h);
Valuation marginalize(const Calculus& c, const Valuation& g, const Scope& target);
Valuation normalize(const Calculus& c, const Valuation& v);
Valuation default_valuation(const Calculus& c, const Scope& scope, Role role);
Valuation certainty(const Calculus& c, const Variable& variable, std::size_t value);
bool is_degenerate(const Calculus& c, const Valuation& v);
// Throws not_singleton unless v is over exactly one variable.
MarginalReadout readout(const Calculus& c, const Valuation& v);

// Throws kind_mismatch if v cannot be handled by c.
void require_compatible(const Calculus& c, const Valuation& v);

// Generic readouts, also used as fallbacks.
MarginalReadout verbatim_readout(const Valuation& v, std::string column = "value");
MarginalReadout belief_readout(const MassValuation& m);

}  // namespace valnet
