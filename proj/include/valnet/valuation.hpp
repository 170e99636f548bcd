#pragma once

#include <map>
#include <string_view>
#include <variant>
#include <vector>

#include "valnet/frames.hpp"

namespace valnet {

// Value domain of a dense table. `generic` is for user-defined calculi and is
// not range-checked.
enum class PointKind { probability, possibility, boolean, generic };

std::string_view to_string(PointKind kind);

// Dense table over every configuration of a scope (row-major, canonical order).
// Boolean tables store 1.0 for true and 0.0 for false.
class PointValuation {
 public:
  PointValuation(Scope scope, PointKind kind, std::vector<double> table);
  // Every entry set to `fill`.
  static PointValuation constant(Scope scope, PointKind kind, double fill);

  const Scope& scope() const noexcept { return scope_; }
  PointKind kind() const noexcept { return kind_; }
  const std::vector<double>& table() const noexcept { return table_; }
  double at(std::size_t index) const { return table_[index]; }
  double value(const Configuration& x) const;

  bool operator==(const PointValuation&) const = default;

 private:
  Scope scope_;
  PointKind kind_;
  std::vector<double> table_;
};

// Basic probability assignment: masses on non-empty configuration sets, plus
// the mass that unnormalized combination sent to the empty set.
class MassValuation {
 public:
  explicit MassValuation(Scope scope, double conflict = 0.0);

  static MassValuation vacuous(const Scope& scope);

  // Adds `mass` to focal set `a` (accumulating). Zero masses are ignored.
  void add(const ConfigSet& a, double mass);
  void add_mask(const ConfigMask& a, double mass);
  void add_conflict(double mass);

  const Scope& scope() const noexcept { return scope_; }
  const std::map<ConfigMask, double>& focal() const noexcept { return focal_; }
  double conflict() const noexcept { return conflict_; }
  double mass_of(const ConfigSet& a) const;
  double focal_total() const;
  std::vector<ConfigSet> focal_sets() const;

  bool operator==(const MassValuation&) const = default;

 private:
  Scope scope_;
  std::map<ConfigMask, double> focal_;
  double conflict_ = 0.0;
};

using Valuation = std::variant<PointValuation, MassValuation>;

const Scope& scope_of(const Valuation& v);

// Largest per-entry absolute difference (focal masses and conflict for
// masses). Mismatched scopes or representations give +infinity; equal
// infinities compare as 0.
double distance(const Valuation& a, const Valuation& b);

// Generic dense kernels. `op` is applied to the projected inputs (combine) or
// folded over each fibre of the projection starting from `init` (marginalize).
template <typename Op>
PointValuation combine_tables(const PointValuation& g, const PointValuation& h,
                              PointKind out_kind, Op op) {
  Scope u = g.scope().union_with(h.scope());
  const auto mg = projection_map(u, g.scope());
  const auto mh = projection_map(u, h.scope());
  std::vector<double> table(mg.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = op(g.at(mg[i]), h.at(mh[i]));
  return PointValuation(std::move(u), out_kind, std::move(table));
}

template <typename Op>
PointValuation marginalize_table(const PointValuation& g, const Scope& target, double init,
                                 Op op) {
  const auto map = projection_map(g.scope(), target);
  std::vector<double> table(target.configuration_count(), init);
  for (std::size_t i = 0; i < map.size(); ++i) table[map[i]] = op(table[map[i]], g.at(i));
  return PointValuation(target, g.kind(), std::move(table));
}

// Unnormalized Dempster combination. The empty set behaves as an absorbing
// focal element, so conflict combines as mass on ∅.
MassValuation combine_mass(const MassValuation& g, const MassValuation& h);

// Sums the masses of focal sets sharing a projection; conflict is unchanged.
MassValuation marginalize_mass(const MassValuation& g, const Scope& target);

}  // namespace valnet
