#include "valnet/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "valnet/error.hpp"

namespace valnet {

std::string_view to_string(PointKind kind) {
  switch (kind) {
    case PointKind::probability: return "probability";
    case PointKind::possibility: return "possibility";
    case PointKind::boolean: return "boolean";
    case PointKind::generic: return "generic";
  }
  return "generic";
}

// ---------------------------------------------------------------------------
// PointValuation

PointValuation::PointValuation(Scope scope, PointKind kind, std::vector<double> table)
    : scope_(std::move(scope)), kind_(kind), table_(std::move(table)) {
  if (table_.size() != scope_.configuration_count()) {
    throw Error(ErrorCode::scope_mismatch,
                "table has " + std::to_string(table_.size()) + " entries but scope " +
                    scope_.to_string() + " has " +
                    std::to_string(scope_.configuration_count()) + " configurations");
  }
  for (double v : table_) {
    switch (kind_) {
      case PointKind::probability:
        if (!(v >= 0.0) || std::isinf(v)) {
          throw Error(ErrorCode::invalid_value,
                      "probability values must be finite and non-negative");
        }
        break;
      case PointKind::possibility:
        if (!(v >= 0.0 && v <= 1.0)) {
          throw Error(ErrorCode::invalid_value, "possibility values must lie in [0,1]");
        }
        break;
      case PointKind::boolean:
        if (v != 0.0 && v != 1.0) {
          throw Error(ErrorCode::invalid_value, "boolean values must be true or false");
        }
        break;
      case PointKind::generic: break;
    }
  }
}

PointValuation PointValuation::constant(Scope scope, PointKind kind, double fill) {
  const std::size_t n = scope.configuration_count();
  return PointValuation(std::move(scope), kind, std::vector<double>(n, fill));
}

double PointValuation::value(const Configuration& x) const {
  if (x.scope() != scope_) {
    throw Error(ErrorCode::scope_mismatch,
                "configuration " + x.to_string() + " is not over " + scope_.to_string());
  }
  return table_[x.linear_index()];
}

// ---------------------------------------------------------------------------
// MassValuation

MassValuation::MassValuation(Scope scope, double conflict)
    : scope_(std::move(scope)), conflict_(conflict) {
  if (!(conflict_ >= 0.0)) throw Error(ErrorCode::invalid_value, "conflict must be >= 0");
}

MassValuation MassValuation::vacuous(const Scope& scope) {
  MassValuation m(scope);
  m.add(ConfigSet::whole(scope), 1.0);
  return m;
}

void MassValuation::add(const ConfigSet& a, double mass) {
  if (a.scope() != scope_) {
    throw Error(ErrorCode::scope_mismatch, "focal set scope " + a.scope().to_string() +
                                               " differs from " + scope_.to_string());
  }
  add_mask(a.mask(), mass);
}

void MassValuation::add_mask(const ConfigMask& a, double mass) {
  if (a.bit_count() != scope_.configuration_count()) {
    throw Error(ErrorCode::scope_mismatch, "focal set width does not match scope");
  }
  if (!(mass >= 0.0) || std::isinf(mass)) {
    throw Error(ErrorCode::invalid_value, "masses must be finite and non-negative");
  }
  if (a.none()) {
    throw Error(ErrorCode::invalid_value, "the empty set cannot carry focal mass");
  }
  if (mass == 0.0) return;
  focal_[a] += mass;
}

void MassValuation::add_conflict(double mass) {
  if (!(mass >= 0.0)) throw Error(ErrorCode::invalid_value, "conflict must be >= 0");
  conflict_ += mass;
}

double MassValuation::mass_of(const ConfigSet& a) const {
  if (a.scope() != scope_) return 0.0;
  auto it = focal_.find(a.mask());
  return it == focal_.end() ? 0.0 : it->second;
}

double MassValuation::focal_total() const {
  double total = 0.0;
  for (const auto& [_, m] : focal_) total += m;
  return total;
}

std::vector<ConfigSet> MassValuation::focal_sets() const {
  std::vector<ConfigSet> out;
  out.reserve(focal_.size());
  for (const auto& [mask, _] : focal_) out.emplace_back(scope_, mask);
  return out;
}

// ---------------------------------------------------------------------------
// Free functions

const Scope& scope_of(const Valuation& v) {
  return std::visit([](const auto& x) -> const Scope& { return x.scope(); }, v);
}

namespace {

double entry_gap(double a, double b) {
  if (a == b) return 0.0;  // also covers equal infinities
  return std::abs(a - b);
}

}  // namespace

double distance(const Valuation& a, const Valuation& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a.index() != b.index() || scope_of(a) != scope_of(b)) return inf;
  if (const auto* pa = std::get_if<PointValuation>(&a)) {
    const auto& pb = std::get<PointValuation>(b);
    double d = 0.0;
    for (std::size_t i = 0; i < pa->table().size(); ++i) {
      d = std::max(d, entry_gap(pa->at(i), pb.at(i)));
    }
    return d;
  }
  const auto& ma = std::get<MassValuation>(a);
  const auto& mb = std::get<MassValuation>(b);
  double d = entry_gap(ma.conflict(), mb.conflict());
  for (const auto& [mask, m] : ma.focal()) {
    auto it = mb.focal().find(mask);
    d = std::max(d, entry_gap(m, it == mb.focal().end() ? 0.0 : it->second));
  }
  for (const auto& [mask, m] : mb.focal()) {
    if (!ma.focal().contains(mask)) d = std::max(d, m);
  }
  return d;
}

MassValuation combine_mass(const MassValuation& g, const MassValuation& h) {
  Scope u = g.scope().union_with(h.scope());
  const auto mg = projection_map(u, g.scope());
  const auto mh = projection_map(u, h.scope());
  const std::size_t width = u.configuration_count();

  auto cylinders = [&](const MassValuation& v, const std::vector<std::size_t>& map) {
    std::vector<std::pair<ConfigMask, double>> out;
    out.reserve(v.focal().size());
    for (const auto& [mask, m] : v.focal()) {
      ConfigMask ext(width);
      for (std::size_t i = 0; i < width; ++i) {
        if (mask.test(map[i])) ext.set(i);
      }
      out.emplace_back(std::move(ext), m);
    }
    return out;
  };
  const auto cg = cylinders(g, mg);
  const auto ch = cylinders(h, mh);

  const double g_total = g.focal_total();
  const double h_total = h.focal_total();
  MassValuation out(u, g.conflict() * (h_total + h.conflict()) + g_total * h.conflict());
  for (const auto& [a, ma] : cg) {
    for (const auto& [b, mb] : ch) {
      ConfigMask c = a & b;
      if (c.none()) {
        out.add_conflict(ma * mb);
      } else {
        out.add_mask(c, ma * mb);
      }
    }
  }
  return out;
}

MassValuation marginalize_mass(const MassValuation& g, const Scope& target) {
  if (target == g.scope()) return g;
  const auto map = projection_map(g.scope(), target);
  MassValuation out(target, g.conflict());
  for (const auto& [mask, m] : g.focal()) {
    ConfigMask projected(target.configuration_count());
    for (auto i : mask.indices()) projected.set(map[i]);
    out.add_mask(projected, m);
  }
  return out;
}

}  // namespace valnet
