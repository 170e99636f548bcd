#include "valnet/calculus.hpp"

#include <algorithm>
#include <numeric>

#include "valnet/error.hpp"

namespace valnet {

namespace {

const PointValuation& as_point(const Valuation& v, PointKind kind) {
  const auto* p = std::get_if<PointValuation>(&v);
  if (p == nullptr) throw Error(ErrorCode::kind_mismatch, "expected a dense valuation");
  if (kind != PointKind::generic && p->kind() != kind) {
    throw Error(ErrorCode::kind_mismatch, "expected a " + std::string(to_string(kind)) +
                                              " valuation, got " +
                                              std::string(to_string(p->kind())));
  }
  return *p;
}

const MassValuation& as_mass(const Valuation& v) {
  const auto* m = std::get_if<MassValuation>(&v);
  if (m == nullptr) throw Error(ErrorCode::kind_mismatch, "expected a mass valuation");
  return *m;
}

double table_sum(const PointValuation& p) {
  return std::accumulate(p.table().begin(), p.table().end(), 0.0);
}

double table_max(const PointValuation& p) {
  return *std::max_element(p.table().begin(), p.table().end());
}

PointValuation scaled(const PointValuation& p, double factor) {
  std::vector<double> t = p.table();
  for (auto& x : t) x /= factor;
  return PointValuation(p.scope(), p.kind(), std::move(t));
}

ConfigMask random_mask(std::size_t width, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, width - 1);
  ConfigMask mask(width);
  for (std::size_t i = 0; i < width; ++i) {
    if (coin(rng)) mask.set(i);
  }
  if (mask.none()) mask.set(pick(rng));
  return mask;
}

MassValuation random_mass(const Scope& scope, std::mt19937_64& rng) {
  const std::size_t width = scope.configuration_count();
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MassValuation m(scope);
  double remaining = 1.0;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double mass = remaining * unit(rng);
    m.add_mask(random_mask(width, rng), mass);
    remaining -= mass;
  }
  if (unit(rng) < 0.5) m.add(ConfigSet::whole(scope), remaining);
  return m;
}

std::vector<double> random_table(std::size_t n, std::mt19937_64& rng, PointKind kind) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 10);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> t(n);
  for (auto& x : t) {
    switch (kind) {
      case PointKind::boolean: x = coin(rng) ? 1.0 : 0.0; break;
      // A coarse grid produces ties, which is where min/max bugs hide.
      case PointKind::possibility: x = grid(rng) / 10.0; break;
      default: x = coin(rng) ? unit(rng) : grid(rng) / 10.0; break;
    }
  }
  return t;
}

std::vector<std::string> frame_of_singleton(const Scope& scope) {
  if (scope.size() != 1) {
    throw Error(ErrorCode::not_singleton,
                "readout needs a single-variable marginal, got " + scope.to_string());
  }
  return scope[0].frame();
}

// Fills optional members with their generic fallbacks.
void complete(Calculus& c) {
  if (!c.readout) {
    c.readout = [](const Valuation& v) { return verbatim_readout(v); };
  }
  if (!c.certainty) {
    c.certainty = [rep = c.representation, kind = c.point_kind](const Variable& var,
                                                                std::size_t value) -> Valuation {
      Scope s({var});
      if (rep == Representation::mass) {
        MassValuation m(s);
        ConfigMask mask(var.frame_size());
        mask.set(value);
        m.add_mask(mask, 1.0);
        return m;
      }
      std::vector<double> t(var.frame_size(), 0.0);
      t[value] = 1.0;
      return PointValuation(s, kind, std::move(t));
    };
  }
  if (!c.degenerate) {
    c.degenerate = [normalize = c.normalize](const Valuation& v) {
      try {
        normalize(v);
        return false;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::degenerate_valuation) return true;
        throw;
      }
    };
  }
  if (!c.sample) {
    c.sample = [rep = c.representation, kind = c.point_kind](const Scope& s,
                                                             std::mt19937_64& rng) -> Valuation {
      if (rep == Representation::mass) return random_mass(s, rng);
      return PointValuation(s, kind, random_table(s.configuration_count(), rng, kind));
    };
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Readouts

MarginalReadout verbatim_readout(const Valuation& v, std::string column) {
  if (const auto* m = std::get_if<MassValuation>(&v)) return belief_readout(*m);
  const auto& p = std::get<PointValuation>(v);
  MarginalReadout r;
  r.values = frame_of_singleton(p.scope());
  r.variable = p.scope()[0].name();
  r.columns = {std::move(column)};
  for (double x : p.table()) r.rows.push_back({x});
  return r;
}

MarginalReadout belief_readout(const MassValuation& m) {
  MarginalReadout r;
  r.values = frame_of_singleton(m.scope());
  r.variable = m.scope()[0].name();
  r.columns = {"bel", "pl"};
  const std::size_t n = r.values.size();
  for (std::size_t x = 0; x < n; ++x) {
    double bel = 0.0;
    double pl = 0.0;
    for (const auto& [mask, mass] : m.focal()) {
      if (!mask.test(x)) continue;
      pl += mass;
      if (mask.count() == 1) bel += mass;
    }
    r.rows.push_back({bel, pl});
  }
  r.total = m.focal_total();
  r.conflict = m.conflict();
  return r;
}

// ---------------------------------------------------------------------------
// Built-in calculi

Calculus probability_calculus() {
  constexpr auto kind = PointKind::probability;
  Calculus c;
  c.name = "probability";
  c.representation = Representation::point;
  c.point_kind = kind;
  c.default_variable = [](const Scope& s) -> Valuation {
    return PointValuation::constant(s, kind, 1.0 / static_cast<double>(s.configuration_count()));
  };
  c.default_relation = c.default_variable;
  c.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_tables(as_point(g, kind), as_point(h, kind), kind,
                          [](double a, double b) { return a * b; });
  };
  c.marginalize = [](const Valuation& g, const Scope& target) -> Valuation {
    return marginalize_table(as_point(g, kind), target, 0.0,
                             [](double acc, double x) { return acc + x; });
  };
  c.normalize = [](const Valuation& v) -> Valuation {
    const auto& p = as_point(v, kind);
    const double total = table_sum(p);
    if (!(total > 0.0)) {
      throw Error(ErrorCode::degenerate_valuation,
                  "probability valuation on " + p.scope().to_string() + " sums to zero");
    }
    return scaled(p, total);
  };
  c.post_propagate = [](const Valuation& v) { return v; };
  c.readout = [](const Valuation& v) {
    auto r = verbatim_readout(v, "p");
    r.total = table_sum(as_point(v, kind));
    return r;
  };
  c.sample = [](const Scope& s, std::mt19937_64& rng) -> Valuation {
    return PointValuation(s, kind, random_table(s.configuration_count(), rng, kind));
  };
  complete(c);
  return c;
}

Calculus belief_calculus() {
  Calculus c;
  c.name = "belief";
  c.representation = Representation::mass;
  c.default_variable = [](const Scope& s) -> Valuation { return MassValuation::vacuous(s); };
  c.default_relation = c.default_variable;
  c.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_mass(as_mass(g), as_mass(h));
  };
  c.marginalize = [](const Valuation& g, const Scope& target) -> Valuation {
    return marginalize_mass(as_mass(g), target);
  };
  c.normalize = [](const Valuation& v) -> Valuation {
    const auto& m = as_mass(v);
    const double total = m.focal_total();
    if (!(total > 0.0)) {
      throw Error(ErrorCode::degenerate_valuation,
                  "all mass on " + m.scope().to_string() + " is conflict");
    }
    MassValuation out(m.scope());
    for (const auto& [mask, mass] : m.focal()) out.add_mask(mask, mass / total);
    return out;
  };
  c.post_propagate = [](const Valuation& v) { return v; };
  c.readout = [](const Valuation& v) { return belief_readout(as_mass(v)); };
  c.sample = [](const Scope& s, std::mt19937_64& rng) -> Valuation {
    return random_mass(s, rng);
  };
  complete(c);
  return c;
}

Calculus boolean_calculus() {
  constexpr auto kind = PointKind::boolean;
  Calculus c;
  c.name = "boolean";
  c.representation = Representation::point;
  c.point_kind = kind;
  c.default_variable = [](const Scope& s) -> Valuation {
    return PointValuation::constant(s, kind, 1.0);
  };
  c.default_relation = c.default_variable;
  c.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_tables(as_point(g, kind), as_point(h, kind), kind,
                          [](double a, double b) { return (a != 0.0 && b != 0.0) ? 1.0 : 0.0; });
  };
  c.marginalize = [](const Valuation& g, const Scope& target) -> Valuation {
    return marginalize_table(as_point(g, kind), target, 0.0, [](double acc, double x) {
      return (acc != 0.0 || x != 0.0) ? 1.0 : 0.0;
    });
  };
  // No normalization exists for truth values.
  c.normalize = [](const Valuation& v) -> Valuation {
    as_point(v, kind);
    return v;
  };
  c.post_propagate = [](const Valuation& v) { return v; };
  c.readout = [](const Valuation& v) {
    auto r = verbatim_readout(v, "truth");
    r.truth_values = true;
    return r;
  };
  c.degenerate = [](const Valuation& v) {
    const auto& p = as_point(v, kind);
    return std::all_of(p.table().begin(), p.table().end(), [](double x) { return x == 0.0; });
  };
  c.sample = [](const Scope& s, std::mt19937_64& rng) -> Valuation {
    return PointValuation(s, kind, random_table(s.configuration_count(), rng, kind));
  };
  complete(c);
  return c;
}

Calculus possibility_calculus() {
  constexpr auto kind = PointKind::possibility;
  Calculus c;
  c.name = "possibility";
  c.representation = Representation::point;
  c.point_kind = kind;
  c.default_variable = [](const Scope& s) -> Valuation {
    return PointValuation::constant(s, kind, 1.0);
  };
  c.default_relation = c.default_variable;
  c.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_tables(as_point(g, kind), as_point(h, kind), kind,
                          [](double a, double b) { return std::min(a, b); });
  };
  c.marginalize = [](const Valuation& g, const Scope& target) -> Valuation {
    return marginalize_table(as_point(g, kind), target, 0.0,
                             [](double acc, double x) { return std::max(acc, x); });
  };
  c.normalize = [](const Valuation& v) -> Valuation {
    const auto& p = as_point(v, kind);
    const double height = table_max(p);
    if (!(height > 0.0)) {
      throw Error(ErrorCode::degenerate_valuation,
                  "possibility valuation on " + p.scope().to_string() + " is identically zero");
    }
    return scaled(p, height);
  };
  c.post_propagate = [](const Valuation& v) { return v; };
  c.readout = [](const Valuation& v) {
    const auto& p = as_point(v, kind);
    MarginalReadout r;
    r.values = frame_of_singleton(p.scope());
    r.variable = p.scope()[0].name();
    r.columns = {"N", "Π"};
    const auto& t = p.table();
    for (std::size_t x = 0; x < t.size(); ++x) {
      double others = 0.0;
      for (std::size_t y = 0; y < t.size(); ++y) {
        if (y != x) others = std::max(others, t[y]);
      }
      r.rows.push_back({1.0 - others, t[x]});
    }
    r.total = table_max(p);
    return r;
  };
  c.sample = [](const Scope& s, std::mt19937_64& rng) -> Valuation {
    return PointValuation(s, kind, random_table(s.configuration_count(), rng, kind));
  };
  complete(c);
  return c;
}

// ---------------------------------------------------------------------------
// Registry

Registry Registry::with_builtins() {
  Registry r;
  r.add(probability_calculus());
  r.add(belief_calculus());
  r.add(boolean_calculus());
  r.add(possibility_calculus());
  return r;
}

const Calculus& Registry::add(Calculus c) {
  if (c.name.empty()) throw Error(ErrorCode::invalid_value, "calculus name must be non-empty");
  if (calculi_.contains(c.name)) {
    throw Error(ErrorCode::duplicate_name, "calculus '" + c.name + "' is already registered");
  }
  auto require = [&](bool present, const char* fn) {
    if (!present) {
      throw Error(ErrorCode::missing_function,
                  "calculus '" + c.name + "' does not define " + fn);
    }
  };
  require(static_cast<bool>(c.default_variable), "default_variable");
  require(static_cast<bool>(c.default_relation), "default_relation");
  require(static_cast<bool>(c.combine), "combine");
  require(static_cast<bool>(c.marginalize), "marginalize");
  require(static_cast<bool>(c.normalize), "normalize");
  require(static_cast<bool>(c.post_propagate), "post_propagate");

  complete(c);
  auto [it, _] = calculi_.emplace(c.name, std::move(c));
  return it->second;
}

bool Registry::contains(std::string_view name) const { return calculi_.find(name) != calculi_.end(); }

const Calculus& Registry::get(std::string_view name) const {
  auto it = calculi_.find(name);
  if (it == calculi_.end()) {
    throw Error(ErrorCode::unknown_name, "unknown calculus '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : calculi_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

void require_compatible(const Calculus& c, const Valuation& v) {
  if (c.representation == Representation::mass) {
    as_mass(v);
  } else {
    as_point(v, c.point_kind);
  }
}

Valuation combine(const Calculus& c, const Valuation& g, const Valuation& h) {
  require_compatible(c, g);
  require_compatible(c, h);
  return c.combine(g, h);
}

Valuation marginalize(const Calculus& c, const Valuation& g, const Scope& target) {
  require_compatible(c, g);
  if (!target.is_subset_of(scope_of(g))) {
    throw Error(ErrorCode::scope_mismatch, "cannot marginalize " + scope_of(g).to_string() +
                                               " to " + target.to_string());
  }
  if (target == scope_of(g)) return g;
  return c.marginalize(g, target);
}

Valuation normalize(const Calculus& c, const Valuation& v) {
  require_compatible(c, v);
  return c.normalize(v);
}

Valuation default_valuation(const Calculus& c, const Scope& scope, Role role) {
  return role == Role::variable ? c.default_variable(scope) : c.default_relation(scope);
}

Valuation certainty(const Calculus& c, const Variable& variable, std::size_t value) {
  if (value >= variable.frame_size()) {
    throw Error(ErrorCode::invalid_value, "frame index out of range for '" + variable.name() + "'");
  }
  return c.certainty(variable, value);
}

bool is_degenerate(const Calculus& c, const Valuation& v) { return c.degenerate(v); }

MarginalReadout readout(const Calculus& c, const Valuation& v) {
  if (scope_of(v).size() != 1) {
    throw Error(ErrorCode::not_singleton,
                "readout needs a single-variable marginal, got " + scope_of(v).to_string());
  }
  return c.readout(v);
}

}  // namespace valnet
