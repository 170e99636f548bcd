#pragma once

// Shared helpers for the unit and acceptance tests: random valuation systems
// and a brute-force evaluator that does not go through the library's
// combine/marginalize kernels.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "valnet/calculus.hpp"
#include "valnet/network.hpp"
#include "valnet/propagation.hpp"

namespace testsupport {

struct SystemShape {
  std::size_t max_variables = 5;
  std::size_t max_frame = 3;
  std::size_t max_relations = 4;
  std::size_t max_relation_arity = 3;
  double variable_attach_rate = 0.3;
  double observe_rate = 0.2;
};

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(std::mt19937_64& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

// Structure only: variables X0.. and relations R0.. over random subsets.
inline valnet::ValuationSystem random_structure(std::mt19937_64& rng, const SystemShape& shape) {
  valnet::ValuationSystem system;
  const std::size_t n = pick(rng, 1, shape.max_variables);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> frame;
    const std::size_t f = pick(rng, 1, shape.max_frame);
    for (std::size_t k = 0; k < f; ++k) frame.push_back("s" + std::to_string(k));
    names.push_back("X" + std::to_string(i));
    system.add_variable(names.back(), frame);
  }
  const std::size_t r = pick(rng, 0, shape.max_relations);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<std::string> pool = names;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(pick(rng, 1, std::min(shape.max_relation_arity, pool.size())));
    system.add_relation("R" + std::to_string(j), pool);
  }
  return system;
}

// Attaches sampled valuations for `calculus` and random observations.
inline void randomize_evidence(valnet::ValuationSystem& system, const valnet::Calculus& calculus,
                               std::mt19937_64& rng, const SystemShape& shape) {
  for (const auto& rel : system.relations()) {
    system.attach_valuation(rel.name, calculus, calculus.sample(rel.scope, rng));
  }
  for (const auto& var : system.variables()) {
    if (coin(rng, shape.variable_attach_rate)) {
      system.attach_valuation(var.name(), calculus,
                              calculus.sample(system.target_scope(var.name()), rng));
    }
    if (coin(rng, shape.observe_rate)) {
      system.observe(var.name(), var.frame()[pick(rng, 0, var.frame_size() - 1)]);
    }
  }
}

inline valnet::ValuationSystem random_system(std::mt19937_64& rng,
                                             const valnet::Calculus& calculus,
                                             const SystemShape& shape = {}) {
  auto system = random_structure(rng, shape);
  randomize_evidence(system, calculus, rng, shape);
  return system;
}

// ---------------------------------------------------------------------------
// Brute force

// Frame indices of every variable of the system, in declaration order.
inline std::vector<std::vector<std::size_t>> all_configurations(
    const valnet::ValuationSystem& system) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (const auto& v : system.variables()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : out) {
      for (std::size_t k = 0; k < v.frame_size(); ++k) {
        auto c = prefix;
        c.push_back(k);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Linear index of the restriction of a full configuration to `scope`.
inline std::size_t local_index(const valnet::ValuationSystem& system, const valnet::Scope& scope,
                               const std::vector<std::size_t>& full) {
  std::size_t idx = 0;
  for (const auto& v : scope.variables()) {
    std::size_t pos = 0;
    while (system.variables()[pos].name() != v.name()) ++pos;
    idx = idx * v.frame_size() + full[pos];
  }
  return idx;
}

struct PointOps {
  double unit;  // combination identity
  double zero;  // marginalization identity
  double (*times)(double, double);
  double (*plus)(double, double);
};

inline PointOps ops_for(const std::string& calculus) {
  if (calculus == "probability") {
    return {1.0, 0.0, [](double a, double b) { return a * b; },
            [](double a, double b) { return a + b; }};
  }
  if (calculus == "possibility") {
    return {1.0, 0.0, [](double a, double b) { return std::min(a, b); },
            [](double a, double b) { return std::max(a, b); }};
  }
  return {1.0, 0.0, [](double a, double b) { return (a != 0.0 && b != 0.0) ? 1.0 : 0.0; },
          [](double a, double b) { return (a != 0.0 || b != 0.0) ? 1.0 : 0.0; }};
}

// Every hyperedge valuation the engine would use, plus the variable default
// for variables no hyperedge covers.
inline std::vector<valnet::Valuation> inputs(const valnet::ValuationSystem& system,
                                             const valnet::Calculus& calculus) {
  const auto hg = valnet::build_hypergraph(system, calculus.name);
  std::vector<valnet::Valuation> out;
  std::set<std::string> covered;
  for (const auto& e : hg.edges) {
    out.push_back(valnet::hyperedge_valuation(e, system, calculus));
    for (const auto& n : e.scope.names()) covered.insert(n);
  }
  for (const auto& v : system.variables()) {
    if (!covered.contains(v.name())) {
      out.push_back(valnet::default_valuation(calculus, system.target_scope(v.name()),
                                              valnet::Role::variable));
    }
  }
  return out;
}

// Unnormalized single-variable tables for a point calculus.
inline std::map<std::string, std::vector<double>> brute_force_point(
    const valnet::ValuationSystem& system, const valnet::Calculus& calculus) {
  const PointOps ops = ops_for(calculus.name);
  const auto vals = inputs(system, calculus);
  std::map<std::string, std::vector<double>> out;
  for (const auto& v : system.variables()) out[v.name()].assign(v.frame_size(), ops.zero);
  for (const auto& full : all_configurations(system)) {
    double joint = ops.unit;
    for (const auto& val : vals) {
      const auto& p = std::get<valnet::PointValuation>(val);
      joint = ops.times(joint, p.at(local_index(system, p.scope(), full)));
    }
    for (std::size_t i = 0; i < system.variables().size(); ++i) {
      auto& cell = out[system.variables()[i].name()][full[i]];
      cell = ops.plus(cell, joint);
    }
  }
  return out;
}

// Joint mass over sets of full configurations (as indices into
// all_configurations), with the empty set standing for conflict.
using FullSet = std::set<std::size_t>;

inline std::map<FullSet, double> brute_force_joint_mass(const valnet::ValuationSystem& system,
                                                        const valnet::Calculus& calculus) {
  const auto configs = all_configurations(system);
  FullSet everything;
  for (std::size_t i = 0; i < configs.size(); ++i) everything.insert(i);
  std::map<FullSet, double> joint{{everything, 1.0}};
  for (const auto& val : inputs(system, calculus)) {
    const auto& m = std::get<valnet::MassValuation>(val);
    std::vector<std::pair<FullSet, double>> pieces;
    for (const auto& [mask, mass] : m.focal()) {
      FullSet cyl;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        if (mask.test(local_index(system, m.scope(), configs[i]))) cyl.insert(i);
      }
      pieces.emplace_back(std::move(cyl), mass);
    }
    if (m.conflict() != 0.0) pieces.emplace_back(FullSet{}, m.conflict());
    std::map<FullSet, double> next;
    for (const auto& [a, ma] : joint) {
      for (const auto& [b, mb] : pieces) {
        FullSet c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::inserter(c, c.end()));
        next[c] += ma * mb;
      }
    }
    joint = std::move(next);
  }
  return joint;
}

// Per variable: mass on each non-empty subset of its frame (bitmask over frame
// indices) and the conflict.
struct MarginalMass {
  std::map<unsigned, double> focal;
  double conflict = 0.0;
};

inline std::map<std::string, MarginalMass> brute_force_mass(const valnet::ValuationSystem& system,
                                                            const valnet::Calculus& calculus) {
  const auto configs = all_configurations(system);
  const auto joint = brute_force_joint_mass(system, calculus);
  std::map<std::string, MarginalMass> out;
  for (std::size_t i = 0; i < system.variables().size(); ++i) {
    auto& mm = out[system.variables()[i].name()];
    for (const auto& [set, mass] : joint) {
      if (set.empty()) {
        mm.conflict += mass;
        continue;
      }
      unsigned bits = 0;
      for (std::size_t c : set) bits |= 1u << configs[c][i];
      mm.focal[bits] += mass;
    }
  }
  return out;
}

// Largest deviation between the engine's unnormalized marginals and brute
// force. Works for the four built-in calculi.
inline double oracle_deviation(const valnet::ValuationSystem& system,
                               const valnet::Calculus& calculus,
                               const valnet::PropagationResult& result) {
  double worst = 0.0;
  if (calculus.representation == valnet::Representation::point) {
    for (const auto& [name, table] : brute_force_point(system, calculus)) {
      const auto& got = std::get<valnet::PointValuation>(result.marginals.at(name).valuation);
      for (std::size_t k = 0; k < table.size(); ++k) {
        worst = std::max(worst, std::abs(got.at(k) - table[k]));
      }
    }
    return worst;
  }
  for (const auto& [name, expected] : brute_force_mass(system, calculus)) {
    const auto& got = std::get<valnet::MassValuation>(result.marginals.at(name).valuation);
    worst = std::max(worst, std::abs(got.conflict() - expected.conflict));
    std::map<unsigned, double> seen;
    for (const auto& [mask, mass] : got.focal()) {
      unsigned bits = 0;
      for (std::size_t k : mask.indices()) bits |= 1u << k;
      seen[bits] += mass;
    }
    for (const auto& [bits, mass] : expected.focal) {
      worst = std::max(worst, std::abs(seen[bits] - mass));
    }
    for (const auto& [bits, mass] : seen) {
      if (!expected.focal.contains(bits)) worst = std::max(worst, std::abs(mass));
    }
  }
  return worst;
}

}  // namespace testsupport
