#include "valnet/propagation.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "valnet/error.hpp"

namespace valnet {

Valuation hyperedge_valuation(const Hyperedge& edge, const ValuationSystem& system,
                              const Calculus& calculus) {
  const Role role =
      edge.source == Hyperedge::Source::relation ? Role::relation : Role::variable;
  const Valuation* attached = system.attachment(edge.label, calculus.name);
  if (role == Role::variable) {
    if (auto observed = system.observation(edge.label)) {
      // An observation replaces the default rather than refining it.
      Valuation sure = certainty(calculus, system.variable(edge.label), *observed);
      return attached != nullptr ? combine(calculus, *attached, sure) : sure;
    }
  }
  return attached != nullptr ? *attached : default_valuation(calculus, edge.scope, role);
}

NodePotentials assign_potentials(const MarkovTree& tree, const Hypergraph& hypergraph,
                                 const ValuationSystem& system, const Calculus& calculus) {
  NodePotentials out;
  out.potentials.resize(tree.clusters.size());
  if (tree.assignment.size() != hypergraph.edges.size()) {
    throw Error(ErrorCode::no_containing_cluster,
                "tree assignment does not match the hypergraph");
  }
  for (std::size_t k = 0; k < hypergraph.edges.size(); ++k) {
    const auto& edge = hypergraph.edges[k];
    const std::size_t c = tree.assignment[k];
    if (c >= tree.clusters.size() || !edge.scope.is_subset_of(tree.clusters[c])) {
      throw Error(ErrorCode::no_containing_cluster,
                  "hyperedge " + edge.label + " has no containing cluster");
    }
    Valuation v = hyperedge_valuation(edge, system, calculus);
    auto& slot = out.potentials[c];
    slot = slot ? combine(calculus, *slot, v) : std::move(v);
  }
  for (std::size_t c = 0; c < tree.clusters.size(); ++c) {
    if (!out.potentials[c] && tree.neighbours(c).empty()) {
      out.potentials[c] = default_valuation(calculus, tree.clusters[c], Role::variable);
    }
  }
  return out;
}

namespace {

class Engine {
 public:
  Engine(const MarkovTree& tree, const NodePotentials& potentials, const Calculus& calculus,
         PropagationResult& result)
      : tree_(tree), potentials_(potentials), calculus_(calculus), result_(result) {
    const std::size_t n = tree.clusters.size();
    if (potentials.potentials.size() != n) {
      throw Error(ErrorCode::no_containing_cluster, "potentials do not match the tree");
    }
    neighbours_.resize(n);
    for (std::size_t c = 0; c < n; ++c) neighbours_[c] = tree.neighbours(c);
  }

  std::size_t cluster_count() const { return tree_.clusters.size(); }
  const std::vector<std::size_t>& neighbours(std::size_t c) const { return neighbours_[c]; }

  bool sent(std::size_t from, std::size_t to) const {
    return result_.messages.contains({from, to});
  }

  // potential(from) ⊗ messages into `from` except from `to`, marginalized to
  // the separator.
  void send(std::size_t from, std::size_t to) {
    std::optional<Valuation> acc = potentials_.potentials[from];
    for (std::size_t k : neighbours_[from]) {
      if (k == to) continue;
      const Valuation& m = result_.messages.at({k, from});
      acc = acc ? combine(calculus_, *acc, m) : m;
    }
    const TreeEdge* edge = tree_.edge_between(from, to);
    if (!acc) acc = default_valuation(calculus_, edge->separator, Role::relation);
    result_.messages.insert_or_assign({from, to}, marginalize(calculus_, *acc, edge->separator));
    result_.schedule.emplace_back(from, to);
  }

  Valuation belief(std::size_t c) const {
    std::optional<Valuation> acc = potentials_.potentials[c];
    for (std::size_t k : neighbours_[c]) {
      const Valuation& m = result_.messages.at({k, c});
      acc = acc ? combine(calculus_, *acc, m) : m;
    }
    if (!acc) acc = default_valuation(calculus_, tree_.clusters[c], Role::variable);
    return *acc;
  }

 private:
  const MarkovTree& tree_;
  const NodePotentials& potentials_;
  const Calculus& calculus_;
  PropagationResult& result_;
  std::vector<std::vector<std::size_t>> neighbours_;
};

void collect_distribute(Engine& engine, std::size_t root) {
  std::function<void(std::size_t, std::size_t)> collect = [&](std::size_t node,
                                                              std::size_t parent) {
    for (std::size_t child : engine.neighbours(node)) {
      if (child != parent) collect(child, node);
    }
    if (parent != node) engine.send(node, parent);
  };
  std::function<void(std::size_t, std::size_t)> distribute = [&](std::size_t node,
                                                                 std::size_t parent) {
    for (std::size_t child : engine.neighbours(node)) {
      if (child == parent) continue;
      engine.send(node, child);
      distribute(child, node);
    }
  };
  collect(root, root);
  distribute(root, root);
}

void random_schedule(Engine& engine, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t c = 0; c < engine.cluster_count(); ++c) {
    for (std::size_t k : engine.neighbours(c)) pending.emplace_back(c, k);
  }
  while (!pending.empty()) {
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto [from, to] = pending[i];
      const auto& nb = engine.neighbours(from);
      if (std::all_of(nb.begin(), nb.end(),
                      [&](std::size_t k) { return k == to || engine.sent(k, from); })) {
        ready.push_back(i);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    const std::size_t chosen = ready[pick(rng)];
    engine.send(pending[chosen].first, pending[chosen].second);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
}

}  // namespace

PropagationResult propagate(const MarkovTree& tree, const NodePotentials& potentials,
                            const Calculus& calculus, const PropagationOptions& options) {
  PropagationResult result;
  result.calculus = calculus.name;
  result.normalized = options.normalized;
  Engine engine(tree, potentials, calculus, result);
  const std::size_t n = tree.clusters.size();
  if (options.root && *options.root >= n) {
    throw Error(ErrorCode::invalid_value, "root cluster index out of range");
  }

  // Components, numbered by their least cluster.
  constexpr auto unset = static_cast<std::size_t>(-1);
  result.component_of_cluster.assign(n, unset);
  std::vector<std::size_t> component_least;
  for (std::size_t c = 0; c < n; ++c) {
    if (result.component_of_cluster[c] != unset) continue;
    const std::size_t id = component_least.size();
    component_least.push_back(c);
    std::vector<std::size_t> stack{c};
    result.component_of_cluster[c] = id;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : engine.neighbours(x)) {
        if (result.component_of_cluster[y] == unset) {
          result.component_of_cluster[y] = id;
          stack.push_back(y);
        }
      }
    }
  }

  if (options.schedule_seed) {
    random_schedule(engine, *options.schedule_seed);
  } else {
    for (std::size_t id = 0; id < component_least.size(); ++id) {
      std::size_t root = component_least[id];
      if (options.root && result.component_of_cluster[*options.root] == id) root = *options.root;
      collect_distribute(engine, root);
    }
  }

  std::vector<std::optional<Valuation>> beliefs(n);
  auto belief = [&](std::size_t c) -> const Valuation& {
    if (!beliefs[c]) beliefs[c] = engine.belief(c);
    return *beliefs[c];
  };

  const Scope nothing;
  for (std::size_t least : component_least) {
    result.component_totals.push_back(marginalize(calculus, belief(least), nothing));
  }

  std::set<std::string> seen;
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& var : tree.clusters[c].variables()) {
      if (!seen.insert(var.name()).second) continue;
      Valuation m = marginalize(calculus, belief(c), Scope({var}));
      // Fold in the totals of the other components so unnormalized values
      // match the global valuation.
      for (std::size_t id = 0; id < result.component_totals.size(); ++id) {
        if (id != result.component_of_cluster[c]) {
          m = combine(calculus, m, result.component_totals[id]);
        }
      }
      const bool degenerate = is_degenerate(calculus, calculus.post_propagate(m));
      result.marginals.emplace(var.name(), VariableMarginal{std::move(m), degenerate, c});
    }
  }
  return result;
}

Valuation marginal_at(const MarkovTree& tree, const NodePotentials& potentials,
                      const Calculus& calculus, const PropagationResult& result,
                      std::size_t cluster, std::string_view variable) {
  if (cluster >= tree.clusters.size()) {
    throw Error(ErrorCode::invalid_value, "cluster index out of range");
  }
  auto pos = tree.clusters[cluster].position(variable);
  if (!pos) {
    throw Error(ErrorCode::scope_mismatch, "cluster " + tree.clusters[cluster].to_string() +
                                               " does not contain " + std::string(variable));
  }
  PropagationResult scratch = result;
  Engine engine(tree, potentials, calculus, scratch);
  Valuation m = marginalize(calculus, engine.belief(cluster), Scope({tree.clusters[cluster][*pos]}));
  for (std::size_t id = 0; id < result.component_totals.size(); ++id) {
    if (id != result.component_of_cluster[cluster]) {
      m = combine(calculus, m, result.component_totals[id]);
    }
  }
  return m;
}

MarginalReadout marginal(const PropagationResult& result, std::string_view variable,
                         const Calculus& calculus) {
  auto it = result.marginals.find(variable);
  if (it == result.marginals.end()) {
    throw Error(ErrorCode::unknown_name,
                "no marginal for variable '" + std::string(variable) + "'");
  }
  Valuation v = calculus.post_propagate(it->second.valuation);
  if (result.normalized && !it->second.degenerate) v = normalize(calculus, v);
  return readout(calculus, v);
}

PropagationResult evaluate(const ValuationSystem& system, const Calculus& calculus,
                           const PropagationOptions& options) {
  const Hypergraph hg = build_hypergraph(system, calculus.name);
  const MarkovTree tree = build_markov_tree(hg);
  const NodePotentials potentials = assign_potentials(tree, hg, system, calculus);
  return propagate(tree, potentials, calculus, options);
}

PropagationResult global_evaluate(const ValuationSystem& system, const Calculus& calculus,
                                  const OracleOptions& options) {
  PropagationResult result;
  result.calculus = calculus.name;
  result.normalized = options.normalized;
  if (system.variables().empty()) return result;

  const Scope everything(system.variables());
  if (everything.configuration_count() > options.max_configurations) {
    throw Error(ErrorCode::oracle_bound_exceeded,
                "global valuation would have " +
                    std::to_string(everything.configuration_count()) + " configurations");
  }

  auto check_focal = [&](const Valuation& v) {
    if (const auto* m = std::get_if<MassValuation>(&v);
        m != nullptr && m->focal().size() > options.max_focal_sets) {
      throw Error(ErrorCode::oracle_bound_exceeded,
                  "global valuation has " + std::to_string(m->focal().size()) + " focal sets");
    }
  };

  const Hypergraph hg = build_hypergraph(system, calculus.name);
  std::optional<Valuation> global;
  std::set<std::string> covered;
  for (const auto& edge : hg.edges) {
    for (const auto& name : edge.scope.names()) covered.insert(name);
    Valuation v = hyperedge_valuation(edge, system, calculus);
    global = global ? combine(calculus, *global, v) : std::move(v);
    check_focal(*global);
  }
  for (const auto& var : system.variables()) {
    if (covered.contains(var.name())) continue;
    Valuation v = default_valuation(calculus, Scope({var}), Role::variable);
    global = global ? combine(calculus, *global, v) : std::move(v);
  }

  for (const auto& var : system.variables()) {
    Valuation m = marginalize(calculus, *global, Scope({var}));
    const bool degenerate = is_degenerate(calculus, calculus.post_propagate(m));
    result.marginals.emplace(var.name(), VariableMarginal{std::move(m), degenerate, 0});
  }
  return result;
}

}  // namespace valnet
