#include "valnet/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "valnet/error.hpp"

namespace valnet {

// ---------------------------------------------------------------------------
// ValuationSystem

void ValuationSystem::add_variable(std::string name, std::vector<std::string> frame) {
  if (has_variable(name) || has_relation(name)) {
    throw Error(ErrorCode::duplicate_name, "name '" + name + "' is already declared");
  }
  variables_.emplace_back(std::move(name), std::move(frame));
}

void ValuationSystem::add_relation(std::string name, const std::vector<std::string>& variables) {
  if (has_variable(name) || has_relation(name)) {
    throw Error(ErrorCode::duplicate_name, "name '" + name + "' is already declared");
  }
  if (variables.empty()) {
    throw Error(ErrorCode::invalid_value, "relation '" + name + "' has no variables");
  }
  std::vector<Variable> members;
  for (const auto& v : variables) members.push_back(variable(v));
  relations_.push_back(Relation{std::move(name), variables, Scope(std::move(members))});
}

bool ValuationSystem::has_variable(std::string_view name) const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [&](const Variable& v) { return v.name() == name; });
}

bool ValuationSystem::has_relation(std::string_view name) const {
  return std::any_of(relations_.begin(), relations_.end(),
                     [&](const Relation& r) { return r.name == name; });
}

const Variable& ValuationSystem::variable(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.name() == name) return v;
  }
  throw Error(ErrorCode::unknown_name, "unknown variable '" + std::string(name) + "'");
}

const Relation& ValuationSystem::relation(std::string_view name) const {
  for (const auto& r : relations_) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::unknown_name, "unknown relation '" + std::string(name) + "'");
}

Scope ValuationSystem::target_scope(std::string_view target) const {
  if (has_relation(target)) return relation(target).scope;
  if (has_variable(target)) return Scope({variable(target)});
  throw Error(ErrorCode::unknown_name, "unknown variable or relation '" + std::string(target) + "'");
}

void ValuationSystem::attach_valuation(std::string_view target, const Calculus& calculus,
                                       Valuation valuation) {
  const Scope scope = target_scope(target);
  if (scope_of(valuation) != scope) {
    throw Error(ErrorCode::scope_mismatch, "valuation over " + scope_of(valuation).to_string() +
                                               " cannot be attached to '" + std::string(target) +
                                               "' over " + scope.to_string());
  }
  require_compatible(calculus, valuation);
  attached_.insert_or_assign({std::string(target), calculus.name}, std::move(valuation));
}

void ValuationSystem::detach_valuation(std::string_view target, std::string_view calculus) {
  attached_.erase({std::string(target), std::string(calculus)});
}

void ValuationSystem::observe(std::string_view name, std::string_view value) {
  const auto& var = variable(name);
  auto index = var.index_of(value);
  if (!index) {
    throw Error(ErrorCode::unknown_name, "'" + std::string(value) +
                                             "' is not in the frame of '" + var.name() + "'");
  }
  observations_.insert_or_assign(var.name(), *index);
}

void ValuationSystem::retract(std::string_view name) {
  variable(name);
  if (auto it = observations_.find(name); it != observations_.end()) observations_.erase(it);
}

void ValuationSystem::clear_evidence() {
  attached_.clear();
  observations_.clear();
}

const Valuation* ValuationSystem::attachment(std::string_view target,
                                             std::string_view calculus) const {
  auto it = attached_.find({std::string(target), std::string(calculus)});
  return it == attached_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> ValuationSystem::observation(std::string_view name) const {
  auto it = observations_.find(name);
  if (it == observations_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Hypergraph

Hypergraph build_hypergraph(const ValuationSystem& system, std::string_view calculus) {
  Hypergraph hg;
  hg.nodes = system.variables();
  for (const auto& r : system.relations()) {
    hg.edges.push_back({Hyperedge::Source::relation, r.name, r.scope});
  }
  for (const auto& v : system.variables()) {
    if (system.attachment(v.name(), calculus) != nullptr || system.observation(v.name())) {
      hg.edges.push_back({Hyperedge::Source::variable, v.name(), Scope({v})});
    }
  }
  return hg;
}

// ---------------------------------------------------------------------------
// MarkovTree

std::vector<std::size_t> MarkovTree::neighbours(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.a == cluster) out.push_back(e.b);
    if (e.b == cluster) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const TreeEdge* MarkovTree::edge_between(std::size_t a, std::size_t b) const {
  for (const auto& e : edges) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return &e;
  }
  return nullptr;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Elimination cliques of a min-fill triangulation of the primal graph.
std::vector<std::set<std::string>> elimination_cliques(const Hypergraph& hg) {
  std::map<std::string, std::set<std::string>> adjacency;
  for (const auto& v : hg.nodes) adjacency[v.name()];
  for (const auto& e : hg.edges) {
    const auto names = e.scope.names();
    for (const auto& a : names) {
      for (const auto& b : names) {
        if (a != b) adjacency[a].insert(b);
      }
    }
  }

  std::vector<std::set<std::string>> cliques;
  while (!adjacency.empty()) {
    // (fill-in, degree, name) minimal; std::map iteration gives name order.
    const std::string* best = nullptr;
    std::size_t best_fill = 0;
    std::size_t best_degree = 0;
    for (const auto& [name, nbrs] : adjacency) {
      std::size_t fill = 0;
      for (auto i = nbrs.begin(); i != nbrs.end(); ++i) {
        for (auto j = std::next(i); j != nbrs.end(); ++j) {
          if (!adjacency.at(*i).contains(*j)) ++fill;
        }
      }
      if (best == nullptr || std::pair(fill, nbrs.size()) < std::pair(best_fill, best_degree)) {
        best = &name;
        best_fill = fill;
        best_degree = nbrs.size();
      }
    }
    const std::string chosen = *best;
    const std::set<std::string> nbrs = adjacency.at(chosen);
    std::set<std::string> clique = nbrs;
    clique.insert(chosen);
    cliques.push_back(std::move(clique));
    for (const auto& a : nbrs) {
      for (const auto& b : nbrs) {
        if (a != b) adjacency[a].insert(b);
      }
      adjacency[a].erase(chosen);
    }
    adjacency.erase(chosen);
  }
  return cliques;
}

}  // namespace

MarkovTree build_markov_tree(const Hypergraph& hg) {
  auto cliques = elimination_cliques(hg);

  std::vector<std::set<std::string>> maximal;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < cliques.size() && !subsumed; ++j) {
      if (i == j) continue;
      const bool inside = std::includes(cliques[j].begin(), cliques[j].end(),
                                        cliques[i].begin(), cliques[i].end());
      subsumed = inside && (cliques[i].size() < cliques[j].size() || j < i);
    }
    if (!subsumed) maximal.push_back(cliques[i]);
  }

  std::map<std::string, const Variable*> lookup;
  for (const auto& v : hg.nodes) lookup[v.name()] = &v;

  MarkovTree tree;
  for (const auto& clique : maximal) {
    std::vector<Variable> vars;
    for (const auto& name : clique) vars.push_back(*lookup.at(name));
    tree.clusters.emplace_back(std::move(vars));
  }
  std::sort(tree.clusters.begin(), tree.clusters.end());

  struct Candidate {
    std::size_t weight, a, b;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < tree.clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < tree.clusters.size(); ++b) {
      const std::size_t w = tree.clusters[a].intersect(tree.clusters[b]).size();
      if (w > 0) candidates.push_back({w, a, b});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.weight > y.weight; });
  DisjointSets components(tree.clusters.size());
  for (const auto& c : candidates) {
    if (components.unite(c.a, c.b)) {
      tree.edges.push_back({c.a, c.b, tree.clusters[c.a].intersect(tree.clusters[c.b])});
    }
  }

  for (const auto& e : hg.edges) {
    auto it = std::find_if(tree.clusters.begin(), tree.clusters.end(),
                           [&](const Scope& c) { return e.scope.is_subset_of(c); });
    if (it == tree.clusters.end()) {
      throw Error(ErrorCode::no_containing_cluster,
                  "hyperedge " + e.scope.to_string() + " is not covered by any cluster");
    }
    tree.assignment.push_back(static_cast<std::size_t>(it - tree.clusters.begin()));
  }
  return tree;
}

TreeReport validate_tree(const MarkovTree& tree, const Hypergraph& hg) {
  TreeReport report;
  const std::size_t n = tree.clusters.size();
  auto& out = report.violations;

  DisjointSets forest(n);
  for (std::size_t k = 0; k < tree.edges.size(); ++k) {
    const auto& e = tree.edges[k];
    if (e.a >= n || e.b >= n || e.a == e.b) {
      out.push_back("edge " + std::to_string(k) + " has invalid endpoints");
      continue;
    }
    if (e.separator != tree.clusters[e.a].intersect(tree.clusters[e.b])) {
      out.push_back("edge " + std::to_string(k) + " separator " + e.separator.to_string() +
                    " is not the cluster intersection");
    }
    if (!forest.unite(e.a, e.b)) {
      out.push_back("edge " + std::to_string(k) + " closes a cycle");
    }
  }

  for (const auto& v : hg.nodes) {
    std::vector<std::size_t> holders;
    for (std::size_t c = 0; c < n; ++c) {
      if (tree.clusters[c].contains(v.name())) holders.push_back(c);
    }
    if (holders.empty()) {
      out.push_back("variable " + v.name() + " is in no cluster");
      continue;
    }
    // Connectivity of the holders through edges whose endpoints both hold v.
    DisjointSets sub(n);
    for (const auto& e : tree.edges) {
      if (e.a < n && e.b < n && tree.clusters[e.a].contains(v.name()) &&
          tree.clusters[e.b].contains(v.name())) {
        sub.unite(e.a, e.b);
      }
    }
    const std::size_t root = sub.find(holders.front());
    if (std::any_of(holders.begin(), holders.end(),
                    [&](std::size_t c) { return sub.find(c) != root; })) {
      out.push_back("running intersection fails for variable " + v.name());
    }
  }

  for (std::size_t k = 0; k < hg.edges.size(); ++k) {
    const auto& e = hg.edges[k];
    const bool covered = std::any_of(tree.clusters.begin(), tree.clusters.end(),
                                     [&](const Scope& c) { return e.scope.is_subset_of(c); });
    if (!covered) {
      out.push_back("hyperedge " + e.label + " " + e.scope.to_string() +
                    " is not contained in any cluster");
      continue;
    }
    if (k >= tree.assignment.size() || tree.assignment[k] >= n ||
        !e.scope.is_subset_of(tree.clusters[tree.assignment[k]])) {
      out.push_back("hyperedge " + e.label + " is assigned to a cluster that does not contain it");
    }
  }
  return report;
}

}  // namespace valnet
