#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valnet/calculus.hpp"

namespace valnet {

struct Relation {
  std::string name;
  std::vector<std::string> declared_order;  // as written by the user
  Scope scope;
};

// Structural knowledge (variables, relations) plus per-calculus valuations
// and observations. The structure is shared by every calculus; attachments
// are keyed by (target, calculus name).
class ValuationSystem {
 public:
  void add_variable(std::string name, std::vector<std::string> frame);
  void add_relation(std::string name, const std::vector<std::string>& variables);

  // Replaces any previous attachment for (target, calculus.name).
  void attach_valuation(std::string_view target, const Calculus& calculus, Valuation valuation);
  void detach_valuation(std::string_view target, std::string_view calculus);

  // Last write wins per variable.
  void observe(std::string_view variable, std::string_view value);
  void retract(std::string_view variable);
  // Drops observations and all attachments; keeps the structure.
  void clear_evidence();

  bool has_variable(std::string_view name) const;
  bool has_relation(std::string_view name) const;
  const Variable& variable(std::string_view name) const;
  const Relation& relation(std::string_view name) const;
  // Declaration order.
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }

  // Scope of a variable (singleton) or relation name.
  Scope target_scope(std::string_view target) const;
  const Valuation* attachment(std::string_view target, std::string_view calculus) const;
  std::optional<std::size_t> observation(std::string_view variable) const;
  const std::map<std::string, std::size_t, std::less<>>& observations() const noexcept {
    return observations_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Relation> relations_;
  std::map<std::pair<std::string, std::string>, Valuation> attached_;
  std::map<std::string, std::size_t, std::less<>> observations_;
};

struct Hyperedge {
  enum class Source { relation, variable };
  Source source;
  std::string label;  // relation or variable name
  Scope scope;
};

struct Hypergraph {
  std::vector<Variable> nodes;
  std::vector<Hyperedge> edges;
};

// Relation hyperedges always; a singleton hyperedge for every variable with an
// attachment under `calculus` or an observation.
Hypergraph build_hypergraph(const ValuationSystem& system, std::string_view calculus);

struct TreeEdge {
  std::size_t a;
  std::size_t b;
  Scope separator;
};

struct MarkovTree {
  std::vector<Scope> clusters;  // sorted ascending; cluster 0 is the least
  std::vector<TreeEdge> edges;
  std::vector<std::size_t> assignment;  // hyperedge index -> cluster

  std::vector<std::size_t> neighbours(std::size_t cluster) const;
  const TreeEdge* edge_between(std::size_t a, std::size_t b) const;
};

// Min-fill triangulation (ties: fewer neighbours, then name), non-subsumed
// elimination cliques as clusters, maximum-weight spanning forest over
// separator sizes (ties: lowest cluster indices). Each hyperedge is assigned
// to the first cluster that contains it.
MarkovTree build_markov_tree(const Hypergraph& hypergraph);

struct TreeReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks acyclicity, separators, running intersection, hyperedge coverage and
// assignment. Never throws on a bad tree.
TreeReport validate_tree(const MarkovTree& tree, const Hypergraph& hypergraph);

}  // namespace valnet
