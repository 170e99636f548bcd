#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valnet/network.hpp"

namespace valnet {

// Combined valuation of every hyperedge assigned to each cluster. Clusters
// that receive no hyperedge hold no potential and act as pass-through nodes,
// except singleton clusters of isolated variables, which get the variable
// default.
struct NodePotentials {
  std::vector<std::optional<Valuation>> potentials;
};

// The valuation a hyperedge contributes under `calculus`: the user attachment
// or the role default, combined with the certainty valuation of an observation.
Valuation hyperedge_valuation(const Hyperedge& edge, const ValuationSystem& system,
                              const Calculus& calculus);

NodePotentials assign_potentials(const MarkovTree& tree, const Hypergraph& hypergraph,
                                 const ValuationSystem& system, const Calculus& calculus);

struct PropagationOptions {
  bool normalized = true;
  // Cluster the collect phase converges on; defaults to the least cluster of
  // each component.
  std::optional<std::size_t> root;
  // When set, messages are sent in a random valid order instead of
  // collect/distribute.
  std::optional<std::uint64_t> schedule_seed;
};

struct VariableMarginal {
  Valuation valuation;  // unnormalized, before post_propagate
  bool degenerate = false;
  std::size_t cluster = 0;  // cluster it was read from (0 for the oracle)
};

struct PropagationResult {
  std::string calculus;
  bool normalized = true;
  std::map<std::string, VariableMarginal, std::less<>> marginals;

  // Engine internals, kept for diagnostics and cluster-independence checks.
  // Empty for oracle results.
  std::map<std::pair<std::size_t, std::size_t>, Valuation> messages;
  std::vector<std::size_t> component_of_cluster;
  std::vector<Valuation> component_totals;  // each on the empty scope
  std::vector<std::pair<std::size_t, std::size_t>> schedule;
};

PropagationResult propagate(const MarkovTree& tree, const NodePotentials& potentials,
                            const Calculus& calculus, const PropagationOptions& options = {});

// Marginal of `variable` read from a specific cluster of a finished run.
Valuation marginal_at(const MarkovTree& tree, const NodePotentials& potentials,
                      const Calculus& calculus, const PropagationResult& result,
                      std::size_t cluster, std::string_view variable);

// post_propagate, then normalize when the result is normalized, then readout.
// Degenerate marginals are read out unnormalized.
MarginalReadout marginal(const PropagationResult& result, std::string_view variable,
                         const Calculus& calculus);

// hypergraph -> tree -> potentials -> propagate.
PropagationResult evaluate(const ValuationSystem& system, const Calculus& calculus,
                           const PropagationOptions& options = {});

struct OracleOptions {
  bool normalized = true;
  std::size_t max_configurations = 1'000'000;
  std::size_t max_focal_sets = 10'000;
};

// Combines all hyperedge valuations (and defaults of uncovered variables) on
// the full variable set, then marginalizes to each variable.
PropagationResult global_evaluate(const ValuationSystem& system, const Calculus& calculus,
                                  const OracleOptions& options = {});

}  // namespace valnet
