#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "valnet/calculus.hpp"

namespace valnet {

struct AxiomOptions {
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  // Per-entry tolerance; 0 demands exact equality.
  double tolerance = 1e-9;
  std::size_t max_variables = 3;  // per scope
  std::size_t max_frame = 3;
};

struct AxiomReport {
  std::size_t instances = 0;
  std::size_t commutativity_failures = 0;
  std::size_t associativity_failures = 0;
  std::size_t consonance_failures = 0;
  std::size_t distributivity_failures = 0;
  double max_deviation = 0.0;
  std::vector<std::string> failures;  // first few, for diagnostics

  bool passed() const {
    return commutativity_failures + associativity_failures + consonance_failures +
               distributivity_failures ==
           0;
  }
};

// Randomized check of the local-computation axioms against `calculus`:
//   G⊗H = H⊗G,  G⊗(H⊗K) = (G⊗H)⊗K,  (G↓h)↓k = G↓k,  (G⊗H)↓g = G⊗(H↓g∩h).
// Valuations come from `calculus.sample`.
AxiomReport check_axioms(const Calculus& calculus, const AxiomOptions& options = {});

}  // namespace valnet
