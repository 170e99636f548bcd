#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "valnet/calculus.hpp"
#include "valnet/network.hpp"
#include "valnet/propagation.hpp"
#include "valnet/script.hpp"

namespace valnet {

// Fixed-point with three decimals, ties (within 1e-9) to even.
std::string format_fixed3(double value);

struct RenderContext {
  std::string calculus;
  bool normalized = true;
  bool degenerate = false;
};

// Deterministic fixed-width table for one marginal. Unnormalized tables carry
// total (and conflict, when present) footer lines.
std::string render(const MarginalReadout& readout, const RenderContext& context);

struct RunOptions {
  // Forces this calculus for every propagation, ignoring `calculus` statements.
  std::optional<std::string> calculus;
  bool force_unnormalized = false;
  // Compare every propagation with the brute-force global evaluation.
  bool oracle_check = false;
  // Execute declarations and valuations but skip propagate/query.
  bool structural_only = false;
};

// Executes documents statement by statement against one valuation system.
class Session {
 public:
  explicit Session(const Registry& registry, RunOptions options = {});

  // Tables go to `out`, diagnostics (`line:col: error: ...`) to `err`.
  // Returns the number of statements that failed; execution continues past
  // failures.
  std::size_t execute(const script::NetworkDocument& document, std::ostream& out,
                      std::ostream& err);

  script::ParseContext& parse_context() { return context_; }
  const ValuationSystem& system() const { return system_; }
  const std::string& active_calculus() const { return active_; }
  const std::optional<PropagationResult>& last_result() const { return result_; }

 private:
  void apply(const script::Statement& statement, std::ostream& out);
  Valuation build(const script::DenseVal& val) const;
  Valuation build(const script::MassVal& val) const;

  const Registry& registry_;
  RunOptions options_;
  ValuationSystem system_;
  script::ParseContext context_;
  std::string active_ = "probability";
  std::optional<PropagationResult> result_;
  bool stale_ = true;
};

}  // namespace valnet
