#include "valnet/axioms.hpp"

#include <algorithm>
#include <random>

namespace valnet {

namespace {

constexpr std::size_t kUniverse = 5;
constexpr std::size_t kReportedFailures = 8;

std::vector<Variable> random_universe(std::mt19937_64& rng, std::size_t max_frame) {
  std::uniform_int_distribution<std::size_t> frame_size(1, std::max<std::size_t>(1, max_frame));
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < kUniverse; ++i) {
    std::vector<std::string> frame;
    const std::size_t n = frame_size(rng);
    for (std::size_t k = 0; k < n; ++k) frame.push_back("v" + std::to_string(k));
    vars.emplace_back(std::string(1, static_cast<char>('A' + i)), std::move(frame));
  }
  return vars;
}

Scope random_subset(const std::vector<Variable>& pool, std::size_t max_size,
                    std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(0, std::min(max_size, pool.size()));
  std::vector<Variable> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.erase(shuffled.begin() + static_cast<std::ptrdiff_t>(size(rng)), shuffled.end());
  return Scope(std::move(shuffled));
}

Scope random_subset(const Scope& s, std::mt19937_64& rng) {
  std::vector<Variable> pool(s.variables().begin(), s.variables().end());
  return random_subset(pool, pool.size(), rng);
}

}  // namespace

AxiomReport check_axioms(const Calculus& calculus, const AxiomOptions& options) {
  std::mt19937_64 rng(options.seed);
  AxiomReport report;

  auto check = [&](const Valuation& lhs, const Valuation& rhs, std::size_t& counter,
                   const char* law, std::size_t instance) {
    const double d = distance(lhs, rhs);
    report.max_deviation = std::max(report.max_deviation, d);
    if (d > options.tolerance) {
      ++counter;
      if (report.failures.size() < kReportedFailures) {
        report.failures.push_back(std::string(law) + " violated at instance " +
                                  std::to_string(instance) + " (deviation " +
                                  std::to_string(d) + ")");
      }
    }
  };

  for (std::size_t n = 0; n < options.instances; ++n) {
    const auto universe = random_universe(rng, options.max_frame);
    const Scope g = random_subset(universe, options.max_variables, rng);
    const Scope h = random_subset(universe, options.max_variables, rng);
    const Scope k = random_subset(universe, options.max_variables, rng);
    const Valuation G = calculus.sample(g, rng);
    const Valuation H = calculus.sample(h, rng);
    const Valuation K = calculus.sample(k, rng);

    // A1
    check(combine(calculus, G, H), combine(calculus, H, G), report.commutativity_failures,
          "commutativity", n);
    check(combine(calculus, G, combine(calculus, H, K)),
          combine(calculus, combine(calculus, G, H), K), report.associativity_failures,
          "associativity", n);

    // A2: k' ⊆ h' ⊆ g
    const Scope h_sub = random_subset(g, rng);
    const Scope k_sub = random_subset(h_sub, rng);
    check(marginalize(calculus, marginalize(calculus, G, h_sub), k_sub),
          marginalize(calculus, G, k_sub), report.consonance_failures, "consonance", n);

    // A3
    check(marginalize(calculus, combine(calculus, G, H), g),
          combine(calculus, G, marginalize(calculus, H, g.intersect(h))),
          report.distributivity_failures, "distributivity", n);

    ++report.instances;
  }
  return report;
}

}  // namespace valnet
