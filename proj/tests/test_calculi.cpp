#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "valnet/axioms.hpp"
#include "valnet/calculus.hpp"
#include "valnet/error.hpp"

using namespace valnet;

namespace {

const Variable X("X", {"a", "b", "c"});
const Scope SX({X});

ConfigSet set_of(std::initializer_list<const char*> values) {
  std::vector<Configuration> members;
  for (const char* v : values) members.push_back(Configuration::of(SX, {v}));
  return ConfigSet::of(SX, members);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no valnet::Error thrown";
  return ErrorCode::model_error;
}

// Tropical semiring: costs add, marginalization keeps the cheapest.
Calculus min_plus() {
  Calculus c;
  c.name = "min-plus";
  c.point_kind = PointKind::generic;
  c.default_variable = [](const Scope& s) -> Valuation {
    return PointValuation::constant(s, PointKind::generic, 0.0);
  };
  c.default_relation = c.default_variable;
  c.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_tables(std::get<PointValuation>(g), std::get<PointValuation>(h),
                          PointKind::generic, [](double a, double b) { return a + b; });
  };
  c.marginalize = [](const Valuation& g, const Scope& t) -> Valuation {
    return marginalize_table(std::get<PointValuation>(g), t,
                             std::numeric_limits<double>::infinity(),
                             [](double a, double b) { return std::min(a, b); });
  };
  c.normalize = [](const Valuation& v) { return v; };
  c.post_propagate = [](const Valuation& v) { return v; };
  return c;
}

}  // namespace

TEST(Probability, CombineMarginalizeNormalize) {
  const auto c = probability_calculus();
  const Variable Y("Y", {"y0", "y1"});
  PointValuation g(Scope({X, Y}), PointKind::probability, {1, 2, 3, 4, 5, 6});
  PointValuation h(Scope({Y}), PointKind::probability, {0.5, 2});
  const auto gh = std::get<PointValuation>(combine(c, g, h));
  EXPECT_EQ(gh.table(), (std::vector<double>{0.5, 4, 1.5, 8, 2.5, 12}));
  const auto y = std::get<PointValuation>(marginalize(c, gh, Scope({Y})));
  EXPECT_EQ(y.table(), (std::vector<double>{4.5, 24}));
  const auto n = std::get<PointValuation>(normalize(c, y));
  EXPECT_DOUBLE_EQ(n.at(0), 4.5 / 28.5);
  EXPECT_DOUBLE_EQ(n.at(1), 24 / 28.5);
  const auto d = std::get<PointValuation>(default_valuation(c, SX, Role::variable));
  for (double x : d.table()) EXPECT_DOUBLE_EQ(x, 1.0 / 3);
}

TEST(Probability, ZeroTotalIsDegenerate) {
  const auto c = probability_calculus();
  PointValuation z = PointValuation::constant(SX, PointKind::probability, 0.0);
  EXPECT_TRUE(is_degenerate(c, z));
  EXPECT_EQ(code_of([&] { normalize(c, z); }), ErrorCode::degenerate_valuation);
}

TEST(Belief, DempsterWithConflict) {
  const auto c = belief_calculus();
  MassValuation g(SX);
  g.add(set_of({"a", "b"}), 0.6);
  g.add(ConfigSet::whole(SX), 0.4);
  MassValuation h(SX);
  h.add(set_of({"c"}), 0.5);
  h.add(set_of({"a"}), 0.3);
  h.add(ConfigSet::whole(SX), 0.2);

  // Worked by hand: {a,b}∩{c}=∅ carries 0.3.
  const auto m = std::get<MassValuation>(combine(c, g, h));
  EXPECT_NEAR(m.conflict(), 0.30, 1e-12);
  EXPECT_NEAR(m.mass_of(set_of({"a"})), 0.30, 1e-12);
  EXPECT_NEAR(m.mass_of(set_of({"a", "b"})), 0.12, 1e-12);
  EXPECT_NEAR(m.mass_of(set_of({"c"})), 0.20, 1e-12);
  EXPECT_NEAR(m.mass_of(ConfigSet::whole(SX)), 0.08, 1e-12);

  const auto n = std::get<MassValuation>(normalize(c, m));
  EXPECT_EQ(n.conflict(), 0.0);
  EXPECT_NEAR(n.mass_of(set_of({"a"})), 0.30 / 0.7, 1e-12);

  const auto r = readout(c, n);
  ASSERT_EQ(r.columns, (std::vector<std::string>{"bel", "pl"}));
  // bel(a) = m{a}; pl(a) = m{a}+m{a,b}+m{Θ}
  EXPECT_NEAR(r.rows[0][0], 0.30 / 0.7, 1e-12);
  EXPECT_NEAR(r.rows[0][1], (0.30 + 0.12 + 0.08) / 0.7, 1e-12);
  EXPECT_NEAR(r.rows[1][0], 0.0, 1e-12);
  EXPECT_NEAR(r.rows[1][1], (0.12 + 0.08) / 0.7, 1e-12);
}

TEST(Belief, ConflictBehavesAsMassOnEmptySet) {
  MassValuation g(SX, 0.2);
  g.add(set_of({"a"}), 0.8);
  MassValuation h(SX, 0.5);
  h.add(set_of({"b"}), 0.5);
  const auto m = combine_mass(g, h);
  EXPECT_NEAR(m.conflict(), 1.0, 1e-12);
  EXPECT_TRUE(m.focal().empty());
  EXPECT_TRUE(is_degenerate(belief_calculus(), m));
}

TEST(Belief, MarginalizationProjectsFocalSets) {
  const Variable Y("Y", {"y0", "y1"});
  const Scope XY({X, Y});
  MassValuation m(XY, 0.1);
  m.add(ConfigSet::of(XY, {Configuration::of(XY, {"a", "y0"}), Configuration::of(XY, {"b", "y1"})}),
        0.5);
  m.add(ConfigSet::of(XY, {Configuration::of(XY, {"a", "y1"})}), 0.4);
  const auto mx = marginalize_mass(m, SX);
  EXPECT_NEAR(mx.mass_of(set_of({"a", "b"})), 0.5, 1e-12);
  EXPECT_NEAR(mx.mass_of(set_of({"a"})), 0.4, 1e-12);
  EXPECT_NEAR(mx.conflict(), 0.1, 1e-12);
}

TEST(Belief, RejectsInvalidMasses) {
  MassValuation m(SX);
  EXPECT_THROW(m.add(ConfigSet(SX, ConfigMask(3)), 0.5), Error);
  EXPECT_THROW(m.add(set_of({"a"}), -0.1), Error);
}

TEST(Possibility, NecessityReadout) {
  const auto c = possibility_calculus();
  PointValuation p(SX, PointKind::possibility, {0.1, 0.1, 1.0});
  const auto r = readout(c, p);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_NEAR(r.rows[0][0], 0.0, 1e-12);
  EXPECT_NEAR(r.rows[2][0], 0.9, 1e-12);
  EXPECT_NEAR(r.rows[2][1], 1.0, 1e-12);
  const auto n = std::get<PointValuation>(
      normalize(c, PointValuation(SX, PointKind::possibility, {0.2, 0.4, 0.1})));
  EXPECT_EQ(n.table(), (std::vector<double>{0.5, 1.0, 0.25}));
}

TEST(Boolean, AndOrAndDegeneracy) {
  const auto c = boolean_calculus();
  PointValuation g(SX, PointKind::boolean, {1, 0, 1});
  PointValuation h(SX, PointKind::boolean, {0, 1, 1});
  EXPECT_EQ(std::get<PointValuation>(combine(c, g, h)).table(), (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(std::get<PointValuation>(marginalize(c, g, Scope())).table(),
            (std::vector<double>{1}));
  PointValuation none(SX, PointKind::boolean, {0, 0, 0});
  EXPECT_TRUE(is_degenerate(c, none));
  EXPECT_FALSE(is_degenerate(c, g));
  EXPECT_THROW(PointValuation(SX, PointKind::boolean, {0.5, 0, 1}), Error);
}

TEST(Dispatch, KindMismatchAndScopeChecks) {
  const auto p = probability_calculus();
  const auto b = belief_calculus();
  PointValuation t(SX, PointKind::probability, {1, 1, 1});
  EXPECT_EQ(code_of([&] { combine(b, t, t); }), ErrorCode::kind_mismatch);
  PointValuation poss(SX, PointKind::possibility, {1, 1, 1});
  EXPECT_EQ(code_of([&] { combine(p, t, poss); }), ErrorCode::kind_mismatch);
  const Scope SY({Variable("Y", {"0"})});
  EXPECT_EQ(code_of([&] { marginalize(p, t, SY); }), ErrorCode::scope_mismatch);
  const Scope XY({X, Variable("Y", {"0", "1"})});
  EXPECT_EQ(code_of([&] { readout(p, PointValuation::constant(XY, PointKind::probability, 1)); }),
            ErrorCode::not_singleton);
}

TEST(Certainty, SelectsObservedValue) {
  const auto p = std::get<PointValuation>(certainty(probability_calculus(), X, 1));
  EXPECT_EQ(p.table(), (std::vector<double>{0, 1, 0}));
  const auto m = std::get<MassValuation>(certainty(belief_calculus(), X, 2));
  EXPECT_NEAR(m.mass_of(set_of({"c"})), 1.0, 1e-12);
}

TEST(Registry, BuiltinsAndUserCalculus) {
  auto reg = Registry::with_builtins();
  EXPECT_EQ(reg.names(),
            (std::vector<std::string>{"belief", "boolean", "possibility", "probability"}));
  EXPECT_EQ(code_of([&] { reg.get("fuzzy"); }), ErrorCode::unknown_name);
  EXPECT_EQ(code_of([&] { reg.add(probability_calculus()); }), ErrorCode::duplicate_name);

  auto broken = min_plus();
  broken.combine = nullptr;
  EXPECT_EQ(code_of([&] { reg.add(broken); }), ErrorCode::missing_function);

  const Calculus& mp = reg.add(min_plus());
  ASSERT_TRUE(mp.sample);
  ASSERT_TRUE(mp.readout);
  PointValuation cost(SX, PointKind::generic, {3, 1, 2});
  const auto r = readout(mp, cost);
  EXPECT_EQ(r.rows[1][0], 1.0);
}

TEST(Axioms, BuiltinsHold) {
  AxiomOptions exact;
  exact.tolerance = 0.0;
  EXPECT_TRUE(check_axioms(boolean_calculus(), exact).passed());
  EXPECT_TRUE(check_axioms(possibility_calculus(), exact).passed());
  const auto p = check_axioms(probability_calculus());
  EXPECT_TRUE(p.passed()) << (p.failures.empty() ? "" : p.failures.front());
  const auto b = check_axioms(belief_calculus());
  EXPECT_TRUE(b.passed()) << (b.failures.empty() ? "" : b.failures.front());
  EXPECT_EQ(b.instances, 500u);
}

TEST(Axioms, UserCalculusHolds) {
  Registry reg;
  const auto& mp = reg.add(min_plus());
  EXPECT_TRUE(check_axioms(mp).passed());
}

TEST(Axioms, DetectsBrokenCalculus) {
  // Averaging is commutative but neither associative nor distributive.
  Registry reg;
  auto bad = min_plus();
  bad.name = "average";
  bad.combine = [](const Valuation& g, const Valuation& h) -> Valuation {
    return combine_tables(std::get<PointValuation>(g), std::get<PointValuation>(h),
                          PointKind::generic, [](double a, double b) { return (a + b) / 2; });
  };
  const auto& c = reg.add(bad);
  const auto report = check_axioms(c);
  EXPECT_FALSE(report.passed());
  EXPECT_GT(report.associativity_failures, 0u);
  EXPECT_EQ(report.commutativity_failures, 0u);
}
