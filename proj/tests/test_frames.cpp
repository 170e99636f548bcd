#include <gtest/gtest.h>

#include <random>

#include "valnet/error.hpp"
#include "valnet/frames.hpp"

using namespace valnet;

namespace {

Variable var(std::string name, std::size_t n) {
  std::vector<std::string> frame;
  for (std::size_t i = 0; i < n; ++i) frame.push_back("v" + std::to_string(i));
  return Variable(std::move(name), std::move(frame));
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

}  // namespace

TEST(Variable, RejectsBadFrames) {
  EXPECT_EQ(code_of([] { Variable("A", {}); }), ErrorCode::invalid_value);
  EXPECT_EQ(code_of([] { Variable("A", {"x", "x"}); }), ErrorCode::duplicate_name);
  EXPECT_EQ(code_of([] { Variable("", {"x"}); }), ErrorCode::invalid_value);
  Variable ok("A", {"x", "y"});
  EXPECT_EQ(ok.index_of("y"), 1u);
  EXPECT_FALSE(ok.index_of("z"));
}

TEST(Scope, CanonicalOrderAndCounts) {
  Scope s({var("C", 2), var("A", 3), var("B", 1)});
  EXPECT_EQ(s.names(), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(s.configuration_count(), 6u);
  EXPECT_EQ(s.to_string(), "{A,B,C}");
  EXPECT_EQ(Scope().configuration_count(), 1u);
  EXPECT_EQ(code_of([] { Scope({var("A", 2), var("A", 2)}); }), ErrorCode::duplicate_name);
}

TEST(Scope, SetAlgebra) {
  Scope ab({var("A", 2), var("B", 2)});
  Scope bc({var("B", 2), var("C", 3)});
  EXPECT_EQ(ab.union_with(bc).names(), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(ab.intersect(bc).names(), (std::vector<std::string>{"B"}));
  EXPECT_EQ(ab.minus(bc).names(), (std::vector<std::string>{"A"}));
  EXPECT_TRUE(ab.intersect(bc).is_subset_of(ab));
  EXPECT_FALSE(ab.is_subset_of(bc));
  Scope other_b({var("B", 3)});
  EXPECT_EQ(code_of([&] { (void)ab.union_with(other_b); }), ErrorCode::model_error);
}

TEST(Configuration, RowMajorLastFastest) {
  Scope s({var("A", 2), var("B", 3)});
  auto all = enumerate_configurations(s);
  ASSERT_EQ(all.size(), 6u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].linear_index(), i);
    EXPECT_EQ(all[i].values(), decode_index(s, i));
  }
  EXPECT_EQ(all[1].values(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(all[3].values(), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(Configuration::of(s, {"v1", "v2"}).to_string(), "(v1 v2)");
}

TEST(Configuration, ProjectAndExtend) {
  Scope abc({var("A", 2), var("B", 2), var("C", 3)});
  Scope b({var("B", 2)});
  const Configuration x(abc, {1, 0, 2});
  EXPECT_EQ(project_config(x, b).values(), (std::vector<std::size_t>{0}));
  const ConfigSet up = extend_config(project_config(x, b), abc);
  EXPECT_EQ(up.size(), 6u);
  EXPECT_TRUE(up.contains(x));
  for (const auto& y : up.configurations()) EXPECT_EQ(project_config(y, b).values()[0], 0u);
}

TEST(Configuration, ProjectionMapMatchesProjectConfig) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Variable> vs;
    for (char c = 'A'; c < 'E'; ++c) vs.push_back(var(std::string(1, c), 1 + rng() % 3));
    Scope from(vs);
    std::vector<Variable> keep;
    for (const auto& v : vs) {
      if (rng() % 2) keep.push_back(v);
    }
    Scope to(keep);
    const auto map = projection_map(from, to);
    ASSERT_EQ(map.size(), from.configuration_count());
    for (const auto& x : enumerate_configurations(from)) {
      EXPECT_EQ(map[x.linear_index()], project_config(x, to).linear_index());
    }
  }
}

TEST(ConfigSet, ProjectionAndCylinderAreGaloisPair) {
  // A ⊆ (A↓h)↑ and (B↑)↓h = B for every set A on g and B on h.
  Scope g({var("A", 2), var("B", 3)});
  Scope h({var("B", 3)});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    ConfigMask a(g.configuration_count());
    for (std::size_t i = 0; i < a.bit_count(); ++i) {
      if (rng() % 2) a.set(i);
    }
    const ConfigSet A(g, a);
    const ConfigSet up = extend_config_set(project_config_set(A, h), g);
    EXPECT_EQ((up.mask() & a), a);

    ConfigMask b(h.configuration_count());
    for (std::size_t i = 0; i < b.bit_count(); ++i) {
      if (rng() % 2) b.set(i);
    }
    const ConfigSet B(h, b);
    EXPECT_EQ(project_config_set(extend_config_set(B, g), h), B);
  }
}

TEST(ConfigMask, BitOperations) {
  ConfigMask m(130);
  EXPECT_TRUE(m.none());
  m.set(0);
  m.set(129);
  EXPECT_EQ(m.count(), 2u);
  EXPECT_EQ(m.indices(), (std::vector<std::size_t>{0, 129}));
  EXPECT_TRUE(ConfigMask::full(130).all());
  EXPECT_EQ((m & ConfigMask::full(130)), m);
  EXPECT_EQ((m | ConfigMask::full(130)).count(), 130u);
}
