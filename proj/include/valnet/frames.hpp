#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace valnet {

// A named variable ranging over a finite, ordered frame of distinct values.
class Variable {
 public:
  Variable(std::string name, std::vector<std::string> frame);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& frame() const noexcept { return frame_; }
  std::size_t frame_size() const noexcept { return frame_.size(); }
  std::optional<std::size_t> index_of(std::string_view value) const;

  bool operator==(const Variable&) const = default;

 private:
  std::string name_;
  std::vector<std::string> frame_;
};

// A set of variables kept in canonical (lexicographic by name) order.
//
// Every dense table in the library is indexed row-major over this order: the
// last variable varies fastest, frame values follow declaration order.
class Scope {
 public:
  Scope() = default;
  explicit Scope(std::vector<Variable> variables);

  std::span<const Variable> variables() const noexcept { return variables_; }
  const Variable& operator[](std::size_t i) const { return variables_[i]; }
  std::size_t size() const noexcept { return variables_.size(); }
  bool empty() const noexcept { return variables_.empty(); }

  // |W_scope|; 1 for the empty scope.
  std::size_t configuration_count() const noexcept;

  bool contains(std::string_view name) const;
  std::optional<std::size_t> position(std::string_view name) const;
  std::vector<std::string> names() const;
  std::string to_string() const;

  // Subset tests compare names and require identical frames for shared names.
  bool is_subset_of(const Scope& other) const;
  Scope union_with(const Scope& other) const;
  Scope intersect(const Scope& other) const;
  Scope minus(const Scope& other) const;

  bool operator==(const Scope&) const = default;
  // Lexicographic on the canonical name sequence.
  std::strong_ordering operator<=>(const Scope& other) const;

 private:
  std::vector<Variable> variables_;
};

// A tuple of frame indices aligned with a scope's canonical order.
class Configuration {
 public:
  Configuration(Scope scope, std::vector<std::size_t> values);
  // Convenience: frame values by name, aligned with the canonical order.
  static Configuration of(const Scope& scope,
                          const std::vector<std::string>& values);

  const Scope& scope() const noexcept { return scope_; }
  const std::vector<std::size_t>& values() const noexcept { return values_; }
  std::size_t linear_index() const;
  std::string to_string() const;

  bool operator==(const Configuration&) const = default;

 private:
  Scope scope_;
  std::vector<std::size_t> values_;
};

// Fixed-width bitset over the linear configuration indices of some scope.
class ConfigMask {
 public:
  ConfigMask() = default;
  explicit ConfigMask(std::size_t bits);

  static ConfigMask full(std::size_t bits);

  std::size_t bit_count() const noexcept { return bits_; }
  void set(std::size_t i);
  bool test(std::size_t i) const;
  std::size_t count() const noexcept;
  bool none() const noexcept;
  bool all() const noexcept;

  ConfigMask& operator&=(const ConfigMask& other);
  ConfigMask& operator|=(const ConfigMask& other);
  friend ConfigMask operator&(ConfigMask a, const ConfigMask& b) { return a &= b; }
  friend ConfigMask operator|(ConfigMask a, const ConfigMask& b) { return a |= b; }

  // Indices of set bits in increasing order.
  std::vector<std::size_t> indices() const;

  bool operator==(const ConfigMask&) const = default;
  std::strong_ordering operator<=>(const ConfigMask& other) const;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// A set of configurations sharing one scope.
class ConfigSet {
 public:
  ConfigSet(Scope scope, ConfigMask members);
  static ConfigSet of(const Scope& scope,
                      const std::vector<Configuration>& members);
  static ConfigSet whole(const Scope& scope);

  const Scope& scope() const noexcept { return scope_; }
  const ConfigMask& mask() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.count(); }
  bool empty() const noexcept { return members_.none(); }
  bool contains(const Configuration& x) const;
  std::vector<Configuration> configurations() const;

  bool operator==(const ConfigSet&) const = default;

 private:
  Scope scope_;
  ConfigMask members_;
};

std::vector<Configuration> enumerate_configurations(const Scope& scope);

// x↓h: keeps only the coordinates of variables in h.
Configuration project_config(const Configuration& x, const Scope& h);

// x↑k: every configuration of k that projects back to x.
ConfigSet extend_config(const Configuration& x, const Scope& k);

// { x↓h : x ∈ a }.
ConfigSet project_config_set(const ConfigSet& a, const Scope& h);

// Cylindrical extension of a set from scope `from` to a superset scope `to`.
ConfigSet extend_config_set(const ConfigSet& a, const Scope& to);

// Index kernels shared by the calculi.

// For every linear index of W_from, the linear index of its projection in
// W_to. Requires to ⊆ from.
std::vector<std::size_t> projection_map(const Scope& from, const Scope& to);

// Frame indices of configuration `index` of `scope`.
std::vector<std::size_t> decode_index(const Scope& scope, std::size_t index);

}  // namespace valnet
