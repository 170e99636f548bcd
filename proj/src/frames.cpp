#include "valnet/frames.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "valnet/error.hpp"

namespace valnet {

namespace {

void require_subset(const Scope& small, const Scope& big, const char* what) {
  if (!small.is_subset_of(big)) {
    throw Error(ErrorCode::scope_mismatch, std::string(what) + ": " +
                                               small.to_string() + " is not a subset of " +
                                               big.to_string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Variable

Variable::Variable(std::string name, std::vector<std::string> frame)
    : name_(std::move(name)), frame_(std::move(frame)) {
  if (name_.empty()) {
    throw Error(ErrorCode::invalid_value, "variable name must be non-empty");
  }
  if (frame_.empty()) {
    throw Error(ErrorCode::invalid_value, "variable '" + name_ + "' has an empty frame");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& v : frame_) {
    if (!seen.insert(v).second) {
      throw Error(ErrorCode::duplicate_name,
                  "variable '" + name_ + "' repeats frame value '" + v + "'");
    }
  }
}

std::optional<std::size_t> Variable::index_of(std::string_view value) const {
  auto it = std::find(frame_.begin(), frame_.end(), value);
  if (it == frame_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - frame_.begin());
}

// ---------------------------------------------------------------------------
// Scope

Scope::Scope(std::vector<Variable> variables) : variables_(std::move(variables)) {
  std::sort(variables_.begin(), variables_.end(),
            [](const Variable& a, const Variable& b) { return a.name() < b.name(); });
  for (std::size_t i = 1; i < variables_.size(); ++i) {
    if (variables_[i - 1].name() == variables_[i].name()) {
      throw Error(ErrorCode::duplicate_name,
                  "variable '" + variables_[i].name() + "' appears twice in a scope");
    }
  }
}

std::size_t Scope::configuration_count() const noexcept {
  std::size_t n = 1;
  for (const auto& v : variables_) n *= v.frame_size();
  return n;
}

std::optional<std::size_t> Scope::position(std::string_view name) const {
  auto it = std::lower_bound(variables_.begin(), variables_.end(), name,
                             [](const Variable& v, std::string_view n) { return v.name() < n; });
  if (it == variables_.end() || it->name() != name) return std::nullopt;
  return static_cast<std::size_t>(it - variables_.begin());
}

bool Scope::contains(std::string_view name) const { return position(name).has_value(); }

std::vector<std::string> Scope::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name());
  return out;
}

std::string Scope::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (i) s += ",";
    s += variables_[i].name();
  }
  return s + "}";
}

bool Scope::is_subset_of(const Scope& other) const {
  for (const auto& v : variables_) {
    auto pos = other.position(v.name());
    if (!pos || other.variables_[*pos] != v) return false;
  }
  return true;
}

Scope Scope::union_with(const Scope& other) const {
  std::vector<Variable> merged = variables_;
  for (const auto& v : other.variables_) {
    auto pos = position(v.name());
    if (!pos) {
      merged.push_back(v);
    } else if (variables_[*pos] != v) {
      throw Error(ErrorCode::model_error,
                  "variable '" + v.name() + "' is used with two different frames");
    }
  }
  return Scope(std::move(merged));
}

Scope Scope::intersect(const Scope& other) const {
  std::vector<Variable> out;
  for (const auto& v : variables_) {
    if (other.contains(v.name())) out.push_back(v);
  }
  return Scope(std::move(out));
}

Scope Scope::minus(const Scope& other) const {
  std::vector<Variable> out;
  for (const auto& v : variables_) {
    if (!other.contains(v.name())) out.push_back(v);
  }
  return Scope(std::move(out));
}

std::strong_ordering Scope::operator<=>(const Scope& other) const {
  const std::size_t n = std::min(size(), other.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = variables_[i].name() <=> other.variables_[i].name(); c != 0) return c;
  }
  return size() <=> other.size();
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(Scope scope, std::vector<std::size_t> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  if (values_.size() != scope_.size()) {
    throw Error(ErrorCode::scope_mismatch, "configuration length " +
                                               std::to_string(values_.size()) +
                                               " does not match scope " + scope_.to_string());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= scope_[i].frame_size()) {
      throw Error(ErrorCode::invalid_value,
                  "frame index out of range for variable '" + scope_[i].name() + "'");
    }
  }
}

Configuration Configuration::of(const Scope& scope, const std::vector<std::string>& values) {
  if (values.size() != scope.size()) {
    throw Error(ErrorCode::scope_mismatch, "configuration length does not match scope " +
                                               scope.to_string());
  }
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto pos = scope[i].index_of(values[i]);
    if (!pos) {
      throw Error(ErrorCode::unknown_name, "'" + values[i] + "' is not in the frame of '" +
                                               scope[i].name() + "'");
    }
    idx[i] = *pos;
  }
  return Configuration(scope, std::move(idx));
}

std::size_t Configuration::linear_index() const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    index = index * scope_[i].frame_size() + values_[i];
  }
  return index;
}

std::string Configuration::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) s += " ";
    s += scope_[i].frame()[values_[i]];
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// ConfigMask

ConfigMask::ConfigMask(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

ConfigMask ConfigMask::full(std::size_t bits) {
  ConfigMask m(bits);
  for (auto& w : m.words_) w = ~std::uint64_t{0};
  if (bits % 64 != 0 && !m.words_.empty()) {
    m.words_.back() = (std::uint64_t{1} << (bits % 64)) - 1;
  }
  return m;
}

void ConfigMask::set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

bool ConfigMask::test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

std::size_t ConfigMask::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool ConfigMask::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool ConfigMask::all() const noexcept { return count() == bits_; }

ConfigMask& ConfigMask::operator&=(const ConfigMask& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ConfigMask& ConfigMask::operator|=(const ConfigMask& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

std::vector<std::size_t> ConfigMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::strong_ordering ConfigMask::operator<=>(const ConfigMask& other) const {
  if (auto c = bits_ <=> other.bits_; c != 0) return c;
  return words_ <=> other.words_;
}

// ---------------------------------------------------------------------------
// ConfigSet

ConfigSet::ConfigSet(Scope scope, ConfigMask members)
    : scope_(std::move(scope)), members_(std::move(members)) {
  if (members_.bit_count() != scope_.configuration_count()) {
    throw Error(ErrorCode::scope_mismatch,
                "configuration set width does not match scope " + scope_.to_string());
  }
}

ConfigSet ConfigSet::of(const Scope& scope, const std::vector<Configuration>& members) {
  ConfigMask mask(scope.configuration_count());
  for (const auto& x : members) {
    if (x.scope() != scope) {
      throw Error(ErrorCode::scope_mismatch, "configuration " + x.to_string() +
                                                 " is not over " + scope.to_string());
    }
    mask.set(x.linear_index());
  }
  return ConfigSet(scope, std::move(mask));
}

ConfigSet ConfigSet::whole(const Scope& scope) {
  return ConfigSet(scope, ConfigMask::full(scope.configuration_count()));
}

bool ConfigSet::contains(const Configuration& x) const {
  return x.scope() == scope_ && members_.test(x.linear_index());
}

std::vector<Configuration> ConfigSet::configurations() const {
  std::vector<Configuration> out;
  for (auto i : members_.indices()) out.emplace_back(scope_, decode_index(scope_, i));
  return out;
}

// ---------------------------------------------------------------------------
// Operations

std::vector<std::size_t> decode_index(const Scope& scope, std::size_t index) {
  std::vector<std::size_t> values(scope.size());
  for (std::size_t i = scope.size(); i-- > 0;) {
    values[i] = index % scope[i].frame_size();
    index /= scope[i].frame_size();
  }
  return values;
}

std::vector<Configuration> enumerate_configurations(const Scope& scope) {
  const std::size_t n = scope.configuration_count();
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(scope, decode_index(scope, i));
  return out;
}

std::vector<std::size_t> projection_map(const Scope& from, const Scope& to) {
  require_subset(to, from, "projection");
  // Stride in W_to of each coordinate of `from` (0 when the variable is dropped).
  std::vector<std::size_t> stride(from.size(), 0);
  std::size_t s = 1;
  for (std::size_t j = to.size(); j-- > 0;) {
    stride[*from.position(to[j].name())] = s;
    s *= to[j].frame_size();
  }

  const std::size_t n = from.configuration_count();
  std::vector<std::size_t> out(n);
  std::vector<std::size_t> digits(from.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = target;
    // Odometer increment over `from`, last coordinate fastest.
    for (std::size_t k = from.size(); k-- > 0;) {
      if (++digits[k] < from[k].frame_size()) {
        target += stride[k];
        break;
      }
      target -= stride[k] * (digits[k] - 1);
      digits[k] = 0;
    }
  }
  return out;
}

Configuration project_config(const Configuration& x, const Scope& h) {
  require_subset(h, x.scope(), "project_config");
  std::vector<std::size_t> values;
  values.reserve(h.size());
  for (const auto& v : h.variables()) values.push_back(x.values()[*x.scope().position(v.name())]);
  return Configuration(h, std::move(values));
}

ConfigSet extend_config(const Configuration& x, const Scope& k) {
  require_subset(x.scope(), k, "extend_config");
  const auto map = projection_map(k, x.scope());
  const std::size_t target = x.linear_index();
  ConfigMask mask(k.configuration_count());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] == target) mask.set(i);
  }
  return ConfigSet(k, std::move(mask));
}

ConfigSet project_config_set(const ConfigSet& a, const Scope& h) {
  const auto map = projection_map(a.scope(), h);
  ConfigMask mask(h.configuration_count());
  for (auto i : a.mask().indices()) mask.set(map[i]);
  return ConfigSet(h, std::move(mask));
}

ConfigSet extend_config_set(const ConfigSet& a, const Scope& to) {
  const auto map = projection_map(to, a.scope());
  ConfigMask mask(to.configuration_count());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (a.mask().test(map[i])) mask.set(i);
  }
  return ConfigSet(to, std::move(mask));
}

}  // namespace valnet
