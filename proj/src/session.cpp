#include "valnet/session.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "valnet/error.hpp"

namespace valnet {

std::string format_fixed3(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const double scaled = value * 1000.0;
  double whole = std::floor(scaled);
  const double frac = scaled - whole;
  if (std::abs(frac - 0.5) < 1e-6) {
    if (std::fmod(whole, 2.0) != 0.0) whole += 1.0;
  } else if (frac > 0.5) {
    whole += 1.0;
  }
  const auto q = static_cast<long long>(whole);
  if (q == 0) return "0.000";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", q < 0 ? "-" : "", std::llabs(q) / 1000,
                std::llabs(q) % 1000);
  return buf;
}

namespace {

constexpr std::size_t kCellWidth = 8;

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;  // count UTF-8 lead bytes
  }
  return n;
}

std::string pad_left(std::string_view s, std::size_t width) {
  const std::size_t w = display_width(s);
  return std::string(w < width ? width - w : 0, ' ') + std::string(s);
}

std::string pad_right(std::string_view s, std::size_t width) {
  const std::size_t w = display_width(s);
  return std::string(s) + std::string(w < width ? width - w : 0, ' ');
}

}  // namespace

std::string render(const MarginalReadout& r, const RenderContext& context) {
  std::size_t label = std::string_view("value").size();
  for (const auto& v : r.values) label = std::max(label, display_width(v));
  label = std::max(label, std::string_view("conflict").size());

  std::string out = r.variable + " [" + context.calculus + ", " +
                    (context.normalized && !context.degenerate ? "normalized" : "unnormalized") +
                    "]\n";
  out += pad_right("value", label);
  for (const auto& c : r.columns) out += pad_left(c, kCellWidth);
  out += "\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    out += pad_right(r.values[i], label);
    for (double x : r.rows[i]) {
      out += pad_left(r.truth_values ? (x != 0.0 ? "true" : "false") : format_fixed3(x),
                      kCellWidth);
    }
    out += "\n";
  }
  if (!context.normalized || context.degenerate) {
    if (r.total) out += pad_right("total", label) + pad_left(format_fixed3(*r.total), kCellWidth) + "\n";
    if (r.conflict) {
      out += pad_right("conflict", label) + pad_left(format_fixed3(*r.conflict), kCellWidth) + "\n";
    }
  }
  if (context.degenerate) out += "degenerate: the evidence is totally contradictory\n";
  return out;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(const Registry& registry, RunOptions options)
    : registry_(registry), options_(std::move(options)) {
  if (options_.calculus) {
    registry_.get(*options_.calculus);
    active_ = *options_.calculus;
  }
}

std::size_t Session::execute(const script::NetworkDocument& document, std::ostream& out,
                             std::ostream& err) {
  std::size_t failures = 0;
  for (const auto& st : document.statements) {
    try {
      apply(st, out);
    } catch (const Error& e) {
      ++failures;
      err << st.line << ":" << st.column << ": error: " << e.what() << "\n";
    }
  }
  return failures;
}

Valuation Session::build(const script::DenseVal& val) const {
  const Calculus& calculus = registry_.get(val.calculus);
  if (calculus.representation != Representation::point) {
    throw Error(ErrorCode::kind_mismatch,
                "calculus '" + calculus.name + "' does not take dense tables");
  }
  const Scope scope = system_.target_scope(val.target);
  std::vector<std::string> order{val.target};
  if (system_.has_relation(val.target)) order = system_.relation(val.target).declared_order;

  // Input is row-major over the declared order; the table is row-major over
  // the canonical order.
  std::vector<std::size_t> stride(scope.size());
  std::size_t s = 1;
  for (std::size_t i = order.size(); i-- > 0;) {
    const std::size_t pos = *scope.position(order[i]);
    stride[pos] = s;
    s *= scope[pos].frame_size();
  }
  if (val.values.size() != scope.configuration_count()) {
    throw Error(ErrorCode::invalid_value,
                "'" + val.target + "' needs " + std::to_string(scope.configuration_count()) +
                    " values, got " + std::to_string(val.values.size()));
  }
  std::vector<double> table(scope.configuration_count());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto digits = decode_index(scope, i);
    std::size_t src = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) src += digits[k] * stride[k];
    table[i] = val.values.at(src);
  }
  return PointValuation(scope, calculus.point_kind, std::move(table));
}

Valuation Session::build(const script::MassVal& val) const {
  const Calculus& calculus = registry_.get(val.calculus);
  if (calculus.representation != Representation::mass) {
    throw Error(ErrorCode::kind_mismatch,
                "calculus '" + calculus.name + "' does not take mass assignments");
  }
  const Scope scope = system_.target_scope(val.target);
  std::vector<std::string> order{val.target};
  if (system_.has_relation(val.target)) order = system_.relation(val.target).declared_order;

  MassValuation m(scope);
  for (const auto& entry : val.entries) {
    if (entry.whole) {
      m.add(ConfigSet::whole(scope), entry.mass);
      continue;
    }
    std::vector<Configuration> members;
    for (const auto& tuple : entry.tuples) {
      if (tuple.size() != order.size()) {
        throw Error(ErrorCode::invalid_value, "tuple of " + std::to_string(tuple.size()) +
                                                  " values for '" + val.target + "', expected " +
                                                  std::to_string(order.size()));
      }
      std::vector<std::string> canonical(scope.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        canonical[*scope.position(order[i])] = tuple.at(i);
      }
      members.push_back(Configuration::of(scope, canonical));
    }
    m.add(ConfigSet::of(scope, members), entry.mass);
  }
  return m;
}

void Session::apply(const script::Statement& st, std::ostream& out) {
  using namespace script;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CalculusStmt>) {
          registry_.get(s.name);
          if (!options_.calculus) active_ = s.name;
          stale_ = true;
        } else if constexpr (std::is_same_v<T, VarDecl>) {
          system_.add_variable(s.name, s.frame);
          context_.variables[s.name] = s.frame;
          stale_ = true;
        } else if constexpr (std::is_same_v<T, RelDecl>) {
          system_.add_relation(s.name, s.variables);
          context_.relations[s.name] = s.variables;
          stale_ = true;
        } else if constexpr (std::is_same_v<T, DenseVal> || std::is_same_v<T, MassVal>) {
          system_.attach_valuation(s.target, registry_.get(s.calculus), build(s));
          stale_ = true;
        } else if constexpr (std::is_same_v<T, Observe>) {
          system_.observe(s.variable, s.value);
          stale_ = true;
        } else if constexpr (std::is_same_v<T, Retract>) {
          system_.retract(s.variable);
          stale_ = true;
        } else if constexpr (std::is_same_v<T, Reset>) {
          system_.clear_evidence();
          result_.reset();
          stale_ = true;
        } else if constexpr (std::is_same_v<T, Propagate>) {
          if (options_.structural_only) return;
          const Calculus& calculus = registry_.get(active_);
          PropagationOptions po;
          po.normalized = s.normalized.value_or(true) && !options_.force_unnormalized;
          result_ = evaluate(system_, calculus, po);
          stale_ = false;
          if (options_.oracle_check) {
            OracleOptions oo;
            oo.normalized = po.normalized;
            const auto oracle = global_evaluate(system_, calculus, oo);
            for (const auto& [name, m] : result_->marginals) {
              const double d = distance(m.valuation, oracle.marginals.at(name).valuation);
              if (!(d <= 1e-9)) {
                throw Error(ErrorCode::model_error, "oracle check failed for '" + name +
                                                        "' (deviation " + std::to_string(d) + ")");
              }
            }
          }
        } else if constexpr (std::is_same_v<T, Query>) {
          if (options_.structural_only) return;
          if (!result_ || stale_) {
            throw Error(ErrorCode::stale_result,
                        "query " + s.variable + " needs a propagate after the last change");
          }
          const Calculus& calculus = registry_.get(result_->calculus);
          const auto& stored = result_->marginals.find(s.variable);
          if (stored == result_->marginals.end()) {
            throw Error(ErrorCode::unknown_name, "unknown variable '" + s.variable + "'");
          }
          RenderContext rc{calculus.name, result_->normalized, stored->second.degenerate};
          out << render(marginal(*result_, s.variable, calculus), rc) << "\n";
        }
      },
      st.body);
}

}  // namespace valnet
