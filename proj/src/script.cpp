#include "valnet/script.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace valnet::script {

namespace {

constexpr std::string_view kPunctuation = "{}[]();:*";

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
  bool punct;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++i;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      advance();
    } else if (kPunctuation.find(ch) != std::string_view::npos) {
      out.push_back({std::string(1, ch), line, column, true});
      advance();
    } else {
      Token t{"", line, column, false};
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             kPunctuation.find(text[i]) == std::string_view::npos && text[i] != '#') {
        t.text += text[i];
        advance();
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s == "true") return 1.0;
  if (s == "false") return 0.0;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto num = parse_number(s.substr(0, slash));
    auto den = parse_number(s.substr(slash + 1));
    if (!num || !den || *den == 0.0 || s.find('/', slash + 1) != std::string::npos) {
      return std::nullopt;
    }
    return *num / *den;
  }
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseContext context, std::size_t end_line,
         std::size_t end_column)
      : tokens_(std::move(tokens)),
        context_(std::move(context)),
        end_line_(end_line),
        end_column_(end_column) {}

  NetworkDocument run() {
    NetworkDocument doc;
    while (pos_ < tokens_.size()) doc.statements.push_back(statement());
    return doc;
  }

  ParseContext& context() { return context_; }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(t.line, t.column, message, false);
  }

  [[noreturn]] void fail_at_end(const std::string& message) const {
    throw ParseError(end_line_, end_column_, message, true);
  }

  const Token& peek() const {
    if (pos_ >= tokens_.size()) fail_at_end("unexpected end of input");
    return tokens_[pos_];
  }

  const Token& next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }

  bool at(std::string_view text) const {
    return pos_ < tokens_.size() && tokens_[pos_].text == text;
  }

  void expect(std::string_view text) {
    const Token& t = next();
    if (t.text != text) fail(t, "expected '" + std::string(text) + "', found '" + t.text + "'");
  }

  std::string word(const char* what) {
    const Token& t = next();
    if (t.punct) fail(t, std::string("expected ") + what + ", found '" + t.text + "'");
    return t.text;
  }

  std::string known_variable(const Token*& where) {
    where = &peek();
    std::string name = word("a variable name");
    if (!context_.variables.contains(name)) fail(*where, "unknown variable '" + name + "'");
    return name;
  }

  std::vector<std::string> declared_order(const Token& where, const std::string& target) {
    if (auto it = context_.relations.find(target); it != context_.relations.end()) {
      return it->second;
    }
    if (context_.variables.contains(target)) return {target};
    fail(where, "unknown variable or relation '" + target + "'");
  }

  void declare(const Token& where, const std::string& name) {
    if (context_.variables.contains(name) || context_.relations.contains(name)) {
      fail(where, "name '" + name + "' is already declared");
    }
  }

  Statement statement() {
    const Token& head = next();
    Statement s;
    s.line = head.line;
    s.column = head.column;
    const std::string& kw = head.text;

    if (kw == "calculus") {
      s.body = CalculusStmt{word("a calculus name")};
    } else if (kw == "var") {
      const Token& where = peek();
      VarDecl v{word("a variable name"), {}};
      declare(where, v.name);
      expect("{");
      while (!at("}")) {
        const Token& t = peek();
        std::string value = word("a frame value");
        for (const auto& existing : v.frame) {
          if (existing == value) fail(t, "frame value '" + value + "' repeated");
        }
        v.frame.push_back(std::move(value));
      }
      expect("}");
      if (v.frame.empty()) fail(where, "variable '" + v.name + "' has an empty frame");
      context_.variables[v.name] = v.frame;
      s.body = std::move(v);
    } else if (kw == "rel") {
      const Token& where = peek();
      RelDecl r{word("a relation name"), {}};
      declare(where, r.name);
      expect("(");
      while (!at(")")) {
        const Token* at_var = nullptr;
        std::string v = known_variable(at_var);
        for (const auto& existing : r.variables) {
          if (existing == v) fail(*at_var, "variable '" + v + "' repeated in relation");
        }
        r.variables.push_back(std::move(v));
      }
      expect(")");
      if (r.variables.empty()) fail(where, "relation '" + r.name + "' has no variables");
      context_.relations[r.name] = r.variables;
      s.body = std::move(r);
    } else if (kw == "val") {
      s.body = valuation();
    } else if (kw == "observe") {
      const Token* where = nullptr;
      Observe o{known_variable(where), ""};
      const Token& vt = peek();
      o.value = word("a frame value");
      const auto& frame = context_.variables.at(o.variable);
      if (std::find(frame.begin(), frame.end(), o.value) == frame.end()) {
        fail(vt, "'" + o.value + "' is not in the frame of '" + o.variable + "'");
      }
      s.body = std::move(o);
    } else if (kw == "retract") {
      const Token* where = nullptr;
      s.body = Retract{known_variable(where)};
    } else if (kw == "propagate") {
      Propagate p;
      if (at("normalized") || at("unnormalized")) p.normalized = next().text == "normalized";
      s.body = p;
    } else if (kw == "query") {
      const Token* where = nullptr;
      s.body = Query{known_variable(where)};
    } else if (kw == "reset") {
      s.body = Reset{};
    } else {
      fail(head, "unknown statement '" + kw + "'");
    }
    return s;
  }

  StatementBody valuation() {
    const Token& where = peek();
    std::string target = word("a valuation target");
    const auto order = declared_order(where, target);
    std::size_t width = 1;
    for (const auto& v : order) width *= context_.variables.at(v).size();
    std::string calculus = word("a calculus name");

    if (at("dense")) {
      next();
      DenseVal d{std::move(target), std::move(calculus), {}};
      expect("[");
      while (!at("]")) {
        const Token& t = next();
        auto value = t.punct ? std::nullopt : parse_number(t.text);
        if (!value) fail(t, "expected a number, found '" + t.text + "'");
        d.values.push_back(*value);
      }
      const Token& close = peek();
      expect("]");
      if (d.values.size() != width) {
        fail(close, "valuation for '" + d.target + "' needs " + std::to_string(width) +
                        " values, got " + std::to_string(d.values.size()));
      }
      return d;
    }

    MassVal m{std::move(target), std::move(calculus), {}};
    expect("{");
    double sum = 0.0;
    while (!at("}")) {
      const Token& mt = next();
      auto mass = mt.punct ? std::nullopt : parse_number(mt.text);
      if (!mass) fail(mt, "expected a mass, found '" + mt.text + "'");
      if (!(*mass >= 0.0 && *mass <= 1.0)) fail(mt, "mass " + mt.text + " is outside [0,1]");
      expect(":");
      FocalEntry entry;
      entry.mass = *mass;
      if (at("*")) {
        next();
        entry.whole = true;
      } else {
        expect("{");
        while (!at("}")) entry.tuples.push_back(tuple(order));
        expect("}");
        if (entry.tuples.empty()) fail(mt, "focal sets must be non-empty");
      }
      sum += entry.mass;
      m.entries.push_back(std::move(entry));
      if (at(";")) {
        next();
      } else if (!at("}")) {
        fail(peek(), "expected ';' or '}', found '" + peek().text + "'");
      }
    }
    const Token& close = peek();
    expect("}");
    if (sum > 1.0 + 1e-9) fail(close, "masses sum to more than 1");
    if (1.0 - sum > 1e-12) {
      auto whole = std::find_if(m.entries.begin(), m.entries.end(),
                                [](const FocalEntry& e) { return e.whole; });
      if (whole != m.entries.end()) {
        whole->mass += 1.0 - sum;
      } else {
        m.entries.push_back(FocalEntry{1.0 - sum, true, {}});
      }
    }
    return m;
  }

  std::vector<std::string> tuple(const std::vector<std::string>& order) {
    std::vector<std::string> values;
    const Token& start = peek();
    if (at("(")) {
      next();
      while (!at(")")) values.push_back(word("a frame value"));
      expect(")");
    } else {
      values.push_back(word("a configuration"));
    }
    if (values.size() != order.size()) {
      fail(start, "configuration needs " + std::to_string(order.size()) + " values, got " +
                      std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& frame = context_.variables.at(order[i]);
      if (std::find(frame.begin(), frame.end(), values[i]) == frame.end()) {
        fail(start, "'" + values[i] + "' is not in the frame of '" + order[i] + "'");
      }
    }
    return values;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseContext context_;
  std::size_t end_line_;
  std::size_t end_column_;
};

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void join(std::string& out, const std::vector<std::string>& items) {
  for (const auto& s : items) out += " " + s;
}

}  // namespace

NetworkDocument parse(std::string_view text, ParseContext& context) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (char ch : text) {
    if (ch == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  Parser parser(tokenize(text), context, line, column);
  NetworkDocument doc = parser.run();
  context = std::move(parser.context());
  return doc;
}

NetworkDocument parse(std::string_view text) {
  ParseContext context;
  return parse(text, context);
}

std::string print(const NetworkDocument& document) {
  std::string out;
  for (const auto& st : document.statements) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, CalculusStmt>) {
            out += "calculus " + s.name;
          } else if constexpr (std::is_same_v<T, VarDecl>) {
            out += "var " + s.name + " {";
            join(out, s.frame);
            out += " }";
          } else if constexpr (std::is_same_v<T, RelDecl>) {
            out += "rel " + s.name + " (";
            join(out, s.variables);
            out += " )";
          } else if constexpr (std::is_same_v<T, DenseVal>) {
            out += "val " + s.target + " " + s.calculus + " dense [";
            for (double v : s.values) out += " " + number(v);
            out += " ]";
          } else if constexpr (std::is_same_v<T, MassVal>) {
            out += "val " + s.target + " " + s.calculus + " {";
            for (std::size_t i = 0; i < s.entries.size(); ++i) {
              const auto& e = s.entries[i];
              out += (i ? " ; " : " ") + number(e.mass) + " :";
              if (e.whole) {
                out += " *";
                continue;
              }
              out += " {";
              for (const auto& t : e.tuples) {
                out += " (";
                join(out, t);
                out += " )";
              }
              out += " }";
            }
            out += " }";
          } else if constexpr (std::is_same_v<T, Observe>) {
            out += "observe " + s.variable + " " + s.value;
          } else if constexpr (std::is_same_v<T, Retract>) {
            out += "retract " + s.variable;
          } else if constexpr (std::is_same_v<T, Propagate>) {
            out += "propagate";
            if (s.normalized) out += *s.normalized ? " normalized" : " unnormalized";
          } else if constexpr (std::is_same_v<T, Query>) {
            out += "query " + s.variable;
          } else {
            out += "reset";
          }
        },
        st.body);
    out += "\n";
  }
  return out;
}

}  // namespace valnet::script
