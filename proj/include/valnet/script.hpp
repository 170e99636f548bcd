#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace valnet::script {

// Statement forms of the network description language:
//
//   calculus <name>
//   var <Name> { v1 v2 ... }
//   rel <name> ( V1 V2 ... )
//   val <target> <calculus> dense [ x1 x2 ... ]      row-major, declared order
//   val <target> <calculus> { m : { (v1 v2) ... } ; ... ; m : * }
//   observe <Var> <value>
//   retract <Var>
//   propagate [normalized|unnormalized]
//   query <Var>
//   reset
//
// `#` starts a comment. Newlines are not significant.

struct CalculusStmt {
  std::string name;
  bool operator==(const CalculusStmt&) const = default;
};

struct VarDecl {
  std::string name;
  std::vector<std::string> frame;
  bool operator==(const VarDecl&) const = default;
};

struct RelDecl {
  std::string name;
  std::vector<std::string> variables;
  bool operator==(const RelDecl&) const = default;
};

struct DenseVal {
  std::string target;
  std::string calculus;
  std::vector<double> values;  // row-major over the target's declared order
  bool operator==(const DenseVal&) const = default;
};

struct FocalEntry {
  double mass = 0.0;
  bool whole = false;                            // `*`
  std::vector<std::vector<std::string>> tuples;  // declared order
  bool operator==(const FocalEntry&) const = default;
};

struct MassVal {
  std::string target;
  std::string calculus;
  std::vector<FocalEntry> entries;  // includes the auto-completed `*` entry
  bool operator==(const MassVal&) const = default;
};

struct Observe {
  std::string variable;
  std::string value;
  bool operator==(const Observe&) const = default;
};

struct Retract {
  std::string variable;
  bool operator==(const Retract&) const = default;
};

struct Propagate {
  std::optional<bool> normalized;
  bool operator==(const Propagate&) const = default;
};

struct Query {
  std::string variable;
  bool operator==(const Query&) const = default;
};

struct Reset {
  bool operator==(const Reset&) const = default;
};

using StatementBody = std::variant<CalculusStmt, VarDecl, RelDecl, DenseVal, MassVal, Observe,
                                   Retract, Propagate, Query, Reset>;

struct Statement {
  std::size_t line = 0;
  std::size_t column = 0;
  StatementBody body;

  // Structural equality; source positions are ignored.
  bool operator==(const Statement& other) const { return body == other.body; }
};

struct NetworkDocument {
  std::vector<Statement> statements;
  bool operator==(const NetworkDocument&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message, bool at_end)
      : std::runtime_error(message), line_(line), column_(column), at_end_(at_end) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  // The input ended in the middle of a statement.
  bool at_end() const noexcept { return at_end_; }

 private:
  std::size_t line_;
  std::size_t column_;
  bool at_end_;
};

// Names declared so far; lets a parse continue an earlier one (REPL).
struct ParseContext {
  std::map<std::string, std::vector<std::string>, std::less<>> variables;  // name -> frame
  std::map<std::string, std::vector<std::string>, std::less<>> relations;  // name -> vars
};

// Throws ParseError. `context` is updated only when the whole text parses.
NetworkDocument parse(std::string_view text, ParseContext& context);
NetworkDocument parse(std::string_view text);

// Canonical text form; parse(print(doc)) == doc.
std::string print(const NetworkDocument& document);

}  // namespace valnet::script
