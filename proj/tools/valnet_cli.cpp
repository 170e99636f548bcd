// valnet: load a network description, run it, and print marginal tables.
//
//   valnet run <file> [--calculus NAME] [--unnormalized] [--oracle-check]
//   valnet repl <file>
//   valnet validate <file>
//
// Exit codes: 0 ok, 1 statement error, 2 parse error.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "valnet/error.hpp"
#include "valnet/session.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kStatementError = 1;
constexpr int kParseError = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses and executes `text`; returns an exit code.
int load(valnet::Session& session, const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return kParseError;
  }
  valnet::script::NetworkDocument doc;
  try {
    valnet::script::ParseContext scratch = session.parse_context();
    doc = valnet::script::parse(*text, scratch);
  } catch (const valnet::script::ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": parse error: " << e.what()
              << "\n";
    return kParseError;
  }
  const std::size_t failures = session.execute(doc, std::cout, std::cerr);
  return failures == 0 ? kOk : kStatementError;
}

int repl(valnet::Session& session, const std::string& path) {
  int status = load(session, path);
  if (status == kParseError) return status;

  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::string buffer;
  std::string line;
  if (interactive) std::cerr << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    buffer += line;
    buffer += "\n";
    valnet::script::ParseContext scratch = session.parse_context();
    try {
      auto doc = valnet::script::parse(buffer, scratch);
      buffer.clear();
      if (session.execute(doc, std::cout, std::cerr) != 0) status = kStatementError;
    } catch (const valnet::script::ParseError& e) {
      if (!e.at_end()) {
        std::cerr << "<stdin>:" << e.line() << ":" << e.column() << ": parse error: " << e.what()
                  << "\n";
        buffer.clear();
        status = kStatementError;
      }
    }
    if (interactive) std::cerr << (buffer.empty() ? "> " : ". ") << std::flush;
  }
  return status;
}

int validate(const valnet::Registry& registry, const std::string& path) {
  valnet::RunOptions options;
  options.structural_only = true;
  valnet::Session session(registry, options);
  const int status = load(session, path);
  if (status == kParseError) return status;

  bool ok = status == kOk;
  for (const auto& name : registry.names()) {
    const auto hg = valnet::build_hypergraph(session.system(), name);
    if (hg.nodes.empty()) continue;
    const auto tree = valnet::build_markov_tree(hg);
    const auto report = valnet::validate_tree(tree, hg);
    std::cout << name << ": " << hg.edges.size() << " hyperedges, " << tree.clusters.size()
              << " clusters, " << tree.edges.size() << " edges: "
              << (report.ok() ? "ok" : "INVALID") << "\n";
    for (const auto& v : report.violations) std::cout << "  " << v << "\n";
    ok = ok && report.ok();
  }
  return ok ? kOk : kStatementError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty propagation in valuation networks"};
  app.require_subcommand(1);

  std::string file;
  std::string calculus;
  bool unnormalized = false;
  bool oracle_check = false;

  auto* run = app.add_subcommand("run", "Execute a network description");
  run->add_option("file", file, "Network description")->required();
  run->add_option("--calculus", calculus, "Use this calculus for every propagation");
  run->add_flag("--unnormalized", unnormalized, "Report unnormalized marginals");
  run->add_flag("--oracle-check", oracle_check,
                "Check every propagation against brute-force global evaluation");

  auto* rp = app.add_subcommand("repl", "Execute a file, then read statements from stdin");
  rp->add_option("file", file, "Network description")->required();

  auto* val = app.add_subcommand("validate", "Parse and check the Markov trees only");
  val->add_option("file", file, "Network description")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kParseError;
  }

  const valnet::Registry registry = valnet::Registry::with_builtins();
  try {
    if (*val) return validate(registry, file);

    valnet::RunOptions options;
    if (!calculus.empty()) options.calculus = calculus;
    options.force_unnormalized = unnormalized;
    options.oracle_check = oracle_check;
    valnet::Session session(registry, options);
    return *run ? load(session, file) : repl(session, file);
  } catch (const valnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStatementError;
  }
}
