#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "valnet/axioms.hpp"
#include "valnet/error.hpp"
#include "valnet/session.hpp"

namespace py = pybind11;
using namespace valnet;

namespace {

const Registry& builtins() {
  static const Registry registry = Registry::with_builtins();
  return registry;
}

using Tuples = std::vector<std::vector<std::string>>;
using MassEntry = std::pair<double, std::optional<Tuples>>;

class Network {
 public:
  Network(std::optional<std::string> calculus, bool unnormalized, bool oracle_check)
      : session_(builtins(), options(std::move(calculus), unnormalized, oracle_check)) {}

  // Runs script text; returns the rendered query output.
  std::string execute(const std::string& text) {
    script::ParseContext scratch = session_.parse_context();
    script::NetworkDocument doc;
    try {
      doc = script::parse(text, scratch);
    } catch (const script::ParseError& e) {
      throw py::value_error(std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                            ": parse error: " + e.what());
    }
    return run(doc);
  }

  void add_variable(const std::string& name, const std::vector<std::string>& frame) {
    run_one(script::VarDecl{name, frame});
  }
  void add_relation(const std::string& name, const std::vector<std::string>& variables) {
    run_one(script::RelDecl{name, variables});
  }
  void set_table(const std::string& target, const std::string& calculus,
                 const std::vector<double>& values) {
    run_one(script::DenseVal{target, calculus, values});
  }
  // entries: (mass, [tuple, ...]) pairs; None instead of a list means the
  // whole frame. Unassigned mass goes to the whole frame.
  void set_masses(const std::string& target, const std::string& calculus,
                  const std::vector<MassEntry>& entries) {
    script::MassVal m{target, calculus, {}};
    double sum = 0.0;
    for (const auto& [mass, tuples] : entries) {
      script::FocalEntry e{mass, !tuples.has_value(), {}};
      if (tuples) e.tuples = *tuples;
      m.entries.push_back(std::move(e));
      sum += mass;
    }
    if (sum > 1.0 + 1e-9) throw py::value_error("masses sum to more than 1");
    if (1.0 - sum > 1e-12) m.entries.push_back(script::FocalEntry{1.0 - sum, true, {}});
    run_one(m);
  }
  void use(const std::string& calculus) { run_one(script::CalculusStmt{calculus}); }
  void observe(const std::string& variable, const std::string& value) {
    run_one(script::Observe{variable, value});
  }
  void retract(const std::string& variable) { run_one(script::Retract{variable}); }
  void reset() { run_one(script::Reset{}); }
  void propagate(std::optional<bool> normalized) { run_one(script::Propagate{normalized}); }
  std::string query(const std::string& variable) { return run_one(script::Query{variable}); }

  py::dict marginal(const std::string& variable) const {
    const auto& result = session_.last_result();
    if (!result) throw py::value_error("no propagation has been run");
    const auto it = result->marginals.find(variable);
    if (it == result->marginals.end()) throw py::key_error(variable);
    const auto r = valnet::marginal(*result, variable, builtins().get(result->calculus));
    py::dict out;
    out["variable"] = r.variable;
    out["calculus"] = result->calculus;
    out["normalized"] = result->normalized && !it->second.degenerate;
    out["degenerate"] = it->second.degenerate;
    out["columns"] = r.columns;
    py::dict rows;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      if (r.truth_values) {
        rows[py::str(r.values[i])] = r.rows[i][0] != 0.0;
      } else if (r.rows[i].size() == 1) {
        rows[py::str(r.values[i])] = r.rows[i][0];
      } else {
        rows[py::str(r.values[i])] = py::tuple(py::cast(r.rows[i]));
      }
    }
    out["rows"] = rows;
    out["total"] = r.total ? py::cast(*r.total) : py::none();
    out["conflict"] = r.conflict ? py::cast(*r.conflict) : py::none();
    return out;
  }

  py::dict tree(const std::string& calculus) const {
    const auto hg = build_hypergraph(session_.system(), calculus);
    const auto t = build_markov_tree(hg);
    py::list clusters;
    for (const auto& c : t.clusters) clusters.append(c.names());
    py::list edges;
    for (const auto& e : t.edges) edges.append(py::make_tuple(e.a, e.b, e.separator.names()));
    py::dict out;
    out["clusters"] = clusters;
    out["edges"] = edges;
    out["violations"] = validate_tree(t, hg).violations;
    return out;
  }

  std::string active_calculus() const { return session_.active_calculus(); }
  std::vector<std::string> variables() const {
    std::vector<std::string> names;
    for (const auto& v : session_.system().variables()) names.push_back(v.name());
    return names;
  }

 private:
  static RunOptions options(std::optional<std::string> calculus, bool unnormalized,
                            bool oracle_check) {
    RunOptions o;
    o.calculus = std::move(calculus);
    o.force_unnormalized = unnormalized;
    o.oracle_check = oracle_check;
    return o;
  }

  std::string run_one(script::StatementBody body) {
    script::NetworkDocument doc;
    doc.statements.push_back(script::Statement{0, 0, std::move(body)});
    return run(doc);
  }

  std::string run(const script::NetworkDocument& doc) {
    std::ostringstream out, err;
    if (session_.execute(doc, out, err) != 0) {
      std::string message = err.str();
      if (!message.empty() && message.back() == '\n') message.pop_back();
      throw py::value_error(message);
    }
    return out.str();
  }

  Session session_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uncertainty propagation in valuation networks";

  py::class_<Network>(m, "Network")
      .def(py::init<std::optional<std::string>, bool, bool>(), py::arg("calculus") = py::none(),
           py::arg("unnormalized") = false, py::arg("oracle_check") = false)
      .def("execute", &Network::execute, py::arg("text"))
      .def("add_variable", &Network::add_variable, py::arg("name"), py::arg("frame"))
      .def("add_relation", &Network::add_relation, py::arg("name"), py::arg("variables"))
      .def("set_table", &Network::set_table, py::arg("target"), py::arg("calculus"),
           py::arg("values"))
      .def("set_masses", &Network::set_masses, py::arg("target"), py::arg("calculus"),
           py::arg("entries"))
      .def("use", &Network::use, py::arg("calculus"))
      .def("observe", &Network::observe, py::arg("variable"), py::arg("value"))
      .def("retract", &Network::retract, py::arg("variable"))
      .def("reset", &Network::reset)
      .def("propagate", &Network::propagate, py::arg("normalized") = py::none())
      .def("query", &Network::query, py::arg("variable"))
      .def("marginal", &Network::marginal, py::arg("variable"))
      .def("tree", &Network::tree, py::arg("calculus"))
      .def_property_readonly("calculus", &Network::active_calculus)
      .def_property_readonly("variables", &Network::variables);

  m.def("calculi", [] { return builtins().names(); });

  m.def(
      "check_axioms",
      [](const std::string& calculus, std::size_t instances, std::uint64_t seed, double tolerance) {
        AxiomOptions o;
        o.instances = instances;
        o.seed = seed;
        o.tolerance = tolerance;
        const auto r = check_axioms(builtins().get(calculus), o);
        py::dict out;
        out["instances"] = r.instances;
        out["commutativity"] = r.commutativity_failures;
        out["associativity"] = r.associativity_failures;
        out["consonance"] = r.consonance_failures;
        out["distributivity"] = r.distributivity_failures;
        out["max_deviation"] = r.max_deviation;
        out["passed"] = r.passed();
        return out;
      },
      py::arg("calculus"), py::arg("instances") = 500, py::arg("seed") = 1,
      py::arg("tolerance") = 1e-9);

  m.def(
      "format_script",
      [](const std::string& text) {
        try {
          return script::print(script::parse(text));
        } catch (const script::ParseError& e) {
          throw py::value_error(std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                ": parse error: " + e.what());
        }
      },
      py::arg("text"));

  m.def("format_fixed3", &format_fixed3, py::arg("value"));

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
}
