#pragma once

// Scenario files: JSON documents naming coefficient systems, solutions and a
// list of analyses. Loading validates everything up front (unknown fields,
// dangling references, intervals outside domains) so a run never fails on
// malformed input halfway through.

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sturmlab/coeff.hpp"
#include "sturmlab/linsys.hpp"

namespace sturmlab::cli {

using json = nlohmann::ordered_json;

class ScenarioError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Numbers may be given as JSON numbers or as small arithmetic expressions
// over pi: "pi", "2*pi", "-pi/2", "2*pi+0.2", "(1+pi)/3".

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw ScenarioError("bad number expression \"" + s_ + "\": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  double term() {
    double v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) v /= factor();
      else return v;
    }
  }
  double factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    skip();
    if (s_.compare(i_, 2, "pi") == 0) {
      i_ += 2;
      return std::numbers::pi;
    }
    const char* begin = s_.c_str() + i_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number or pi");
    i_ += static_cast<std::size_t>(end - begin);
    return v;
  }
};

}  // namespace detail

inline double parse_number_expr(const std::string& s) { return detail::ExprParser(s).parse(); }

// ---------------------------------------------------------------------------

/// Typed access to a JSON object with path-qualified diagnostics.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  [[noreturn]] void fail(const std::string& why) const { throw ScenarioError(path_ + ": " + why); }

  void expect_object() const {
    if (!j_->is_object()) fail("expected an object");
  }
  void allow_only(std::initializer_list<const char*> keys) const {
    expect_object();
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_->items())
      if (!ok.count(k)) Node(v, child_path(k)).fail("unknown field");
  }
  bool has(const std::string& k) const { return j_->is_object() && j_->contains(k); }
  Node at(const std::string& k) const {
    if (!has(k)) fail("missing required field '" + k + "'");
    return Node((*j_)[k], child_path(k));
  }
  Node at(std::size_t i) const { return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const { return j_->size(); }

  double number() const {
    if (j_->is_number()) return j_->get<double>();
    if (j_->is_string()) {
      try {
        return parse_number_expr(j_->get<std::string>());
      } catch (const ScenarioError& e) {
        fail(e.what());
      }
    }
    fail("expected a number");
  }
  long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::vector<double> numbers() const {
    if (!j_->is_array()) fail("expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).number());
    return v;
  }
  void expect_array() const {
    if (!j_->is_array()) fail("expected an array");
  }
  Interval interval() const {
    const auto v = numbers();
    if (v.size() != 2) fail("expected [lo, hi]");
    try {
      return Interval(v[0], v[1]);
    } catch (const DomainError& e) {
      fail(e.what());
    }
  }
  State state() const {
    const auto v = numbers();
    if (v.size() != 2) fail("expected [phi, psi]");
    return {v[0], v[1]};
  }

  double number_or(const std::string& k, double d) const { return has(k) ? at(k).number() : d; }
  long integer_or(const std::string& k, long d) const { return has(k) ? at(k).integer() : d; }

 private:
  const json* j_;
  std::string path_;
  std::string child_path(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
};

// ---------------------------------------------------------------------------

struct Defaults {
  double integration_tol = kDefaultIntegrationTol;
  double phase_eps = 1e-7;
  double verdict_tol = 1e-8;
};

struct SystemSpec {
  std::string name;
  SystemCoefficients sys;
  // Present when the system was given as (p phi')' + q phi = 0.
  std::optional<CoefficientFn> p, q;
  int psi_rhs_sign = -1;
};

struct SolutionSpec {
  std::string name;
  std::string system;
  State init;
  double t_init;
  std::size_t export_samples = 0;
};

struct AnalysisSpec {
  std::string type;
  std::string name;
  json params;  // validated at load time
  std::string path;
};

struct Scenario {
  std::string name;
  std::string description;
  Defaults defaults;
  std::vector<SystemSpec> systems;
  std::vector<SolutionSpec> solutions;
  std::vector<AnalysisSpec> analyses;

  const SystemSpec& system(const std::string& n) const {
    for (const auto& s : systems)
      if (s.name == n) return s;
    throw ScenarioError("unknown system '" + n + "'");
  }
  const SolutionSpec& solution(const std::string& n) const {
    for (const auto& s : solutions)
      if (s.name == n) return s;
    throw ScenarioError("unknown solution '" + n + "'");
  }
};

namespace detail {

inline PieceSpec parse_piece_spec(const Node& piece) {
  const std::string kind = piece.at("kind").string();
  const Node prm = piece.at("params");
  if (kind == "constant") {
    prm.allow_only({"value"});
    return ConstantPiece{prm.at("value").number()};
  }
  if (kind == "poly") {
    prm.allow_only({"coeffs"});
    auto c = prm.at("coeffs").numbers();
    if (c.empty()) prm.at("coeffs").fail("needs at least one coefficient");
    return PolyPiece{std::move(c)};
  }
  if (kind == "sinpow") {
    prm.allow_only({"amplitude", "frequency", "phase", "power"});
    const long power = prm.has("power") ? prm.at("power").integer() : 1;
    if (power < 0) prm.at("power").fail("must be >= 0");
    return SinPowPiece{prm.number_or("amplitude", 1.0), prm.number_or("frequency", 1.0), prm.number_or("phase", 0.0),
                       static_cast<int>(power)};
  }
  piece.at("kind").fail("unknown kind '" + kind + "' (expected constant, poly or sinpow)");
}

inline CoefficientFn parse_coefficient(const Node& n) {
  n.expect_array();
  if (n.size() == 0) n.fail("needs at least one piece");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node p = n.at(i);
    p.allow_only({"from", "to", "kind", "params"});
    pieces.push_back({p.at("from").number(), p.at("to").number(), parse_piece_spec(p)});
  }
  try {
    return CoefficientFn(std::move(pieces));
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

inline void check_domain(const Node& n, const CoefficientFn& c, const Interval& d) {
  const Interval got = c.domain();
  if (!(got == d)) {
    std::ostringstream os;
    os << "pieces cover [" << got.lo << ", " << got.hi << "] but the declared domain is [" << d.lo << ", " << d.hi
       << "]";
    n.fail(os.str());
  }
}

inline SystemSpec parse_system(const std::string& name, const Node& n) {
  n.allow_only({"domain", "f", "g", "p", "q", "psi_rhs_sign", "description"});
  const Interval dom = n.at("domain").interval();
  const bool fg = n.has("f") || n.has("g"), pq = n.has("p") || n.has("q");
  if (fg == pq) n.fail("give either f and g, or p and q");
  int sign = -1;
  if (n.has("psi_rhs_sign")) {
    const long s = n.at("psi_rhs_sign").integer();
    if (s != 1 && s != -1) n.at("psi_rhs_sign").fail("must be 1 or -1");
    sign = static_cast<int>(s);
  }
  if (fg) {
    auto f = parse_coefficient(n.at("f"));
    auto g = parse_coefficient(n.at("g"));
    check_domain(n.at("f"), f, dom);
    check_domain(n.at("g"), g, dom);
    // psi' = sign * g phi, stored as psi' = -g_eff phi.
    if (sign == 1) g = g.negated();
    return {name, SystemCoefficients(std::move(f), std::move(g)), std::nullopt, std::nullopt, sign};
  }
  if (n.has("psi_rhs_sign")) n.at("psi_rhs_sign").fail("only meaningful for f/g systems");
  auto p = parse_coefficient(n.at("p"));
  auto q = parse_coefficient(n.at("q"));
  check_domain(n.at("p"), p, dom);
  check_domain(n.at("q"), q, dom);
  try {
    auto sys = from_sturm_liouville(p, q);
    return {name, std::move(sys), std::move(p), std::move(q), -1};
  } catch (const ReductionError& e) {
    n.at("p").fail(e.what());
  }
}

// Parameter kinds used by analyses.
enum class Kind { Number, Integer, String, Bool, IntervalK, StateK, Numbers, SolutionRef, SystemRef };

struct Field {
  const char* key;
  Kind kind;
  bool required;
};

struct AnalysisSchema {
  const char* type;
  std::vector<Field> fields;
};

inline const std::vector<AnalysisSchema>& analysis_schemas() {
  using K = Kind;
  static const std::vector<AnalysisSchema> s = {
      {"null-classes",
       {{"solution", K::SolutionRef, true}, {"interval", K::IntervalK, false}, {"eps_phase", K::Number, false},
        {"integration_tol", K::Number, false}}},
      {"majorant-check",
       {{"mode", K::String, true}, {"sys1", K::SystemRef, false}, {"sys2", K::SystemRef, false},
        {"sol1", K::SolutionRef, false}, {"sol2", K::SolutionRef, false}, {"interval", K::IntervalK, false},
        {"t0", K::Number, false}, {"t_end", K::Number, false}, {"xi_grid", K::Integer, false},
        {"lambda_offsets", K::Numbers, false}, {"tol", K::Number, false}, {"grid", K::Integer, false}}},
      {"theorem-31",
       {{"sol1", K::SolutionRef, true}, {"sol2", K::SolutionRef, true}, {"t0", K::Number, false},
        {"t_end", K::Number, false}, {"xi_grid", K::Integer, false}, {"lambda_offsets", K::Numbers, false},
        {"tol", K::Number, false}, {"eps_phase", K::Number, false}, {"grid", K::Integer, false}}},
      {"corollary-31",
       {{"sol1", K::SolutionRef, true}, {"sol2", K::SolutionRef, true}, {"t0", K::Number, false},
        {"t_end", K::Number, false}, {"eps_phase", K::Number, false}, {"grid", K::Integer, false}}},
      {"sturm-classical",
       {{"eq1", K::SystemRef, true}, {"eq2", K::SystemRef, true}, {"init1", K::StateK, true},
        {"init2", K::StateK, true}, {"interval", K::IntervalK, false}, {"eps_phase", K::Number, false}}},
      {"riccati-poles",
       {{"system", K::SystemRef, true}, {"t0", K::Number, true}, {"y0", K::Number, true},
        {"interval", K::IntervalK, false}, {"tol", K::Number, false}, {"probe_window", K::Number, false}}},
      {"reconstruction-error",
       {{"solution", K::SolutionRef, true}, {"grid", K::Integer, false}, {"integration_tol", K::Number, false}}},
      {"randomized-theorem-31", {{"count", K::Integer, true}, {"seed_offset", K::Integer, false}}},
  };
  return s;
}

}  // namespace detail

inline Scenario parse_scenario(const json& doc) {
  const Node root(doc, "");
  root.allow_only({"name", "description", "defaults", "systems", "solutions", "analyses"});
  Scenario sc;
  sc.name = root.at("name").string();
  if (sc.name.empty()) root.at("name").fail("must not be empty");
  if (root.has("description")) sc.description = root.at("description").string();
  if (root.has("defaults")) {
    const Node d = root.at("defaults");
    d.allow_only({"integration_tol", "phase_eps", "verdict_tol"});
    sc.defaults.integration_tol = d.number_or("integration_tol", sc.defaults.integration_tol);
    sc.defaults.phase_eps = d.number_or("phase_eps", sc.defaults.phase_eps);
    sc.defaults.verdict_tol = d.number_or("verdict_tol", sc.defaults.verdict_tol);
    for (const char* k : {"integration_tol", "phase_eps", "verdict_tol"})
      if (d.has(k) && !(d.at(k).number() > 0)) d.at(k).fail("must be positive");
  }

  if (root.has("systems")) {
    const Node s = root.at("systems");
    s.expect_object();
    for (const auto& [k, v] : s.raw().items()) sc.systems.push_back(detail::parse_system(k, s.at(k)));
  }
  if (root.has("solutions")) {
    const Node s = root.at("solutions");
    s.expect_object();
    for (const auto& [k, v] : s.raw().items()) {
      const Node n = s.at(k);
      n.allow_only({"system", "init", "t_init", "export_samples"});
      SolutionSpec sol{k, n.at("system").string(), n.at("init").state(), 0.0, 0};
      const SystemSpec* sys = nullptr;
      for (const auto& x : sc.systems)
        if (x.name == sol.system) sys = &x;
      if (!sys) n.at("system").fail("unknown system '" + sol.system + "'");
      sol.t_init = n.number_or("t_init", sys->sys.domain().lo);
      if (!sys->sys.domain().contains(sol.t_init)) n.at("t_init").fail("outside the system domain");
      if (!sol.init.finite() || !sol.init.nontrivial()) n.at("init").fail("must be finite and not (0, 0)");
      const long samples = n.integer_or("export_samples", 0);
      if (samples < 0 || samples == 1) n.at("export_samples").fail("must be 0 or >= 2");
      sol.export_samples = static_cast<std::size_t>(samples);
      sc.solutions.push_back(std::move(sol));
    }
  }
  if (root.has("analyses")) {
    const Node a = root.at("analyses");
    a.expect_array();
    std::set<std::string> names;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Node n = a.at(i);
      n.expect_object();
      const std::string type = n.at("type").string();
      const detail::AnalysisSchema* schema = nullptr;
      for (const auto& s : detail::analysis_schemas())
        if (type == s.type) schema = &s;
      if (!schema) n.at("type").fail("unknown analysis type '" + type + "'");
      AnalysisSpec spec{type, n.has("name") ? n.at("name").string() : type + "_" + std::to_string(i), json::object(),
                        n.path()};
      if (!names.insert(spec.name).second) n.fail("duplicate analysis name '" + spec.name + "'");
      for (const auto& [k, v] : n.raw().items()) {
        if (k == "type" || k == "name") continue;
        const detail::Field* field = nullptr;
        for (const auto& f : schema->fields)
          if (k == f.key) field = &f;
        if (!field) n.at(k).fail("unknown field for analysis type '" + type + "'");
        const Node fn = n.at(k);
        using K = detail::Kind;
        switch (field->kind) {
          case K::Number: spec.params[k] = fn.number(); break;
          case K::Integer: spec.params[k] = fn.integer(); break;
          case K::String: spec.params[k] = fn.string(); break;
          case K::Bool: spec.params[k] = fn.boolean(); break;
          case K::IntervalK: {
            const Interval I = fn.interval();
            spec.params[k] = {I.lo, I.hi};
            break;
          }
          case K::StateK: {
            const State st = fn.state();
            if (!st.finite() || !st.nontrivial()) fn.fail("must be finite and not (0, 0)");
            spec.params[k] = {st.phi, st.psi};
            break;
          }
          case K::Numbers: spec.params[k] = fn.numbers(); break;
          case K::SolutionRef: {
            const std::string r = fn.string();
            if (std::none_of(sc.solutions.begin(), sc.solutions.end(), [&](const auto& s) { return s.name == r; }))
              fn.fail("unknown solution '" + r + "'");
            spec.params[k] = r;
            break;
          }
          case K::SystemRef: {
            const std::string r = fn.string();
            if (std::none_of(sc.systems.begin(), sc.systems.end(), [&](const auto& s) { return s.name == r; }))
              fn.fail("unknown system '" + r + "'");
            spec.params[k] = r;
            break;
          }
        }
      }
      for (const auto& f : schema->fields)
        if (f.required && !n.has(f.key)) n.fail("missing required field '" + std::string(f.key) + "'");

      // Cross-field checks: intervals and times inside the referenced domains.
      auto domain_of = [&](const std::string& key) -> std::optional<Interval> {
        if (!spec.params.contains(key)) return std::nullopt;
        const std::string r = spec.params[key].get<std::string>();
        for (const auto& s : sc.solutions)
          if (s.name == r) return sc.system(s.system).sys.domain();
        for (const auto& s : sc.systems)
          if (s.name == r) return s.sys.domain();
        return std::nullopt;
      };
      for (const char* ref : {"solution", "sol1", "sol2", "system", "sys1", "sys2", "eq1", "eq2"}) {
        const auto d = domain_of(ref);
        if (!d) continue;
        if (spec.params.contains("interval")) {
          const Interval I(spec.params["interval"][0].get<double>(), spec.params["interval"][1].get<double>());
          if (!d->contains(I)) n.at("interval").fail(std::string("outside the domain of '") + ref + "'");
        }
        for (const char* tk : {"t0", "t_end"})
          if (spec.params.contains(tk) && !d->contains(spec.params[tk].get<double>()))
            n.at(tk).fail(std::string("outside the domain of '") + ref + "'");
      }
      if (type == "majorant-check") {
        const std::string mode = spec.params["mode"].get<std::string>();
        const bool needs_sols = mode == "quarter";
        if (mode != "quarter" && mode != "system" && mode != "sturm-eq" && mode != "sturm-system")
          n.at("mode").fail("expected quarter, system, sturm-eq or sturm-system");
        static constexpr std::array<const char*, 2> sols{"sol1", "sol2"}, syss{"sys1", "sys2"};
        for (const char* k : needs_sols ? sols : syss)
          if (!spec.params.contains(k)) n.fail(std::string("mode '") + mode + "' needs field '" + k + "'");
        if (mode == "sturm-eq")
          for (const char* k : {"sys1", "sys2"})
            if (!sc.system(spec.params[k].get<std::string>()).p)
              n.at(k).fail("mode 'sturm-eq' needs a system given by p and q");
      }
      if (type == "sturm-classical")
        for (const char* k : {"eq1", "eq2"})
          if (!sc.system(spec.params[k].get<std::string>()).p) n.at(k).fail("needs a system given by p and q");
      if (type == "randomized-theorem-31" && spec.params["count"].get<long>() <= 0) n.at("count").fail("must be positive");
      sc.analyses.push_back(std::move(spec));
    }
  }
  return sc;
}

/// Parses JSON text; syntax errors report line and column.
inline Scenario load_scenario_text(const std::string& text, const std::string& origin = "<scenario>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ScenarioError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  try {
    return parse_scenario(doc);
  } catch (const ScenarioError& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_text(ss.str(), path);
}

}  // namespace sturmlab::cli
