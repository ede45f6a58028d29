#pragma once

// Executes a validated Scenario and assembles the run report.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sturmlab/cli/scenario.hpp"
#include "sturmlab/compare.hpp"
#include "sturmlab/instances.hpp"
#include "sturmlab/phase.hpp"
#include "sturmlab/riccati.hpp"

namespace sturmlab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Non-finite values have no JSON spelling; they are written as strings.
inline json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

inline json span_json(const Span& s) { return json::array({num(s.lo), num(s.hi)}); }

inline json to_json(const ConditionResult& c) {
  json j;
  j["name"] = c.name;
  j["outcome"] = to_string(c.outcome);
  j["witness"] = num(c.witness);
  j["margin"] = num(c.margin);
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline json to_json(const MajorantReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["conditions"] = json::array();
  for (const auto& c : r.conditions) j["conditions"].push_back(to_json(c));
  j["xi"] = json::array();
  for (double x : r.xi) j["xi"].push_back(num(x));
  if (r.eta.pairs_per_xi > 0) {
    json e;
    e["lambda_offsets"] = json::array();
    for (double o : r.eta.lambda_offsets) e["lambda_offsets"].push_back(num(o));
    e["pairs_per_xi"] = r.eta.pairs_per_xi;
    e["evaluations"] = r.eta.evaluations;
    e["worst_margin"] = num(r.eta.worst_margin);
    j["eta_family"] = e;
  }
  j["notes"] = r.notes;
  return j;
}

inline json to_json(const TheoremVerdict& v) {
  json j;
  j["verdict"] = to_string(v.hypothesis_report.verdict);
  j["conditions"] = to_json(v.hypothesis_report)["conditions"];
  j["xi"] = to_json(v.hypothesis_report)["xi"];
  j["intervals"] = json::array();
  for (const auto& d : v.details) {
    json i;
    i["k"] = d.k;
    i["tau_k"] = num(d.lo);
    i["tau_k1"] = num(d.hi);
    i["classes_found"] = json::array();
    for (const auto& s : d.found) i["classes_found"].push_back(span_json(s));
    i["n_found"] = d.found.size();
    j["intervals"].push_back(i);
  }
  if (v.count_check) {
    json c;
    c["description"] = v.count_check->description;
    c["interval"] = json::array({num(v.count_check->lo), num(v.count_check->hi)});
    c["required"] = v.count_check->required;
    c["found"] = v.count_check->found;
    c["ok"] = v.count_check->ok();
    j["count_check"] = c;
  }
  j["expected"] = v.expected;
  j["observed"] = v.observed;
  j["reference_classes"] = json::array();
  for (const auto& s : v.reference_classes) j["reference_classes"].push_back(span_json(s));
  j["subject_classes"] = json::array();
  for (const auto& s : v.subject_classes) j["subject_classes"].push_back(span_json(s));
  j["vacuous"] = v.vacuous;
  if (v.vacuous) j["vacuous_reason"] = v.vacuous_reason;
  j["conclusion_holds"] = v.conclusion_holds;
  j["notes"] = v.hypothesis_report.notes;
  j["warnings"] = v.warnings;
  if (v.hypothesis_report.eta.pairs_per_xi > 0) j["eta_family"] = to_json(v.hypothesis_report)["eta_family"];
  return j;
}

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out_dir;
  bool timings = true;
};

struct RunResult {
  json report;
  bool any_error = false;
  bool any_counterexample = false;
  std::vector<std::string> written;
  int exit_code() const { return (any_error || any_counterexample) ? 1 : 0; }
};

namespace detail {

struct AnalysisOutcome {
  json result;
  bool counterexample = false;
};

class Runner {
 public:
  Runner(const Scenario& sc, const RunOptions& opt, RunResult& out) : sc_(sc), opt_(opt), out_(out) {}

  void write_file(const std::string& name, const std::string& content) {
    if (!opt_.out_dir) return;
    std::filesystem::create_directories(*opt_.out_dir);
    const auto path = *opt_.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    out_.written.push_back(name);
  }

  const Trajectory& trajectory(const std::string& sol) {
    auto it = traj_.find(sol);
    if (it != traj_.end()) return *it->second;
    const auto& s = sc_.solution(sol);
    const auto& sys = sc_.system(s.system).sys;
    auto tr = std::make_unique<Trajectory>(
        integrate_system_from(sys, s.init, s.t_init, sys.domain(), sc_.defaults.integration_tol));
    return *traj_.emplace(sol, std::move(tr)).first->second;
  }

  const SystemCoefficients& system_of(const std::string& sol) { return sc_.system(sc_.solution(sol).system).sys; }

  PhaseDecomposition decomposition(const std::string& sol, double tol) {
    const auto& sys = system_of(sol);
    return decompose(sys, trajectory(sol).eval(sys.domain().lo), tol);
  }

  QuarterParams quarter_params(const json& p) const {
    QuarterParams q;
    q.integration_tol = sc_.defaults.integration_tol;
    q.phase_eps = p.value("eps_phase", sc_.defaults.phase_eps);
    q.tol = p.value("tol", sc_.defaults.verdict_tol);
    q.strict_tol = sc_.defaults.verdict_tol;
    if (p.contains("xi_grid")) q.xi_grid = static_cast<std::size_t>(std::max<long>(1, p["xi_grid"].get<long>()));
    if (p.contains("lambda_offsets")) q.lambda_offsets = p["lambda_offsets"].get<std::vector<double>>();
    if (p.contains("grid")) q.grid = static_cast<std::size_t>(std::max<long>(2, p["grid"].get<long>()));
    return q;
  }

  CompareParams compare_params(const json& p) const {
    CompareParams c = quarter_params(p);
    return c;
  }

  std::pair<double, double> window(const json& p, const std::string& sol1) {
    const auto d = system_of(sol1).domain();
    return {p.value("t0", d.lo), p.value("t_end", d.hi)};
  }

  AnalysisOutcome null_classes_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const std::string sol = p["solution"];
    const auto& sys = system_of(sol);
    const double eps = p.value("eps_phase", sc_.defaults.phase_eps);
    const double tol = p.value("integration_tol", sc_.defaults.integration_tol);
    const Interval I = p.contains("interval") ? Interval(p["interval"][0], p["interval"][1]) : sys.domain();
    const auto dec = decomposition(sol, tol);
    const auto elements = null_elements(dec, I, eps);
    const auto chain = null_classes(dec, I, eps);

    json r;
    r["solution"] = sol;
    r["interval"] = json::array({num(I.lo), num(I.hi)});
    r["eps_phase"] = num(eps);
    r["mu"] = num(dec.mu);
    r["theta"] = num(dec.theta);
    r["min_im_z"] = num(dec.cps.min_y());
    r["elements"] = json::array();
    for (const auto& e : elements)
      r["elements"].push_back({{"span", span_json(e.span)}, {"level", e.level}, {"kind", to_string(e.kind)}});
    r["classes"] = json::array();
    std::ostringstream csv;
    csv << "class_index,hull_lo,hull_hi,n_elements,levels\n";
    char buf[256];
    for (std::size_t i = 0; i < chain.classes.size(); ++i) {
      const auto& c = chain.classes[i];
      r["classes"].push_back(
          {{"index", i}, {"hull", span_json(c.hull)}, {"level", c.level()}, {"n_elements", c.elements.size()}});
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu,%ld\n", i, c.hull.lo, c.hull.hi, c.elements.size(),
                    c.level());
      csv << buf;
    }
    r["n_elements"] = elements.size();
    r["n_classes"] = chain.classes.size();
    r["warnings"] = chain.warnings;
    write_file("nullclasses_" + a.name + ".csv", csv.str());

    // Plot columns: t phi psi Phi Im(z) phi_reconstructed
    std::ostringstream dat;
    dat << "# t phi psi Phi im_z phi_reconstructed\n";
    const auto& tr = trajectory(sol);
    const std::size_t n = 1001;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = i + 1 == n ? I.hi : I.lo + I.length() * static_cast<double>(i) / static_cast<double>(n - 1);
      const State s = tr.eval(t);
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", t, s.phi, s.psi, dec.Phi(t), dec.y(t),
                    reconstruct_phi(dec, t));
      dat << buf;
    }
    write_file("plot_" + a.name + ".dat", dat.str());
    return {r, false};
  }

  AnalysisOutcome majorant_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const std::string mode = p["mode"];
    if (mode == "quarter") {
      const std::string s1 = p["sol1"], s2 = p["sol2"];
      const auto [t0, t1] = window(p, s1);
      return {to_json(quarter_majorant(trajectory(s1), system_of(s1), trajectory(s2), system_of(s2), t0, t1,
                                       quarter_params(p))),
              false};
    }
    const auto& A = sc_.system(p["sys1"]);
    const auto& B = sc_.system(p["sys2"]);
    const Interval I = p.contains("interval") ? Interval(p["interval"][0], p["interval"][1]) : A.sys.domain();
    const auto prm = compare_params(p);
    if (mode == "system") return {to_json(system_majorant(A.sys, B.sys, I, prm)), false};
    if (mode == "sturm-system") return {to_json(sturm_majorant_system(A.sys, B.sys, I, prm)), false};
    return {to_json(sturm_majorant_eq(*A.p, *A.q, *B.p, *B.q, I, prm)), false};
  }

  AnalysisOutcome theorem31_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const std::string s1 = p["sol1"], s2 = p["sol2"];
    const auto [t0, t1] = window(p, s1);
    const auto v = verify_theorem31(trajectory(s1), system_of(s1), trajectory(s2), system_of(s2), t0, t1,
                                    quarter_params(p));
    return {to_json(v), !v.conclusion_holds};
  }

  AnalysisOutcome corollary31_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const std::string s1 = p["sol1"], s2 = p["sol2"];
    const auto [t0, t1] = window(p, s1);
    const auto v = verify_corollary31(system_of(s1), system_of(s2), trajectory(s1), trajectory(s2), t0,
                                      CorollaryParams(compare_params(p), t1));
    return {to_json(v), !v.conclusion_holds};
  }

  AnalysisOutcome sturm_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const auto& A = sc_.system(p["eq1"]);
    const auto& B = sc_.system(p["eq2"]);
    const Interval I = p.contains("interval") ? Interval(p["interval"][0], p["interval"][1]) : A.sys.domain();
    const State i1{p["init1"][0], p["init1"][1]}, i2{p["init2"][0], p["init2"][1]};
    const auto v = verify_sturm_classical(*A.p, *A.q, *B.p, *B.q, i1, i2, I, compare_params(p));
    return {to_json(v), !v.conclusion_holds};
  }

  AnalysisOutcome poles_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const auto& sys = sc_.system(p["system"]).sys;
    const Interval I = p.contains("interval") ? Interval(p["interval"][0], p["interval"][1]) : sys.domain();
    const double t0 = p["t0"], y0 = p["y0"];
    if (!I.contains(t0)) throw PreconditionError("t0 outside the analysis interval");
    const double tol = p.value("tol", kDefaultPoleTol);
    const double win = p.value("probe_window", 1e-6);
    const auto sol = solve_riccati(sys, t0, y0, I, sc_.defaults.integration_tol);
    json r;
    r["t0"] = num(t0);
    r["y0"] = num(y0);
    r["interval"] = json::array({num(I.lo), num(I.hi)});
    r["poles"] = json::array();
    const auto ps = poles(sol, I, tol);
    for (const auto& pl : ps) {
      const auto pr = probe_pole(sol, pl, win);
      json e{{"lo", num(pl.lo)}, {"hi", num(pl.hi)}, {"continuum", pl.continuum}};
      e["left_min_y"] = pr.left_probed ? num(pr.left_min) : json(nullptr);
      e["right_max_y"] = pr.right_probed ? num(pr.right_max) : json(nullptr);
      r["poles"].push_back(e);
    }
    try {
      const auto m = max_interval(sol, t0, I, tol);
      r["max_interval"] = {{"t1", num(m.t1)},
                           {"t2", num(m.t2)},
                           {"left_is_pole", m.left_is_pole},
                           {"right_is_pole", m.right_is_pole}};
    } catch (const PreconditionError&) {
      r["max_interval"] = nullptr;
    }
    return {r, false};
  }

  AnalysisOutcome reconstruction_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const std::string sol = p["solution"];
    const double tol = p.value("integration_tol", sc_.defaults.integration_tol);
    const long grid = p.value("grid", 1000L);
    if (grid < 2) throw PreconditionError("grid must be >= 2");
    const auto dec = decomposition(sol, tol);
    const auto& tr = trajectory(sol);
    const Interval D = dec.domain();
    double worst = 0.0, worst_at = D.lo, min_y = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid; ++i) {
      const double t = i + 1 == grid ? D.hi : D.lo + D.length() * static_cast<double>(i) / static_cast<double>(grid - 1);
      const double e = std::abs(tr.phi(t) - reconstruct_phi(dec, t));
      min_y = std::min(min_y, dec.y(t));
      if (e > worst) {
        worst = e;
        worst_at = t;
      }
    }
    const double scale = dec.mu / std::sqrt(dec.cps.min_y());
    json r;
    r["solution"] = sol;
    r["grid"] = grid;
    r["max_abs_error"] = num(worst);
    r["at"] = num(worst_at);
    r["amplitude_scale"] = num(scale);
    r["min_im_z_grid"] = num(min_y);
    r["min_im_z"] = num(dec.cps.min_y());
    r["within_1e-6_scale"] = worst <= 1e-6 * scale;
    return {r, false};
  }

  AnalysisOutcome randomized_analysis(const AnalysisSpec& a) {
    const auto& p = a.params;
    const long count = p["count"];
    const long offset = p.value("seed_offset", 0L);
    std::size_t strict = 0, majorant = 0, vacuous = 0;
    json ce = json::array();
    for (long i = 0; i < count; ++i) {
      const std::uint64_t seed = opt_.seed * 1000003ULL + static_cast<std::uint64_t>(offset + i);
      const auto inst = instances::conforming_pair(seed);
      const Interval I(0.0, inst.t_end);
      const auto t1 = integrate_system(inst.sys1, inst.init1, I, sc_.defaults.integration_tol);
      const auto t2 = integrate_system(inst.sys2, inst.init2, I, sc_.defaults.integration_tol);
      const auto v = verify_theorem31(t1, inst.sys1, t2, inst.sys2, 0.0, inst.t_end, quarter_params(json::object()));
      if (v.hypothesis_report.is_majorant()) ++majorant;
      if (v.hypothesis_report.is_strict()) ++strict;
      if (v.vacuous) ++vacuous;
      if (!v.conclusion_holds) ce.push_back(seed);
    }
    json r;
    r["count"] = count;
    r["base_seed"] = opt_.seed;
    r["majorant"] = majorant;
    r["strict"] = strict;
    r["vacuous"] = vacuous;
    r["counterexample_seeds"] = ce;
    return {r, !ce.empty()};
  }

  AnalysisOutcome dispatch(const AnalysisSpec& a) {
    if (a.type == "null-classes") return null_classes_analysis(a);
    if (a.type == "majorant-check") return majorant_analysis(a);
    if (a.type == "theorem-31") return theorem31_analysis(a);
    if (a.type == "corollary-31") return corollary31_analysis(a);
    if (a.type == "sturm-classical") return sturm_analysis(a);
    if (a.type == "riccati-poles") return poles_analysis(a);
    if (a.type == "reconstruction-error") return reconstruction_analysis(a);
    if (a.type == "randomized-theorem-31") return randomized_analysis(a);
    throw Error("unsupported analysis type " + a.type);
  }

  void export_trajectories() {
    for (const auto& s : sc_.solutions) {
      if (s.export_samples == 0) continue;
      std::ostringstream os;
      write_trajectory_csv(os, trajectory(s.name), s.export_samples);
      write_file("trajectory_" + s.name + ".csv", os.str());
    }
  }

 private:
  const Scenario& sc_;
  const RunOptions& opt_;
  RunResult& out_;
  std::map<std::string, std::unique_ptr<Trajectory>> traj_;
};

}  // namespace detail

inline RunResult run(const Scenario& sc, const RunOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  RunResult out;
  detail::Runner runner(sc, opt, out);
  const auto start = clock::now();
  json rep;
  rep["tool"] = "sturmlab";
  rep["tool_version"] = kToolVersion;
  rep["scenario"] = sc.name;
  rep["seed"] = opt.seed;
  rep["defaults"] = {{"integration_tol", num(sc.defaults.integration_tol)},
                     {"phase_eps", num(sc.defaults.phase_eps)},
                     {"verdict_tol", num(sc.defaults.verdict_tol)}};
  json exports = json::object();
  try {
    runner.export_trajectories();
  } catch (const std::exception& e) {
    out.any_error = true;
    exports["error"] = e.what();
  }
  rep["analyses"] = json::array();
  for (const auto& a : sc.analyses) {
    json rec;
    rec["name"] = a.name;
    rec["type"] = a.type;
    const auto t0 = clock::now();
    try {
      auto o = runner.dispatch(a);
      rec["status"] = o.counterexample ? "counterexample" : "ok";
      rec["result"] = std::move(o.result);
      out.any_counterexample = out.any_counterexample || o.counterexample;
    } catch (const std::exception& e) {
      rec["status"] = "error";
      rec["error"] = e.what();
      out.any_error = true;
    }
    if (opt.timings)
      rec["elapsed_ms"] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    rep["analyses"].push_back(std::move(rec));
  }
  if (!exports.empty()) rep["exports"] = exports;
  rep["exit_status"] = out.exit_code();
  if (opt.timings) rep["elapsed_ms"] = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  out.report = std::move(rep);
  runner.write_file("report.json", out.report.dump(2) + "\n");
  return out;
}

/// Human-readable rendering of a report.
inline std::string summarize(const json& rep) {
  std::ostringstream os;
  os << "scenario " << rep["scenario"].get<std::string>() << " (seed " << rep["seed"] << ")\n";
  for (const auto& a : rep["analyses"]) {
    os << "  [" << a["status"].get<std::string>() << "] " << a["name"].get<std::string>() << " ("
       << a["type"].get<std::string>() << ")";
    if (a["status"] == "error") {
      os << ": " << a["error"].get<std::string>() << "\n";
      continue;
    }
    const auto& r = a["result"];
    const std::string type = a["type"];
    if (type == "null-classes") {
      os << ": " << r["n_elements"] << " elements, " << r["n_classes"] << " classes\n";
      for (const auto& c : r["classes"])
        os << "      class " << c["index"] << " hull [" << c["hull"][0] << ", " << c["hull"][1] << "] level "
           << c["level"] << ", " << c["n_elements"] << " element(s)\n";
    } else if (type == "majorant-check") {
      os << ": " << r["verdict"].get<std::string>() << "\n";
    } else if (type == "theorem-31" || type == "corollary-31" || type == "sturm-classical") {
      os << ": hypothesis " << r["verdict"].get<std::string>() << ", conclusion "
         << (r["conclusion_holds"].get<bool>() ? "holds" : "FAILS") << (r["vacuous"].get<bool>() ? " (vacuous)" : "")
         << "\n";
    } else if (type == "riccati-poles") {
      os << ": " << r["poles"].size() << " pole(s)\n";
    } else if (type == "reconstruction-error") {
      os << ": max error " << r["max_abs_error"] << " (scale " << r["amplitude_scale"] << ")\n";
    } else if (type == "randomized-theorem-31") {
      os << ": " << r["counterexample_seeds"].size() << " counterexample(s) in " << r["count"] << " instances\n";
    } else {
      os << "\n";
    }
  }
  os << "exit status " << rep["exit_status"] << "\n";
  return os.str();
}

}  // namespace sturmlab::cli
