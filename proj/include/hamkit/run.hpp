#ifndef HAMKIT_RUN_HPP
#define HAMKIT_RUN_HPP

#include "hamkit/certificate.hpp"
#include "hamkit/config.hpp"
#include "hamkit/cone.hpp"
#include "hamkit/hypotheses.hpp"
#include "hamkit/kernel.hpp"
#include "hamkit/monotone_split.hpp"
#include "hamkit/quadrature.hpp"
#include "hamkit/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamkit {

inline constexpr const char* kToolName = "hamkit";
inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

enum class Command { hypotheses, certify, solve, reproduce };

inline const char* to_string(Command c) {
  switch (c) {
  case Command::hypotheses: return "hypotheses";
  case Command::certify: return "certify";
  case Command::solve: return "solve";
  case Command::reproduce: return "reproduce";
  }
  return "?";
}

/// Non-finite doubles become null in JSON.
inline Json json_real(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

inline Json to_json(const Number& n) {
  Json j;
  j["value"] = json_real(n.value);
  if (n.exact)
    j["exact"] = to_string(*n.exact);
  return j;
}

inline Json to_json(const HypothesisReport& r) {
  Json j;
  j["hypothesis"] = to_string(r.hypothesis);
  j["passed"] = r.passed;
  j["worst_margin"] = json_real(r.worst_margin);
  j["witness"] = r.witness;
  j["grid_size"] = r.grid_size;
  j["tol"] = r.tol;
  if (!r.note.empty())
    j["note"] = r.note;
  return j;
}

inline Json to_json(const SplitReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["x_max"] = r.x_max;
  j["samples"] = r.samples;
  j["worst_violation"] = r.worst_violation;
  j["witness"] = {r.witness_lo, r.witness_hi};
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"check", c.name},
                      {"passed", c.passed},
                      {"worst_violation", c.worst_violation},
                      {"worst_at", {c.worst_lo, c.worst_hi}},
                      {"witness", {c.witness_lo, c.witness_hi}}});
  j["checks"] = checks;
  return j;
}

inline Json to_json(const Thresholds& th) {
  Json j;
  j["variant"] = to_string(th.variant);
  j["focal_point"] = th.focal_point;
  j["right_point"] = th.right_point;
  j["I1"] = to_json(th.I1);
  j["I2"] = to_json(th.I2);
  j["I3"] = to_json(th.I3);
  j["I4"] = to_json(th.I4);
  if (th.variant == Variant::symmetric) {
    j["I3_full_interval"] = to_json(th.I3_full_interval);
    j["I3_doubled_half"] = to_json(th.I3_doubled_half);
  }
  j["notes"] = th.notes;
  return j;
}

inline Json to_json(const BoxParams& p) {
  return {{"a", to_string(p.a)}, {"b", to_string(p.b)}, {"c", to_string(p.c)},
          {"d", to_string(p.d)}};
}

inline Json to_json(const Certificate& c) {
  Json j;
  j["variant"] = to_string(c.variant);
  j["params"] = to_json(c.params);
  j["satisfied"] = c.satisfied;
  j["strictness_eps"] = c.strictness_eps;
  Json conds = Json::array();
  for (const auto& k : c.conditions)
    conds.push_back({{"condition", k.label},
                     {"statement", k.part + "(" + detail::format_real(k.argument) +
                                       ") " + k.relation + " threshold"},
                     {"f_value", json_real(k.f_value)},
                     {"threshold", to_json(k.threshold)},
                     {"margin", json_real(k.margin)},
                     {"satisfied", k.satisfied}});
  j["conditions"] = conds;
  j["notes"] = c.notes;
  return j;
}

inline Json to_json(const RelationResult& r) {
  return {{"relation", r.description}, {"applicable", r.applicable},
          {"bound", to_json(r.bound)},   {"slack", json_real(r.slack)},
          {"passed", r.passed}};
}

inline Json to_json(const RelationReport& r) {
  return {{"first", to_json(r.first)}, {"second", to_json(r.second)},
          {"passed", r.passed()}};
}

inline Json to_json(const ClauseResult& c) {
  Json j;
  j["clause"] = c.clause;
  j["evaluated"] = c.evaluated;
  j["passed"] = c.passed;
  j["worst_margin"] = c.evaluated ? json_real(c.worst_margin) : Json(nullptr);
  j["witness"] = c.witness;
  return j;
}

inline Json to_json(const MembershipReport& m) {
  Json clauses = Json::array();
  for (const auto* c : m.clauses())
    clauses.push_back(to_json(*c));
  return {{"variant", to_string(m.variant)},
          {"tol", m.tol},
          {"passed", m.passed},
          {"clauses", clauses}};
}

inline Json to_json(const Functionals& f) {
  return {{"alpha", f.alpha}, {"beta", f.beta}, {"theta", f.theta}, {"psi", f.psi}};
}

inline Json to_json(const SolutionResult& r) {
  return {{"converged", r.converged},
          {"diverged", r.diverged},
          {"iterations", r.iterations},
          {"residual", json_real(r.residual)},
          {"residual_tol", r.residual_tol},
          {"grid_points", r.x.size()},
          {"sup_norm", r.x.sup_norm()},
          {"notes", r.notes}};
}

inline Json to_json(const SolutionValidation& v) {
  Json j;
  j["passed"] = v.passed;
  j["refined_residual"] = json_real(v.refined_residual);
  j["interpolation_residual"] = json_real(v.interpolation_residual);
  j["residual_ok"] = v.residual_ok;
  j["trivial"] = v.trivial;
  j["positive"] = v.positive;
  j["interior_min"] = json_real(v.interior_min);
  j["membership"] = to_json(v.membership);
  j["symmetry_defect"] = v.symmetry_defect ? Json(*v.symmetry_defect) : Json(nullptr);
  j["functionals"] = to_json(v.functionals);
  j["notes"] = v.notes;
  return j;
}

/// Everything one command produced. `json` is the machine-readable report;
/// the solution, when present, is exported separately as tables.
struct RunReport {
  Command command = Command::hypotheses;
  Json json;
  std::optional<SolutionResult> solution;
  std::vector<std::string> text;  // human-readable lines

  bool holds() const { return json.at("outcome").at("holds").get<bool>(); }
};

/// Exit status is read from the report alone.
inline int exit_status(const Json& report) {
  return report.at("outcome").at("holds").get<bool>() ? 0 : 1;
}

/// Command-line overrides applied on top of the config.
struct Overrides {
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<double> strictness_eps;
};

inline void apply_overrides(ProblemConfig& cfg, const Overrides& o) {
  if (o.grid)
    cfg.checks.grid = *o.grid;
  if (o.tol)
    cfg.checks.tol = *o.tol;
  if (o.strictness_eps)
    cfg.checks.strictness_eps = *o.strictness_eps;
}

/// The built-in Example instance: Lidstone kernel, symmetric variant,
/// f_up = 1 + x/2, f_down = 1/(1+x), b = 1, c = 1/4, a = d = 0.
inline ProblemConfig example_config() {
  ProblemConfig cfg;
  cfg.kernel.builtin = "lidstone";
  cfg.kernel.name = "lidstone";
  cfg.f_up = "1 + x/2";
  cfg.f_down = "1/(1+x)";
  cfg.variant = Variant::symmetric;
  cfg.b = Rational(1);
  cfg.c = Rational(1) / 4;
  return cfg;
}

namespace detail {

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

inline std::string fmt(const Number& n) {
  if (n.exact)
    return to_string(*n.exact) + " (" + fmt(n.value, 17) + ")";
  return fmt(n.value, 17);
}

inline std::string witness_text(const std::vector<double>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i)
    s += (i ? ", " : "") + fmt(w[i], 10);
  return s + ")";
}

inline void hypotheses_section(RunReport& rep, const Kernel& kernel,
                               const ProblemConfig& cfg, bool& required_ok) {
  auto reports = check_all_hypotheses(kernel, cfg.checks.grid, cfg.checks.tol,
                                      cfg.quadrature);
  Json arr = Json::array();
  rep.text.push_back("Kernel hypotheses (grid " + std::to_string(cfg.checks.grid) +
                     ", tol " + fmt(cfg.checks.tol) + ", k = " +
                     fmt(kernel.k_exponent()) + "):");
  const auto required = required_hypotheses(cfg.variant == Variant::symmetric);
  required_ok = true;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    const bool needed =
        std::find(required.begin(), required.end(), r.hypothesis) != required.end();
    if (needed)
      required_ok = required_ok && r.passed;
    rep.text.push_back(std::string("  ") + to_string(r.hypothesis) + ": " +
                       (r.passed ? "pass" : "FAIL") + "  worst margin " +
                       fmt(r.worst_margin) + " at " + witness_text(r.witness) +
                       (needed ? "" : "  (not required for this variant)") +
                       (r.note.empty() ? "" : "  " + r.note));
  }
  rep.json["hypotheses"] = arr;
}

inline double default_x_max(const BoxParams& p, double k) {
  return p.b_value() + std::pow(4.0, k) * p.c_value() + 1;
}

struct CertifyOutcome {
  bool split_ok = false;
  bool satisfied = false;
  std::optional<Certificate> certificate;
};

inline CertifyOutcome certify_section(RunReport& rep, const Kernel& kernel,
                                      const MonotoneSplit& split,
                                      const ProblemConfig& cfg) {
  CertifyOutcome out;
  const double k = kernel.k_exponent();
  Thresholds th = compute_thresholds(kernel, cfg.variant, cfg.quadrature);
  rep.json["thresholds"] = to_json(th);
  rep.text.push_back(std::string("Threshold integrals (") + to_string(cfg.variant) +
                     " variant):");
  rep.text.push_back("  I1 = " + fmt(th.I1));
  rep.text.push_back("  I2 = " + fmt(th.I2));
  rep.text.push_back("  I3 = " + fmt(th.I3));
  rep.text.push_back("  I4 = " + fmt(th.I4));
  for (const auto& n : th.notes)
    rep.text.push_back("  note: " + n);

  std::optional<BoxParams> params;
  if (cfg.has_params()) {
    params = cfg.params();
  } else {
    params = search_box_params(th, k, split, SearchGrid::defaults(),
                               cfg.checks.strictness_eps);
    rep.json["search"] = {{"performed", true},
                          {"found", params.has_value()}};
    rep.text.push_back(params ? "Parameter search: found a certifying (a, b, c, d)"
                              : "Parameter search: no certifying (a, b, c, d) on the default grid");
  }

  const double x_max = params ? default_x_max(*params, k) : 1.0 + std::pow(4.0, k);
  SplitReport sr = verify_split(split, x_max, cfg.checks.split_samples);
  out.split_ok = sr.passed;
  rep.json["split"] = to_json(sr);
  rep.json["split"]["f_up"] = cfg.f_up;
  rep.json["split"]["f_down"] = cfg.f_down;
  rep.text.push_back("Monotone split on [0, " + fmt(x_max) + "]: " +
                     (sr.passed ? "pass" : "FAIL (worst violation " +
                                               fmt(sr.worst_violation) + " between " +
                                               fmt(sr.witness_lo) + " and " +
                                               fmt(sr.witness_hi) + ")"));

  if (!params) {
    rep.json["certificate"] = nullptr;
    return out;
  }
  Certificate cert = certify(th, k, split, *params, cfg.checks.strictness_eps);
  RelationReport rel = corollary_relations(th, *params, k);
  rep.json["certificate"] = to_json(cert);
  rep.json["relations"] = to_json(rel);
  rep.text.push_back("Certificate for a = " + to_string(params->a) + ", b = " +
                     to_string(params->b) + ", c = " + to_string(params->c) +
                     ", d = " + to_string(params->d) + ":");
  for (const auto& c : cert.conditions)
    rep.text.push_back("  " + c.label + " " + c.part + "(" + fmt(c.argument) + ") = " +
                       fmt(c.f_value) + " " + c.relation + " " + fmt(c.threshold) +
                       "  margin " + fmt(c.margin) + (c.satisfied ? "  ok" : "  NOT MET"));
  for (const auto& n : cert.notes)
    rep.text.push_back("  note: " + n);
  rep.text.push_back("  relation " + rel.first.description + ": bound " +
                     fmt(rel.first.bound) + (rel.first.passed ? "  ok" : "  FAILS"));
  rep.text.push_back("  relation " + rel.second.description + ": " +
                     (rel.second.applicable
                          ? "bound " + fmt(rel.second.bound) +
                                (rel.second.passed ? "  ok" : "  FAILS")
                          : std::string("not applicable")));
  rep.text.push_back(std::string("  certificate: ") +
                     (cert.satisfied ? "SATISFIED" : "not satisfied"));
  out.satisfied = cert.satisfied;
  out.certificate = std::move(cert);
  return out;
}

struct SolveOutcome {
  bool converged = false;
  bool validated = false;
  std::optional<SolutionValidation> validation;
};

inline SolveOutcome solve_section(RunReport& rep, const Kernel& kernel,
                                  const MonotoneSplit& split,
                                  const ProblemConfig& cfg) {
  SolveOutcome out;
  SolverConfig scfg = cfg.solver;
  if (scfg.initial == InitialGuess::ramp && cfg.b && cfg.lines.count("solver.ramp_height") == 0)
    scfg.ramp_height = to_double(*cfg.b);
  SolutionResult sol = solve_fixed_point(kernel, split, scfg, cfg.quadrature);
  rep.json["solution"] = to_json(sol);
  rep.text.push_back("Fixed point iteration: " +
                     std::string(sol.converged ? "converged" : "did not converge") +
                     " after " + std::to_string(sol.iterations) + " updates, residual " +
                     fmt(sol.residual) + (sol.notes.empty() ? "" : " (" + sol.notes + ")"));
  out.converged = sol.converged;
  if (sol.converged) {
    ConeSpec spec = ConeSpec::for_kernel(kernel, cfg.variant);
    SolutionValidation v =
        verify_solution(kernel, split, sol, spec, cfg.checks.cone_tol, cfg.quadrature);
    rep.json["validation"] = to_json(v);
    rep.text.push_back("Solution check: " + std::string(v.passed ? "pass" : "FAIL"));
    rep.text.push_back("  residual with refined quadrature " + fmt(v.refined_residual) +
                       ", at the midpoints of the grid " + fmt(v.interpolation_residual));
    rep.text.push_back(std::string("  positive on the open interval: ") +
                       (v.positive ? "yes" : (v.trivial ? "trivial solution" : "no")) +
                       " (interior min " + fmt(v.interior_min) + ")");
    rep.text.push_back(std::string("  cone membership: ") +
                       (v.membership.passed ? "yes" : "no"));
    if (v.symmetry_defect)
      rep.text.push_back("  symmetry defect " + fmt(*v.symmetry_defect));
    rep.text.push_back("  alpha = " + fmt(v.functionals.alpha) + ", beta = " +
                       fmt(v.functionals.beta) + ", theta = " + fmt(v.functionals.theta) +
                       ", psi = " + fmt(v.functionals.psi));
    out.validated = v.passed;
    out.validation = std::move(v);
  } else {
    rep.json["validation"] = nullptr;
  }
  rep.solution = std::move(sol);
  return out;
}

inline void set_outcome(RunReport& rep, const std::string& assertion, bool holds) {
  rep.json["outcome"] = {{"primary_assertion", assertion},
                         {"holds", holds},
                         {"exit_code", holds ? 0 : 1}};
  rep.text.push_back("");
  rep.text.push_back(assertion + ": " + (holds ? "HOLDS" : "DOES NOT HOLD"));
}

} // namespace detail

/// Runs one command. Config problems throw; numerical findings go into the
/// report.
inline RunReport run(Command command, const ProblemConfig& cfg) {
  RunReport rep;
  rep.command = command;
  rep.json["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rep.json["command"] = to_string(command);
  rep.json["config"] = serialize_config(cfg);

  Kernel kernel = build_kernel(cfg.kernel);
  rep.json["kernel"] = {{"name", kernel.name()},
                        {"t1", kernel.domain().t1()},
                        {"t2", kernel.domain().t2()},
                        {"k", kernel.k_exponent()}};
  rep.text.push_back(std::string(kToolName) + " " + kToolVersion + " " +
                     to_string(command) + ": kernel '" + kernel.name() + "' on [" +
                     detail::fmt(kernel.domain().t1()) + ", " +
                     detail::fmt(kernel.domain().t2()) + "], " + to_string(cfg.variant) +
                     " variant");

  switch (command) {
  case Command::hypotheses: {
    bool ok = false;
    detail::hypotheses_section(rep, kernel, cfg, ok);
    detail::set_outcome(rep, std::string("hypotheses required by the ") +
                                 to_string(cfg.variant) + " variant pass",
                        ok);
    break;
  }
  case Command::certify: {
    MonotoneSplit split = build_split(cfg);
    auto c = detail::certify_section(rep, kernel, split, cfg);
    detail::set_outcome(rep, "existence certificate satisfied", c.split_ok && c.satisfied);
    break;
  }
  case Command::solve: {
    MonotoneSplit split = build_split(cfg);
    auto c = detail::certify_section(rep, kernel, split, cfg);
    (void)c;
    auto s = detail::solve_section(rep, kernel, split, cfg);
    detail::set_outcome(rep, "fixed point computed and validated", s.converged && s.validated);
    break;
  }
  case Command::reproduce:
    break;
  }
  if (command != Command::reproduce)
    return rep;

  // reproduce: the Example end to end, with pinned values.
  MonotoneSplit split = build_split(cfg);
  bool hyp_required_ok = false;
  detail::hypotheses_section(rep, kernel, cfg, hyp_required_ok);
  auto cert = detail::certify_section(rep, kernel, split, cfg);
  auto sol = detail::solve_section(rep, kernel, split, cfg);

  Json checks = Json::array();
  bool all = true;
  rep.text.push_back("Pinned Example values:");
  auto check = [&](const std::string& name, bool ok, const std::string& detail_text) {
    checks.push_back({{"check", name}, {"passed", ok}, {"detail", detail_text}});
    rep.text.push_back(std::string("  [") + (ok ? "ok" : "MISMATCH") + "] " + name +
                       ": " + detail_text);
    all = all && ok;
  };
  auto near = [](double v, const Rational& r, double tol) {
    return std::abs(v - to_double(r)) <= tol;
  };

  const Rational r5_384 = Rational(5) / 384, r277 = Rational(277) / 49152,
                 r497 = Rational(497) / 98304;
  const double mid = kernel.domain().midpoint(), q = kernel.domain().eighth();
  const double quad_mid = kernel_row_integral(kernel, mid, kernel.domain().t1(),
                                              kernel.domain().t2(), cfg.quadrature);
  const double quad_sym = symmetrized_row_integral(kernel, q, cfg.quadrature);
  const double quad_full = kernel_row_integral(kernel, q, kernel.domain().t1(),
                                               kernel.domain().t2(), cfg.quadrature);
  const Thresholds th = compute_thresholds(kernel, cfg.variant, cfg.quadrature);

  check("integral of G(1/2, .) over [0, 1] = 5/384",
        th.I2.exact == r5_384 && near(quad_mid, r5_384, 1e-13),
        "exact " + detail::fmt(th.I2) + ", quadrature " + detail::fmt(quad_mid, 17));
  check("twice the integral of G(1/8, .) over [0, 1/2] = 277/49152",
        th.I3_doubled_half.exact == r277 && near(quad_sym, r277, 1e-13),
        "exact " + detail::fmt(th.I3_doubled_half) + ", quadrature " +
            detail::fmt(quad_sym, 17));
  check("integral of G(1/8, .) over [0, 1] = 497/98304 (differs from 277/49152)",
        th.I3_full_interval.exact == r497 && near(quad_full, r497, 1e-13),
        "exact " + detail::fmt(th.I3_full_interval) + ", quadrature " +
            detail::fmt(quad_full, 17) + "; the doubled half-interval value is used");
  if (cert.certificate) {
    const auto& c = *cert.certificate;
    check("condition (2) threshold f_up(2) < 384/5",
          c.conditions[1].threshold.exact == Rational(384) / 5 &&
              c.conditions[1].argument == 2.0,
          "threshold " + detail::fmt(c.conditions[1].threshold));
    check("condition (3) threshold f_down(0) < 12288/277",
          c.conditions[2].threshold.exact == Rational(12288) / 277,
          "threshold " + detail::fmt(c.conditions[2].threshold));
    check("certificate satisfied", c.satisfied && cert.split_ok,
          c.satisfied ? "all four margins positive" : "some condition fails");
  } else {
    check("certificate computed", false, "no parameters");
  }
  {
    const auto& hyps = rep.json["hypotheses"];
    bool h2_fails = false;
    for (const auto& h : hyps)
      if (h["hypothesis"] == "H2")
        h2_fails = !h["passed"].get<bool>();
    check("H1, H3, H4(i), H4(ii), H5, gprop pass; H2 fails",
          hyp_required_ok && h2_fails, "grid " + std::to_string(cfg.checks.grid));
  }
  check("solver converged with residual <= 1e-10",
        sol.converged && rep.solution->residual <= 1e-10,
        "residual " + detail::fmt(rep.solution->residual));
  if (sol.validation) {
    const auto& v = *sol.validation;
    check("solution positive on the open interval", v.positive,
          "interior min " + detail::fmt(v.interior_min));
    check("symmetry defect <= 1e-9", v.symmetry_defect && *v.symmetry_defect <= 1e-9,
          "defect " + detail::fmt(v.symmetry_defect.value_or(NAN)));
    check("solution lies in the symmetric cone (k = 1, tol 1e-9)", v.membership.passed,
          v.membership.passed ? "all clauses hold" : "membership violated");
  } else {
    check("solution validated", false, "solver did not converge");
  }
  rep.json["checks"] = checks;
  detail::set_outcome(rep, "Example reproduced", all);
  return rep;
}

inline std::string text_report(const RunReport& rep) {
  std::string out;
  for (const auto& line : rep.text)
    out += line + "\n";
  return out;
}

/// Two columns (node, value) with 17 significant digits.
inline void write_solution_table(std::ostream& os, const GridFunction& x) {
  os << "# t\tx\n" << std::setprecision(17);
  for (std::size_t i = 0; i < x.size(); ++i)
    os << x.nodes()[i] << '\t' << x.values()[i] << '\n';
}

inline void write_residual_table(std::ostream& os, const std::vector<double>& history) {
  os << "# iteration\tresidual\n" << std::setprecision(17);
  for (std::size_t i = 0; i < history.size(); ++i)
    os << i << '\t' << history[i] << '\n';
}

/// Writes report.txt, report.json and, when a solution exists, solution.tsv
/// and residuals.tsv into `dir`.
inline void write_outputs(const RunReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.txt") << text_report(rep);
  std::ofstream(dir / "report.json") << rep.json.dump(2) << '\n';
  if (rep.solution) {
    std::ofstream sol(dir / "solution.tsv");
    write_solution_table(sol, rep.solution->x);
    std::ofstream res(dir / "residuals.tsv");
    write_residual_table(res, rep.solution->history);
  }
}

} // namespace hamkit

#endif // HAMKIT_RUN_HPP
