#ifndef HAMKIT_SOLVER_HPP
#define HAMKIT_SOLVER_HPP

#include "hamkit/cone.hpp"
#include "hamkit/errors.hpp"
#include "hamkit/kernel.hpp"
#include "hamkit/monotone_split.hpp"
#include "hamkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamkit {

/// Inputs below −kNegativeGuard are rejected; values in [−guard, 0) are
/// clamped to zero before f is applied.
inline constexpr double kNegativeGuard = 1e-12;

/// Nyström discretisation of x ↦ ∫ G(t_i, tau) g(x(tau)) dtau on fixed nodes.
///
/// x is the piecewise-linear interpolant of its node values. Quadrature
/// panels are the grid cells (optionally subdivided), so the crease tau = t_i
/// always falls on a panel boundary. The weighted kernel matrix is built once.
class NystromOperator {
public:
  NystromOperator(const Kernel& kernel, std::vector<double> nodes,
                  int nodes_per_panel = 16, int subdivisions = 1)
      : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2)
      throw std::invalid_argument("operator grid needs at least two nodes");
    if (nodes_.front() != kernel.domain().t1() ||
        nodes_.back() != kernel.domain().t2())
      throw std::invalid_argument("operator grid must span the kernel domain");
    if (subdivisions < 1)
      throw std::invalid_argument("subdivisions must be >= 1");
    const GaussLegendreRule& rule = gauss_legendre(nodes_per_panel);

    for (std::size_t cell = 0; cell + 1 < nodes_.size(); ++cell) {
      const double lo = nodes_[cell], hi = nodes_[cell + 1];
      for (int s = 0; s < subdivisions; ++s) {
        const double a = lo + (hi - lo) * s / subdivisions;
        const double b = s + 1 == subdivisions ? hi : lo + (hi - lo) * (s + 1) / subdivisions;
        const double half = (b - a) / 2, mid = (a + b) / 2;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double tau = mid + half * rule.nodes[q];
          points_.push_back(tau);
          weights_.push_back(half * rule.weights[q]);
          cells_.push_back(cell);
          lerp_.push_back((tau - lo) / (hi - lo));
        }
      }
    }
    const std::size_t m = points_.size();
    matrix_.resize(nodes_.size() * m);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t q = 0; q < m; ++q)
        matrix_[i * m + q] = weights_[q] * kernel.eval(nodes_[i], points_[q]);
  }

  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Values of ∫ G(t_i, ·) g(x(·)) at the grid nodes.
  std::vector<double> apply(const std::function<double(double)>& g,
                            std::span<const double> values) const {
    if (values.size() != nodes_.size())
      throw std::invalid_argument("operator input has the wrong number of values");
    std::vector<double> x(values.begin(), values.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < -kNegativeGuard)
        throw DomainError("operator input is negative at t = " +
                              std::to_string(nodes_[i]) + " (f is defined on [0, inf))",
                          nodes_[i]);
      if (x[i] < 0)
        x[i] = 0;
    }
    const std::size_t m = points_.size();
    std::vector<double> gx(m);
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t c = cells_[q];
      const double xv = x[c] + lerp_[q] * (x[c + 1] - x[c]);
      gx[q] = g(xv);
    }
    std::vector<double> out(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      double acc = 0;
      const double* row = &matrix_[i * m];
      for (std::size_t q = 0; q < m; ++q)
        acc += row[q] * gx[q];
      out[i] = acc;
    }
    return out;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<std::size_t> cells_;
  std::vector<double> lerp_;
  std::vector<double> matrix_;  // nodes × points, row-major
};

namespace detail {
inline GridFunction apply_part(const Kernel& kernel, const GridFunction& x,
                               const std::function<double(double)>& g,
                               const QuadratureConfig& qcfg) {
  NystromOperator op(kernel, std::vector<double>(x.nodes().begin(), x.nodes().end()),
                     qcfg.nodes_per_panel);
  return GridFunction(std::vector<double>(x.nodes().begin(), x.nodes().end()),
                      op.apply(g, x.values()));
}
} // namespace detail

/// (T x)(t_i) with f = f_up + f_down.
inline GridFunction apply_T(const Kernel& kernel, const MonotoneSplit& split,
                            const GridFunction& x, const QuadratureConfig& qcfg = {}) {
  return detail::apply_part(kernel, x, [&](double v) { return split.eval_f(v); }, qcfg);
}

/// (R x)(t_i) with f_up only.
inline GridFunction apply_R(const Kernel& kernel, const MonotoneSplit& split,
                            const GridFunction& x, const QuadratureConfig& qcfg = {}) {
  return detail::apply_part(kernel, x, [&](double v) { return split.up(v); }, qcfg);
}

/// (S x)(t_i) with f_down only.
inline GridFunction apply_S(const Kernel& kernel, const MonotoneSplit& split,
                            const GridFunction& x, const QuadratureConfig& qcfg = {}) {
  return detail::apply_part(kernel, x, [&](double v) { return split.down(v); }, qcfg);
}

enum class InitialGuess { zero, ramp };

struct SolverConfig {
  int grid_points = 129;
  int max_iterations = 500;
  double residual_tol = 1e-10;
  double damping = 1.0;
  double divergence_factor = 1e6;
  InitialGuess initial = InitialGuess::zero;
  double ramp_height = 1.0;  // the ramp starts at t ↦ height·(t − T1)/(T2 − T1)

  void validate() const {
    if (grid_points < 2)
      throw std::invalid_argument("solver grid_points must be >= 2");
    if (max_iterations < 0)
      throw std::invalid_argument("solver max_iterations must be >= 0");
    if (!(residual_tol > 0))
      throw std::invalid_argument("solver residual_tol must be positive");
    if (!(damping > 0 && damping <= 1))
      throw std::invalid_argument("solver damping must lie in (0, 1]");
    if (!(divergence_factor > 0))
      throw std::invalid_argument("solver divergence_factor must be positive");
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Solver grid: uniform nodes plus the focal and right points of both cones.
inline std::vector<double> solver_nodes(const Interval& iv, int grid_points) {
  const double extra[] = {iv.eighth(), iv.quarter(), iv.midpoint()};
  return uniform_nodes(iv, grid_points, extra);
}

struct SolutionResult {
  GridFunction x;
  double residual = std::numeric_limits<double>::infinity();  // sup |x − T x|
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  double residual_tol = 0;
  std::vector<double> history;
  std::string notes;
};

/// Damped Picard iteration x ← (1 − damping) x + damping T x.
///
/// Stops when sup |x − T x| <= residual_tol (converged), after
/// max_iterations updates, or when the residual exceeds
/// divergence_factor·(1 + first residual). The returned x is the iterate
/// whose residual was measured last.
inline SolutionResult solve_fixed_point(const Kernel& kernel,
                                        const MonotoneSplit& split,
                                        const SolverConfig& cfg = {},
                                        const QuadratureConfig& qcfg = {},
                                        std::optional<GridFunction> initial = {}) {
  cfg.validate();
  const Interval& iv = kernel.domain();
  GridFunction x = initial ? *initial : GridFunction::zero(solver_nodes(iv, cfg.grid_points));
  if (!initial && cfg.initial == InitialGuess::ramp)
    x = GridFunction::sample(std::vector<double>(x.nodes().begin(), x.nodes().end()),
                             [&](double t) {
                               return cfg.ramp_height * (t - iv.t1()) / iv.length();
                             });
  NystromOperator op(kernel, std::vector<double>(x.nodes().begin(), x.nodes().end()),
                     qcfg.nodes_per_panel);
  auto f = [&](double v) { return split.eval_f(v); };

  SolutionResult res{x};
  res.residual_tol = cfg.residual_tol;
  double first_residual = 0;
  for (int iter = 0;; ++iter) {
    std::vector<double> tx;
    try {
      tx = op.apply(f, x.values());
    } catch (const EvaluationError& e) {
      throw EvaluationError("iteration " + std::to_string(iter) + ": " + e.what(),
                            e.location());
    } catch (const DomainError& e) {
      throw DomainError("iteration " + std::to_string(iter) + ": " + e.what(),
                        e.coordinate());
    }
    double r = 0;
    for (std::size_t i = 0; i < tx.size(); ++i)
      r = std::max(r, std::abs(x.values()[i] - tx[i]));
    res.history.push_back(r);
    res.residual = r;
    if (iter == 0)
      first_residual = r;
    if (r <= cfg.residual_tol) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(r) || r > cfg.divergence_factor * (1 + first_residual)) {
      res.diverged = true;
      res.notes = "diverged: residual " + std::to_string(r) + " at iteration " +
                  std::to_string(iter);
      break;
    }
    if (iter == cfg.max_iterations) {
      res.notes = "iteration limit reached";
      break;
    }
    auto& v = x.mutable_values();
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = (1 - cfg.damping) * v[i] + cfg.damping * tx[i];
    ++res.iterations;
  }
  res.x = x;
  return res;
}

struct SolutionValidation {
  double refined_residual = 0;        // at the nodes, 2× quadrature panels
  double interpolation_residual = 0;  // at the nodes of the 2× grid
  bool residual_ok = false;           // refined_residual <= 10·residual_tol
  bool trivial = false;               // x ≡ 0
  bool positive = false;              // min over interior nodes > 0
  double interior_min = 0;
  MembershipReport membership;
  std::optional<double> symmetry_defect;  // symmetric variant only
  Functionals functionals{};
  bool passed = false;
  std::vector<std::string> notes;
};

/// Re-checks a computed solution: residual under refined quadrature,
/// positivity on the open interval, cone membership, symmetry, and the
/// functional values (alpha, beta, theta, psi).
inline SolutionValidation verify_solution(const Kernel& kernel,
                                          const MonotoneSplit& split,
                                          const SolutionResult& result,
                                          const ConeSpec& spec,
                                          double tol = kDefaultConeTolerance,
                                          const QuadratureConfig& qcfg = {}) {
  SolutionValidation v;
  const GridFunction& x = result.x;
  std::vector<double> nodes(x.nodes().begin(), x.nodes().end());
  auto f = [&](double y) { return split.eval_f(y); };

  NystromOperator refined(kernel, nodes, qcfg.nodes_per_panel, 2);
  auto tx = refined.apply(f, x.values());
  for (std::size_t i = 0; i < tx.size(); ++i)
    v.refined_residual = std::max(v.refined_residual, std::abs(x.values()[i] - tx[i]));
  v.residual_ok = v.refined_residual <= 10 * result.residual_tol;

  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    fine.push_back(nodes[i]);
    fine.push_back((nodes[i] + nodes[i + 1]) / 2);
  }
  fine.push_back(nodes.back());
  GridFunction xf = GridFunction::sample(fine, [&](double t) { return x(t); });
  NystromOperator fine_op(kernel, fine, qcfg.nodes_per_panel);
  auto txf = fine_op.apply(f, xf.values());
  for (std::size_t i = 0; i < txf.size(); ++i)
    v.interpolation_residual =
        std::max(v.interpolation_residual, std::abs(xf.values()[i] - txf[i]));

  v.trivial = std::all_of(x.values().begin(), x.values().end(),
                          [](double y) { return y == 0; });
  v.interior_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    v.interior_min = std::min(v.interior_min, x.values()[i]);
  v.positive = !v.trivial && v.interior_min > 0;
  if (v.trivial)
    v.notes.push_back("trivial solution (x = 0)");

  v.membership = check_membership(x, spec, tol);
  if (spec.variant() == Variant::symmetric) {
    double defect = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      defect = std::max(defect,
                        std::abs(x.values()[i] - x(spec.interval().reflect(x.nodes()[i]))));
    v.symmetry_defect = defect;
  }
  v.functionals = functionals(x, spec);
  if (!result.converged)
    v.notes.push_back("solution did not converge");

  v.passed = result.converged && v.residual_ok && v.positive && v.membership.passed &&
             (!v.symmetry_defect || *v.symmetry_defect <= tol);
  return v;
}

struct ConeMappingEntry {
  std::string name;
  bool accepted = false;  // the sample itself is a cone member
  MembershipReport sample;
  MembershipReport image_T, image_R, image_S;
  bool passed = false;    // all three images are members
};

struct ConeMappingReport {
  std::vector<ConeMappingEntry> entries;
  int rejected = 0;
  bool passed = true;  // every accepted sample maps into the cone
};

struct NamedSample {
  std::string name;
  GridFunction x;
};

/// Applies T, R and S to each sample cone member and checks the images for
/// membership. Samples that are not members are listed as rejected and
/// skipped.
inline ConeMappingReport check_cone_mapping(const Kernel& kernel,
                                            const MonotoneSplit& split,
                                            const ConeSpec& spec,
                                            const std::vector<NamedSample>& samples,
                                            double tol = kDefaultConeTolerance,
                                            const QuadratureConfig& qcfg = {}) {
  ConeMappingReport rep;
  for (const auto& s : samples) {
    ConeMappingEntry e;
    e.name = s.name;
    e.sample = check_membership(s.x, spec, tol);
    e.accepted = e.sample.passed;
    if (!e.accepted) {
      ++rep.rejected;
      rep.entries.push_back(std::move(e));
      continue;
    }
    NystromOperator op(kernel, std::vector<double>(s.x.nodes().begin(), s.x.nodes().end()),
                       qcfg.nodes_per_panel);
    auto image = [&](const std::function<double(double)>& g) {
      return check_membership(
          GridFunction(std::vector<double>(s.x.nodes().begin(), s.x.nodes().end()),
                       op.apply(g, s.x.values())),
          spec, tol);
    };
    e.image_T = image([&](double v) { return split.eval_f(v); });
    e.image_R = image([&](double v) { return split.up(v); });
    e.image_S = image([&](double v) { return split.down(v); });
    e.passed = e.image_T.passed && e.image_R.passed && e.image_S.passed;
    rep.passed = rep.passed && e.passed;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

} // namespace hamkit

#endif // HAMKIT_SOLVER_HPP
