#ifndef HAMKIT_CONE_HPP
#define HAMKIT_CONE_HPP

#include "hamkit/errors.hpp"
#include "hamkit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamkit {

enum class Variant { general, symmetric };

inline const char* to_string(Variant v) {
  return v == Variant::general ? "general" : "symmetric";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "general")
    return Variant::general;
  if (s == "symmetric")
    return Variant::symmetric;
  throw std::invalid_argument("unknown variant '" + s +
                              "' (expected general or symmetric)");
}

/// Which cone, on which interval, with which scaling exponent.
///
/// The general cone P uses focal point (3 t1 + t2) / 4 and right point t2.
/// The symmetric cone K uses (7 t1 + t2) / 8 and the midpoint, and its
/// monotonicity and scaling clauses only apply on [t1, midpoint].
class ConeSpec {
public:
  ConeSpec(Variant variant, Interval interval, double k_exponent)
      : variant_(variant), interval_(interval), k_(k_exponent) {
    if (!(std::isfinite(k_) && k_ > 0))
      throw std::invalid_argument("cone k exponent must be positive");
  }

  static ConeSpec for_kernel(const Kernel& kernel, Variant variant) {
    return ConeSpec(variant, kernel.domain(), kernel.k_exponent());
  }

  Variant variant() const noexcept { return variant_; }
  const Interval& interval() const noexcept { return interval_; }
  double k_exponent() const noexcept { return k_; }

  double focal_point() const noexcept {
    return variant_ == Variant::general ? interval_.quarter()
                                        : interval_.eighth();
  }
  double right_point() const noexcept {
    return variant_ == Variant::general ? interval_.t2() : interval_.midpoint();
  }

private:
  Variant variant_;
  Interval interval_;
  double k_;
};

/// Piecewise-linear function stored by its values at ascending nodes.
class GridFunction {
public:
  GridFunction(std::vector<double> nodes, std::vector<double> values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2)
      throw std::invalid_argument("grid function needs at least two nodes");
    if (nodes_.size() != values_.size())
      throw std::invalid_argument("grid function nodes/values size mismatch");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
      if (!(nodes_[i] < nodes_[i + 1]))
        throw std::invalid_argument("grid function nodes must be strictly ascending");
  }

  /// Samples `f` at the given nodes.
  static GridFunction sample(std::vector<double> nodes,
                             const std::function<double(double)>& f) {
    std::vector<double> values(nodes.size());
    std::transform(nodes.begin(), nodes.end(), values.begin(), f);
    return GridFunction(std::move(nodes), std::move(values));
  }

  static GridFunction zero(std::vector<double> nodes) {
    std::vector<double> values(nodes.size(), 0.0);
    return GridFunction(std::move(nodes), std::move(values));
  }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double front() const noexcept { return nodes_.front(); }
  double back() const noexcept { return nodes_.back(); }

  /// Linear interpolation; t must lie within [front, back].
  double operator()(double t) const {
    if (!(t >= nodes_.front() && t <= nodes_.back()))
      throw DomainError("grid function evaluated outside its nodes", t);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    if (it == nodes_.end())
      return values_.back();
    std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
    std::size_t lo = hi - 1;
    if (t == nodes_[lo])
      return values_[lo];
    const double w = (t - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
  }

  double sup_norm() const {
    double m = 0;
    for (double v : values_)
      m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Equally spaced nodes over the interval, with `extra` points merged in.
/// Extra points closer than 1e-12·length to an existing node are dropped.
inline std::vector<double> uniform_nodes(const Interval& iv, int count,
                                         std::span<const double> extra = {}) {
  if (count < 2)
    throw std::invalid_argument("grid needs at least two points");
  std::vector<double> nodes(count);
  for (int i = 0; i < count; ++i)
    nodes[i] = i + 1 == count ? iv.t2() : iv.t1() + iv.length() * i / (count - 1);
  const double eps = 1e-12 * iv.length();
  for (double p : extra) {
    if (!iv.contains(p))
      continue;
    auto it = std::lower_bound(nodes.begin(), nodes.end(), p);
    bool close = (it != nodes.end() && std::abs(*it - p) <= eps) ||
                 (it != nodes.begin() && std::abs(*(it - 1) - p) <= eps);
    if (!close)
      nodes.insert(it, p);
  }
  return nodes;
}

/// Nodes for a cone: uniform plus the cone's focal and right points.
inline std::vector<double> cone_nodes(const ConeSpec& spec, int count) {
  const double extra[] = {spec.focal_point(), spec.right_point()};
  return uniform_nodes(spec.interval(), count, extra);
}

struct Functionals {
  double alpha;  // min over [focal, right]
  double beta;   // x(right)
  double theta;  // x(focal)
  double psi;    // x(right)
};

namespace detail {
inline void require_matching_grid(const GridFunction& x, const ConeSpec& spec) {
  const Interval& iv = spec.interval();
  if (x.front() != iv.t1() || x.back() != iv.t2())
    throw std::invalid_argument("grid function does not span the cone interval");
}
} // namespace detail

/// alpha is the true minimum of the interpolant over [focal, right]; it equals
/// theta only when x is nondecreasing there.
inline Functionals functionals(const GridFunction& x, const ConeSpec& spec) {
  detail::require_matching_grid(x, spec);
  const double focal = spec.focal_point();
  const double right = spec.right_point();
  Functionals f{};
  f.theta = x(focal);
  f.beta = x(right);
  f.psi = f.beta;
  f.alpha = std::min(f.theta, f.beta);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.nodes()[i] > focal && x.nodes()[i] < right)
      f.alpha = std::min(f.alpha, x.values()[i]);
  return f;
}

struct ClauseResult {
  std::string clause;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> witness;  // coordinates realizing worst_margin
  bool evaluated = false;       // false when the clause does not apply
};

struct MembershipReport {
  Variant variant = Variant::general;
  double tol = 0;
  ClauseResult nonnegative;    // (a)
  ClauseResult nondecreasing;  // (b)
  ClauseResult k_scaling;      // (c)
  ClauseResult symmetry;       // (d), symmetric variant only
  bool passed = false;

  std::vector<const ClauseResult*> clauses() const {
    return {&nonnegative, &nondecreasing, &k_scaling, &symmetry};
  }
};

inline constexpr double kDefaultConeTolerance = 1e-9;

namespace detail {
inline void record(ClauseResult& c, double margin,
                   std::initializer_list<double> witness) {
  c.evaluated = true;
  if (margin < c.worst_margin) {
    c.worst_margin = margin;
    c.witness.assign(witness);
  }
}
} // namespace detail

/// Checks cone membership on node pairs. Margins are signed, negative means
/// violation; a clause passes iff its worst margin >= −tol.
inline MembershipReport check_membership(const GridFunction& x,
                                         const ConeSpec& spec,
                                         double tol = kDefaultConeTolerance) {
  detail::require_matching_grid(x, spec);
  MembershipReport rep;
  rep.variant = spec.variant();
  rep.tol = tol;
  rep.nonnegative.clause = "nonnegative";
  rep.nondecreasing.clause = "nondecreasing";
  rep.k_scaling.clause = "k-scaling";
  rep.symmetry.clause = "symmetry";

  const double t1 = spec.interval().t1();
  const double right = spec.right_point();
  const double k = spec.k_exponent();

  // Evaluation points on [t1, right]: nodes plus the right point itself.
  std::vector<double> pts, vals;
  for (std::size_t i = 0; i < x.size() && x.nodes()[i] <= right; ++i) {
    pts.push_back(x.nodes()[i]);
    vals.push_back(x.values()[i]);
  }
  if (pts.back() != right) {
    pts.push_back(right);
    vals.push_back(x(right));
  }

  for (std::size_t i = 0; i < x.size(); ++i)
    detail::record(rep.nonnegative, x.values()[i], {x.nodes()[i]});

  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    detail::record(rep.nondecreasing, vals[i + 1] - vals[i], {pts[i], pts[i + 1]});

  std::vector<double> scale(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    scale[i] = std::pow(pts[i] - t1, k);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      detail::record(rep.k_scaling, scale[j] * vals[i] - scale[i] * vals[j],
                     {pts[i], pts[j]});

  if (spec.variant() == Variant::symmetric) {
    const Interval& iv = spec.interval();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x.nodes()[i];
      detail::record(rep.symmetry, -std::abs(x(iv.reflect(t)) - x.values()[i]),
                     {t});
    }
  }

  rep.passed = true;
  for (ClauseResult* c : {&rep.nonnegative, &rep.nondecreasing, &rep.k_scaling,
                          &rep.symmetry}) {
    c->passed = !c->evaluated || c->worst_margin >= -tol;
    rep.passed = rep.passed && c->passed;
  }
  return rep;
}

} // namespace hamkit

#endif // HAMKIT_CONE_HPP
