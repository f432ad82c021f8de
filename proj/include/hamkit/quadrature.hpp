#ifndef HAMKIT_QUADRATURE_HPP
#define HAMKIT_QUADRATURE_HPP

#include "hamkit/errors.hpp"
#include "hamkit/kernel.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hamkit {

struct QuadratureConfig {
  int nodes_per_panel = 16;
  int panels = 8;
  bool crease_split = true;

  void validate() const {
    if (nodes_per_panel < 2)
      throw std::invalid_argument("quadrature nodes_per_panel must be >= 2");
    if (panels < 1)
      throw std::invalid_argument("quadrature panels must be >= 1");
  }

  friend bool operator==(const QuadratureConfig&,
                         const QuadratureConfig&) = default;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule build_gauss_legendre(int n) {
  GaussLegendreRule rule;
  if (n == 1)
    return {{0.0}, {2.0}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1, p1 = x;
    for (int m = 2; m <= n; ++m) {
      double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0;
  return rule;
}

} // namespace detail

/// Cached rule of the given order, ascending nodes. Thread-safe.
inline const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1)
    throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot)
    slot = std::make_unique<GaussLegendreRule>(detail::build_gauss_legendre(n));
  return *slot;
}

/// Adds the rule mapped onto [a, b] to `acc`, left to right.
template <typename F>
void accumulate_panel(const GaussLegendreRule& rule, F&& f, double a, double b,
                      double& acc) {
  const double half = (b - a) / 2;
  const double mid = (a + b) / 2;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = mid + half * rule.nodes[q];
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "non-finite integrand value at " << x;
      throw EvaluationError(os.str(), x);
    }
    acc += half * rule.weights[q] * v;
  }
}

/// Composite Gauss-Legendre integral of f over [a, b] with equal panels,
/// summed in ascending panel order.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureConfig& config = {}) {
  config.validate();
  if (!(a <= b))
    throw std::invalid_argument("integrate requires a <= b");
  if (a == b)
    return 0.0;
  const GaussLegendreRule& rule = gauss_legendre(config.nodes_per_panel);
  double acc = 0;
  const double width = (b - a) / config.panels;
  for (int p = 0; p < config.panels; ++p) {
    const double lo = a + width * p;
    const double hi = p + 1 == config.panels ? b : a + width * (p + 1);
    accumulate_panel(rule, f, lo, hi, acc);
  }
  return acc;
}

/// ∫_a^b G(t, tau) dtau. With crease_split and a < t < b the range is
/// integrated as [a, t] then [t, b].
inline double kernel_row_integral(const Kernel& kernel, double t, double a,
                                  double b, const QuadratureConfig& config = {}) {
  const Interval& dom = kernel.domain();
  if (!dom.contains(t))
    throw DomainError("row integral: t outside kernel domain", t);
  if (!dom.contains(a))
    throw DomainError("row integral: lower limit outside kernel domain", a);
  if (!dom.contains(b))
    throw DomainError("row integral: upper limit outside kernel domain", b);
  auto row = [&](double tau) { return kernel.eval(t, tau); };
  if (config.crease_split && a < t && t < b)
    return integrate(row, a, t, config) + integrate(row, t, b, config);
  return integrate(row, a, b, config);
}

/// 2 ∫_{t1}^{mid} G(t, tau) dtau.
inline double symmetrized_row_integral(const Kernel& kernel, double t,
                                       const QuadratureConfig& config = {}) {
  const Interval& dom = kernel.domain();
  return 2 * kernel_row_integral(kernel, t, dom.t1(), dom.midpoint(), config);
}

} // namespace hamkit

#endif // HAMKIT_QUADRATURE_HPP
