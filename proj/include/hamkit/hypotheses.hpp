#ifndef HAMKIT_HYPOTHESES_HPP
#define HAMKIT_HYPOTHESES_HPP

#include "hamkit/kernel.hpp"
#include "hamkit/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamkit {

enum class Hypothesis { H1, H2, H3, H4i, H4ii, H5, gprop };

inline const char* to_string(Hypothesis h) {
  switch (h) {
  case Hypothesis::H1: return "H1";
  case Hypothesis::H2: return "H2";
  case Hypothesis::H3: return "H3";
  case Hypothesis::H4i: return "H4i";
  case Hypothesis::H4ii: return "H4ii";
  case Hypothesis::H5: return "H5";
  case Hypothesis::gprop: return "gprop";
  }
  return "?";
}

/// Outcome of one grid scan. worst_margin is signed (negative = violation)
/// and passed ⇔ worst_margin >= −tol. The witness lists the coordinates of
/// the worst case in the order documented per check.
struct HypothesisReport {
  Hypothesis hypothesis = Hypothesis::H1;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  int grid_size = 0;
  double tol = 0;
  std::string note;
};

inline constexpr int kDefaultHypothesisGrid = 101;
inline constexpr double kDefaultHypothesisTolerance = 1e-10;

namespace detail {

/// Kernel values on an N×N grid of equally spaced nodes.
class KernelGrid {
public:
  KernelGrid(const Kernel& kernel, int n) : n_(n) {
    if (n < 2)
      throw std::invalid_argument("hypothesis grid_size must be >= 2");
    const Interval& iv = kernel.domain();
    nodes_.resize(n);
    for (int i = 0; i < n; ++i)
      nodes_[i] = i + 1 == n ? iv.t2() : iv.t1() + iv.length() * i / (n - 1);
    values_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        values_[static_cast<std::size_t>(i) * n + j] = kernel.eval(nodes_[i], nodes_[j]);
  }

  int size() const noexcept { return n_; }
  double node(int i) const { return nodes_[i]; }
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * n_ + j];
  }

private:
  int n_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Lexicographic scans visit witnesses in ascending order, so strict `<`
/// keeps the smallest witness among ties.
inline void record(HypothesisReport& r, double margin,
                   std::initializer_list<double> witness) {
  if (margin < r.worst_margin) {
    r.worst_margin = margin;
    r.witness.assign(witness);
  }
}

inline HypothesisReport start(Hypothesis h, int grid, double tol) {
  HypothesisReport r;
  r.hypothesis = h;
  r.grid_size = grid;
  r.tol = tol;
  return r;
}

inline HypothesisReport finish(HypothesisReport r) {
  r.passed = r.worst_margin >= -r.tol;
  return r;
}

} // namespace detail

/// G >= 0 on the grid and max G > tol. Witness (t, tau).
inline HypothesisReport check_H1(const Kernel& kernel,
                                 int grid_size = kDefaultHypothesisGrid,
                                 double tol = kDefaultHypothesisTolerance) {
  detail::KernelGrid g(kernel, grid_size);
  auto rep = detail::start(Hypothesis::H1, grid_size, tol);
  double max_val = -std::numeric_limits<double>::infinity();
  std::vector<double> max_at;
  for (int i = 0; i < grid_size; ++i)
    for (int j = 0; j < grid_size; ++j) {
      detail::record(rep, g(i, j), {g.node(i), g.node(j)});
      if (g(i, j) > max_val) {
        max_val = g(i, j);
        max_at = {g.node(i), g.node(j)};
      }
    }
  rep = detail::finish(std::move(rep));
  if (!(max_val > tol)) {
    rep.note = "kernel vanishes on the grid (max G = " + std::to_string(max_val) + ")";
    if (rep.passed) {
      // Report the non-triviality failure as a margin strictly below −tol.
      rep.passed = false;
      rep.worst_margin = std::nextafter(std::min(-tol, max_val - 2 * tol),
                                        -std::numeric_limits<double>::infinity());
      rep.witness = max_at;
    }
  }
  return rep;
}

/// G(t1, tau) <= G(t2, tau) for grid t1 <= t2. Witness (t1, t2, tau).
inline HypothesisReport check_H2(const Kernel& kernel,
                                 int grid_size = kDefaultHypothesisGrid,
                                 double tol = kDefaultHypothesisTolerance) {
  detail::KernelGrid g(kernel, grid_size);
  auto rep = detail::start(Hypothesis::H2, grid_size, tol);
  for (int a = 0; a < grid_size; ++a)
    for (int b = a; b < grid_size; ++b)
      for (int j = 0; j < grid_size; ++j)
        detail::record(rep, g(b, j) - g(a, j), {g.node(a), g.node(b), g.node(j)});
  return detail::finish(std::move(rep));
}

/// (y − T1)^k G(w, tau) <= (w − T1)^k G(y, tau) for grid y <= w, with the
/// kernel's own k. Witness (y, w, tau).
inline HypothesisReport check_H3(const Kernel& kernel,
                                 int grid_size = kDefaultHypothesisGrid,
                                 double tol = kDefaultHypothesisTolerance) {
  detail::KernelGrid g(kernel, grid_size);
  auto rep = detail::start(Hypothesis::H3, grid_size, tol);
  const double t1 = kernel.domain().t1();
  const double k = kernel.k_exponent();
  std::vector<double> scale(grid_size);
  for (int i = 0; i < grid_size; ++i)
    scale[i] = std::pow(g.node(i) - t1, k);
  for (int y = 0; y < grid_size; ++y)
    for (int w = y; w < grid_size; ++w)
      for (int j = 0; j < grid_size; ++j)
        detail::record(rep, scale[w] * g(y, j) - scale[y] * g(w, j),
                       {g.node(y), g.node(w), g.node(j)});
  return detail::finish(std::move(rep));
}

/// Both parts of H4 over grid t1 <= t2 in [T1, midpoint]. Reflected rows use
/// the mirror grid node. Witness (t1, t2, tau). Empty tau ranges contribute
/// nothing (margin +inf).
inline std::pair<HypothesisReport, HypothesisReport>
check_H4(const Kernel& kernel, int grid_size = kDefaultHypothesisGrid,
         double tol = kDefaultHypothesisTolerance) {
  detail::KernelGrid g(kernel, grid_size);
  auto part_i = detail::start(Hypothesis::H4i, grid_size, tol);
  auto part_ii = detail::start(Hypothesis::H4ii, grid_size, tol);
  const int n = grid_size;
  const int last_half = (n - 1) / 2;  // largest index with node <= midpoint
  for (int a = 0; a <= last_half; ++a)
    for (int b = a; b <= last_half; ++b) {
      const int ra = n - 1 - a;
      const int rb = n - 1 - b;
      // (i): tau in [t2, T2 − t2 + T1]
      for (int j = b; j <= rb; ++j)
        detail::record(part_i, g(b, j) - g(a, j), {g.node(a), g.node(b), g.node(j)});
      // (ii): tau <= t2
      for (int j = 0; j <= b; ++j)
        detail::record(part_ii, (g(b, j) + g(rb, j)) - (g(a, j) + g(ra, j)),
                       {g.node(a), g.node(b), g.node(j)});
    }
  return {detail::finish(std::move(part_i)), detail::finish(std::move(part_ii))};
}

/// |G(t, tau) − G(T2 − t + T1, T2 − tau + T1)| <= tol. Witness (t, tau).
inline HypothesisReport check_H5(const Kernel& kernel,
                                 int grid_size = kDefaultHypothesisGrid,
                                 double tol = kDefaultHypothesisTolerance) {
  detail::KernelGrid g(kernel, grid_size);
  auto rep = detail::start(Hypothesis::H5, grid_size, tol);
  for (int i = 0; i < grid_size; ++i)
    for (int j = 0; j < grid_size; ++j)
      detail::record(rep,
                     -std::abs(g(i, j) - kernel.reflected_eval(g.node(i), g.node(j))),
                     {g.node(i), g.node(j)});
  return detail::finish(std::move(rep));
}

/// Integrated form of H3 using full-interval row integrals. Witness (y, w).
inline HypothesisReport check_gprop(const Kernel& kernel,
                                    int grid_size = kDefaultHypothesisGrid,
                                    double tol = kDefaultHypothesisTolerance,
                                    const QuadratureConfig& qcfg = {}) {
  if (grid_size < 2)
    throw std::invalid_argument("hypothesis grid_size must be >= 2");
  auto rep = detail::start(Hypothesis::gprop, grid_size, tol);
  const Interval& iv = kernel.domain();
  const double k = kernel.k_exponent();
  std::vector<double> nodes(grid_size), rows(grid_size), scale(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    nodes[i] = i + 1 == grid_size ? iv.t2()
                                  : iv.t1() + iv.length() * i / (grid_size - 1);
    rows[i] = kernel_row_integral(kernel, nodes[i], iv.t1(), iv.t2(), qcfg);
    scale[i] = std::pow(nodes[i] - iv.t1(), k);
  }
  for (int y = 0; y < grid_size; ++y)
    for (int w = y; w < grid_size; ++w)
      detail::record(rep, scale[w] * rows[y] - scale[y] * rows[w],
                     {nodes[y], nodes[w]});
  return detail::finish(std::move(rep));
}

/// Every scan in fixed order: H1, H2, H3, H4i, H4ii, H5, gprop.
inline std::vector<HypothesisReport>
check_all_hypotheses(const Kernel& kernel, int grid_size = kDefaultHypothesisGrid,
                     double tol = kDefaultHypothesisTolerance,
                     const QuadratureConfig& qcfg = {}) {
  auto [h4i, h4ii] = check_H4(kernel, grid_size, tol);
  return {check_H1(kernel, grid_size, tol), check_H2(kernel, grid_size, tol),
          check_H3(kernel, grid_size, tol), std::move(h4i), std::move(h4ii),
          check_H5(kernel, grid_size, tol), check_gprop(kernel, grid_size, tol, qcfg)};
}

/// The hypotheses each theorem variant relies on.
inline std::vector<Hypothesis> required_hypotheses(bool symmetric) {
  if (symmetric)
    return {Hypothesis::H1, Hypothesis::H3, Hypothesis::H4i, Hypothesis::H4ii,
            Hypothesis::H5, Hypothesis::gprop};
  return {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::gprop};
}

} // namespace hamkit

#endif // HAMKIT_HYPOTHESES_HPP
