#ifndef HAMKIT_KERNEL_HPP
#define HAMKIT_KERNEL_HPP

#include "hamkit/errors.hpp"
#include "hamkit/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamkit {

/// Closed interval [t1, t2] with t1 < t2.
class Interval {
public:
  Interval(double t1, double t2) : t1_(t1), t2_(t2) {
    if (!(std::isfinite(t1) && std::isfinite(t2) && t1 < t2))
      throw std::invalid_argument("interval requires finite t1 < t2");
  }

  double t1() const noexcept { return t1_; }
  double t2() const noexcept { return t2_; }
  double length() const noexcept { return t2_ - t1_; }

  double midpoint() const noexcept { return (t1_ + t2_) / 2; }
  /// (3 t1 + t2) / 4, the focal point of the general cone.
  double quarter() const noexcept { return (3 * t1_ + t2_) / 4; }
  /// (7 t1 + t2) / 8, the focal point of the symmetric cone.
  double eighth() const noexcept { return (7 * t1_ + t2_) / 8; }

  bool contains(double t) const noexcept { return t >= t1_ && t <= t2_; }

  /// t ↦ t2 − t + t1, kept inside the interval against rounding.
  double reflect(double t) const noexcept {
    return std::clamp(t1_ + (t2_ - t), t1_, t2_);
  }

  friend bool operator==(const Interval&, const Interval&) = default;

private:
  double t1_;
  double t2_;
};

/// Bivariate polynomial sum_{i,j} c(i,j) t^i tau^j stored densely, row i per
/// power of t.
template <typename Scalar>
class BivariatePolynomial {
public:
  BivariatePolynomial() : BivariatePolynomial(0, 0) {}

  BivariatePolynomial(std::size_t degree_t, std::size_t degree_tau)
      : degree_t_(degree_t), degree_tau_(degree_tau),
        coeffs_((degree_t + 1) * (degree_tau + 1), Scalar(0)) {}

  /// Rows indexed by power of t; ragged rows are zero-padded.
  static BivariatePolynomial
  from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty())
      throw std::invalid_argument("polynomial needs at least one row");
    std::size_t width = 0;
    for (const auto& r : rows)
      width = std::max(width, r.size());
    if (width == 0)
      throw std::invalid_argument("polynomial rows are empty");
    BivariatePolynomial p(rows.size() - 1, width - 1);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        p.coeff(i, j) = rows[i][j];
    return p;
  }

  std::size_t degree_t() const noexcept { return degree_t_; }
  std::size_t degree_tau() const noexcept { return degree_tau_; }

  Scalar& coeff(std::size_t i, std::size_t j) {
    return coeffs_.at(i * (degree_tau_ + 1) + j);
  }
  const Scalar& coeff(std::size_t i, std::size_t j) const {
    return coeffs_.at(i * (degree_tau_ + 1) + j);
  }

  /// Horner in tau for each power of t, then Horner in t.
  Scalar operator()(const Scalar& t, const Scalar& tau) const {
    Scalar outer(0);
    for (std::size_t ii = degree_t_ + 1; ii-- > 0;) {
      Scalar inner(0);
      for (std::size_t jj = degree_tau_ + 1; jj-- > 0;)
        inner = inner * tau + coeffs_[ii * (degree_tau_ + 1) + jj];
      outer = outer * t + inner;
    }
    return outer;
  }

  /// Coefficients of tau ↦ p(t, tau), lowest power first.
  std::vector<Scalar> row_in_tau(const Scalar& t) const {
    std::vector<Scalar> out(degree_tau_ + 1, Scalar(0));
    for (std::size_t j = 0; j <= degree_tau_; ++j) {
      Scalar acc(0);
      for (std::size_t ii = degree_t_ + 1; ii-- > 0;)
        acc = acc * t + coeffs_[ii * (degree_tau_ + 1) + j];
      out[j] = acc;
    }
    return out;
  }

  std::vector<std::vector<Scalar>> rows() const {
    std::vector<std::vector<Scalar>> out(degree_t_ + 1);
    for (std::size_t i = 0; i <= degree_t_; ++i)
      for (std::size_t j = 0; j <= degree_tau_; ++j)
        out[i].push_back(coeff(i, j));
    return out;
  }

  template <typename Other>
  BivariatePolynomial<Other> cast() const {
    BivariatePolynomial<Other> p(degree_t_, degree_tau_);
    for (std::size_t i = 0; i <= degree_t_; ++i)
      for (std::size_t j = 0; j <= degree_tau_; ++j) {
        if constexpr (std::is_same_v<Scalar, Rational> &&
                      std::is_same_v<Other, double>)
          p.coeff(i, j) = to_double(coeff(i, j));
        else
          p.coeff(i, j) = static_cast<Other>(coeff(i, j));
      }
    return p;
  }

  friend bool operator==(const BivariatePolynomial&,
                         const BivariatePolynomial&) = default;

private:
  std::size_t degree_t_;
  std::size_t degree_tau_;
  std::vector<Scalar> coeffs_;
};

/// Exact ∫_a^b of a univariate polynomial given lowest power first.
inline Rational integrate_exact(const std::vector<Rational>& coeffs,
                                const Rational& a, const Rational& b) {
  Rational fa(0), fb(0);
  for (std::size_t j = coeffs.size(); j-- > 0;) {
    Rational c = coeffs[j] / Rational(static_cast<long long>(j + 1));
    fa = (fa + c) * a;
    fb = (fb + c) * b;
  }
  return fb - fa;
}

/// Kernel G(t, tau) on domain², given by two polynomial branches split along
/// the crease tau = t. Immutable after construction.
class Kernel {
public:
  using Poly = BivariatePolynomial<double>;
  using ExactPoly = BivariatePolynomial<Rational>;

  /// Branches with exact rational coefficients. The domain endpoints are
  /// exact as well, so row integrals can be evaluated in closed form.
  Kernel(std::string name, Rational t1, Rational t2, double k_exponent,
         ExactPoly lower, ExactPoly upper)
      : Kernel(std::move(name), Interval(to_double(t1), to_double(t2)),
               k_exponent, lower.cast<double>(), upper.cast<double>()) {
    exact_ = ExactData{std::move(t1), std::move(t2), std::move(lower),
                       std::move(upper)};
  }

  /// Floating branches only; no exact integrals.
  Kernel(std::string name, Interval domain, double k_exponent, Poly lower,
         Poly upper)
      : name_(std::move(name)), domain_(domain), k_(k_exponent),
        lower_(std::move(lower)), upper_(std::move(upper)) {
    if (!(std::isfinite(k_) && k_ > 0))
      throw std::invalid_argument("kernel k exponent must be positive");
    check_crease();
  }

  const std::string& name() const noexcept { return name_; }
  const Interval& domain() const noexcept { return domain_; }
  double k_exponent() const noexcept { return k_; }
  const Poly& lower_branch() const noexcept { return lower_; }
  const Poly& upper_branch() const noexcept { return upper_; }
  bool has_exact() const noexcept { return exact_.has_value(); }
  const ExactPoly& exact_lower() const { return exact_.value().lower; }
  const ExactPoly& exact_upper() const { return exact_.value().upper; }
  const Rational& exact_t1() const { return exact_.value().t1; }
  const Rational& exact_t2() const { return exact_.value().t2; }

  /// Lower branch when tau < t, upper otherwise.
  double eval(double t, double tau) const {
    require_in_domain(t, "t");
    require_in_domain(tau, "tau");
    return tau < t ? lower_(t, tau) : upper_(t, tau);
  }

  double operator()(double t, double tau) const { return eval(t, tau); }

  /// G(t2 − t + t1, t2 − tau + t1).
  double reflected_eval(double t, double tau) const {
    require_in_domain(t, "t");
    require_in_domain(tau, "tau");
    return eval(domain_.reflect(t), domain_.reflect(tau));
  }

  /// Exact value of ∫_a^b G(t, tau) dtau. Requires has_exact().
  Rational exact_row_integral(const Rational& t, const Rational& a,
                              const Rational& b) const {
    const ExactData& ex = exact_.value();
    if (t < ex.t1 || t > ex.t2 || a < ex.t1 || b > ex.t2 || a > b)
      throw DomainError("exact row integral outside the kernel domain",
                        to_double(t));
    Rational total(0);
    if (a < t) {
      Rational hi = b < t ? b : t;
      total += integrate_exact(ex.lower.row_in_tau(t), a, hi);
    }
    if (b > t) {
      Rational lo = a > t ? a : t;
      total += integrate_exact(ex.upper.row_in_tau(t), lo, b);
    }
    return total;
  }

private:
  struct ExactData {
    Rational t1;
    Rational t2;
    ExactPoly lower;
    ExactPoly upper;
  };

  void require_in_domain(double v, const char* which) const {
    if (!domain_.contains(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "kernel '" << name_ << "': " << which << " = " << v
         << " outside [" << domain_.t1() << ", " << domain_.t2() << "]";
      throw DomainError(os.str(), v);
    }
  }

  void check_crease() const {
    constexpr int samples = 201;
    for (int i = 0; i < samples; ++i) {
      double t = domain_.t1() + domain_.length() * i / (samples - 1);
      double lo = lower_(t, t);
      double up = upper_(t, t);
      if (!(std::abs(lo - up) <= 1e-12 * (1 + std::abs(up)))) {
        std::ostringstream os;
        os.precision(17);
        os << "kernel '" << name_ << "': branches disagree on the crease at t = "
           << t << " (" << lo << " vs " << up << ")";
        throw std::invalid_argument(os.str());
      }
    }
  }

  std::string name_;
  Interval domain_;
  double k_;
  Poly lower_;
  Poly upper_;
  std::optional<ExactData> exact_;
};

/// Green's function of x'''' = f with x(0) = x''(0) = x(1) = x''(1) = 0,
/// on [0, 1] with k = 1.
inline Kernel lidstone_kernel() {
  auto r = [](long long p, long long q = 1) { return Rational(p) / q; };
  // tau <= t: (tau^3 t − tau^3 + tau t^3 − 3 tau t^2 + 2 tau t) / 6
  Kernel::ExactPoly lower = Kernel::ExactPoly::from_rows({
      {r(0), r(0), r(0), r(-1, 6)},
      {r(0), r(1, 3), r(0), r(1, 6)},
      {r(0), r(-1, 2)},
      {r(0), r(1, 6)},
  });
  // t <= tau: (tau^3 t − 3 tau^2 t + tau t^3 + 2 tau t − t^3) / 6
  Kernel::ExactPoly upper = Kernel::ExactPoly::from_rows({
      {r(0)},
      {r(0), r(1, 3), r(-1, 2), r(1, 6)},
      {r(0)},
      {r(-1, 6), r(1, 6)},
  });
  return Kernel("lidstone", r(0), r(1), 1.0, std::move(lower),
                std::move(upper));
}

} // namespace hamkit

#endif // HAMKIT_KERNEL_HPP
