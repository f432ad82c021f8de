#ifndef HAMKIT_CERTIFICATE_HPP
#define HAMKIT_CERTIFICATE_HPP

#include "hamkit/cone.hpp"
#include "hamkit/errors.hpp"
#include "hamkit/kernel.hpp"
#include "hamkit/monotone_split.hpp"
#include "hamkit/quadrature.hpp"
#include "hamkit/rational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hamkit {

/// The box parameters (a, b, c, d) of the layered sets. Stored exactly so
/// thresholds built from them stay rational.
struct BoxParams {
  Rational a{0}, b{0}, c{0}, d{0};

  static BoxParams from_doubles(double a, double b, double c, double d) {
    return {Rational(a), Rational(b), Rational(c), Rational(d)};
  }

  double a_value() const { return to_double(a); }
  double b_value() const { return to_double(b); }
  double c_value() const { return to_double(c); }
  double d_value() const { return to_double(d); }

  void validate() const {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw std::invalid_argument("box parameters a, b, c, d must be nonnegative");
  }

  friend bool operator==(const BoxParams&, const BoxParams&) = default;
};

/// A value with its exact rational form when one is available.
struct Number {
  double value = 0;
  std::optional<Rational> exact;

  static Number of(const Rational& r) { return {to_double(r), r}; }
  static Number of(double v) { return {v, std::nullopt}; }
};

/// The four integrals the theorem conditions compare against.
///
/// General variant, q = (3 T1 + T2) / 4:
///   I1 = ∫_q^T2 G(q,·), I2 = ∫_T1^T2 G(T2,·), I3 = ∫_T1^T2 G(q,·), I4 = I2.
/// Symmetric variant, q = (7 T1 + T2) / 8, m the midpoint:
///   I1 = ∫_q^m G(q,·), I2 = ∫_T1^T2 G(m,·), I3 = ∫_T1^T2 G(q,·),
///   I4 = ∫_T1^m G(m,·).
/// For the symmetric I3 two evaluations exist: the full-interval integral
/// and twice the half-interval integral. They differ for kernels whose row
/// at q is not symmetric about m. The larger one is used, so certificates
/// hold under both readings.
struct Thresholds {
  Variant variant = Variant::general;
  double focal_point = 0;
  double right_point = 0;
  Number I1, I2, I3, I4;
  Number I3_full_interval;  // symmetric only
  Number I3_doubled_half;   // symmetric only
  std::vector<std::string> notes;
};

namespace detail {

inline Number row_integral_number(const Kernel& kernel, const Rational* t_exact,
                                  double t, const Rational* a_exact, double a,
                                  const Rational* b_exact, double b,
                                  const QuadratureConfig& qcfg) {
  if (kernel.has_exact() && t_exact && a_exact && b_exact)
    return Number::of(kernel.exact_row_integral(*t_exact, *a_exact, *b_exact));
  return Number::of(kernel_row_integral(kernel, t, a, b, qcfg));
}

inline std::string describe(const Number& n) {
  std::ostringstream os;
  os.precision(17);
  if (n.exact)
    os << to_string(*n.exact) << " (" << n.value << ")";
  else
    os << n.value;
  return os.str();
}

} // namespace detail

/// Throws DegenerateKernelError if any threshold integral is not positive.
/// Exact rational values are produced for kernels with exact coefficients.
inline Thresholds compute_thresholds(const Kernel& kernel, Variant variant,
                                     const QuadratureConfig& qcfg = {}) {
  const Interval& iv = kernel.domain();
  const ConeSpec spec(variant, iv, kernel.k_exponent());
  Thresholds th;
  th.variant = variant;
  th.focal_point = spec.focal_point();
  th.right_point = spec.right_point();

  std::optional<Rational> et1, et2, eq, em;
  if (kernel.has_exact()) {
    et1 = kernel.exact_t1();
    et2 = kernel.exact_t2();
    eq = variant == Variant::general ? (3 * *et1 + *et2) / 4 : (7 * *et1 + *et2) / 8;
    em = (*et1 + *et2) / 2;
  }
  const Rational* pt1 = et1 ? &*et1 : nullptr;
  const Rational* pt2 = et2 ? &*et2 : nullptr;
  const Rational* pq = eq ? &*eq : nullptr;
  const Rational* pm = em ? &*em : nullptr;
  auto row = [&](const Rational* te, double t, const Rational* ae, double a,
                 const Rational* be, double b) {
    return detail::row_integral_number(kernel, te, t, ae, a, be, b, qcfg);
  };

  const double q = th.focal_point;
  if (variant == Variant::general) {
    th.I1 = row(pq, q, pq, q, pt2, iv.t2());
    th.I2 = row(pt2, iv.t2(), pt1, iv.t1(), pt2, iv.t2());
    th.I3 = row(pq, q, pt1, iv.t1(), pt2, iv.t2());
    th.I4 = th.I2;
  } else {
    const double m = iv.midpoint();
    th.I1 = row(pq, q, pq, q, pm, m);
    th.I2 = row(pm, m, pt1, iv.t1(), pt2, iv.t2());
    th.I3_full_interval = row(pq, q, pt1, iv.t1(), pt2, iv.t2());
    Number half = row(pq, q, pt1, iv.t1(), pm, m);
    th.I3_doubled_half = {2 * half.value,
                          half.exact ? std::optional<Rational>(2 * *half.exact)
                                     : std::nullopt};
    th.I3 = th.I3_doubled_half.value >= th.I3_full_interval.value
                ? th.I3_doubled_half
                : th.I3_full_interval;
    th.I4 = row(pm, m, pt1, iv.t1(), pm, m);

    std::ostringstream os;
    os << "condition-3 integral: full interval = "
       << detail::describe(th.I3_full_interval)
       << ", twice half interval = " << detail::describe(th.I3_doubled_half)
       << "; using the larger";
    th.notes.push_back(os.str());
    if (std::abs(th.I3_full_interval.value - th.I3_doubled_half.value) >
        1e-12 * (1 + std::abs(th.I3_full_interval.value)))
      th.notes.push_back("condition-3 integral readings disagree for this kernel");
  }

  const std::array<std::pair<const char*, const Number*>, 4> all{
      {{"I1", &th.I1}, {"I2", &th.I2}, {"I3", &th.I3}, {"I4", &th.I4}}};
  for (const auto& [name, num] : all)
    if (!(num->value > 0))
      throw DegenerateKernelError(std::string("threshold integral ") + name +
                                  " = " + detail::describe(*num) +
                                  " is not positive for the " + to_string(variant) +
                                  " variant");
  return th;
}

/// One theorem condition, written as f_part(argument) compared to threshold.
struct ConditionResult {
  std::string label;        // "(1)".."(4)"
  std::string part;         // "f_up" or "f_down"
  std::string relation;     // ">" or "<"
  double argument = 0;      // where f_part is evaluated
  double f_value = 0;
  Number threshold;         // e.g. b / I2
  double margin = 0;        // signed slack, positive = satisfied
  bool satisfied = false;
};

struct Certificate {
  Variant variant = Variant::general;
  BoxParams params;
  Thresholds thresholds;
  std::array<ConditionResult, 4> conditions;
  double strictness_eps = 0;
  bool satisfied = false;
  std::vector<std::string> notes;

  std::array<double, 4> margins() const {
    return {conditions[0].margin, conditions[1].margin, conditions[2].margin,
            conditions[3].margin};
  }
};

namespace detail {

inline Number ratio(const Rational& p, const Number& i) {
  if (i.exact)
    return Number::of(p / *i.exact);
  return Number::of(to_double(p) / i.value);
}

} // namespace detail

/// Evaluates the four conditions with precomputed thresholds.
///   m1 = f_up(a + 4^-k d)·I1 − a      m2 = b − f_up(b + 4^k c)·I2
///   m3 = c − f_down(0)·I3             m4 = f_down(b + d)·I4 − d
/// Satisfied iff every margin > strictness_eps and (a = 0 or b > a).
inline Certificate certify(const Thresholds& th, double k,
                           const MonotoneSplit& split, const BoxParams& params,
                           double strictness_eps = 0) {
  params.validate();
  const double a = params.a_value(), b = params.b_value(), c = params.c_value(),
               d = params.d_value();
  Certificate cert;
  cert.variant = th.variant;
  cert.params = params;
  cert.thresholds = th;
  cert.strictness_eps = strictness_eps;

  auto& c1 = cert.conditions[0];
  c1 = {"(1)", "f_up", ">", a + std::pow(4.0, -k) * d, 0, detail::ratio(params.a, th.I1)};
  c1.f_value = split.up(c1.argument);
  c1.margin = c1.f_value * th.I1.value - a;

  auto& c2 = cert.conditions[1];
  c2 = {"(2)", "f_up", "<", b + std::pow(4.0, k) * c, 0, detail::ratio(params.b, th.I2)};
  c2.f_value = split.up(c2.argument);
  c2.margin = b - c2.f_value * th.I2.value;

  auto& c3 = cert.conditions[2];
  c3 = {"(3)", "f_down", "<", 0.0, 0, detail::ratio(params.c, th.I3)};
  c3.f_value = split.down(0.0);
  c3.margin = c - c3.f_value * th.I3.value;

  auto& c4 = cert.conditions[3];
  c4 = {"(4)", "f_down", ">", b + d, 0, detail::ratio(params.d, th.I4)};
  c4.f_value = split.down(c4.argument);
  c4.margin = c4.f_value * th.I4.value - d;

  cert.satisfied = true;
  for (auto& cond : cert.conditions) {
    cond.satisfied = cond.margin > strictness_eps;
    if (!cond.satisfied && cond.margin >= 0 && cond.margin <= strictness_eps)
      cert.notes.push_back("condition " + cond.label +
                           " is on the boundary (margin within strictness guard): not certified");
    cert.satisfied = cert.satisfied && cond.satisfied;
  }
  if (params.a > 0 && !(params.b > params.a)) {
    cert.satisfied = false;
    cert.notes.push_back("b > a is required when a > 0");
  }
  cert.notes.insert(cert.notes.end(), th.notes.begin(), th.notes.end());
  return cert;
}

inline Certificate certify(const Kernel& kernel, const MonotoneSplit& split,
                           const BoxParams& params, Variant variant,
                           const QuadratureConfig& qcfg = {},
                           double strictness_eps = 0) {
  params.validate();
  return certify(compute_thresholds(kernel, variant, qcfg), kernel.k_exponent(),
                 split, params, strictness_eps);
}

/// The a = d = 0 specialisation, where condition (1) reads f_up(0) > 0 and
/// condition (4) reads f_down(b) > 0.
inline Certificate simplified_certify(const Kernel& kernel,
                                      const MonotoneSplit& split, const Rational& b,
                                      const Rational& c, Variant variant,
                                      const QuadratureConfig& qcfg = {},
                                      double strictness_eps = 0) {
  if (!(b > 0) || !(c > 0))
    throw std::invalid_argument("simplified certificate requires b > 0 and c > 0");
  return certify(kernel, split, BoxParams{Rational(0), b, c, Rational(0)}, variant,
                 qcfg, strictness_eps);
}

struct RelationResult {
  std::string description;
  bool applicable = true;
  Number bound;        // right-hand side of the strict inequality
  double slack = 0;    // bound − left side
  bool passed = true;
};

/// Necessary relations between the parameters implied by the theorem
/// conditions. A failure proves no split can satisfy the conditions.
///   (1) d < c·I2/I3 (general) or d < c·I4/I3 (symmetric)
///   (2) if d < 4^{2k} c:  a < b·I1/I2
struct RelationReport {
  RelationResult first;
  RelationResult second;
  bool passed() const { return first.passed && second.passed; }
};

inline RelationReport corollary_relations(const Thresholds& th,
                                          const BoxParams& params, double k) {
  RelationReport rep;
  const Number& numer = th.variant == Variant::general ? th.I2 : th.I4;
  auto scaled = [](const Rational& p, const Number& num, const Number& den) {
    if (num.exact && den.exact)
      return Number::of(p * *num.exact / *den.exact);
    return Number::of(to_double(p) * num.value / den.value);
  };

  rep.first.description = th.variant == Variant::general ? "d < c * I2 / I3"
                                                         : "d < c * I4 / I3";
  rep.first.bound = scaled(params.c, numer, th.I3);
  rep.first.slack = rep.first.bound.value - params.d_value();
  rep.first.passed = rep.first.bound.exact ? params.d < *rep.first.bound.exact
                                           : rep.first.slack > 0;

  rep.second.description = "if d < 4^(2k) c then a < b * I1 / I2";
  rep.second.applicable = params.d_value() < std::pow(4.0, 2 * k) * params.c_value();
  rep.second.bound = scaled(params.b, th.I1, th.I2);
  rep.second.slack = rep.second.bound.value - params.a_value();
  if (rep.second.applicable)
    rep.second.passed = rep.second.bound.exact ? params.a < *rep.second.bound.exact
                                               : rep.second.slack > 0;
  return rep;
}

/// Candidate values per parameter; scanned in ascending order.
struct SearchGrid {
  std::vector<Rational> a, b, c, d;

  static SearchGrid defaults() {
    auto r = [](long long p, long long q = 1) { return Rational(p) / q; };
    std::vector<Rational> positive{r(1, 8), r(1, 4), r(1, 2), r(1), r(2),
                                   r(4),    r(8),    r(16)};
    std::vector<Rational> with_zero{r(0), r(1, 8), r(1, 4), r(1, 2),
                                    r(1), r(2),    r(4)};
    return {with_zero, positive, positive, with_zero};
  }
};

/// First satisfying (a, b, c, d) in scan order: ascending b, then c, then a,
/// then d. Parameter tuples failing corollary_relations are skipped.
inline std::optional<BoxParams>
search_box_params(const Thresholds& th, double k, const MonotoneSplit& split,
                  SearchGrid grid, double strictness_eps = 0) {
  for (auto* axis : {&grid.a, &grid.b, &grid.c, &grid.d})
    std::sort(axis->begin(), axis->end());
  for (const auto& b : grid.b)
    for (const auto& c : grid.c)
      for (const auto& a : grid.a)
        for (const auto& d : grid.d) {
          BoxParams p{a, b, c, d};
          if (a < 0 || b < 0 || c < 0 || d < 0)
            continue;
          if (a > 0 && !(b > a))
            continue;
          if (!corollary_relations(th, p, k).passed())
            continue;
          if (certify(th, k, split, p, strictness_eps).satisfied)
            return p;
        }
  return std::nullopt;
}

inline std::optional<BoxParams>
search_box_params(const Kernel& kernel, const MonotoneSplit& split,
                  Variant variant, const SearchGrid& grid,
                  const QuadratureConfig& qcfg = {}, double strictness_eps = 0) {
  return search_box_params(compute_thresholds(kernel, variant, qcfg),
                           kernel.k_exponent(), split, grid, strictness_eps);
}

} // namespace hamkit

#endif // HAMKIT_CERTIFICATE_HPP
