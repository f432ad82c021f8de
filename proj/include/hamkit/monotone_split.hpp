#ifndef HAMKIT_MONOTONE_SPLIT_HPP
#define HAMKIT_MONOTONE_SPLIT_HPP

#include "hamkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamkit {

using ScalarFunction = std::function<double(double)>;

/// f = f_up + f_down with f_up nondecreasing and f_down nonincreasing, both
/// nonnegative on [0, inf). The contract is checked by verify_split, never
/// assumed.
struct MonotoneSplit {
  ScalarFunction f_up;
  ScalarFunction f_down;
  std::string f_up_source;   // informational; empty for plain callables
  std::string f_down_source;

  double up(double x) const { return checked(f_up, x, "f_up"); }
  double down(double x) const { return checked(f_down, x, "f_down"); }

  /// f_up(x) + f_down(x).
  double eval_f(double x) const {
    if (!(x >= 0))
      throw DomainError("f is defined on [0, inf); got x = " + fmt(x), x);
    const double v = f_up(x) + f_down(x);
    if (!std::isfinite(v))
      throw EvaluationError("f(" + fmt(x) + ") is not finite", x);
    return v;
  }

  double operator()(double x) const { return eval_f(x); }

private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }

  static double checked(const ScalarFunction& f, double x, const char* which) {
    if (!(x >= 0))
      throw DomainError(std::string(which) + " is defined on [0, inf); got x = " +
                            fmt(x),
                        x);
    const double v = f(x);
    if (!std::isfinite(v))
      throw EvaluationError(std::string(which) + "(" + fmt(x) + ") is not finite",
                            x);
    return v;
  }
};

struct SplitCheck {
  std::string name;             // e.g. "f_up nonnegative"
  double worst_violation = 0;   // >= 0; 0 means no violation seen
  double worst_lo = 0;          // sample (or adjacent pair) realizing it
  double worst_hi = 0;
  bool passed = true;
  double witness_lo = 0;        // first sample (pair) violating by > tolerance
  double witness_hi = 0;
};

/// passed iff every check's worst violation is <= kSplitTolerance. The
/// witness is the leftmost violating sample (pair) over all checks.
struct SplitReport {
  double x_max = 0;
  int samples = 0;
  std::vector<SplitCheck> checks;  // up-nonneg, up-monotone, down-nonneg, down-monotone
  double worst_violation = 0;
  double witness_lo = 0;
  double witness_hi = 0;
  bool passed = false;
};

inline constexpr double kSplitTolerance = 1e-12;

/// Samples both parts at `samples` equally spaced points of [0, x_max] and
/// checks nonnegativity and monotonicity of adjacent pairs.
inline SplitReport verify_split(const MonotoneSplit& split, double x_max,
                                int samples) {
  if (!(x_max > 0))
    throw std::invalid_argument("verify_split requires x_max > 0");
  if (samples < 2)
    throw std::invalid_argument("verify_split requires samples >= 2");

  std::vector<double> xs(samples), up(samples), down(samples);
  for (int i = 0; i < samples; ++i) {
    xs[i] = i + 1 == samples ? x_max : x_max * i / (samples - 1);
    up[i] = split.up(xs[i]);
    down[i] = split.down(xs[i]);
  }

  auto note = [](SplitCheck& c, double violation, double lo, double hi) {
    if (violation > c.worst_violation) {
      c.worst_violation = violation;
      c.worst_lo = lo;
      c.worst_hi = hi;
    }
    if (violation > kSplitTolerance && c.passed) {
      c.passed = false;
      c.witness_lo = lo;
      c.witness_hi = hi;
    }
  };
  auto nonneg = [&](const std::string& name, const std::vector<double>& v) {
    SplitCheck c{name};
    for (int i = 0; i < samples; ++i)
      note(c, -v[i], xs[i], xs[i]);
    return c;
  };
  // sign = +1 requires nondecreasing, -1 nonincreasing.
  auto monotone = [&](const std::string& name, const std::vector<double>& v,
                      double sign) {
    SplitCheck c{name};
    for (int i = 0; i + 1 < samples; ++i)
      note(c, sign * (v[i] - v[i + 1]), xs[i], xs[i + 1]);
    return c;
  };

  SplitReport report;
  report.x_max = x_max;
  report.samples = samples;
  report.checks = {nonneg("f_up nonnegative", up),
                   monotone("f_up nondecreasing", up, 1.0),
                   nonneg("f_down nonnegative", down),
                   monotone("f_down nonincreasing", down, -1.0)};
  report.passed = true;
  for (const auto& c : report.checks) {
    report.worst_violation = std::max(report.worst_violation, c.worst_violation);
    if (!c.passed && (report.passed || c.witness_lo < report.witness_lo)) {
      report.witness_lo = c.witness_lo;
      report.witness_hi = c.witness_hi;
    }
    report.passed = report.passed && c.passed;
  }
  return report;
}

} // namespace hamkit

#endif // HAMKIT_MONOTONE_SPLIT_HPP
