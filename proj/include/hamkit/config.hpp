#ifndef HAMKIT_CONFIG_HPP
#define HAMKIT_CONFIG_HPP

// Problem configuration files.
//
// Sectioned key = value text; '#' or ';' at line start begins a comment.
// Numbers are decimals or ratios "p/q". Values may be double-quoted.
//
//   [kernel]      builtin = lidstone            (or the explicit form below)
//                 name, t1, t2, k, lower, upper
//                 lower/upper: rows separated by ';', row i holds the
//                 coefficients of t^i tau^0, t^i tau^1, ...
//                 k may also override a builtin's exponent.
//   [split]       f_up, f_down                  (expressions in x)
//   [theorem]     variant = general | symmetric
//   [params]      a, b, c, d                    (a and d default to 0)
//   [quadrature]  nodes_per_panel, panels, crease_split
//   [solver]      grid_points, max_iterations, residual_tol, damping,
//                 divergence_factor, initial = zero | ramp, ramp_height
//   [checks]      grid, tol, strictness_eps, cone_tol, split_samples
//   [output]      dir

#include "hamkit/certificate.hpp"
#include "hamkit/cone.hpp"
#include "hamkit/errors.hpp"
#include "hamkit/expression.hpp"
#include "hamkit/hypotheses.hpp"
#include "hamkit/kernel.hpp"
#include "hamkit/monotone_split.hpp"
#include "hamkit/quadrature.hpp"
#include "hamkit/rational.hpp"
#include "hamkit/solver.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hamkit {

struct KernelConfig {
  std::string builtin;  // "lidstone" or empty for explicit branches
  std::string name = "custom";
  Rational t1{0}, t2{1};
  std::optional<Rational> k;
  std::vector<std::vector<Rational>> lower, upper;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct ChecksConfig {
  int grid = kDefaultHypothesisGrid;
  double tol = kDefaultHypothesisTolerance;
  double strictness_eps = 0;
  double cone_tol = kDefaultConeTolerance;
  int split_samples = 10001;

  friend bool operator==(const ChecksConfig&, const ChecksConfig&) = default;
};

struct ProblemConfig {
  KernelConfig kernel;
  std::string f_up = "0";
  std::string f_down = "0";
  Variant variant = Variant::general;
  std::optional<Rational> a, b, c, d;
  QuadratureConfig quadrature;
  SolverConfig solver;
  ChecksConfig checks;
  std::string output_dir;

  /// 1-based line of each "section.key" in the source file; not compared.
  std::map<std::string, int> lines;

  bool has_params() const { return b.has_value() && c.has_value(); }

  BoxParams params() const {
    if (!has_params())
      throw std::invalid_argument("config has no [params] block with b and c");
    return {a.value_or(Rational(0)), *b, *c, d.value_or(Rational(0))};
  }

  int line_of(const std::string& key) const {
    auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  }

  friend bool operator==(const ProblemConfig& l, const ProblemConfig& r) {
    return l.kernel == r.kernel && l.f_up == r.f_up && l.f_down == r.f_down &&
           l.variant == r.variant && l.a == r.a && l.b == r.b && l.c == r.c &&
           l.d == r.d && l.quadrature == r.quadrature && l.solver == r.solver &&
           l.checks == r.checks && l.output_dir == r.output_dir;
  }
};

namespace detail {

/// Drops a trailing " # comment" (a '#' after whitespace, outside quotes).
inline std::string_view drop_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"')
      quoted = !quoted;
    else if (s[i] == '#' && !quoted && i > 0 &&
             std::isspace(static_cast<unsigned char>(s[i - 1])))
      return s.substr(0, i);
  }
  return s;
}

inline std::string strip(std::string_view s) {
  s = trim(drop_comment(s));
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

inline double parse_real(const std::string& s) {
  if (s.find('/') != std::string::npos)
    return to_double(parse_rational(s));
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1")
    return true;
  if (s == "false" || s == "no" || s == "0")
    return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

inline std::vector<std::vector<Rational>> parse_rows(const std::string& s) {
  std::vector<std::vector<Rational>> rows;
  std::stringstream all(s);
  std::string row;
  while (std::getline(all, row, ';')) {
    for (char& ch : row)
      if (ch == ',')
        ch = ' ';
    std::stringstream items(row);
    std::string item;
    std::vector<Rational> r;
    while (items >> item)
      r.push_back(parse_rational(item));
    rows.push_back(std::move(r));
  }
  while (!rows.empty() && rows.back().empty())
    rows.pop_back();
  if (rows.empty())
    throw std::invalid_argument("empty coefficient list");
  for (auto& r : rows)
    if (r.empty())
      r.push_back(Rational(0));
  return rows;
}

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string format_rows(const std::vector<std::vector<Rational>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i)
      out += "; ";
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j)
        out += " ";
      out += to_string(rows[i][j]);
    }
  }
  return out;
}

} // namespace detail

/// Parses config text. Errors are ParseError with the offending line.
inline ProblemConfig parse_config(std::string_view text) {
  ProblemConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool has_builtin = false, has_branches = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';')
      continue;
    if (line.front() == '[') {
      line = detail::trim(detail::drop_comment(line));
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no, 1);
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"kernel", "split",  "theorem", "params",
                                    "quadrature", "solver", "checks", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        throw ParseError("unknown section [" + section + "]", line_no, 1);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value'", line_no, 1);
    if (section.empty())
      throw ParseError("key outside of any section", line_no, 1);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value = detail::strip(line.substr(eq + 1));
    std::size_t vpos = raw.find('=') + 1;
    while (vpos < raw.size() && std::isspace(static_cast<unsigned char>(raw[vpos])))
      ++vpos;
    if (vpos < raw.size() && raw[vpos] == '"')
      ++vpos;
    const int value_col = static_cast<int>(vpos) + 1;
    const std::string full = section + "." + key;
    if (cfg.lines.count(full))
      throw ParseError("duplicate key '" + full + "'", line_no, 1);
    cfg.lines[full] = line_no;

    try {
      if (section == "kernel") {
        if (key == "builtin") {
          has_builtin = true;
          cfg.kernel.builtin = value;
          if (value != "lidstone")
            throw std::invalid_argument("unknown builtin kernel '" + value + "'");
          cfg.kernel.name = value;
        } else if (key == "name") {
          cfg.kernel.name = value;
        } else if (key == "t1") {
          has_branches = true;
          cfg.kernel.t1 = parse_rational(value);
        } else if (key == "t2") {
          has_branches = true;
          cfg.kernel.t2 = parse_rational(value);
        } else if (key == "k") {
          cfg.kernel.k = parse_rational(value);
        } else if (key == "lower") {
          has_branches = true;
          cfg.kernel.lower = detail::parse_rows(value);
        } else if (key == "upper") {
          has_branches = true;
          cfg.kernel.upper = detail::parse_rows(value);
        } else {
          throw std::invalid_argument("unknown key");
        }
      } else if (section == "split") {
        if (key != "f_up" && key != "f_down")
          throw std::invalid_argument("unknown key");
        try {
          (void)Expression::parse(value, line_no);
        } catch (const ParseError& e) {
          throw ParseError(key + ": " + e.message(), line_no,
                           value_col + e.column() - 1);
        }
        (key == "f_up" ? cfg.f_up : cfg.f_down) = value;
      } else if (section == "theorem") {
        if (key != "variant")
          throw std::invalid_argument("unknown key");
        cfg.variant = parse_variant(value);
      } else if (section == "params") {
        std::optional<Rational>* slot = key == "a"   ? &cfg.a
                                        : key == "b" ? &cfg.b
                                        : key == "c" ? &cfg.c
                                        : key == "d" ? &cfg.d
                                                     : nullptr;
        if (!slot)
          throw std::invalid_argument("unknown key");
        *slot = parse_rational(value);
        if (**slot < 0)
          throw std::invalid_argument("parameters must be nonnegative");
      } else if (section == "quadrature") {
        if (key == "nodes_per_panel")
          cfg.quadrature.nodes_per_panel = detail::parse_int(value);
        else if (key == "panels")
          cfg.quadrature.panels = detail::parse_int(value);
        else if (key == "crease_split")
          cfg.quadrature.crease_split = detail::parse_bool(value);
        else
          throw std::invalid_argument("unknown key");
      } else if (section == "solver") {
        auto& s = cfg.solver;
        if (key == "grid_points")
          s.grid_points = detail::parse_int(value);
        else if (key == "max_iterations")
          s.max_iterations = detail::parse_int(value);
        else if (key == "residual_tol")
          s.residual_tol = detail::parse_real(value);
        else if (key == "damping")
          s.damping = detail::parse_real(value);
        else if (key == "divergence_factor")
          s.divergence_factor = detail::parse_real(value);
        else if (key == "initial") {
          if (value == "zero")
            s.initial = InitialGuess::zero;
          else if (value == "ramp")
            s.initial = InitialGuess::ramp;
          else
            throw std::invalid_argument("initial must be zero or ramp");
        } else if (key == "ramp_height")
          s.ramp_height = detail::parse_real(value);
        else
          throw std::invalid_argument("unknown key");
      } else if (section == "checks") {
        auto& c = cfg.checks;
        if (key == "grid")
          c.grid = detail::parse_int(value);
        else if (key == "tol")
          c.tol = detail::parse_real(value);
        else if (key == "strictness_eps")
          c.strictness_eps = detail::parse_real(value);
        else if (key == "cone_tol")
          c.cone_tol = detail::parse_real(value);
        else if (key == "split_samples")
          c.split_samples = detail::parse_int(value);
        else
          throw std::invalid_argument("unknown key");
      } else if (section == "output") {
        if (key != "dir")
          throw std::invalid_argument("unknown key");
        cfg.output_dir = value;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(full + ": " + e.what(), line_no, value_col);
    }
  }

  if (has_builtin && has_branches)
    throw ParseError("kernel: give either 'builtin' or explicit branches, not both",
                     cfg.line_of("kernel.builtin"), 1);
  if (!has_builtin) {
    if (cfg.kernel.lower.empty() || cfg.kernel.upper.empty())
      throw ParseError("kernel: need 'builtin' or both 'lower' and 'upper'",
                       line_no, 1);
    if (!cfg.kernel.k)
      throw ParseError("kernel: explicit kernels need 'k'", line_no, 1);
  }
  if (cfg.b.has_value() != cfg.c.has_value())
    throw ParseError("params: b and c must be given together",
                     cfg.line_of(cfg.b ? "params.b" : "params.c"), 1);
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text that parse_config maps back to an equal config.
inline std::string serialize_config(const ProblemConfig& cfg) {
  std::ostringstream os;
  os << "[kernel]\n";
  if (!cfg.kernel.builtin.empty()) {
    os << "builtin = " << cfg.kernel.builtin << "\n";
  } else {
    os << "name = \"" << cfg.kernel.name << "\"\n"
       << "t1 = " << to_string(cfg.kernel.t1) << "\n"
       << "t2 = " << to_string(cfg.kernel.t2) << "\n"
       << "lower = " << detail::format_rows(cfg.kernel.lower) << "\n"
       << "upper = " << detail::format_rows(cfg.kernel.upper) << "\n";
  }
  if (cfg.kernel.k)
    os << "k = " << to_string(*cfg.kernel.k) << "\n";
  os << "\n[split]\nf_up = " << cfg.f_up << "\nf_down = " << cfg.f_down << "\n";
  os << "\n[theorem]\nvariant = " << to_string(cfg.variant) << "\n";
  if (cfg.a || cfg.b || cfg.c || cfg.d) {
    os << "\n[params]\n";
    if (cfg.a) os << "a = " << to_string(*cfg.a) << "\n";
    if (cfg.b) os << "b = " << to_string(*cfg.b) << "\n";
    if (cfg.c) os << "c = " << to_string(*cfg.c) << "\n";
    if (cfg.d) os << "d = " << to_string(*cfg.d) << "\n";
  }
  const auto& q = cfg.quadrature;
  os << "\n[quadrature]\nnodes_per_panel = " << q.nodes_per_panel
     << "\npanels = " << q.panels
     << "\ncrease_split = " << (q.crease_split ? "true" : "false") << "\n";
  const auto& s = cfg.solver;
  os << "\n[solver]\ngrid_points = " << s.grid_points
     << "\nmax_iterations = " << s.max_iterations
     << "\nresidual_tol = " << detail::format_real(s.residual_tol)
     << "\ndamping = " << detail::format_real(s.damping)
     << "\ndivergence_factor = " << detail::format_real(s.divergence_factor)
     << "\ninitial = " << (s.initial == InitialGuess::zero ? "zero" : "ramp")
     << "\nramp_height = " << detail::format_real(s.ramp_height) << "\n";
  const auto& c = cfg.checks;
  os << "\n[checks]\ngrid = " << c.grid << "\ntol = " << detail::format_real(c.tol)
     << "\nstrictness_eps = " << detail::format_real(c.strictness_eps)
     << "\ncone_tol = " << detail::format_real(c.cone_tol)
     << "\nsplit_samples = " << c.split_samples << "\n";
  if (!cfg.output_dir.empty())
    os << "\n[output]\ndir = \"" << cfg.output_dir << "\"\n";
  return os.str();
}

/// Builds the kernel a config describes.
inline Kernel build_kernel(const KernelConfig& kc) {
  if (kc.builtin == "lidstone") {
    Kernel base = lidstone_kernel();
    if (!kc.k)
      return base;
    return Kernel(base.name(), base.exact_t1(), base.exact_t2(), to_double(*kc.k),
                  base.exact_lower(), base.exact_upper());
  }
  if (!kc.builtin.empty())
    throw std::invalid_argument("unknown builtin kernel '" + kc.builtin + "'");
  return Kernel(kc.name, kc.t1, kc.t2, to_double(kc.k.value_or(Rational(1))),
                Kernel::ExactPoly::from_rows(kc.lower),
                Kernel::ExactPoly::from_rows(kc.upper));
}

/// Parses both expressions into a split. ParseError lines point into the
/// config file when the config came from one.
inline MonotoneSplit build_split(const ProblemConfig& cfg) {
  Expression up = Expression::parse(cfg.f_up, cfg.line_of("split.f_up"));
  Expression down = Expression::parse(cfg.f_down, cfg.line_of("split.f_down"));
  return MonotoneSplit{up, down, cfg.f_up, cfg.f_down};
}

} // namespace hamkit

#endif // HAMKIT_CONFIG_HPP
