#include "catch_amalgamated.hpp"

#include "hamkit/hypotheses.hpp"

#include <cstring>

using namespace hamkit;

namespace {
using Rows = std::vector<std::vector<double>>;

Kernel same_branches(const char* name, const Rows& rows, double k = 1.0,
                     Interval iv = Interval(0, 1)) {
  auto p = Kernel::Poly::from_rows(rows);
  return Kernel(name, iv, k, p, p);
}

Kernel lidstone_with_k(double k) {
  auto base = lidstone_kernel();
  return Kernel("lidstone-k", base.domain(), k, base.lower_branch(),
                base.upper_branch());
}
} // namespace

TEST_CASE("Lidstone satisfies every hypothesis except H2") {
  auto kernel = lidstone_kernel();
  auto reports = check_all_hypotheses(kernel);
  REQUIRE(reports.size() == 7);
  for (const auto& r : reports) {
    INFO(to_string(r.hypothesis) << " margin " << r.worst_margin);
    CHECK(r.grid_size == 101);
    if (r.hypothesis == Hypothesis::H2)
      CHECK_FALSE(r.passed);
    else
      CHECK(r.passed);
  }
}

TEST_CASE("Lidstone H2 witness sits on the zero row t2 = 1") {
  auto r = check_H2(lidstone_kernel());
  CHECK_FALSE(r.passed);
  REQUIRE(r.witness.size() == 3);
  // Largest drop: from the peak G(1/2, 1/2) = 1/48 down to the row G(1, .) = 0.
  CHECK(r.witness[0] == 0.5);
  CHECK(r.witness[1] == 1.0);
  CHECK(r.witness[2] == 0.5);
  CHECK(r.worst_margin == Catch::Approx(-1.0 / 48).margin(1e-16));
}

TEST_CASE("H1 on trivial kernels") {
  auto zero = same_branches("zero", {{0.0}});
  auto r = check_H1(zero);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_margin < -r.tol);
  CHECK_FALSE(r.note.empty());

  auto one = same_branches("one", {{1.0}});
  CHECK(check_H1(one).passed);

  auto negative = same_branches("neg", {{0.0}, {-1.0}});  // G = -t
  auto rn = check_H1(negative);
  CHECK_FALSE(rn.passed);
  CHECK(rn.worst_margin == -1.0);
  CHECK(rn.witness == std::vector<double>{1.0, 0.0});
}

TEST_CASE("H2 on kernels increasing in t") {
  // G = t (1 + tau^2)
  auto k = same_branches("linear", {{0.0}, {1.0, 0.0, 1.0}});
  CHECK(check_H2(k).passed);
  auto one = same_branches("one", {{1.0}});
  auto r = check_H2(one);
  CHECK(r.passed);
  CHECK(r.worst_margin == 0.0);
}

TEST_CASE("H3 on separable kernels and Lidstone with other exponents") {
  // G = t h(tau) passes with equality at k = 1.
  auto sep = same_branches("sep", {{0.0}, {2.0, 1.0}});
  auto r = check_H3(sep);
  CHECK(r.passed);
  CHECK(r.worst_margin == Catch::Approx(0).margin(1e-15));

  // G = (t - 2)^2 on [2, 3] with k = 2.
  auto shifted = same_branches("shift", {{4.0}, {-4.0}, {1.0}}, 2.0, Interval(2, 3));
  auto rs = check_H3(shifted);
  CHECK(rs.passed);
  CHECK(rs.worst_margin == Catch::Approx(0).margin(1e-14));

  // Passing at k = 1 means G(t, tau) / t is nonincreasing in t, so any k >= 1
  // passes as well; exponents below 1 fail near y = 0.
  CHECK(check_H3(lidstone_with_k(3)).passed);
  auto half = check_H3(lidstone_with_k(0.5));
  CHECK_FALSE(half.passed);
  REQUIRE(half.witness.size() == 3);
  CHECK(half.witness[0] < half.witness[1]);
  auto lid = lidstone_kernel();
  const double y = half.witness[0], w = half.witness[1], tau = half.witness[2];
  const double direct = std::sqrt(y) * lid.eval(w, tau) - std::sqrt(w) * lid.eval(y, tau);
  CHECK(-direct == Catch::Approx(half.worst_margin).margin(1e-16));
  CHECK(direct > 1e-10);
}

TEST_CASE("H4 on constant, Lidstone and decreasing kernels") {
  auto one = same_branches("one", {{1.0}});
  auto [ci, cii] = check_H4(one);
  CHECK(ci.passed);
  CHECK(cii.passed);
  CHECK(ci.worst_margin == 0.0);
  CHECK(cii.worst_margin == 0.0);

  // (1/2 - t)^2 decreases on [0, 1/2].
  auto dec = same_branches("dec", {{0.25}, {-1.0}, {1.0}});
  auto [di, dii] = check_H4(dec);
  CHECK_FALSE(di.passed);
  REQUIRE(di.witness.size() == 3);
  CHECK(di.witness[0] == 0.0);
  CHECK(di.witness[1] == 0.5);
  CHECK(di.worst_margin == Catch::Approx(-0.25));
  // The symmetric sum in (ii) is (1/2-t)^2 + (t-1/2)^2, also decreasing.
  CHECK_FALSE(dii.passed);
}

TEST_CASE("H5 symmetry") {
  CHECK(check_H5(lidstone_kernel()).passed);
  CHECK(check_H5(same_branches("c", {{3.0}})).passed);
  auto asym = check_H5(same_branches("t", {{0.0}, {1.0}}));
  CHECK_FALSE(asym.passed);
  CHECK(asym.worst_margin == -1.0);
  CHECK(asym.witness[0] == 0.0);
}

TEST_CASE("gprop") {
  CHECK(check_gprop(lidstone_kernel()).passed);
  auto eq = check_gprop(same_branches("t", {{0.0}, {1.0}}));
  CHECK(eq.passed);
  CHECK(eq.worst_margin == Catch::Approx(0).margin(1e-14));
  // A kernel passing H3 passes gprop.
  auto sep = same_branches("sep", {{0.0}, {1.0, 0.0, 3.0}});
  REQUIRE(check_H3(sep).passed);
  CHECK(check_gprop(sep).passed);
}

TEST_CASE("required hypotheses by variant") {
  auto sym = required_hypotheses(true);
  CHECK(std::find(sym.begin(), sym.end(), Hypothesis::H2) == sym.end());
  CHECK(sym.size() == 6);
  auto gen = required_hypotheses(false);
  CHECK(std::find(gen.begin(), gen.end(), Hypothesis::H2) != gen.end());
}

TEST_CASE("grid size is validated") {
  CHECK_THROWS_AS(check_H1(lidstone_kernel(), 1), std::invalid_argument);
  CHECK_THROWS_AS(check_gprop(lidstone_kernel(), 1), std::invalid_argument);
}

TEST_CASE("violations persist on refined grids") {
  // Grid N nodes are a subset of grid 2N - 1 nodes.
  for (int n : {11, 21, 51}) {
    const int fine = 2 * n - 1;
    auto h2 = check_H2(lidstone_kernel(), n);
    auto h2f = check_H2(lidstone_kernel(), fine);
    REQUIRE_FALSE(h2.passed);
    CHECK(h2f.worst_margin <= h2.worst_margin);
    auto h3 = check_H3(lidstone_with_k(0.5), n);
    auto h3f = check_H3(lidstone_with_k(0.5), fine);
    CHECK(h3f.worst_margin <= h3.worst_margin + 1e-17);
    auto [d, dd] = check_H4(same_branches("dec", {{0.25}, {-1.0}, {1.0}}), n);
    auto [f, ff] = check_H4(same_branches("dec", {{0.25}, {-1.0}, {1.0}}), fine);
    CHECK(f.worst_margin <= d.worst_margin);
  }
}

TEST_CASE("reports are deterministic") {
  auto a = check_all_hypotheses(lidstone_kernel(), 41);
  auto b = check_all_hypotheses(lidstone_kernel(), 41);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::memcmp(&a[i].worst_margin, &b[i].worst_margin, sizeof(double)) == 0);
    CHECK(a[i].witness == b[i].witness);
    CHECK(a[i].passed == b[i].passed);
  }
}
