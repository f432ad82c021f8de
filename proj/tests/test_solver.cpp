#include "catch_amalgamated.hpp"

#include "hamkit/solver.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

using namespace hamkit;

namespace {
MonotoneSplit constant_split(double up, double down) {
  return {[=](double) { return up; }, [=](double) { return down; }, "", ""};
}

MonotoneSplit example_split() {
  return {[](double x) { return 1 + x / 2; }, [](double x) { return 1 / (1 + x); }, "", ""};
}

const ConeSpec cone_k(Variant::symmetric, Interval(0, 1), 1);

std::vector<double> grid(int n) { return solver_nodes(Interval(0, 1), n); }

double sup_error_at_nodes(const GridFunction& x) {
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    e = std::max(e, std::abs(x.values()[i] - oracle::quartic(x.nodes()[i])));
  return e;
}

double sup_error_dense(const GridFunction& x) {
  double e = 0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = i / 20000.0;
    e = std::max(e, std::abs(x(t) - oracle::quartic(t)));
  }
  return e;
}

// Nonnegative combinations of known members of the symmetric cone with k = 1.
std::vector<NamedSample> random_k_members(int count, unsigned seed, int n = 65) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<NamedSample> out;
  for (int s = 0; s < count; ++s) {
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng), c4 = 24 * u(rng);
    out.push_back({"member " + std::to_string(s),
                   GridFunction::sample(grid(n), [=](double t) {
                     return c0 + c1 * t * (1 - t) + c2 * std::min(t, 1 - t) +
                            c3 * std::sin(std::numbers::pi * t) + c4 * oracle::quartic(t);
                   })});
  }
  return out;
}
} // namespace

TEST_CASE("solver grid contains the cone points") {
  auto nodes = grid(10);
  for (double p : {0.0, 0.125, 0.25, 0.5, 1.0})
    CHECK(std::find(nodes.begin(), nodes.end(), p) != nodes.end());
  CHECK(grid(129).size() == 129);  // step 1/128 already contains them
  CHECK(grid(10).size() == 13);
}

TEST_CASE("constant f gives the quartic") {
  auto lid = lidstone_kernel();
  auto x = GridFunction::zero(grid(129));
  auto t = apply_T(lid, constant_split(1, 0), x);
  CHECK(sup_error_at_nodes(t) <= 1e-14);
  auto r = apply_R(lid, constant_split(1, 0), x);
  CHECK(sup_error_at_nodes(r) <= 1e-14);
  CHECK(t(0.5) == Catch::Approx(5.0 / 384).margin(1e-16));
  auto s = apply_S(lid, constant_split(1, 0), x);
  CHECK(s.sup_norm() == 0.0);
  auto z = apply_T(lid, constant_split(0, 0), GridFunction::sample(grid(33), oracle::quartic));
  CHECK(z.sup_norm() == 0.0);
}

TEST_CASE("S at zero input is the row integral") {
  auto lid = lidstone_kernel();
  MonotoneSplit s{[](double) { return 0.0; }, [](double x) { return 1 / (1 + x); }, "", ""};
  auto out = apply_S(lid, s, GridFunction::zero(grid(65)));
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out.values()[i] == Catch::Approx(oracle::quartic(out.nodes()[i])).margin(1e-15));
}

TEST_CASE("T equals R plus S on random cone members") {
  auto lid = lidstone_kernel();
  for (const auto& [name, x] : random_k_members(10, 2024)) {
    auto t = apply_T(lid, example_split(), x);
    auto r = apply_R(lid, example_split(), x);
    auto s = apply_S(lid, example_split(), x);
    for (std::size_t i = 0; i < t.size(); ++i)
      CHECK(std::abs(t.values()[i] - (r.values()[i] + s.values()[i])) <= 1e-13);
  }
}

TEST_CASE("negative input is rejected, tiny negatives are clamped") {
  auto lid = lidstone_kernel();
  auto x = GridFunction::zero(grid(17));
  x.mutable_values()[3] = -1e-13;
  CHECK_NOTHROW(apply_T(lid, example_split(), x));
  x.mutable_values()[3] = -1e-6;
  CHECK_THROWS_AS(apply_T(lid, example_split(), x), DomainError);
}

TEST_CASE("operator input must match the kernel domain") {
  auto lid = lidstone_kernel();
  CHECK_THROWS_AS(NystromOperator(lid, {0.0, 0.5}), std::invalid_argument);
  NystromOperator op(lid, grid(9));
  std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(op.apply([](double) { return 1.0; }, wrong), std::invalid_argument);
}

TEST_CASE("fixed point of constant f") {
  auto lid = lidstone_kernel();
  auto res = solve_fixed_point(lid, constant_split(1, 0));
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  CHECK(sup_error_at_nodes(res.x) <= 1e-10);

  auto zero = solve_fixed_point(lid, constant_split(0, 0));
  CHECK(zero.converged);
  CHECK(zero.iterations == 0);
  CHECK(zero.x.sup_norm() == 0.0);
  auto v = verify_solution(lid, constant_split(0, 0), zero, cone_k);
  CHECK(v.trivial);
  CHECK_FALSE(v.positive);
  CHECK_FALSE(v.passed);
  CHECK(v.notes.front() == "trivial solution (x = 0)");
}

TEST_CASE("interpolation error decreases quadratically with the grid") {
  auto lid = lidstone_kernel();
  double previous = 0;
  for (int n : {33, 65, 129, 257}) {
    SolverConfig cfg;
    cfg.grid_points = n;
    auto res = solve_fixed_point(lid, constant_split(1, 0), cfg);
    REQUIRE(res.converged);
    const double err = sup_error_dense(res.x);
    if (previous > 0)
      CHECK(previous / err >= 3.0);
    previous = err;
  }
}

TEST_CASE("the worked example converges and validates") {
  auto lid = lidstone_kernel();
  auto res = solve_fixed_point(lid, example_split());
  CHECK(res.converged);
  CHECK(res.residual <= 1e-10);
  CHECK(res.history.back() == res.residual);
  CHECK(res.history.size() == static_cast<std::size_t>(res.iterations) + 1);
  auto v = verify_solution(lid, example_split(), res, cone_k);
  CHECK(v.passed);
  CHECK(v.residual_ok);
  CHECK(v.positive);
  CHECK(v.membership.passed);
  REQUIRE(v.symmetry_defect);
  CHECK(*v.symmetry_defect <= 1e-9);
  // The solution sits well inside the layered set for b = 1.
  CHECK(v.functionals.beta < 1);
  CHECK(v.functionals.theta <= v.functionals.beta);
}

TEST_CASE("verify_solution on the quartic") {
  auto lid = lidstone_kernel();
  auto res = solve_fixed_point(lid, constant_split(1, 0));
  auto v = verify_solution(lid, constant_split(1, 0), res, cone_k);
  CHECK(v.passed);
  CHECK(*v.symmetry_defect <= 1e-13);
  CHECK(v.functionals.beta == Catch::Approx(5.0 / 384).margin(1e-15));
  CHECK(v.refined_residual <= 1e-14);
}

TEST_CASE("ramp and damped starts reach the same solution") {
  auto lid = lidstone_kernel();
  auto plain = solve_fixed_point(lid, example_split());
  SolverConfig ramp;
  ramp.initial = InitialGuess::ramp;
  ramp.damping = 0.7;
  auto other = solve_fixed_point(lid, example_split(), ramp);
  REQUIRE(other.converged);
  for (std::size_t i = 0; i < plain.x.size(); ++i)
    CHECK(other.x.values()[i] == Catch::Approx(plain.x.values()[i]).margin(1e-9));
}

TEST_CASE("iteration limit and divergence are reported, not thrown") {
  auto lid = lidstone_kernel();
  SolverConfig short_run;
  short_run.max_iterations = 1;
  auto res = solve_fixed_point(lid, example_split(), short_run);
  CHECK_FALSE(res.converged);
  CHECK(res.notes == "iteration limit reached");

  // x ↦ e^{50 x} blows up under iteration.
  MonotoneSplit explode{[](double x) { return std::exp(std::min(50 * x, 600.0)) * 1e3; },
                        [](double) { return 0.0; }, "", ""};
  SolverConfig cfg;
  cfg.grid_points = 17;
  auto d = solve_fixed_point(lid, explode, cfg);
  CHECK_FALSE(d.converged);
  CHECK(d.diverged);

  SolverConfig bad;
  bad.damping = 0;
  CHECK_THROWS_AS(solve_fixed_point(lid, example_split(), bad), std::invalid_argument);
}

TEST_CASE("evaluation errors carry the iteration index") {
  auto lid = lidstone_kernel();
  MonotoneSplit nan_after{[](double x) { return x > 1e-3 ? NAN : 1.0; },
                          [](double) { return 0.0; }, "", ""};
  try {
    (void)solve_fixed_point(lid, nan_after);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::StartsWith("iteration 1"));
  }
}

TEST_CASE("solves are bit-for-bit deterministic") {
  auto lid = lidstone_kernel();
  auto a = solve_fixed_point(lid, example_split());
  auto b = solve_fixed_point(lid, example_split());
  REQUIRE(a.x.size() == b.x.size());
  CHECK(std::memcmp(a.x.values().data(), b.x.values().data(),
                    a.x.size() * sizeof(double)) == 0);
  CHECK(a.history == b.history);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("T, R and S map cone members into the cone") {
  auto lid = lidstone_kernel();
  auto samples = random_k_members(5, 99);
  samples.push_back({"zero", GridFunction::zero(grid(65))});
  samples.push_back({"quartic", GridFunction::sample(grid(65), oracle::quartic)});
  auto rep = check_cone_mapping(lid, example_split(), cone_k, samples);
  CHECK(rep.passed);
  CHECK(rep.rejected == 0);
  for (const auto& e : rep.entries) {
    INFO(e.name);
    CHECK(e.accepted);
    CHECK(e.image_T.passed);
    CHECK(e.image_R.passed);
    CHECK(e.image_S.passed);
  }
}

TEST_CASE("cone mapping rejects non-members and passes vacuously") {
  auto lid = lidstone_kernel();
  ConeSpec general(Variant::general, Interval(0, 1), 1);
  std::vector<NamedSample> samples{
      {"t^2", GridFunction::sample(grid(65), [](double t) { return t * t; })}};
  auto rep = check_cone_mapping(lid, example_split(), general, samples);
  CHECK(rep.rejected == 1);
  CHECK_FALSE(rep.entries[0].accepted);
  CHECK_FALSE(rep.entries[0].sample.k_scaling.passed);
  CHECK(rep.passed);
  auto empty = check_cone_mapping(lid, example_split(), cone_k, {});
  CHECK(empty.passed);
  CHECK(empty.entries.empty());
}
