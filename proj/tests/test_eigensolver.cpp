// Eigensolver oracles: the cone test function's analytic quotient bounds the
// computed eigenvalue from above, the p=2 square eigenvalue has a closed
// form on this exact stencil, the quotient is scale invariant, warm starts
// agree with cold starts, and accepted iterations never raise the Rayleigh
// value.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "inflap/eigensolver.hpp"
#include "inflap/lognorm.hpp"

using namespace inflap;

namespace {

// ||grad w||_p^p / ||w||_p^p for the unit-height cone w = R1 - |x - c| on a
// disk of radius R1: the gradient has modulus 1, so the quotient integrates
// to (p+1)(p+2) / (2 R1^p)
double cone_quotient(double p, double R1) {
  return (p + 1.0) * (p + 2.0) / (2.0 * std::pow(R1, p));
}

}  // namespace

TEST_CASE("cone quotient matches its closed form on the unit disk") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 64);
  ScalarField cone = make_seed(g, SeedProfile::Cone);
  for (double p : {2.0, 4.0, 8.0}) {
    double q = rayleigh_quotient(cone, p, g);
    // forward differences see |grad| = 1 exactly along lattice directions
    // and sqrt(2) across diagonals, so the discrete quotient sits a few
    // percent above the continuum value
    CHECK_THAT(q, Catch::Matchers::WithinRel(cone_quotient(p, 1.0), 0.08));
  }
}

TEST_CASE("computed eigenvalue never exceeds the cone quotient") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 32);
  ScalarField cone = make_seed(g, SeedProfile::Cone);
  SolverConfig cfg;
  ScalarField seed = make_seed(g, SeedProfile::DistanceField);
  for (double p : {2.0, 4.0, 8.0}) {
    EigenPair e = solve_first_eigenpair(g, p, seed, cfg);
    REQUIRE(e.converged);
    CHECK(e.lambda <= rayleigh_quotient(cone, p, g) * (1.0 + 1e-12));
    seed = e.u;
  }
}

TEST_CASE("p=2 eigenvalue on the unit square has a closed form") {
  // the energy is the standard five-point Dirichlet form, whose smallest
  // eigenvalue is (8/h^2) sin^2(pi h / 2)
  double h = 1.0 / 64;
  DomainGrid g = build_domain(DomainSpec::unit_square(), h);
  EigenPair e = solve_first_eigenpair(g, 2.0, make_seed(g, SeedProfile::Ones));
  REQUIRE(e.converged);
  double s = std::sin(std::numbers::pi * h / 2.0);
  double exact = 8.0 / (h * h) * s * s;
  CHECK_THAT(e.lambda, Catch::Matchers::WithinRel(exact, 1e-6));
  CHECK_THAT(e.rayleigh_value, Catch::Matchers::WithinRel(e.lambda, 1e-10));
}

TEST_CASE("rayleigh_quotient is scale invariant over many decades") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 16);
  ScalarField u = make_seed(g, SeedProfile::DistanceField);
  for (double p : {2.0, 16.0, 128.0}) {
    double base = rayleigh_quotient(u, p, g);
    // the quotient is exp(p * (log norm difference)), so ulp-level rounding
    // in the log accumulations comes out amplified by a factor of p
    double tol = 128.0 * p * std::numeric_limits<double>::epsilon();
    for (double s : {1e-30, 1e-10, 1e-3, 1e3, 1e10, 1e30}) {
      ScalarField su;
      su.values = u.values;
      for (double& x : su.values) x *= s;
      CHECK_THAT(rayleigh_quotient(su, p, g),
                 Catch::Matchers::WithinRel(base, tol));
    }
  }
}

TEST_CASE("warm-started sweep agrees with cold starts") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 32);
  DistanceField d = distance_to_boundary(g);
  std::vector<double> ps{2.0, 4.0, 8.0, 16.0};
  SolverConfig cfg;
  auto warm = continuation_sweep(g, ps, cfg, &d);
  REQUIRE(warm.size() == ps.size());
  ScalarField cold_seed = make_seed(g, SeedProfile::DistanceField, &d);
  for (size_t i = 0; i < ps.size(); ++i) {
    REQUIRE(warm[i].converged);
    EigenPair cold = solve_first_eigenpair(g, ps[i], cold_seed, cfg);
    REQUIRE(cold.converged);
    // the first eigenfunction is simple, so both roads end at one value
    CHECK_THAT(warm[i].lambda, Catch::Matchers::WithinRel(cold.lambda, 1e-6));
  }
}

TEST_CASE("longer runs never raise the Rayleigh value") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 16);
  ScalarField seed = make_seed(g, SeedProfile::Ones);
  SolverConfig cfg;
  double prev = rayleigh_quotient(seed, 4.0, g);
  for (long cap : {25L, 50L, 100L, 200L, 400L, 800L}) {
    cfg.max_iters = cap;
    EigenPair e = solve_first_eigenpair(g, 4.0, seed, cfg);
    // accepted iterations are monotone up to one-ulp slack per step
    CHECK(e.lambda <= prev * (1.0 + 1e-9));
    prev = e.lambda;
  }
}

TEST_CASE("returned eigenfunction is nonnegative with unit p-norm") {
  double h = 1.0 / 32;
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), h);
  for (double p : {2.0, 16.0}) {
    EigenPair e = solve_first_eigenpair(g, p, make_seed(g, SeedProfile::DistanceField));
    REQUIRE(e.converged);
    double lo = 0.0;
    for (double x : e.u.values) lo = std::min(lo, x);
    CHECK(lo >= 0.0);
    double log_norm = log_pnorm(e.u.values, p, std::log(g.cell_area));
    CHECK_THAT(log_norm, Catch::Matchers::WithinAbs(0.0, 1e-10));
    CHECK(e.residual_norm < 1e-5);
    CHECK(e.iterations > 0);
  }
}

TEST_CASE("non-converged runs are flagged, not thrown") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 32);
  SolverConfig cfg;
  cfg.max_iters = 10;
  EigenPair e = solve_first_eigenpair(g, 2.0, make_seed(g, SeedProfile::Ones), cfg);
  CHECK_FALSE(e.converged);
  CHECK(e.iterations == 10);
  CHECK(std::isfinite(e.lambda));
}

TEST_CASE("fixed step rule still descends") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 8);
  ScalarField seed = make_seed(g, SeedProfile::Ones);
  double start = rayleigh_quotient(seed, 2.0, g);
  SolverConfig cfg;
  cfg.step_rule = StepRule::Fixed;
  cfg.fixed_step = 1e-3;
  cfg.max_iters = 3000;
  EigenPair e = solve_first_eigenpair(g, 2.0, seed, cfg);
  CHECK(e.lambda < start);
}

TEST_CASE("invalid inputs are rejected") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 16);
  ScalarField seed = make_seed(g, SeedProfile::Ones);
  CHECK_THROWS_AS(solve_first_eigenpair(g, 1.5, seed), InvalidArgument);
  CHECK_THROWS_AS(solve_first_eigenpair(g, 300.0, seed), InvalidArgument);
  ScalarField bad;
  bad.values.assign(g.interior_count() + 1, 1.0);
  CHECK_THROWS_AS(solve_first_eigenpair(g, 2.0, bad), InvalidArgument);
  ScalarField zero;
  zero.values.assign(g.interior_count(), 0.0);
  CHECK_THROWS_AS(solve_first_eigenpair(g, 2.0, zero), ZeroField);
  ScalarField negd;
  negd.values.assign(g.interior_count(), -1.0);
  CHECK_THROWS_AS(solve_first_eigenpair(g, 2.0, negd), ZeroField);
  CHECK_THROWS_AS(rayleigh_quotient(zero, 2.0, g), ZeroField);
  CHECK_THROWS_AS(rayleigh_quotient(seed, 1.0, g), InvalidArgument);
}

TEST_CASE("seed profiles have their advertised shapes") {
  DomainGrid g = build_domain(DomainSpec::disk({0.0, 0.0}, 1.0), 1.0 / 16);
  DistanceField d = distance_to_boundary(g);
  ScalarField ones = make_seed(g, SeedProfile::Ones);
  for (double x : ones.values) CHECK(x == 1.0);
  ScalarField df = make_seed(g, SeedProfile::DistanceField, &d);
  CHECK(df.values == d.values);
  ScalarField cone = make_seed(g, SeedProfile::Cone, &d);
  auto rep = inradius(g, d);
  double peak = 0.0;
  for (double x : cone.values) peak = std::max(peak, x);
  CHECK_THAT(peak, Catch::Matchers::WithinAbs(rep.R1, 1e-12));
  for (double x : cone.values) CHECK(x >= 0.0);
}
