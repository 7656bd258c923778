// Minimal library walkthrough: build a disk, solve one eigenpair, derive the
// transport measures, and print the quantities the limit theory pins down.
#include <cstdio>

#include "inflap/asymptotics.hpp"

int main() {
  using namespace inflap;
  DomainSpec spec = DomainSpec::disk({0.0, 0.0}, 1.0);
  DomainGrid grid = build_domain(spec, 1.0 / 32.0);
  DistanceField d = distance_to_boundary(grid);
  InradiusReport inr = inradius(grid, d);

  double p = 16.0;
  ScalarField seed = make_seed(grid, SeedProfile::DistanceField, &d);
  EigenPair pair = solve_first_eigenpair(grid, p, seed);
  MeasureTriple tri = derived_measures(pair, grid);
  DualityReport dual = primal_dual_values(pair, tri, grid);
  W1Result w1 = w1_to_boundary(grid, tri.f, d);

  std::printf("R1            = %.6f (limit of lambda^{-1/p})\n", inr.R1);
  std::printf("lambda^{1/p}  = %.6f at p = %g\n", pair.lambda_root(), p);
  std::printf("min value     = %.9f (analytic -1/p' = %.9f)\n",
              dual.primal_value, dual.analytic_value);
  std::printf("W1(f_p, bdry) = %.6f (tends to R1)\n", w1.value);
  return 0;
}
