#pragma once

#include <optional>
#include <vector>

#include "warpharm/criterion.hpp"
#include "warpharm/spectrum.hpp"
#include "warpharm/warp.hpp"

namespace warpharm {

// Positive root of l(l-1) + (n-1) l - lambda_sq = 0.
double indicial_exponent(int n, double lambda_sq);

struct RadialOptions {
  double r0 = 1e-3;
  // Node spacing on [1, r_max]; widened for very long grids.
  double h = 0.01;
  int points_per_decade = 60;
  // Normalize to limit 1 when the March criterion is Convergent.
  bool normalize = true;
  double plateau_tol = 1e-4;
  int max_doublings = 3;
  double criterion_tol = 1e-6;
};

// Nondecreasing solution of
//   y'' + (n-1) (phi'/phi) y' - (lambda^2/phi^2) y = 0,  y ~ r^l at 0,
// sampled on r0 (geometric) ... 1 (uniform) ... r_max.
struct RadialProfile {
  EigenMode mode;
  int n = 2;
  double l = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;
  std::vector<double> second;  // y'' from the ODE, used by the interpolant
  // nullopt means Unbounded.
  std::optional<double> limit_estimate;
  double limit_error = 0.0;
  bool normalized = false;

  double r_min() const { return grid.front(); }
  double r_max() const { return grid.back(); }
  // Quintic Hermite interpolation; Frobenius power law below r0.
  double value(double r) const;
  double deriv(double r) const;
  // Index of the node r = 1.
  std::size_t index_of_one() const;
};

RadialProfile solve_radial(const WarpingFunction& w, int n, const EigenMode& mode, double r_max,
                           double tol = 1e-12, const RadialOptions& options = {});

// Divides by the limit estimate y(R) (1 + delta), where delta is the
// exponential tail factor of the Lemma bound beyond R. Re-solves on doubled
// grids while delta >= plateau_tol.
RadialProfile normalize_profile(const RadialProfile& profile, const WarpingFunction& w, int n,
                                const CriterionReport& criterion, double tol = 1e-12,
                                const RadialOptions& options = {});

// x(s) = phi^{n-1} y' / (lambda^2 y) on the nodes s >= 1.
struct RiccatiTrace {
  std::vector<double> s;
  std::vector<double> x;
  double A = 0.0;  // x(1)
  double B = 0.0;  // y(1)
  // Indices into s with a centered five-point stencil.
  std::vector<std::size_t> interior;
  std::vector<double> dx;        // finite-difference x' on the interior
  std::vector<double> residual;  // |x' + lambda^2 x^2/phi^{n-1} - phi^{n-3}| / (1 + phi^{n-3})
  std::vector<double> slack;     // phi^{n-3} - x'
  double max_residual = 0.0;
  int inequality_violations = 0;  // x' > phi^{n-3} + 1e-9
};

RiccatiTrace riccati_trace(const RadialProfile& profile, const WarpingFunction& w, int n);

struct LemmaBound {
  std::vector<double> s;
  std::vector<double> bound;
  std::vector<double> value;
  int violations = 0;
  bool satisfied = true;
};

// bound(s) = B exp(lambda^2 int_1^s (A + int_1^t phi^{n-3}) / phi^{n-1} dt)
// on grid nodes 1 <= s <= s_max.
LemmaBound lemma_bound_check(const RadialProfile& profile, const RiccatiTrace& trace,
                             const WarpingFunction& w, int n, double s_max = 1e300);

// Integrates (log y, x) through the Riccati form from s = 1 and returns the
// largest relative deviation from the profile on [1, s_max].
double riccati_cross_check(const RadialProfile& profile, const WarpingFunction& w, int n,
                           double s_max = 1e300, double tol = 1e-12);

}  // namespace warpharm
