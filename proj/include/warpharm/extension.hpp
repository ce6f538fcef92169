#pragma once

#include <string>
#include <vector>

#include "warpharm/criterion.hpp"
#include "warpharm/radial.hpp"
#include "warpharm/spectrum.hpp"
#include "warpharm/warp.hpp"

namespace warpharm {

struct ExtensionOptions {
  double r_max = 20.0;
  double ode_tol = 1e-12;
  // Energy above degree M-2 allowed before the build warns, relative to total.
  double tail_energy_fraction = 1e-6;
  RadialOptions radial;
};

// u(r, w) = sum_m phi_m(r) sum_k c_{m,k} f_{m,k}(w), truncated at degree M.
class HarmonicExtension {
 public:
  const WarpingFunction& warping() const { return warp_; }
  int n() const { return n_; }
  int M() const { return M_; }
  const CoefficientTable& coeffs() const { return coeffs_; }
  const std::vector<RadialProfile>& profiles() const { return profiles_; }
  const CriterionReport& criterion() const { return criterion_; }
  // Sup-norm bound on the discarded degrees m > M.
  double truncation_error_bound() const { return truncation_error_bound_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  // Largest radius covered by every profile.
  double r_max() const { return r_max_; }

 private:
  friend HarmonicExtension build_extension(const WarpingFunction&, int, const BoundaryData&, int, double,
                                           const ExtensionOptions&);
  explicit HarmonicExtension(WarpingFunction w) : warp_(std::move(w)) {}

  WarpingFunction warp_;
  int n_ = 2;
  int M_ = 0;
  CoefficientTable coeffs_;
  std::vector<RadialProfile> profiles_;
  CriterionReport criterion_;
  double truncation_error_bound_ = 0.0;
  std::vector<std::string> warnings_;
  double r_max_ = 0.0;
};

HarmonicExtension build_extension(const WarpingFunction& w, int n, const BoundaryData& f, int M, double tol,
                                  const ExtensionOptions& options = {});

double evaluate(const HarmonicExtension& ext, double r, const SpherePoint& p);
// The boundary series sum c_{m,k} f_{m,k}(p) itself.
double evaluate_at_infinity(const HarmonicExtension& ext, const SpherePoint& p);

// (sum_m (1 - phi_m(r))^2 sum_k c_{m,k}^2)^{1/2}.
double l2_distance_to_boundary(const HarmonicExtension& ext, double r);

// max over the quadrature nodes of |u(r, w) - f(w)|. Coefficient-only data
// is synthesized on the smallest grid resolving it.
double sup_distance_on_grid(const HarmonicExtension& ext, double r, const BoundaryData& f);

}  // namespace warpharm
