#include "warpharm/extension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include "warpharm/error.hpp"

namespace warpharm {

namespace {

// Coefficients beyond M, as far as the data resolves them.
CoefficientTable resolved_coefficients(const BoundaryData& f, int M) {
  if (f.coefficients) return *f.coefficients;
  const int band = std::max(M, f.grid->max_band());
  return project_boundary(f, band);
}

// Sum over m > M of sqrt(E_m mult_m / Vol) bounds the sup norm of the
// discarded series (addition theorem). Degrees past the resolved ones are
// extrapolated geometrically from the last two resolved terms.
double truncation_bound(const CoefficientTable& all, int M, double volume) {
  const int top = all.max_degree();
  if (top <= M) return 0.0;
  std::vector<double> t;
  for (int m = M + 1; m <= top; ++m) t.push_back(std::sqrt(all.degree_energy(m) * all.multiplicity(m) / volume));
  double sum = 0.0;
  for (double v : t) sum += v;
  const double scale = std::sqrt(all.total_energy() / volume);
  if (t.size() >= 2 && t.back() > 1e-14 * scale) {
    const double q = t.back() / std::max(t[t.size() - 2], 1e-300);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    sum += t.back() * q / (1.0 - q);
  }
  return sum;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

HarmonicExtension build_extension(const WarpingFunction& w, int n, const BoundaryData& f, int M, double tol,
                                  const ExtensionOptions& options) {
  if (f.n != n) throw Error(ErrorCode::InvalidInput, "boundary data dimension does not match n");
  if (M < 0) throw Error(ErrorCode::InvalidInput, "truncation degree must be >= 0");
  HarmonicExtension ext(w);
  ext.n_ = n;
  ext.M_ = M;
  ext.criterion_ = march_criterion(w, n, tol);
  if (ext.criterion_.verdict != Verdict::Convergent)
    throw Error(ErrorCode::NotSolvable, "March criterion is " + to_string(ext.criterion_.verdict) + ": " +
                                            ext.criterion_.tail_evidence);
  ext.coeffs_ = project_boundary(f, M);
  const RoundSphere sphere(n);
  const CoefficientTable all = resolved_coefficients(f, M);
  ext.truncation_error_bound_ = truncation_bound(all, M, sphere.volume());

  const double total = all.total_energy();
  double high = 0.0;
  for (int m = std::max(0, M - 1); m <= all.max_degree(); ++m) high += all.degree_energy(m);
  if (total > 0.0 && high > options.tail_energy_fraction * total)
    ext.warnings_.push_back("coefficient energy above degree " + std::to_string(M - 2) + " is " +
                            fmt(high / total) + " of the total (threshold " + fmt(options.tail_energy_fraction) +
                            "); raise M");

  RadialOptions ropt = options.radial;
  ropt.normalize = false;
  std::vector<std::future<RadialProfile>> jobs;
  for (int m = 0; m <= M; ++m) {
    jobs.push_back(std::async(std::launch::async, [&, m] {
      const EigenMode mode = eigen_round_sphere(n, m);
      const RadialProfile raw = solve_radial(w, n, mode, options.r_max, options.ode_tol, ropt);
      return normalize_profile(raw, w, n, ext.criterion_, options.ode_tol, ropt);
    }));
  }
  ext.r_max_ = std::numeric_limits<double>::infinity();
  for (auto& j : jobs) {
    ext.profiles_.push_back(j.get());
    ext.r_max_ = std::min(ext.r_max_, ext.profiles_.back().r_max());
  }
  return ext;
}

double evaluate(const HarmonicExtension& ext, double r, const SpherePoint& p) {
  if (!(r >= 0.0) || r > ext.r_max())
    throw Error(ErrorCode::OutOfRange, "r = " + std::to_string(r) + " beyond the profile range " +
                                           std::to_string(ext.r_max()));
  const CoefficientTable& c = ext.coeffs();
  double u = 0.0;
  for (int m = 0; m <= ext.M(); ++m) {
    double angular = 0.0;
    for (int k = 0; k < c.multiplicity(m); ++k) {
      const double cm = c.at(m, k);
      if (cm != 0.0) angular += cm * eigenfunction_eval(ext.n(), m, k, p);
    }
    if (angular != 0.0) u += ext.profiles()[m].value(r) * angular;
  }
  return u;
}

double evaluate_at_infinity(const HarmonicExtension& ext, const SpherePoint& p) {
  return synthesize_at(ext.coeffs(), p);
}

double l2_distance_to_boundary(const HarmonicExtension& ext, double r) {
  if (!(r >= 0.0) || r > ext.r_max()) throw Error(ErrorCode::OutOfRange, "r beyond the profile range");
  double acc = 0.0;
  for (int m = 0; m <= ext.M(); ++m) {
    const double gap = 1.0 - ext.profiles()[m].value(r);
    acc += gap * gap * ext.coeffs().degree_energy(m);
  }
  return std::sqrt(acc);
}

double sup_distance_on_grid(const HarmonicExtension& ext, double r, const BoundaryData& f) {
  SphereGrid grid;
  std::vector<double> target;
  if (f.grid) {
    grid = *f.grid;
    target = f.samples;
  } else {
    grid = grid_for_band(ext.n(), std::max(ext.M(), f.coefficients->max_degree()));
    target = synthesize(*f.coefficients, grid);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    worst = std::max(worst, std::abs(evaluate(ext, r, grid.nodes[i]) - target[i]));
  return worst;
}

}  // namespace warpharm
