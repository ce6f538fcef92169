#include "warpharm/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "warpharm/error.hpp"
#include "warpharm/quadrature.hpp"

namespace warpharm {

namespace {

constexpr double kPi = std::numbers::pi;

void require_eigen_dimension(int n) {
  if (n != 2 && n != 3) {
    throw Error(ErrorCode::UnsupportedDimension,
                "eigenfunctions are built in for n = 2, 3 only (got n = " + std::to_string(n) + ")");
  }
}

int builtin_multiplicity(int n, int m) {
  if (n == 2) return m == 0 ? 1 : 2;
  return 2 * m + 1;
}

// Fully normalized associated Legendre value N_l^j P_l^j(cos theta) without
// the Condon-Shortley phase, normalized so that the zonal harmonic is
// orthonormal on S^2.
double normalized_legendre(int l, int j, double theta) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  double pjj = 1.0 / std::sqrt(4.0 * kPi);
  for (int i = 1; i <= j; ++i) pjj *= std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  if (l == j) return pjj;
  double prev = pjj;
  double cur = std::sqrt(2.0 * j + 3.0) * x * pjj;
  for (int ll = j + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(j) * j));
    const double b = std::sqrt((double(ll - 1) * (ll - 1) - double(j) * j) / (4.0 * (ll - 1) * (ll - 1) - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

int SphereGrid::exact_degree() const {
  if (n == 2) return n_theta - 1;
  return std::min(2 * n_theta - 1, n_lon - 1);
}

SphereGrid circle_grid(int count) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "circle grid needs at least one point");
  SphereGrid g;
  g.n = 2;
  g.n_theta = count;
  g.nodes.reserve(count);
  for (int j = 0; j < count; ++j) g.nodes.push_back({2.0 * kPi * j / count, 0.0});
  g.weights.assign(count, 2.0 * kPi / count);
  return g;
}

SphereGrid sphere_grid(int n_colat, int n_lon) {
  if (n_colat < 1 || n_lon < 1) throw Error(ErrorCode::InvalidInput, "sphere grid needs positive sizes");
  std::vector<double> x, w;
  quad::gauss_legendre(n_colat, x, w);
  SphereGrid g;
  g.n = 3;
  g.n_theta = n_colat;
  g.n_lon = n_lon;
  // Colatitude ascending from the north pole.
  for (int i = 0; i < n_colat; ++i) {
    const double xi = x[n_colat - 1 - i];
    const double wi = w[n_colat - 1 - i];
    for (int j = 0; j < n_lon; ++j) {
      g.nodes.push_back({std::acos(xi), 2.0 * kPi * j / n_lon});
      g.weights.push_back(wi * 2.0 * kPi / n_lon);
    }
  }
  return g;
}

SphereGrid grid_for_band(int n, int band) {
  require_eigen_dimension(n);
  if (band < 0) throw Error(ErrorCode::InvalidInput, "band limit must be >= 0");
  if (n == 2) return circle_grid(2 * band + 2);
  return sphere_grid(band + 1, 2 * band + 2);
}

CoefficientTable::CoefficientTable(int n, int max_degree) : n_(n) {
  require_eigen_dimension(n);
  if (max_degree < 0) throw Error(ErrorCode::InvalidInput, "max degree must be >= 0");
  by_degree_.resize(max_degree + 1);
  for (int m = 0; m <= max_degree; ++m) by_degree_[m].assign(builtin_multiplicity(n, m), 0.0);
}

double& CoefficientTable::at(int m, int k) {
  if (m < 0 || m > max_degree() || k < 0 || k >= multiplicity(m)) {
    throw Error(ErrorCode::IndexOutOfRange, "coefficient (" + std::to_string(m) + "," + std::to_string(k) + ")");
  }
  return by_degree_[m][k];
}

double CoefficientTable::at(int m, int k) const {
  return const_cast<CoefficientTable*>(this)->at(m, k);
}

double CoefficientTable::degree_energy(int m) const {
  double e = 0.0;
  for (double c : by_degree_.at(m)) e += c * c;
  return e;
}

double CoefficientTable::total_energy() const {
  double e = 0.0;
  for (int m = 0; m <= max_degree(); ++m) e += degree_energy(m);
  return e;
}

CoefficientTable CoefficientTable::truncated(int max_degree) const {
  CoefficientTable out(n_, max_degree);
  for (int m = 0; m <= std::min(max_degree, this->max_degree()); ++m) out.by_degree_[m] = by_degree_[m];
  return out;
}

RoundSphere::RoundSphere(int n) : n_(n) {
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "sphere dimension needs n >= 2");
}

EigenMode RoundSphere::mode(int m) const { return eigen_round_sphere(n_, m); }

double RoundSphere::eigenfunction(int m, int k, const SpherePoint& p) const {
  return eigenfunction_eval(n_, m, k, p);
}

SphereGrid RoundSphere::quadrature(int band) const { return grid_for_band(n_, band); }

double RoundSphere::volume() const {
  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(kPi, 0.5 * n_) / std::tgamma(0.5 * n_);
}

EigenMode eigen_round_sphere(int n, int m) {
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "sphere dimension needs n >= 2");
  if (m < 0) throw Error(ErrorCode::IndexOutOfRange, "eigenvalue index must be >= 0");
  EigenMode mode;
  mode.m = m;
  mode.lambda_sq = double(m) * double(m + n - 2);
  if (m == 0) {
    mode.multiplicity = 1;
  } else if (n == 2 || n == 3) {
    mode.multiplicity = builtin_multiplicity(n, m);
  }
  return mode;
}

double eigenfunction_eval(int n, int m, int k, const SpherePoint& p) {
  require_eigen_dimension(n);
  if (m < 0 || k < 0 || k >= builtin_multiplicity(n, m)) {
    throw Error(ErrorCode::IndexOutOfRange, "eigenfunction index (" + std::to_string(m) + "," + std::to_string(k) + ")");
  }
  if (n == 2) {
    if (m == 0) return 1.0 / std::sqrt(2.0 * kPi);
    const double t = m * p.theta;
    return (k == 0 ? std::cos(t) : std::sin(t)) / std::sqrt(kPi);
  }
  if (k == 0) return normalized_legendre(m, 0, p.theta);
  const int j = (k + 1) / 2;
  const double lat = std::sqrt(2.0) * normalized_legendre(m, j, p.theta);
  return lat * (k % 2 == 1 ? std::cos(j * p.lon) : std::sin(j * p.lon));
}

BoundaryData BoundaryData::from_samples(SphereGrid grid, std::vector<double> samples, int band_limit) {
  if (samples.size() != grid.nodes.size()) {
    throw Error(ErrorCode::InvalidInput, "boundary samples do not match the grid size");
  }
  BoundaryData f;
  f.n = grid.n;
  f.grid = std::move(grid);
  f.samples = std::move(samples);
  f.band_limit = band_limit;
  return f;
}

BoundaryData BoundaryData::from_coefficients(CoefficientTable coeffs) {
  BoundaryData f;
  f.n = coeffs.n();
  f.band_limit = coeffs.max_degree();
  f.coefficients = std::move(coeffs);
  return f;
}

CoefficientTable project_boundary(const BoundaryData& f, int band) {
  if (band < 0) throw Error(ErrorCode::InvalidInput, "band limit must be >= 0");
  if (f.coefficients) return f.coefficients->truncated(band);
  if (!f.grid) throw Error(ErrorCode::InvalidInput, "boundary data has neither samples nor coefficients");
  const SphereGrid& g = *f.grid;
  if (g.max_band() < band) {
    throw Error(ErrorCode::GridTooCoarse, "grid resolves band " + std::to_string(g.max_band()) +
                                              ", requested " + std::to_string(band));
  }
  CoefficientTable out(f.n, band);
  for (int m = 0; m <= band; ++m) {
    for (int k = 0; k < out.multiplicity(m); ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        acc += g.weights[i] * f.samples[i] * eigenfunction_eval(f.n, m, k, g.nodes[i]);
      }
      out.at(m, k) = acc;
    }
  }
  return out;
}

CoefficientTable rotate_about_axis(const CoefficientTable& coeffs, double angle) {
  CoefficientTable out = coeffs;
  for (int m = 1; m <= coeffs.max_degree(); ++m) {
    // Pairs (cos j., sin j.) at k = (0, 1) on S^1 and (2j-1, 2j) on S^2.
    const int pairs = coeffs.n() == 2 ? 1 : m;
    for (int j = 1; j <= pairs; ++j) {
      const int kc = coeffs.n() == 2 ? 0 : 2 * j - 1;
      const int freq = coeffs.n() == 2 ? m : j;
      const double c = std::cos(freq * angle), s = std::sin(freq * angle);
      const double a = coeffs.at(m, kc), b = coeffs.at(m, kc + 1);
      out.at(m, kc) = a * c - b * s;
      out.at(m, kc + 1) = a * s + b * c;
    }
  }
  return out;
}

double synthesize_at(const CoefficientTable& coeffs, const SpherePoint& p) {
  double acc = 0.0;
  for (int m = 0; m <= coeffs.max_degree(); ++m) {
    for (int k = 0; k < coeffs.multiplicity(m); ++k) {
      const double c = coeffs.at(m, k);
      if (c != 0.0) acc += c * eigenfunction_eval(coeffs.n(), m, k, p);
    }
  }
  return acc;
}

std::vector<double> synthesize(const CoefficientTable& coeffs, const SphereGrid& grid) {
  if (grid.n != coeffs.n()) throw Error(ErrorCode::InvalidInput, "grid and coefficient dimensions differ");
  std::vector<double> out;
  out.reserve(grid.nodes.size());
  for (const SpherePoint& p : grid.nodes) out.push_back(synthesize_at(coeffs, p));
  return out;
}

}  // namespace warpharm
