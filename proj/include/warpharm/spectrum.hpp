#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace warpharm {

// Point on S^1 (theta = angle, lon unused) or S^2 (theta = colatitude,
// lon = longitude).
struct SpherePoint {
  double theta = 0.0;
  double lon = 0.0;
};

struct EigenMode {
  int m = 0;
  double lambda_sq = 0.0;
  // Unavailable for dimensions without built-in eigenfunctions.
  std::optional<int> multiplicity;
};

// Quadrature rule on S^{n-1}.
struct SphereGrid {
  int n = 2;
  int n_theta = 0;  // S^1: number of angles; S^2: Gauss-Legendre colatitudes
  int n_lon = 0;    // S^2 only
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;

  // Largest total degree integrated exactly by the rule.
  int exact_degree() const;
  // Largest band limit M whose pairwise products are integrated exactly.
  int max_band() const { return exact_degree() / 2; }
};

// Equiangular S^1 grid of `count` points.
SphereGrid circle_grid(int count);
// Gauss-Legendre in cos(colatitude) x uniform longitude.
SphereGrid sphere_grid(int n_colat, int n_lon);
// Smallest built-in grid that supports band limit M on S^{n-1}.
SphereGrid grid_for_band(int n, int band);

// Coefficients c_{m,k}, m = 0..max_degree, k = 0..multiplicity(m)-1.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  CoefficientTable(int n, int max_degree);

  int n() const { return n_; }
  int max_degree() const { return static_cast<int>(by_degree_.size()) - 1; }
  int multiplicity(int m) const { return static_cast<int>(by_degree_.at(m).size()); }
  double& at(int m, int k);
  double at(int m, int k) const;
  // Sum_k c_{m,k}^2.
  double degree_energy(int m) const;
  double total_energy() const;
  CoefficientTable truncated(int max_degree) const;

 private:
  int n_ = 2;
  std::vector<std::vector<double>> by_degree_;
};

// Spectral data of (S^{n-1}, g_omega). Only the round sphere is built in;
// other metrics plug in through this interface.
class SphereSpectrum {
 public:
  virtual ~SphereSpectrum() = default;
  virtual int dimension() const = 0;
  virtual EigenMode mode(int m) const = 0;
  virtual double eigenfunction(int m, int k, const SpherePoint& p) const = 0;
  virtual SphereGrid quadrature(int band) const = 0;
  virtual double volume() const = 0;
};

class RoundSphere final : public SphereSpectrum {
 public:
  explicit RoundSphere(int n);
  int dimension() const override { return n_; }
  EigenMode mode(int m) const override;
  double eigenfunction(int m, int k, const SpherePoint& p) const override;
  SphereGrid quadrature(int band) const override;
  double volume() const override;

 private:
  int n_;
};

EigenMode eigen_round_sphere(int n, int m);

// Orthonormal real eigenfunction f_{m,k} of the round S^{n-1}, n in {2,3}.
// S^1: k=0 -> cos(m t)/sqrt(pi), k=1 -> sin(m t)/sqrt(pi), f_{0,0}=1/sqrt(2 pi).
// S^2: k=0 zonal, k=2j-1 -> cos(j lon), k=2j -> sin(j lon) real harmonics.
double eigenfunction_eval(int n, int m, int k, const SpherePoint& p);

struct BoundaryData {
  int n = 2;
  // Samples of f on `grid` ...
  std::optional<SphereGrid> grid;
  std::vector<double> samples;
  // ... or the coefficients directly.
  std::optional<CoefficientTable> coefficients;
  int band_limit = 0;

  static BoundaryData from_samples(SphereGrid grid, std::vector<double> samples, int band_limit);
  static BoundaryData from_coefficients(CoefficientTable coeffs);
};

CoefficientTable project_boundary(const BoundaryData& f, int band);

// Coefficients of f(theta - angle) on S^1, or of f(colat, lon - angle) on S^2.
CoefficientTable rotate_about_axis(const CoefficientTable& coeffs, double angle);

// Evaluate sum c_{m,k} f_{m,k} on each grid node.
std::vector<double> synthesize(const CoefficientTable& coeffs, const SphereGrid& grid);
double synthesize_at(const CoefficientTable& coeffs, const SpherePoint& p);

}  // namespace warpharm
