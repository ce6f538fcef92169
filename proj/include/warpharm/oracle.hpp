#pragma once

#include <functional>
#include <vector>

#include "warpharm/spectrum.hpp"
#include "warpharm/warp.hpp"

namespace warpharm {

// Uniform (r, theta) grid on an annulus of R^2, theta periodic. Row i holds
// the n_theta samples at radius r(i); both boundary circles are rows.
struct AnnulusGrid {
  double r_a = 0.5;
  double r_b = 3.0;
  int n_r = 16;
  int n_theta = 16;

  static AnnulusGrid make(double r_a, double r_b, int n_r, int n_theta);
  double h_r() const { return (r_b - r_a) / (n_r - 1); }
  double h_theta() const;
  double r(int i) const { return r_a + i * h_r(); }
  double theta(int j) const { return j * h_theta(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta + j; }
  std::size_t size() const { return static_cast<std::size_t>(n_r) * n_theta; }
};

// Uniform r x cell-centred colatitude x uniform longitude grid on a shell
// of R^3. Colatitudes (j + 1/2) pi / n_colat.
struct ShellGrid {
  double r_a = 0.5;
  double r_b = 3.0;
  int n_r = 16;
  int n_colat = 16;
  int n_lon = 32;

  static ShellGrid make(double r_a, double r_b, int n_r, int n_colat, int n_lon);
  double h_r() const { return (r_b - r_a) / (n_r - 1); }
  double r(int i) const { return r_a + i * h_r(); }
  double colat(int j) const;
  double lon(int k) const;
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_colat + j) * n_lon + k;
  }
  std::size_t size() const { return static_cast<std::size_t>(n_r) * n_colat * n_lon; }
};

using FieldFunction = std::function<double(double r, const SpherePoint& p)>;

std::vector<double> sample(const AnnulusGrid& grid, const FieldFunction& u);
std::vector<double> sample(const ShellGrid& grid, const FieldFunction& u);

// Delta_g u = u_rr + (n-1)(phi'/phi) u_r + phi^{-2} Delta_omega u at node
// (i, j). Radial derivatives are second-order central differences; the
// angular part is differentiated spectrally along the periodic circle.
double laplace_beltrami_residual(const WarpingFunction& w, const AnnulusGrid& grid,
                                 const std::vector<double>& u, int i, int j);
// n = 3: second-order stencil in colatitude and longitude as well.
double laplace_beltrami_residual(const WarpingFunction& w, const ShellGrid& grid,
                                 const std::vector<double>& u, int i, int j, int k);

// Five-point Laplace-Beltrami operator of the round S^2 on a cell-centred
// (n_colat x n_lon) grid; rows next to a pole reach across it.
std::vector<double> sphere_laplacian_fd(const std::vector<double>& samples, int n_colat, int n_lon);

struct AnnulusSolution {
  std::vector<double> u;  // n_r x n_theta, boundary rows included
  int iterations = 0;
  double relative_residual = 0.0;
};

// Conservative five-point discretization of Delta_g u = 0 (n = 2),
//   [phi_{i+1/2}(u_{i+1}-u_i) - phi_{i-1/2}(u_i-u_{i-1})]/h_r^2 + (u_{j+1}-2u_j+u_{j-1})/(phi_i h_t^2),
// solved by Jacobi-preconditioned conjugate gradients.
AnnulusSolution solve_annulus_dirichlet(const WarpingFunction& w, const AnnulusGrid& grid,
                                        const std::vector<double>& inner_bc, const std::vector<double>& outer_bc,
                                        double tol = 1e-12, int max_iterations = 0);

}  // namespace warpharm
