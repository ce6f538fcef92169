#include "warpharm/oracle.hpp"

#include <cmath>
#include <numbers>

#include "warpharm/error.hpp"

namespace warpharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Weights d_m with (D^2 f)_j = sum_m d_m f_{j+m}, the exact second derivative
// of the trigonometric interpolant on n equispaced points.
std::vector<double> spectral_second_derivative(int n) {
  std::vector<double> d(n, 0.0);
  for (int m = 0; m < n; ++m) {
    double acc = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
      const double wk = (2 * k == n) ? 1.0 : 2.0;
      acc -= wk * k * k * std::cos(kTwoPi * k * m / n);
    }
    d[m] = acc / n;
  }
  return d;
}

double phi_at(const WarpingFunction& w, double r) {
  const double p = w.eval(r).phi;
  if (!(p > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "phi <= 0 at r = " + std::to_string(r));
  return p;
}

}  // namespace

AnnulusGrid AnnulusGrid::make(double r_a, double r_b, int n_r, int n_theta) {
  if (!(r_a > 0.0) || !(r_b > r_a)) throw Error(ErrorCode::InvalidInput, "annulus needs 0 < r_a < r_b");
  if (n_r < 16 || n_theta < 16) throw Error(ErrorCode::InvalidInput, "annulus grid needs at least 16 nodes per axis");
  return {r_a, r_b, n_r, n_theta};
}

double AnnulusGrid::h_theta() const { return kTwoPi / n_theta; }

ShellGrid ShellGrid::make(double r_a, double r_b, int n_r, int n_colat, int n_lon) {
  if (!(r_a > 0.0) || !(r_b > r_a)) throw Error(ErrorCode::InvalidInput, "shell needs 0 < r_a < r_b");
  if (n_r < 5 || n_colat < 4 || n_lon < 8) throw Error(ErrorCode::InvalidInput, "shell grid too small");
  return {r_a, r_b, n_r, n_colat, n_lon};
}

double ShellGrid::colat(int j) const { return (j + 0.5) * std::numbers::pi / n_colat; }
double ShellGrid::lon(int k) const { return kTwoPi * k / n_lon; }

std::vector<double> sample(const AnnulusGrid& g, const FieldFunction& u) {
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) out[g.index(i, j)] = u(g.r(i), {g.theta(j), 0.0});
  return out;
}

std::vector<double> sample(const ShellGrid& g, const FieldFunction& u) {
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_colat; ++j)
      for (int k = 0; k < g.n_lon; ++k) out[g.index(i, j, k)] = u(g.r(i), {g.colat(j), g.lon(k)});
  return out;
}

double laplace_beltrami_residual(const WarpingFunction& w, const AnnulusGrid& g, const std::vector<double>& u,
                                 int i, int j) {
  if (u.size() != g.size()) throw Error(ErrorCode::InvalidInput, "sample count does not match the grid");
  if (i <= 0 || i >= g.n_r - 1 || j < 0 || j >= g.n_theta)
    throw Error(ErrorCode::BoundaryPoint, "residual needs an interior radial node");
  const double h = g.h_r();
  const WarpValues v = w.eval(g.r(i));
  const double um = u[g.index(i - 1, j)], u0 = u[g.index(i, j)], up = u[g.index(i + 1, j)];
  const double urr = (up - 2.0 * u0 + um) / (h * h);
  const double ur = (up - um) / (2.0 * h);
  const std::vector<double> d = spectral_second_derivative(g.n_theta);
  double utt = 0.0;
  // The weights sum to zero; differencing against u0 keeps constants exact.
  for (int m = 1; m < g.n_theta; ++m) utt += d[m] * (u[g.index(i, (j + m) % g.n_theta)] - u0);
  return urr + (v.dphi / v.phi) * ur + utt / (v.phi * v.phi);
}

std::vector<double> sphere_laplacian_fd(const std::vector<double>& f, int n_colat, int n_lon) {
  if (f.size() != static_cast<std::size_t>(n_colat) * n_lon)
    throw Error(ErrorCode::InvalidInput, "sample count does not match the grid");
  const double ht = std::numbers::pi / n_colat;
  const double hl = kTwoPi / n_lon;
  std::vector<double> out(f.size());
  auto at = [&](int j, int k) { return f[static_cast<std::size_t>(j) * n_lon + (k + n_lon) % n_lon]; };
  for (int j = 0; j < n_colat; ++j) {
    const double t = (j + 0.5) * ht;
    const double s = std::sin(t);
    // Flux through a pole vanishes with sin(0) = sin(pi) = 0.
    const double s_up = j + 1 < n_colat ? std::sin(t + 0.5 * ht) : 0.0;
    const double s_dn = j > 0 ? std::sin(t - 0.5 * ht) : 0.0;
    for (int k = 0; k < n_lon; ++k) {
      const double c = at(j, k);
      const double north = j > 0 ? at(j - 1, k) : c;
      const double south = j + 1 < n_colat ? at(j + 1, k) : c;
      const double polar = (s_up * (south - c) - s_dn * (c - north)) / (s * ht * ht);
      const double azim = (at(j, k + 1) - 2.0 * c + at(j, k - 1)) / (s * s * hl * hl);
      out[static_cast<std::size_t>(j) * n_lon + k] = polar + azim;
    }
  }
  return out;
}

double laplace_beltrami_residual(const WarpingFunction& w, const ShellGrid& g, const std::vector<double>& u,
                                 int i, int j, int k) {
  if (u.size() != g.size()) throw Error(ErrorCode::InvalidInput, "sample count does not match the grid");
  if (i <= 0 || i >= g.n_r - 1 || j <= 0 || j >= g.n_colat - 1 || k < 0 || k >= g.n_lon)
    throw Error(ErrorCode::BoundaryPoint, "residual needs an interior node");
  const double h = g.h_r();
  const WarpValues v = w.eval(g.r(i));
  auto at = [&](int a, int b, int c) { return u[g.index(a, b, (c + g.n_lon) % g.n_lon)]; };
  const double u0 = at(i, j, k);
  const double urr = (at(i + 1, j, k) - 2.0 * u0 + at(i - 1, j, k)) / (h * h);
  const double ur = (at(i + 1, j, k) - at(i - 1, j, k)) / (2.0 * h);
  const double ht = std::numbers::pi / g.n_colat;
  const double hl = kTwoPi / g.n_lon;
  const double t = g.colat(j);
  const double s = std::sin(t);
  const double polar = (std::sin(t + 0.5 * ht) * (at(i, j + 1, k) - u0) - std::sin(t - 0.5 * ht) * (u0 - at(i, j - 1, k))) /
                       (s * ht * ht);
  const double azim = (at(i, j, k + 1) - 2.0 * u0 + at(i, j, k - 1)) / (s * s * hl * hl);
  return urr + 2.0 * (v.dphi / v.phi) * ur + (polar + azim) / (v.phi * v.phi);
}

AnnulusSolution solve_annulus_dirichlet(const WarpingFunction& w, const AnnulusGrid& g,
                                        const std::vector<double>& inner_bc, const std::vector<double>& outer_bc,
                                        double tol, int max_iterations) {
  if (inner_bc.size() != static_cast<std::size_t>(g.n_theta) || outer_bc.size() != inner_bc.size())
    throw Error(ErrorCode::InvalidInput, "boundary samples must have n_theta entries");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tolerance must be > 0");
  const int nr = g.n_r - 2;
  const int nt = g.n_theta;
  const double hr2 = g.h_r() * g.h_r();
  const double ht2 = g.h_theta() * g.h_theta();
  std::vector<double> phi(nr), up(nr), dn(nr), diag(nr);
  for (int i = 0; i < nr; ++i) {
    const double r = g.r(i + 1);
    phi[i] = phi_at(w, r);
    up[i] = phi_at(w, r + 0.5 * g.h_r()) / hr2;
    dn[i] = phi_at(w, r - 0.5 * g.h_r()) / hr2;
    diag[i] = up[i] + dn[i] + 2.0 / (phi[i] * ht2);
  }
  const std::size_t N = static_cast<std::size_t>(nr) * nt;
  auto id = [nt](int i, int j) { return static_cast<std::size_t>(i) * nt + j; };
  // Negated operator, symmetric positive definite on the interior unknowns.
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < nr; ++i) {
      const double ct = 1.0 / (phi[i] * ht2);
      for (int j = 0; j < nt; ++j) {
        double v = diag[i] * x[id(i, j)];
        if (i > 0) v -= dn[i] * x[id(i - 1, j)];
        if (i + 1 < nr) v -= up[i] * x[id(i + 1, j)];
        v -= ct * (x[id(i, (j + 1) % nt)] + x[id(i, (j + nt - 1) % nt)]);
        y[id(i, j)] = v;
      }
    }
  };
  std::vector<double> b(N, 0.0);
  for (int j = 0; j < nt; ++j) {
    b[id(0, j)] += dn[0] * inner_bc[j];
    b[id(nr - 1, j)] += up[nr - 1] * outer_bc[j];
  }
  std::vector<double> x(N);
  for (int i = 0; i < nr; ++i) {
    const double s = static_cast<double>(i + 1) / (g.n_r - 1);
    for (int j = 0; j < nt; ++j) x[id(i, j)] = (1.0 - s) * inner_bc[j] + s * outer_bc[j];
  }
  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) s += a[q] * c[q];
    return s;
  };
  std::vector<double> r(N), z(N), p(N), q(N);
  apply(x, q);
  for (std::size_t k = 0; k < N; ++k) r[k] = b[k] - q[k];
  const double bnorm = std::sqrt(dot(b, b));
  AnnulusSolution out;
  const int cap = max_iterations > 0 ? max_iterations : static_cast<int>(std::min<std::size_t>(200000, 10 * N + 1000));
  auto precondition = [&] {
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nt; ++j) z[id(i, j)] = r[id(i, j)] / diag[i];
  };
  precondition();
  p = z;
  double rz = dot(r, z);
  double rel = bnorm > 0.0 ? std::sqrt(dot(r, r)) / bnorm : std::sqrt(dot(r, r));
  while (rel > tol) {
    if (out.iterations >= cap || !std::isfinite(rel))
      throw Error(ErrorCode::SolverDivergence, "CG stopped at relative residual " + std::to_string(rel) + " after " +
                                                   std::to_string(out.iterations) + " iterations");
    apply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t k = 0; k < N; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    precondition();
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < N; ++k) p[k] = z[k] + beta * p[k];
    ++out.iterations;
    rel = bnorm > 0.0 ? std::sqrt(dot(r, r)) / bnorm : std::sqrt(dot(r, r));
  }
  out.relative_residual = rel;
  out.u.assign(g.size(), 0.0);
  for (int j = 0; j < nt; ++j) {
    out.u[g.index(0, j)] = inner_bc[j];
    out.u[g.index(g.n_r - 1, j)] = outer_bc[j];
  }
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) out.u[g.index(i + 1, j)] = x[id(i, j)];
  return out;
}

}  // namespace warpharm
