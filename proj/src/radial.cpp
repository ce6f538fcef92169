#include "warpharm/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "warpharm/error.hpp"
#include "warpharm/quadrature.hpp"

namespace warpharm {

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class F>
class Stepper {
 public:
  Stepper(F f, double rtol, State atol, double h0) : f_(f), rtol_(rtol), atol_(atol), h_(h0) {}

  // Advances y from a to b exactly.
  void advance(double a, double b, State& y) {
    double t = a;
    while (t < b) {
      const bool clipped = h_ >= b - t;
      const double hh = clipped ? b - t : h_;
      if (hh <= 1e-13 * std::max(1.0, std::abs(t)))
        throw Error(ErrorCode::StepSizeUnderflow, "step size underflow at r = " + std::to_string(t));
      State y5;
      const double err = step(t, hh, y, y5);
      if (!std::isfinite(err) || !std::isfinite(y5[0]) || !std::isfinite(y5[1])) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
          throw Error(ErrorCode::Overflow, "solution left the double range");
        h_ = 0.25 * hh;
        continue;
      }
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = clipped ? b : t + hh;
        y = y5;
        h_ = clipped ? std::max(h_, hh * fac) : hh * fac;
      } else {
        h_ = hh * std::min(fac, 0.9);
      }
    }
  }

 private:
  double step(double t, double h, const State& y, State& out) const {
    auto add = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      State s = y;
      for (const auto& [c, k] : terms) {
        s[0] += h * c * (*k)[0];
        s[1] += h * c * (*k)[1];
      }
      return s;
    };
    const State k1 = f_(t, y);
    const State k2 = f_(t + c2 * h, add({{a21, &k1}}));
    const State k3 = f_(t + c3 * h, add({{a31, &k1}, {a32, &k2}}));
    const State k4 = f_(t + c4 * h, add({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f_(t + c5 * h, add({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = f_(t + h, add({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    out = add({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f_(t + h, out);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol_[i] + rtol_ * std::max(std::abs(y[i]), std::abs(out[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }

  F f_;
  double rtol_;
  State atol_;
  double h_;
};

std::vector<double> build_grid(double r0, double r_max, const RadialOptions& opt) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error(ErrorCode::InvalidInput, "launch point must lie in (0, 1)");
  if (!(r_max > 1.0)) throw Error(ErrorCode::InvalidInput, "r_max must be > 1");
  std::vector<double> g;
  const int geo = std::max(8, static_cast<int>(std::ceil(opt.points_per_decade * std::log10(1.0 / r0))));
  for (int i = 0; i < geo; ++i) g.push_back(r0 * std::pow(1.0 / r0, static_cast<double>(i) / geo));
  const double h = std::max(opt.h, (r_max - 1.0) / 20000.0);
  const int uni = std::max(1, static_cast<int>(std::ceil((r_max - 1.0) / h - 1e-9)));
  const double step = (r_max - 1.0) / uni;
  for (int i = 0; i < uni; ++i) g.push_back(1.0 + i * step);
  g.push_back(r_max);
  return g;
}

double second_from_ode(const WarpingFunction& w, int n, double lambda_sq, double r, double y, double dy) {
  const WarpValues v = w.eval(r);
  return lambda_sq * y / (v.phi * v.phi) - (n - 1.0) * (v.dphi / v.phi) * dy;
}

double phi_checked(const WarpingFunction& w, double r) {
  const double p = w.eval(r).phi;
  if (!(p > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "phi <= 0 at r = " + std::to_string(r));
  return p;
}

RadialProfile constant_profile(const EigenMode& mode, int n, double r_max, const RadialOptions& opt) {
  RadialProfile p;
  p.mode = mode;
  p.n = n;
  p.l = 0.0;
  p.grid = build_grid(opt.r0, r_max, opt);
  p.values.assign(p.grid.size(), 1.0);
  p.derivs.assign(p.grid.size(), 0.0);
  p.second.assign(p.grid.size(), 0.0);
  p.limit_estimate = 1.0;
  p.limit_error = 0.0;
  p.normalized = true;
  return p;
}

RadialProfile integrate_profile(const WarpingFunction& w, int n, const EigenMode& mode, double r_max, double tol,
                                const RadialOptions& opt) {
  RadialProfile p;
  p.mode = mode;
  p.n = n;
  p.l = indicial_exponent(n, mode.lambda_sq);
  p.grid = build_grid(opt.r0, r_max, opt);
  const double lam = mode.lambda_sq;
  const double l = p.l;
  auto rhs = [&](double r, const State& s) -> State {
    const double phi = phi_checked(w, r);
    const double pn1 = std::pow(phi, n - 1.0);
    return {s[1] / pn1, lam * std::pow(phi, n - 3.0) * s[0]};
  };
  const double r0 = p.grid.front();
  State s{std::pow(r0, l), std::pow(phi_checked(w, r0), n - 1.0) * l * std::pow(r0, l - 1.0)};
  const double rtol = std::clamp(tol, 1e-14, 1e-6);
  Stepper<decltype(rhs)> stepper(rhs, rtol, State{1e-300, 1e-300}, 1e-2 * r0);
  const std::size_t N = p.grid.size();
  p.values.resize(N);
  p.derivs.resize(N);
  p.second.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0) stepper.advance(p.grid[i - 1], p.grid[i], s);
    const double r = p.grid[i];
    const double dy = s[1] / std::pow(phi_checked(w, r), n - 1.0);
    if (!std::isfinite(s[0]) || !std::isfinite(dy)) throw Error(ErrorCode::Overflow, "radial amplitude overflow");
    p.values[i] = s[0];
    p.derivs[i] = dy;
    p.second[i] = second_from_ode(w, n, lam, r, s[0], dy);
  }
  return p;
}

void rescale(RadialProfile& p, double divisor) {
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    p.values[i] /= divisor;
    p.derivs[i] /= divisor;
    p.second[i] /= divisor;
  }
}

}  // namespace

double indicial_exponent(int n, double lambda_sq) {
  if (lambda_sq < 0.0) throw Error(ErrorCode::InvalidInput, "lambda^2 must be >= 0");
  const double b = n - 2.0;
  // Stable root of l^2 + b l - lambda_sq = 0.
  const double disc = std::sqrt(b * b + 4.0 * lambda_sq);
  if (lambda_sq == 0.0) return 0.0;
  return 2.0 * lambda_sq / (b + disc);
}

std::size_t RadialProfile::index_of_one() const {
  const auto it = std::lower_bound(grid.begin(), grid.end(), 1.0 - 1e-14);
  if (it == grid.end() || std::abs(*it - 1.0) > 1e-12) throw Error(ErrorCode::InvalidInput, "grid lacks r = 1");
  return static_cast<std::size_t>(it - grid.begin());
}

namespace {

struct Hermite {
  double v, d;
};

Hermite hermite5(const RadialProfile& p, double r) {
  const auto& g = p.grid;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), r) - g.begin());
  i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
  const double h = g[i + 1] - g[i];
  const double t = (r - g[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 0.5 * (t3 - 2 * t4 + t5);
  const double D0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double D1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double D2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double D3 = -D0;
  const double D4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double D5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double y0 = p.values[i], y1 = p.values[i + 1];
  const double d0 = p.derivs[i] * h, d1 = p.derivs[i + 1] * h;
  const double s0 = p.second[i] * h * h, s1 = p.second[i + 1] * h * h;
  return {y0 * H0 + d0 * H1 + s0 * H2 + y1 * H3 + d1 * H4 + s1 * H5,
          (y0 * D0 + d0 * D1 + s0 * D2 + y1 * D3 + d1 * D4 + s1 * D5) / h};
}

void check_range(const RadialProfile& p, double r) {
  if (!(r >= 0.0) || r > p.r_max() * (1.0 + 1e-12))
    throw Error(ErrorCode::OutOfRange, "r = " + std::to_string(r) + " outside the profile range [0, " +
                                           std::to_string(p.r_max()) + "]");
}

}  // namespace

double RadialProfile::value(double r) const {
  check_range(*this, r);
  if (r <= grid.front()) {
    if (l == 0.0) return values.front();
    return values.front() * std::pow(r / grid.front(), l);
  }
  return hermite5(*this, std::min(r, r_max())).v;
}

double RadialProfile::deriv(double r) const {
  check_range(*this, r);
  if (r <= grid.front()) {
    if (l == 0.0) return 0.0;
    return values.front() * l / grid.front() * std::pow(r / grid.front(), l - 1.0);
  }
  return hermite5(*this, std::min(r, r_max())).d;
}

RadialProfile solve_radial(const WarpingFunction& w, int n, const EigenMode& mode, double r_max, double tol,
                           const RadialOptions& options) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension n must be >= 2");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tolerance must be > 0");
  if (r_max > w.domain_max()) throw Error(ErrorCode::OutOfDomain, "r_max beyond the warp domain");
  if (options.r0 < w.domain_min()) throw Error(ErrorCode::OutOfDomain, "launch point below the warp domain");
  if (mode.lambda_sq == 0.0) return constant_profile(mode, n, r_max, options);
  RadialProfile p = integrate_profile(w, n, mode, r_max, tol, options);
  if (!options.normalize) return p;
  const CriterionReport crit = march_criterion(w, n, options.criterion_tol);
  if (crit.verdict != Verdict::Convergent) return p;
  return normalize_profile(p, w, n, crit, tol, options);
}

RadialProfile normalize_profile(const RadialProfile& profile, const WarpingFunction& w, int n,
                                const CriterionReport& criterion, double tol, const RadialOptions& options) {
  if (profile.mode.lambda_sq == 0.0) {
    RadialProfile p = profile;
    p.limit_estimate = 1.0;
    p.limit_error = 0.0;
    p.normalized = true;
    return p;
  }
  if (criterion.verdict != Verdict::Convergent)
    throw Error(ErrorCode::NotConvergent, "March criterion is " + to_string(criterion.verdict));
  RadialProfile p = profile;
  if (p.normalized) return p;
  const double lam = p.mode.lambda_sq;
  double delta = std::numeric_limits<double>::infinity();
  for (int attempt = 0;; ++attempt) {
    const double R = p.r_max();
    const bool tails_ok = !(w.family() == Family::PowerLog && R < std::exp(2.0));
    if (tails_ok) {
      const std::size_t i1 = p.index_of_one();
      const double A = std::pow(w.eval(1.0).phi, n - 1.0) * p.derivs[i1] / (lam * p.values[i1]);
      const TailIntegrals t = tail_integrals(w, n, R);
      const double log_mass = log_integral_phi_power(w, n - 3.0, 1.0, R);
      const double log_first = std::log(A + std::exp(log_mass)) + t.log_t1;
      if (std::isfinite(t.log_t1) && std::isfinite(t.log_t2))
        delta = std::expm1(lam * (std::exp(log_first) + std::exp(t.log_t2)));
    }
    if (delta < options.plateau_tol) break;
    if (attempt >= options.max_doublings || 2.0 * R > w.domain_max())
      throw Error(ErrorCode::TailNotTight, "Lemma tail factor " + std::to_string(delta) + " at R = " +
                                               std::to_string(R) + " exceeds " + std::to_string(options.plateau_tol));
    p = integrate_profile(w, n, p.mode, 2.0 * R, tol, options);
  }
  rescale(p, p.values.back() * (1.0 + delta));
  p.limit_estimate = 1.0;
  p.limit_error = delta;
  p.normalized = true;
  return p;
}

RiccatiTrace riccati_trace(const RadialProfile& profile, const WarpingFunction& w, int n) {
  const double lam = profile.mode.lambda_sq;
  if (!(lam > 0.0)) throw Error(ErrorCode::DegenerateProfile, "Riccati variable needs lambda^2 > 0");
  RiccatiTrace tr;
  const std::size_t i1 = profile.index_of_one();
  for (std::size_t i = i1; i < profile.grid.size(); ++i) {
    const double s = profile.grid[i];
    const double y = profile.values[i];
    if (!(y > 0.0)) throw Error(ErrorCode::DegenerateProfile, "profile <= 0 at r = " + std::to_string(s));
    tr.s.push_back(s);
    tr.x.push_back(std::pow(w.eval(s).phi, n - 1.0) * profile.derivs[i] / (lam * y));
  }
  tr.A = tr.x.front();
  tr.B = profile.values[i1];
  for (std::size_t j = 2; j + 2 < tr.s.size(); ++j) {
    const double h = tr.s[j + 1] - tr.s[j];
    bool uniform = true;
    for (std::size_t q = j - 2; q < j + 2; ++q)
      if (std::abs((tr.s[q + 1] - tr.s[q]) - h) > 1e-9 * h) uniform = false;
    if (!uniform) continue;
    const double dx = (tr.x[j - 2] - 8.0 * tr.x[j - 1] + 8.0 * tr.x[j + 1] - tr.x[j + 2]) / (12.0 * h);
    const double phi = w.eval(tr.s[j]).phi;
    const double g = std::pow(phi, n - 3.0);
    const double res = std::abs(dx + lam * tr.x[j] * tr.x[j] / std::pow(phi, n - 1.0) - g) / (1.0 + g);
    tr.interior.push_back(j);
    tr.dx.push_back(dx);
    tr.residual.push_back(res);
    tr.slack.push_back(g - dx);
    tr.max_residual = std::max(tr.max_residual, res);
    if (dx > g + 1e-9) ++tr.inequality_violations;
  }
  return tr;
}

LemmaBound lemma_bound_check(const RadialProfile& profile, const RiccatiTrace& trace, const WarpingFunction& w,
                             int n, double s_max) {
  LemmaBound out;
  const double lam = profile.mode.lambda_sq;
  if (trace.s.empty()) throw Error(ErrorCode::InvalidInput, "empty Riccati trace");
  std::vector<double> gx, gw;
  quad::gauss_legendre(10, gx, gw);
  std::vector<double> ox, ow;
  quad::gauss_legendre(20, ox, ow);
  auto gl = [](const std::vector<double>& x, const std::vector<double>& wt, double a, double b, auto&& f) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += wt[i] * f(c + h * x[i]);
    return s * h;
  };
  auto outer_power = [&](double t) { return std::pow(w.eval(t).phi, n - 3.0); };
  auto inner_power = [&](double t) { return std::pow(w.eval(t).phi, 1.0 - n); };
  double mass = 0.0;      // int_1^s phi^{n-3}
  double exponent = 0.0;  // int_1^s (A + mass(t)) / phi^{n-1}
  for (std::size_t j = 0; j < trace.s.size() && trace.s[j] <= s_max * (1.0 + 1e-14); ++j) {
    if (j > 0) {
      const double a = trace.s[j - 1], b = trace.s[j];
      const double m0 = mass;
      exponent += gl(ox, ow, a, b, [&](double t) {
        const double partial = gl(gx, gw, a, t, outer_power);
        return (trace.A + m0 + partial) * inner_power(t);
      });
      mass += gl(gx, gw, a, b, outer_power);
    }
    const double bound = trace.B * std::exp(lam * exponent);
    const double v = profile.value(trace.s[j]);
    out.s.push_back(trace.s[j]);
    out.bound.push_back(bound);
    out.value.push_back(v);
    if (!(v <= bound * (1.0 + 1e-8))) ++out.violations;
  }
  out.satisfied = out.violations == 0;
  return out;
}

double riccati_cross_check(const RadialProfile& profile, const WarpingFunction& w, int n, double s_max,
                           double tol) {
  const double lam = profile.mode.lambda_sq;
  if (!(lam > 0.0)) throw Error(ErrorCode::DegenerateProfile, "Riccati variable needs lambda^2 > 0");
  const std::size_t i1 = profile.index_of_one();
  const double phi1 = w.eval(1.0).phi;
  State s{std::log(profile.values[i1]),
          std::pow(phi1, n - 1.0) * profile.derivs[i1] / (lam * profile.values[i1])};
  auto rhs = [&](double t, const State& z) -> State {
    const double phi = phi_checked(w, t);
    const double pn1 = std::pow(phi, n - 1.0);
    return {lam * z[1] / pn1, std::pow(phi, n - 3.0) - lam * z[1] * z[1] / pn1};
  };
  Stepper<decltype(rhs)> stepper(rhs, std::clamp(tol, 1e-14, 1e-6), State{1e-14, 1e-300}, 1e-3);
  double worst = 0.0;
  for (std::size_t i = i1 + 1; i < profile.grid.size() && profile.grid[i] <= s_max * (1.0 + 1e-14); ++i) {
    stepper.advance(profile.grid[i - 1], profile.grid[i], s);
    worst = std::max(worst, std::abs(std::expm1(s[0] - std::log(profile.values[i]))));
  }
  return worst;
}

}  // namespace warpharm
