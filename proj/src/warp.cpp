#include "warpharm/warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "warpharm/error.hpp"

namespace warpharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-derivative splice for PowerLog, in t = log r. s(t) is the cubic
// smoothstep from 0 at t=1 to 1 at t=2 and G(t) = int_1^t s(u)/u du, so that
// log phi = log r + c * G(log r).
double splice_s(double t) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return 1.0;
  const double x = t - 1.0;
  return x * x * (3.0 - 2.0 * x);
}

double splice_ds(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double x = t - 1.0;
  return 6.0 * x * (1.0 - x);
}

double splice_partial(double x) {
  // int_0^x (3y^2 - 2y^3)/(1+y) dy
  return -2.0 * x * x * x / 3.0 + 2.5 * x * x - 5.0 * x + 5.0 * std::log1p(x);
}

const double kSpliceG2 = splice_partial(1.0);

double splice_G(double t) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return kSpliceG2 + std::log(t / 2.0);
  return splice_partial(t - 1.0);
}

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Euclidean: return "euclidean";
    case Family::Hyperbolic: return "hyperbolic";
    case Family::PowerGrowth: return "power";
    case Family::PowerLog: return "powerlog";
    case Family::Tabulated: return "tabulated";
  }
  return "unknown";
}

std::string to_string(const GrowthClass& growth) {
  switch (growth.kind) {
    case GrowthClass::Kind::Exponential: return "exponential(a=" + fmt_param(growth.parameter) + ")";
    case GrowthClass::Kind::Power: return "power(p=" + fmt_param(growth.parameter) + ")";
    case GrowthClass::Kind::PowerLog: return "powerlog(c=" + fmt_param(growth.parameter) + ")";
    case GrowthClass::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error(ErrorCode::InvalidInput, "monotone cubic needs >= 2 matching samples");
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  slope_.assign(n, 0.0);
  slope_[0] = secant[0];
  slope_[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d0 = secant[i - 1];
    const double d1 = secant[i];
    if (d0 * d1 <= 0.0) {
      slope_[i] = 0.0;
      continue;
    }
    // Weighted harmonic mean (Fritsch-Butland / PCHIP).
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double w0 = 2.0 * h1 + h0;
    const double w1 = h1 + 2.0 * h0;
    slope_[i] = (w0 + w1) / (w0 / d0 + w1 / d1);
  }
}

double MonotoneCubic::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

WarpingFunction WarpingFunction::euclidean() {
  return WarpingFunction(Family::Euclidean, 0.0, GrowthClass::power(1.0));
}

WarpingFunction WarpingFunction::hyperbolic(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidFamily, "hyperbolic rate a must be > 0");
  return WarpingFunction(Family::Hyperbolic, a, GrowthClass::exponential(a));
}

WarpingFunction WarpingFunction::power_growth(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidFamily, "power exponent p must be > 0");
  return WarpingFunction(Family::PowerGrowth, p, GrowthClass::power(p));
}

WarpingFunction WarpingFunction::power_log(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidFamily, "log exponent c must be >= 0");
  return WarpingFunction(Family::PowerLog, c, GrowthClass::power_log(c));
}

WarpingFunction WarpingFunction::tabulated(std::vector<double> r, std::vector<double> phi,
                                           std::vector<double> dphi, std::vector<double> ddphi,
                                           GrowthClass growth) {
  const std::size_t n = r.size();
  if (n < 4 || phi.size() != n || dphi.size() != n || ddphi.size() != n) {
    throw Error(ErrorCode::InvalidFamily, "tabulated warp needs >= 4 rows of r, phi, dphi, ddphi");
  }
  if (!(r[0] >= 0.0) || r[0] > 1e-3) throw Error(ErrorCode::InvalidFamily, "tabulated grid must start in [0, 1e-3]");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(phi[i]) || !std::isfinite(dphi[i]) || !std::isfinite(ddphi[i])) {
      throw Error(ErrorCode::InvalidFamily, "tabulated warp contains non-finite samples");
    }
    if (i > 0 && !(r[i] > r[i - 1])) throw Error(ErrorCode::InvalidFamily, "tabulated r must be strictly increasing");
    if (r[i] > 0.0 && !(phi[i] > 0.0)) throw Error(ErrorCode::InvalidFamily, "tabulated phi must be > 0 for r > 0");
  }
  WarpingFunction w(Family::Tabulated, 0.0, growth);
  auto table = std::make_shared<Table>();
  table->phi = MonotoneCubic(r, std::move(phi));
  table->dphi = MonotoneCubic(r, std::move(dphi));
  table->ddphi = MonotoneCubic(r, std::move(ddphi));
  table->r = std::move(r);
  w.table_ = std::move(table);
  return w;
}

double WarpingFunction::domain_min() const {
  return family_ == Family::Tabulated ? table_->r.front() : 0.0;
}

double WarpingFunction::domain_max() const {
  return family_ == Family::Tabulated ? table_->r.back() : kInf;
}

void WarpingFunction::check_domain(double r) const {
  if (!(r >= domain_min()) || !(r <= domain_max()) || std::isnan(r)) {
    throw Error(ErrorCode::OutOfDomain, "r = " + fmt_param(r) + " outside the warp domain");
  }
}

WarpValues WarpingFunction::eval(double r) const {
  check_domain(r);
  switch (family_) {
    case Family::Euclidean:
      return {r, 1.0, 0.0};
    case Family::Hyperbolic: {
      const double a = parameter_;
      const double s = std::sinh(a * r);
      return {s / a, std::cosh(a * r), a * s};
    }
    case Family::PowerGrowth: {
      const double p = parameter_;
      if (p == 1.0) return {r, 1.0, 0.0};
      const double q = 1.0 + r * r;
      const double phi = r * std::pow(q, 0.5 * (p - 1.0));
      const double dphi = std::pow(q, 0.5 * (p - 3.0)) * (1.0 + p * r * r);
      const double ddphi = (p - 1.0) * r * std::pow(q, 0.5 * (p - 5.0)) * (3.0 + p * r * r);
      return {phi, dphi, ddphi};
    }
    case Family::PowerLog: {
      if (r <= std::numbers::e) return {r, 1.0, 0.0};
      const double c = parameter_;
      const double t = std::log(r);
      const double g1 = c * splice_s(t) / t;
      const double g2 = c * (splice_ds(t) / t - splice_s(t) / (t * t));
      const double phi = r * std::exp(c * splice_G(t));
      const double dphi = phi * (1.0 + g1) / r;
      const double ddphi = phi / (r * r) * ((1.0 + g1) * g1 + g2);
      return {phi, dphi, ddphi};
    }
    case Family::Tabulated:
      return {table_->phi(r), table_->dphi(r), table_->ddphi(r)};
  }
  return {};
}

double WarpingFunction::log_phi(double r) const {
  check_domain(r);
  if (r == 0.0) return -kInf;
  switch (family_) {
    case Family::Euclidean:
      return std::log(r);
    case Family::Hyperbolic: {
      const double a = parameter_;
      const double x = a * r;
      if (x > 20.0) return x - std::log(2.0 * a) + std::log1p(-std::exp(-2.0 * x));
      return std::log(std::sinh(x) / a);
    }
    case Family::PowerGrowth:
    case Family::PowerLog:
      return log_phi_at_log(std::log(r));
    case Family::Tabulated:
      return std::log(table_->phi(r));
  }
  return 0.0;
}

double WarpingFunction::log_phi_at_log(double u) const {
  switch (family_) {
    case Family::Euclidean:
      return u;
    case Family::PowerGrowth: {
      const double p = parameter_;
      if (p == 1.0) return u;
      // log(1 + r^2) without forming r^2 for large r.
      const double log_q = u > 0.0 ? 2.0 * u + std::log1p(std::exp(-2.0 * u)) : std::log1p(std::exp(2.0 * u));
      return u + 0.5 * (p - 1.0) * log_q;
    }
    case Family::PowerLog:
      return u + parameter_ * splice_G(u);
    case Family::Hyperbolic:
    case Family::Tabulated:
      return log_phi(std::exp(u));
  }
  return 0.0;
}

std::vector<double> WarpingFunction::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  if (family_ == Family::PowerLog) {
    for (double b : {std::numbers::e, std::exp(2.0)}) {
      if (b > lo && b < hi) out.push_back(b);
    }
  } else if (family_ == Family::Tabulated) {
    // Interpolant nodes.
    auto first = std::upper_bound(table_->r.begin(), table_->r.end(), lo);
    auto last = std::lower_bound(table_->r.begin(), table_->r.end(), hi);
    out.assign(first, last);
  }
  return out;
}

std::string WarpingFunction::describe() const {
  switch (family_) {
    case Family::Euclidean: return "euclidean";
    case Family::Hyperbolic: return "hyperbolic(a=" + fmt_param(parameter_) + ")";
    case Family::PowerGrowth: return "power(p=" + fmt_param(parameter_) + ")";
    case Family::PowerLog: return "powerlog(c=" + fmt_param(parameter_) + ")";
    case Family::Tabulated: return "tabulated(" + std::to_string(table_->r.size()) + " rows)";
  }
  return "unknown";
}

WarpValues warp_eval(const WarpingFunction& w, double r) {
  if (!(r >= 0.0)) throw Error(ErrorCode::OutOfDomain, "r must be >= 0");
  return w.eval(r);
}

double radial_curvature(const WarpingFunction& w, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::OutOfDomain, "radial curvature needs r > 0");
  const WarpValues v = w.eval(r);
  if (!(v.phi > 0.0)) throw Error(ErrorCode::OutOfDomain, "phi(r) must be positive");
  return -v.ddphi / v.phi;
}

}  // namespace warpharm
