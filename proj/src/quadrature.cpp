#include "warpharm/quadrature.hpp"

#include <numbers>

#include "warpharm/error.hpp"

namespace warpharm::quad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void split_panel(const LogIntegrand& h, double a, double b, double ha, double hb,
                 double max_span, int depth, std::vector<double>& out) {
  const double mid = 0.5 * (a + b);
  const double hm = h(mid);
  const double lo = std::min({ha, hm, hb});
  const double hi = std::max({ha, hm, hb});
  const bool finite = std::isfinite(lo) && std::isfinite(hi);
  const bool flat = finite && hi - lo <= max_span;
  if (flat || depth <= 0 || mid <= a || mid >= b) {
    out.push_back(b);
    return;
  }
  split_panel(h, a, mid, ha, hm, max_span, depth - 1, out);
  split_panel(h, mid, b, hm, hb, max_span, depth - 1, out);
}

}  // namespace

std::vector<double> log_panels(const LogIntegrand& h, std::span<const double> breaks,
                               double max_log_span, int max_depth) {
  if (breaks.size() < 2) throw Error(ErrorCode::InvalidInput, "log_panels needs >= 2 breakpoints");
  std::vector<double> out{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    split_panel(h, a, b, h(a), h(b), max_log_span, max_depth, out);
  }
  return out;
}

LogResult integrate_log_panel(const LogIntegrand& h, double a, double b, double rel_tol,
                              int max_intervals) {
  LogResult out;
  if (!(b > a)) return out;
  double ref = std::max({h(a), h(0.5 * (a + b)), h(b)});
  if (ref == kNegInf) return out;
  if (!std::isfinite(ref)) throw Error(ErrorCode::QuadratureFailure, "log-integrand not finite");
  // Endpoints of a panel may sit below interior values; take the larger of
  // the probes plus a margin check after integration.
  auto shifted = [&](double x) {
    const double v = h(x) - ref;
    return v == kNegInf ? 0.0 : std::exp(v);
  };
  Options opt;
  opt.rel_tol = rel_tol;
  opt.max_intervals = max_intervals;
  Result r = integrate(shifted, a, b, opt);
  if (!std::isfinite(r.value)) {
    throw Error(ErrorCode::QuadratureFailure, "panel integral overflowed after shift");
  }
  out.converged = r.converged;
  if (r.value <= 0.0) {
    out.log_value = kNegInf;
    out.rel_error = 0.0;
    return out;
  }
  out.log_value = ref + std::log(r.value);
  out.rel_error = r.error / r.value;
  return out;
}

LogResult integrate_log(const LogIntegrand& h, std::span<const double> breaks, double rel_tol) {
  const std::vector<double> panels = log_panels(h, breaks);
  LogResult total;
  double weighted_err = 0.0;
  for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
    LogResult p = integrate_log_panel(h, panels[i], panels[i + 1], rel_tol);
    if (!p.converged) total.converged = false;
    if (p.log_value == kNegInf) continue;
    const double merged = log_add_exp(total.log_value, p.log_value);
    // Relative errors of positive summands combine as a weighted mean.
    const double w_old = total.log_value == kNegInf ? 0.0 : std::exp(total.log_value - merged);
    const double w_new = std::exp(p.log_value - merged);
    weighted_err = w_old * weighted_err + w_new * p.rel_error;
    total.log_value = merged;
  }
  total.rel_error = weighted_err;
  return total;
}

LogCumulative::LogCumulative(LogIntegrand h, std::span<const double> breaks, double rel_tol)
    : h_(std::move(h)), rel_tol_(rel_tol), panels_(log_panels(h_, breaks)) {
  const std::size_t np = panels_.size();
  panel_log_.assign(np - 1, kNegInf);
  prefix_.assign(np, kNegInf);
  suffix_.assign(np, kNegInf);
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < np; ++i) {
    LogResult p = integrate_log_panel(h_, panels_[i], panels_[i + 1], rel_tol_);
    if (!p.converged) throw Error(ErrorCode::QuadratureFailure, "cumulative panel did not converge");
    panel_log_[i] = p.log_value;
    err = std::max(err, p.rel_error);
    prefix_[i + 1] = log_add_exp(prefix_[i], p.log_value);
  }
  for (std::size_t i = np - 1; i-- > 0;) suffix_[i] = log_add_exp(suffix_[i + 1], panel_log_[i]);
  rel_error_ = err;
}

std::size_t LogCumulative::panel_of(double x) const {
  if (x < panels_.front() || x > panels_.back()) {
    throw Error(ErrorCode::OutOfRange, "cumulative query outside the integration range");
  }
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - panels_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, panels_.size() - 2);
}

double LogCumulative::log_from_start(double x) const {
  const std::size_t i = panel_of(x);
  if (x == panels_[i]) return prefix_[i];
  LogResult p = integrate_log_panel(h_, panels_[i], x, rel_tol_);
  rel_error_ = std::max(rel_error_, p.rel_error);
  return log_add_exp(prefix_[i], p.log_value);
}

double LogCumulative::log_to_end(double x) const {
  const std::size_t i = panel_of(x);
  if (x == panels_[i + 1]) return suffix_[i + 1];
  LogResult p = integrate_log_panel(h_, x, panels_[i + 1], rel_tol_);
  rel_error_ = std::max(rel_error_, p.rel_error);
  return log_add_exp(suffix_[i + 1], p.log_value);
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "Gauss-Legendre needs at least one node");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0, p1 = x;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count == 1 ? 1.0 : count * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
}

}  // namespace warpharm::quad
