#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace warpharm::quad {

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// Kronrod 21-point abscissae (positive half, descending) with embedded
// 10-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 11> kXk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077779753999178, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class F>
void gk21(const F& f, double a, double b, double& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kron = kWk[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXk[j];
    const double sum = f(center - dx) + f(center + dx);
    kron += kWk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  value = kron * half;
  error = std::abs((kron - gauss) * half);
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G10/K21) integration on a finite interval.
// Bisects the panel with the largest error estimate until
// error <= max(abs_tol, rel_tol * |value|) or the interval budget runs out.
template <class F>
Result integrate(const F& f, double a, double b, const Options& opt = {}) {
  Result out;
  if (a == b) return out;
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::priority_queue<Panel> heap;
  Panel first{a, b, 0.0, 0.0};
  detail::gk21(f, a, b, first.value, first.error);
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  int count = 1;
  auto done = [&] {
    return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };
  while (!done()) {
    if (count >= opt.max_intervals || !std::isfinite(total)) {
      out.converged = false;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      out.converged = false;
      break;
    }
    Panel left{worst.a, mid, 0.0, 0.0};
    Panel right{mid, worst.b, 0.0, 0.0};
    detail::gk21(f, left.a, left.b, left.value, left.error);
    detail::gk21(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.intervals = count;
  if (out.converged) out.converged = std::isfinite(total);
  return out;
}

inline double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Integral of exp(h(x)) represented by its logarithm. `rel_error` bounds the
// relative error of exp(log_value).
struct LogResult {
  double log_value = -std::numeric_limits<double>::infinity();
  double rel_error = 0.0;
  bool converged = true;
};

using LogIntegrand = std::function<double(double)>;

// Splits [a, b] (plus interior breakpoints) into panels across which h varies
// by at most `max_log_span`, so each panel can be integrated after a shift
// without overflow.
std::vector<double> log_panels(const LogIntegrand& h, std::span<const double> breaks,
                               double max_log_span = 16.0, int max_depth = 40);

LogResult integrate_log_panel(const LogIntegrand& h, double a, double b,
                              double rel_tol, int max_intervals = 2000);

LogResult integrate_log(const LogIntegrand& h, std::span<const double> breaks,
                        double rel_tol = 1e-12);

// Prefix and suffix integrals of exp(h) over a fixed panel set. Queries at a
// point x reuse the whole panels on one side and integrate the partial panel.
class LogCumulative {
 public:
  LogCumulative(LogIntegrand h, std::span<const double> breaks, double rel_tol = 1e-12);

  double a() const { return panels_.front(); }
  double b() const { return panels_.back(); }

  // log of the integral over [a, x].
  double log_from_start(double x) const;
  // log of the integral over [x, b].
  double log_to_end(double x) const;
  double log_total() const { return prefix_.back(); }
  double rel_error() const { return rel_error_; }

 private:
  std::size_t panel_of(double x) const;

  LogIntegrand h_;
  double rel_tol_;
  std::vector<double> panels_;
  std::vector<double> panel_log_;
  std::vector<double> prefix_;  // prefix_[i] = log integral over [a, panels_[i]]
  std::vector<double> suffix_;  // suffix_[i] = log integral over [panels_[i], b]
  mutable double rel_error_ = 0.0;
};

// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes, via Newton
// iteration on the three-term recurrence.
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace warpharm::quad
