#include "warpharm/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "warpharm/error.hpp"
#include "warpharm/quadrature.hpp"

namespace warpharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void validate(const WarpingFunction& w, int n, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::InvalidTolerance, "tolerance must be finite and > 0");
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension n must be >= 2");
  (void)w;
}

std::vector<double> panel_breaks(const WarpingFunction& w, double a, double b) {
  std::vector<double> br{a};
  for (double x = a > 0.0 ? 2.0 * a : 1.0; x < b; x *= 2.0) br.push_back(x);
  for (double x : w.breakpoints(a, b)) br.push_back(x);
  br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

quad::LogIntegrand phi_power(const WarpingFunction& w, double exponent) {
  return [&w, exponent](double r) {
    if (exponent == 0.0) return 0.0;
    return exponent * w.log_phi(r);
  };
}

// Integrals over the finite box [1, R].
struct FiniteParts {
  double log_transience = kNegInf;  // int_1^R phi^{1-n}
  double log_outer_mass = kNegInf;  // int_1^R phi^{n-3}
  double log_march = kNegInf;       // int_1^R phi^{n-3}(s) int_s^R phi^{1-n}
  double rel_error = 0.0;
};

FiniteParts finite_parts(const WarpingFunction& w, int n, double R, double rel_tol, bool with_march) {
  FiniteParts out;
  const std::vector<double> br = panel_breaks(w, 1.0, R);
  const quad::LogIntegrand inner = phi_power(w, 1.0 - n);
  const quad::LogIntegrand outer = phi_power(w, n - 3.0);
  quad::LogCumulative inner_cum(inner, br, rel_tol);
  out.log_transience = inner_cum.log_total();
  out.rel_error = inner_cum.rel_error();
  if (!with_march) return out;
  quad::LogResult mass = quad::integrate_log(outer, br, rel_tol);
  out.log_outer_mass = mass.log_value;
  quad::LogIntegrand box = [&](double s) {
    const double tail = inner_cum.log_to_end(s);
    if (tail == kNegInf) return kNegInf;
    return outer(s) + tail;
  };
  quad::LogResult march = quad::integrate_log(box, br, rel_tol);
  if (!march.converged || !mass.converged) throw Error(ErrorCode::QuadratureFailure, "finite-box quadrature did not converge");
  out.log_march = march.log_value;
  out.rel_error = std::max({out.rel_error, mass.rel_error, march.rel_error, inner_cum.rel_error()});
  return out;
}

quad::Result integrate_unit(const std::function<double(double)>& f, double rel_tol = 1e-12) {
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-300;
  quad::Result r = quad::integrate(f, 0.0, 1.0, opt);
  if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "tail quadrature did not converge");
  return r;
}

// Tail model phi(t) = C * S(t) * rho(t) for t >= R with S elementary and
// rho -> 1. log_rho_range bounds log rho on [R, inf).
struct TailModel {
  double log_scale = 0.0;
  std::function<double(double)> log_rho = [](double) { return 0.0; };
  double log_rho_lo = 0.0;
  double log_rho_hi = 0.0;
  bool certified = true;
};

// Range of exponent * log rho over the model's rho range.
std::pair<double, double> power_range(const TailModel& m, double exponent) {
  const double a = exponent * m.log_rho_lo;
  const double b = exponent * m.log_rho_hi;
  return {std::min(a, b), std::max(a, b)};
}

void mark_divergent_t2(TailIntegrals& t) {
  t.log_t2 = t.log_t2_lower = t.log_t2_upper = kInf;
}

// phi ~ C t^p rho(t).
TailIntegrals power_tail(double p, int n, double R, const TailModel& model) {
  TailIntegrals t;
  t.r = R;
  t.certified = model.certified;
  const double k = n - 1.0;
  const double a1 = p * k - 1.0;
  const double a2 = 2.0 * p - 2.0;
  const double logR = std::log(R);
  const double logC = model.log_scale;
  if (a1 <= 0.0) {
    const auto [lo, hi] = power_range(model, -k);
    (void)hi;
    t.log_t1 = t.log_t1_lower = t.log_t1_upper = kInf;
    mark_divergent_t2(t);
    t.evidence_t1 = "phi^{1-n}(t) >= " + num(std::exp(-k * logC + lo)) + " * t^{-" + num(p * k) +
                    "}; (n-1)p = " + num(p * k) + " <= 1 so int_R^inf t^{-" + num(p * k) + "} dt diverges";
    t.evidence_t2 = "inner integral diverges for every s (" + t.evidence_t1 + ")";
    return t;
  }
  const auto rho_inner = [&](double s, double y) {
    const double logt = std::log(s) - std::log(y) / a1;
    return std::exp(-k * model.log_rho(std::exp(logt)));
  };
  // j(s) = int_0^1 rho(s y^{-1/a1})^{-k} dy, so J(s) = C^{-k} s^{-a1} j(s) / a1.
  const auto j_of = [&](double s) {
    return integrate_unit([&](double y) { return rho_inner(s, y); });
  };
  const quad::Result j_R = j_of(R);
  const double log_pref1 = -k * logC - a1 * logR - std::log(a1);
  t.log_t1 = log_pref1 + std::log(j_R.value);
  t.abs_error_t1 = std::exp(log_pref1) * j_R.error;
  {
    const auto [lo, hi] = power_range(model, -k);
    t.log_t1_lower = log_pref1 + lo;
    t.log_t1_upper = log_pref1 + hi;
  }
  t.evidence_t1 = "phi^{1-n}(t) = C^{-k} t^{-" + num(p * k) + "} rho(t)^{-k}, tail exponent (n-1)p-1 = " + num(a1) +
                  " > 0; t1 in [" + num(std::exp(t.log_t1_lower)) + ", " + num(std::exp(t.log_t1_upper)) + "]";
  if (a2 <= 0.0) {
    const auto [lo_o, hi_o] = power_range(model, n - 3.0);
    const auto [lo_i, hi_i] = power_range(model, -k);
    (void)hi_o;
    (void)hi_i;
    const double coeff = std::exp(-2.0 * logC + lo_o + lo_i) / a1;
    mark_divergent_t2(t);
    t.evidence_t2 = "phi^{n-3}(s) J(s) >= " + num(coeff) + " * s^{" + num(1.0 - 2.0 * p) +
                    "} (= s^{0} * s^{-1}/(n-2) for p = 1); 2p-1 = " + num(2.0 * p - 1.0) +
                    " <= 1 so int_R^inf s^{" + num(1.0 - 2.0 * p) + "} ds diverges";
    return t;
  }
  const double log_pref2 = -2.0 * logC - a2 * logR - std::log(a1) - std::log(a2);
  const quad::Result outer = integrate_unit([&](double y) {
    const double s = std::exp(logR - std::log(y) / a2);
    const double rho_o = std::exp((n - 3.0) * model.log_rho(s));
    if (!std::isfinite(s)) return rho_o;
    return rho_o * j_of(s).value;
  }, 1e-11);
  t.log_t2 = log_pref2 + std::log(outer.value);
  t.abs_error_t2 = std::exp(log_pref2) * (outer.error + 1e-12 * outer.value);
  {
    const auto [lo_o, hi_o] = power_range(model, n - 3.0);
    const auto [lo_i, hi_i] = power_range(model, -k);
    t.log_t2_lower = log_pref2 + lo_o + lo_i;
    t.log_t2_upper = log_pref2 + hi_o + hi_i;
  }
  t.evidence_t2 = "phi^{n-3}(s) J(s) ~ s^{" + num(1.0 - 2.0 * p) + "}, tail exponent 2p-2 = " + num(a2) +
                  " > 0; t2 in [" + num(std::exp(t.log_t2_lower)) + ", " + num(std::exp(t.log_t2_upper)) + "]";
  return t;
}

// phi ~ C e^{a t} rho(t).
TailIntegrals exponential_tail(double a, int n, double R, const TailModel& model) {
  TailIntegrals t;
  t.r = R;
  t.certified = model.certified;
  const double k = n - 1.0;
  const double b1 = k * a;
  const double logC = model.log_scale;
  const auto j_of = [&](double s) {
    return integrate_unit([&](double y) { return std::exp(-k * model.log_rho(s - std::log(y) / b1)); });
  };
  const quad::Result j_R = j_of(R);
  const double log_pref1 = -k * logC - b1 * R - std::log(b1);
  t.log_t1 = log_pref1 + std::log(j_R.value);
  t.abs_error_t1 = std::exp(log_pref1) * j_R.error;
  {
    const auto [lo, hi] = power_range(model, -k);
    t.log_t1_lower = log_pref1 + lo;
    t.log_t1_upper = log_pref1 + hi;
  }
  t.evidence_t1 = "phi^{1-n}(t) <= C^{-k} e^{-" + num(b1) + " t} * " + num(std::exp(power_range(model, -k).second)) +
                  ", geometric tail; t1 in [" + num(std::exp(t.log_t1_lower)) + ", " + num(std::exp(t.log_t1_upper)) + "]";
  // phi^{n-3}(s) J(s) = C^{-2} e^{-2 a s} rho^{n-3}(s) j(s) / b1.
  const double log_pref2 = -2.0 * logC - 2.0 * a * R - std::log(b1) - std::log(2.0 * a);
  const quad::Result outer = integrate_unit([&](double y) {
    const double s = R - std::log(y) / (2.0 * a);
    return std::exp((n - 3.0) * model.log_rho(s)) * j_of(s).value;
  }, 1e-11);
  t.log_t2 = log_pref2 + std::log(outer.value);
  t.abs_error_t2 = std::exp(log_pref2) * (outer.error + 1e-12 * outer.value);
  {
    const auto [lo_o, hi_o] = power_range(model, n - 3.0);
    const auto [lo_i, hi_i] = power_range(model, -k);
    t.log_t2_lower = log_pref2 + lo_o + lo_i;
    t.log_t2_upper = log_pref2 + hi_o + hi_i;
  }
  t.evidence_t2 = "phi^{n-3}(s) J(s) <= C' e^{-" + num(2.0 * a) + " s}, geometric tail; t2 in [" +
                  num(std::exp(t.log_t2_lower)) + ", " + num(std::exp(t.log_t2_upper)) + "]";
  return t;
}

// phi = C t (log t)^c exactly for t >= R >= e^2.
TailIntegrals powerlog_tail(double c, int n, double R, const TailModel& model) {
  TailIntegrals t;
  t.r = R;
  t.certified = model.certified;
  const double logC = model.log_scale;
  const double U = std::log(R);
  const double logU = std::log(U);
  if (n == 2) {
    if (c <= 1.0) {
      t.log_t1 = t.log_t1_lower = t.log_t1_upper = kInf;
      mark_divergent_t2(t);
      t.evidence_t1 = "phi^{-1}(t) = t^{-1} (log t)^{-" + num(c) + "} / C with c = " + num(c) +
                      " <= 1, so int_R^inf dt / (t (log t)^c) diverges";
      t.evidence_t2 = "inner integral diverges for every s (" + t.evidence_t1 + ")";
      return t;
    }
    t.log_t1 = t.log_t1_lower = t.log_t1_upper = -logC + (1.0 - c) * logU - std::log(c - 1.0);
    t.log_t2 = t.log_t2_lower = t.log_t2_upper =
        -2.0 * logC + (2.0 - 2.0 * c) * logU - std::log(c - 1.0) - std::log(2.0 * c - 2.0);
    t.evidence_t1 = "t1 = (log R)^{1-c} / (C (c-1)) exactly, c = " + num(c) + " > 1";
    t.evidence_t2 = "phi^{-1}(s) J(s) = s^{-1} (log s)^{" + num(1.0 - 2.0 * c) + "} / (C^2 (c-1)); c > 1 gives t2 = " +
                    num(std::exp(t.log_t2));
    return t;
  }
  const double beta = n - 2.0;
  const double gamma = c * (n - 1.0);
  const double W = 60.0 / beta;
  // q(v) = int_0^inf e^{-beta w} (1 + w/v)^{-gamma} dw, increasing in v, q(inf) = 1/beta.
  const auto q_of = [&](double v) {
    quad::Options opt;
    opt.rel_tol = 1e-13;
    const quad::Result r = quad::integrate(
        [&](double w) { return std::exp(-beta * w - gamma * std::log1p(w / v)); }, 0.0, W, opt);
    if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "powerlog tail kernel did not converge");
    return r;
  };
  const quad::Result qU = q_of(U);
  const double rem = std::exp(-beta * W) / beta;
  const double log_pref1 = -(n - 1.0) * logC - beta * U - gamma * logU;
  t.log_t1 = log_pref1 + std::log(qU.value);
  t.abs_error_t1 = std::exp(log_pref1) * (qU.error + rem);
  t.log_t1_lower = log_pref1 + std::log(qU.value - qU.error);
  t.log_t1_upper = log_pref1 + std::log(qU.value + qU.error + rem);
  t.evidence_t1 = "phi^{1-n}(t) = C^{1-n} t^{1-n} (log t)^{-" + num(gamma) + "}, power tail t^{-" + num(n - 1.0) +
                  "} with n >= 3 converges";
  const double alpha = 2.0 * c - 1.0;
  if (alpha <= 0.0) {
    mark_divergent_t2(t);
    t.evidence_t2 = "phi^{n-3}(s) J(s) >= " + num(std::exp(-2.0 * logC) * qU.value) + " * s^{-1} (log s)^{-" +
                    num(2.0 * c) + "}; 2c = " + num(2.0 * c) + " <= 1 so int_R^inf ds / (s (log s)^{2c}) diverges" +
                    (alpha == 0.0 ? " (boundary case c = 1/2: int ds/(s log s))" : "");
    return t;
  }
  const double log_pref2 = -2.0 * logC - alpha * logU - std::log(alpha);
  const quad::Result outer = integrate_unit([&](double y) {
    const double v = U * std::exp(-std::log(y) / alpha);
    if (!std::isfinite(v)) return 1.0 / beta;
    return q_of(v).value;
  }, 1e-11);
  t.log_t2 = log_pref2 + std::log(outer.value);
  t.abs_error_t2 = std::exp(log_pref2) * (outer.error + rem + 1e-12 * outer.value);
  t.log_t2_lower = log_pref2 + std::log(qU.value - qU.error);
  t.log_t2_upper = log_pref2 + std::log(1.0 / beta);
  t.evidence_t2 = "phi^{n-3}(s) J(s) = C^{-2} s^{-1} (log s)^{-" + num(2.0 * c) + "} q(log s), q in [" +
                  num(qU.value) + ", " + num(1.0 / beta) + "]; 2c = " + num(2.0 * c) + " > 1 converges";
  return t;
}

TailModel matched_model(const WarpingFunction& w, double R) {
  TailModel m;
  m.certified = false;
  const double lp = w.log_phi(R);
  const GrowthClass& g = w.growth();
  switch (g.kind) {
    case GrowthClass::Kind::Power: m.log_scale = lp - g.parameter * std::log(R); break;
    case GrowthClass::Kind::Exponential: m.log_scale = lp - g.parameter * R; break;
    case GrowthClass::Kind::PowerLog: m.log_scale = lp - std::log(R) - g.parameter * std::log(std::log(R)); break;
    case GrowthClass::Kind::Unknown: break;
  }
  return m;
}

struct LocalExponent {
  double estimate = 0.0;
  double band = 0.0;
};

// Local growth exponent t phi'(t)/phi(t) at R and R/2, extrapolated.
LocalExponent local_exponent(const WarpingFunction& w, double R, double tol) {
  auto p_at = [&](double r) {
    const WarpValues v = w.eval(r);
    return r * v.dphi / v.phi;
  };
  const double p1 = p_at(R);
  const double p2 = p_at(0.5 * R);
  return {2.0 * p1 - p2, std::abs(p1 - p2) + 10.0 * tol};
}

CriterionReport heuristic_report(const WarpingFunction& w, int n, double tol, double R, bool march,
                                 const FiniteParts& fin) {
  CriterionReport rep;
  rep.r_max = R;
  const LocalExponent p = local_exponent(w, R, tol);
  const double k = n - 1.0;
  const double a1 = k * p.estimate - 1.0;
  const double band1 = k * p.band;
  const double a2 = 2.0 * p.estimate - 2.0;
  const double band2 = 2.0 * p.band;
  const double g1 = std::exp(-k * w.log_phi(R));
  const std::string head = "heuristic power-law extrapolation (growth class unknown): local exponent p = " +
                           num(p.estimate) + " +/- " + num(p.band);
  const double fin_T = std::exp(fin.log_transience);
  const double fin_M = std::exp(fin.log_march);
  rep.finite_part = march ? fin_M : fin_T;
  rep.value = rep.finite_part;
  rep.error_bound = rep.finite_part * fin.rel_error;
  auto tail1 = [&](double alpha) { return g1 * R / alpha; };
  // Transience part.
  if (a1 < -band1) {
    rep.verdict = Verdict::Divergent;
    rep.tail_evidence = head + "; inner integrand ~ t^{-" + num(k * p.estimate) + "} with (n-1)p - 1 = " + num(a1) +
                        " < 0, int t^{-s} dt diverges for s < 1";
    return rep;
  }
  if (a1 <= band1) {
    rep.verdict = Verdict::Inconclusive;
    rep.tail_evidence = head + "; (n-1)p - 1 = " + num(a1) + " within the uncertainty band " + num(band1);
    return rep;
  }
  const double t1 = tail1(a1);
  const double t1_err = 0.5 * (tail1(a1 - band1) - tail1(a1 + band1));
  if (!march) {
    rep.tail = t1;
    rep.value = fin_T + t1;
    rep.error_bound += t1_err;
    rep.tail_evidence = head + "; tail ~ phi(R)^{1-n} R / " + num(a1);
    rep.verdict = rep.error_bound < tol ? Verdict::Convergent : Verdict::Inconclusive;
    if (rep.verdict == Verdict::Inconclusive) rep.tail_evidence += "; tail uncertainty " + num(t1_err) + " exceeds tol";
    return rep;
  }
  if (a2 < -band2) {
    rep.verdict = Verdict::Divergent;
    rep.tail_evidence = head + "; outer integrand ~ s^{" + num(1.0 - 2.0 * p.estimate) + "} with 2p - 2 = " + num(a2) +
                        " < 0, int s^{-s'} ds diverges for s' < 1";
    return rep;
  }
  if (a2 <= band2) {
    rep.verdict = Verdict::Inconclusive;
    rep.tail_evidence = head + "; 2p - 2 = " + num(a2) + " within the uncertainty band " + num(band2);
    return rep;
  }
  const double mass = std::exp(fin.log_outer_mass);
  const double g2 = std::exp((n - 3.0) * w.log_phi(R));
  auto tail2 = [&](double alpha1, double alpha2) { return g2 * tail1(alpha1) * R / alpha2; };
  const double t2 = tail2(a1, a2);
  const double t2_err = 0.5 * (tail2(a1 - band1, a2 - band2) - tail2(a1 + band1, a2 + band2));
  rep.tail = t1 * mass + t2;
  rep.value = fin_M + rep.tail;
  rep.error_bound += t1_err * mass + t2_err;
  rep.tail_evidence = head + "; outer tail exponent 2p - 2 = " + num(a2);
  rep.verdict = rep.error_bound < tol ? Verdict::Convergent : Verdict::Inconclusive;
  if (rep.verdict == Verdict::Inconclusive) rep.tail_evidence += "; tail uncertainty exceeds tol";
  return rep;
}

CriterionReport evaluate(const WarpingFunction& w, int n, double tol, const CriterionOptions& opt, bool march) {
  validate(w, n, tol);
  const double R = effective_r_max(w, opt.r_max);
  const FiniteParts fin = finite_parts(w, n, R, opt.rel_tol, march);
  if (w.growth().kind == GrowthClass::Kind::Unknown) return heuristic_report(w, n, tol, R, march, fin);

  const TailIntegrals tails = tail_integrals(w, n, R);
  CriterionReport rep;
  rep.r_max = R;
  const std::string prefix = w.describe() + ", n = " + std::to_string(n) + ", R = " + num(R) + ": ";
  if (!march) {
    rep.finite_part = std::exp(fin.log_transience);
    rep.error_bound = rep.finite_part * fin.rel_error;
    rep.tail_evidence = prefix + tails.evidence_t1;
    if (tails.log_t1 == kInf) {
      rep.verdict = Verdict::Divergent;
      rep.value = rep.finite_part;
      return rep;
    }
    rep.tail = std::exp(tails.log_t1);
    rep.value = rep.finite_part + rep.tail;
    rep.error_bound += tails.abs_error_t1;
    if (!tails.certified) rep.error_bound += 0.1 * rep.tail;
  } else {
    rep.finite_part = std::exp(fin.log_march);
    rep.error_bound = rep.finite_part * fin.rel_error;
    rep.tail_evidence = prefix + tails.evidence_t2;
    if (tails.log_t1 == kInf || tails.log_t2 == kInf) {
      rep.verdict = Verdict::Divergent;
      rep.value = rep.finite_part;
      return rep;
    }
    const double log_cross = tails.log_t1 + fin.log_outer_mass;
    rep.tail = std::exp(quad::log_add_exp(log_cross, tails.log_t2));
    rep.value = std::exp(quad::log_add_exp(fin.log_march, quad::log_add_exp(log_cross, tails.log_t2)));
    const double cross_err =
        tails.abs_error_t1 > 0.0 ? std::exp(std::log(tails.abs_error_t1) + fin.log_outer_mass) : 0.0;
    rep.error_bound += cross_err + tails.abs_error_t2 + std::exp(log_cross) * fin.rel_error;
    if (!tails.certified) rep.error_bound += 0.1 * rep.tail;
  }
  if (rep.error_bound < tol) {
    rep.verdict = Verdict::Convergent;
  } else if (!tails.certified) {
    rep.verdict = Verdict::Inconclusive;
    rep.tail_evidence += "; matched asymptotic model, tail uncertainty exceeds tol";
  } else {
    throw Error(ErrorCode::QuadratureFailure, "error bound " + num(rep.error_bound) + " does not meet tol " + num(tol));
  }
  return rep;
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Convergent: return "Convergent";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

double effective_r_max(const WarpingFunction& w, double requested) {
  if (!(requested > 1.0)) throw Error(ErrorCode::InvalidInput, "r_max must be > 1");
  switch (w.family()) {
    case Family::Hyperbolic: return std::max(requested, 20.0 / w.parameter());
    case Family::PowerLog: return std::max(requested, std::exp(2.0));
    case Family::Tabulated: {
      const double R = std::min(requested, w.domain_max());
      if (!(R >= 2.0)) throw Error(ErrorCode::InvalidInput, "tabulated grid must extend to r >= 2");
      return R;
    }
    default: return requested;
  }
}

TailIntegrals tail_integrals(const WarpingFunction& w, int n, double R) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension n must be >= 2");
  if (!(R > 1.0)) throw Error(ErrorCode::InvalidInput, "tail start must be > 1");
  const GrowthClass& g = w.growth();
  switch (w.family()) {
    case Family::Euclidean:
      return power_tail(1.0, n, R, TailModel{});
    case Family::PowerGrowth: {
      const double p = w.parameter();
      TailModel m;
      m.log_rho = [p](double t) { return 0.5 * (p - 1.0) * std::log1p(1.0 / (t * t)); };
      m.log_rho_lo = std::min(0.0, m.log_rho(R));
      m.log_rho_hi = std::max(0.0, m.log_rho(R));
      return power_tail(p, n, R, m);
    }
    case Family::Hyperbolic: {
      const double a = w.parameter();
      TailModel m;
      m.log_scale = -std::log(2.0 * a);
      m.log_rho = [a](double t) { return std::log1p(-std::exp(-2.0 * a * t)); };
      m.log_rho_lo = m.log_rho(R);
      m.log_rho_hi = 0.0;
      return exponential_tail(a, n, R, m);
    }
    case Family::PowerLog: {
      if (R < std::exp(2.0)) throw Error(ErrorCode::InvalidInput, "powerlog tail needs R >= e^2");
      TailModel m;
      // phi = r (log r)^c * exp(c (G(2) - log 2)) beyond e^2.
      m.log_scale = w.log_phi(R) - std::log(R) - w.parameter() * std::log(std::log(R));
      return powerlog_tail(w.parameter(), n, R, m);
    }
    case Family::Tabulated: {
      const TailModel m = matched_model(w, R);
      switch (g.kind) {
        case GrowthClass::Kind::Power: return power_tail(g.parameter, n, R, m);
        case GrowthClass::Kind::Exponential: return exponential_tail(g.parameter, n, R, m);
        case GrowthClass::Kind::PowerLog:
          if (R < std::exp(2.0)) throw Error(ErrorCode::InvalidInput, "powerlog tail needs R >= e^2");
          return powerlog_tail(g.parameter, n, R, m);
        case GrowthClass::Kind::Unknown: {
          // Uncertified power-law model fitted to the local exponent at R.
          const double p = local_exponent(w, R, 0.0).estimate;
          TailModel fit;
          fit.certified = false;
          fit.log_scale = w.log_phi(R) - p * std::log(R);
          return power_tail(p, n, R, fit);
        }
      }
    }
  }
  throw Error(ErrorCode::InvalidInput, "unsupported warp family");
}

CriterionReport march_criterion(const WarpingFunction& w, int n, double tol, const CriterionOptions& options) {
  return evaluate(w, n, tol, options, true);
}

CriterionReport transience_integral(const WarpingFunction& w, int n, double tol, const CriterionOptions& options) {
  return evaluate(w, n, tol, options, false);
}

FubiniResult fubini_check(const WarpingFunction& w, int n, double R) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension n must be >= 2");
  if (!(R > 1.0)) throw Error(ErrorCode::InvalidInput, "R must be > 1");
  if (R > w.domain_max()) throw Error(ErrorCode::OutOfDomain, "R beyond the warp domain");
  const double rel_tol = 1e-13;
  const std::vector<double> br = panel_breaks(w, 1.0, R);
  const quad::LogIntegrand inner = phi_power(w, 1.0 - n);
  const quad::LogIntegrand outer = phi_power(w, n - 3.0);
  // lhs: outer variable t, running mass int_1^t phi^{n-3}.
  quad::LogCumulative mass(outer, br, rel_tol);
  quad::LogIntegrand lhs_h = [&](double t) {
    const double m = mass.log_from_start(t);
    if (m == kNegInf) return kNegInf;
    return inner(t) + m;
  };
  // rhs: outer variable s, remaining inner integral int_s^R phi^{1-n}.
  quad::LogCumulative rest(inner, br, rel_tol);
  quad::LogIntegrand rhs_h = [&](double s) {
    const double r = rest.log_to_end(s);
    if (r == kNegInf) return kNegInf;
    return outer(s) + r;
  };
  const quad::LogResult lhs = quad::integrate_log(lhs_h, br, rel_tol);
  const quad::LogResult rhs = quad::integrate_log(rhs_h, br, rel_tol);
  if (!lhs.converged || !rhs.converged) throw Error(ErrorCode::QuadratureFailure, "Fubini quadrature did not converge");
  return {std::exp(lhs.log_value), std::exp(rhs.log_value)};
}

double log_integral_phi_power(const WarpingFunction& w, double exponent, double a, double b) {
  if (!(b > a)) return kNegInf;
  const std::vector<double> br = panel_breaks(w, a, b);
  const quad::LogResult r = quad::integrate_log(phi_power(w, exponent), br, 1e-12);
  if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "phi-power integral did not converge");
  return r.log_value;
}

}  // namespace warpharm
