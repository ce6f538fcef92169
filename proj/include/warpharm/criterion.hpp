#pragma once

#include <string>

#include "warpharm/warp.hpp"

namespace warpharm {

enum class Verdict { Convergent, Divergent, Inconclusive };

std::string to_string(Verdict verdict);

struct CriterionReport {
  Verdict verdict = Verdict::Inconclusive;
  // Finite part over [1, r_max], plus the tail estimate when Convergent.
  double value = 0.0;
  double finite_part = 0.0;
  double tail = 0.0;
  double error_bound = 0.0;
  double r_max = 0.0;
  std::string tail_evidence;
};

struct CriterionOptions {
  double r_max = 100.0;
  // Relative accuracy requested from every quadrature panel.
  double rel_tol = 1e-12;
};

// Split point actually used for w: closed families are scaled
// (hyperbolic: >= 20/a, powerlog: >= e^2), tabulated ones clipped to the grid.
double effective_r_max(const WarpingFunction& w, double requested);

// int_1^inf phi^{n-3}(s) int_s^inf phi^{1-n}(t) dt ds.
CriterionReport march_criterion(const WarpingFunction& w, int n, double tol,
                                const CriterionOptions& options = {});

// int_1^inf phi^{1-n}(t) dt.
CriterionReport transience_integral(const WarpingFunction& w, int n, double tol,
                                    const CriterionOptions& options = {});

struct FubiniResult {
  double lhs = 0.0;  // int_1^R phi^{1-n}(t) int_1^t phi^{n-3}(s) ds dt
  double rhs = 0.0;  // int_1^R phi^{n-3}(s) int_s^R phi^{1-n}(t) dt ds
};

FubiniResult fubini_check(const WarpingFunction& w, int n, double R);

// Tails beyond R. Warps without analytic growth data get an uncertified
// power-law fit to the local growth exponent at R.
//
//   t1 = int_R^inf phi^{1-n},  t2 = int_R^inf phi^{n-3}(s) int_s^inf phi^{1-n}.
// Values are logarithms; a divergent tail has log value +inf.
struct TailIntegrals {
  double r = 0.0;
  double log_t1 = 0.0;
  double log_t2 = 0.0;
  // Certified enclosure of t1 and t2 (logs), when the model is exact.
  double log_t1_lower = 0.0, log_t1_upper = 0.0;
  double log_t2_lower = 0.0, log_t2_upper = 0.0;
  double abs_error_t1 = 0.0;
  double abs_error_t2 = 0.0;
  bool certified = true;
  std::string evidence_t1;
  std::string evidence_t2;
};

TailIntegrals tail_integrals(const WarpingFunction& w, int n, double R);

// log int_a^b phi(s)^exponent ds, evaluated in log space.
double log_integral_phi_power(const WarpingFunction& w, double exponent, double a, double b);

}  // namespace warpharm
