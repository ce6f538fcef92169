#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace warpharm {

enum class Family { Euclidean, Hyperbolic, PowerGrowth, PowerLog, Tabulated };

std::string to_string(Family family);

// Asymptotic descriptor of the warping function for large r. The criterion
// module derives its tail bounds from this.
struct GrowthClass {
  enum class Kind { Exponential, Power, PowerLog, Unknown };
  Kind kind = Kind::Unknown;
  // Exponential: rate a. Power: exponent p. PowerLog: log exponent c
  // (the power exponent is 1).
  double parameter = 0.0;

  static GrowthClass exponential(double rate) { return {Kind::Exponential, rate}; }
  static GrowthClass power(double exponent) { return {Kind::Power, exponent}; }
  static GrowthClass power_log(double log_exponent) { return {Kind::PowerLog, log_exponent}; }
  static GrowthClass unknown() { return {}; }
};

std::string to_string(const GrowthClass& growth);

struct WarpValues {
  double phi = 0.0;
  double dphi = 0.0;
  double ddphi = 0.0;
};

// Shape-preserving (Fritsch-Carlson) piecewise cubic through sorted samples.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, slope_;
};

// Radial scale factor of g = dr^2 + phi(r)^2 g_omega. Immutable value type,
// safe to share across threads.
class WarpingFunction {
 public:
  static WarpingFunction euclidean();
  static WarpingFunction hyperbolic(double a);
  static WarpingFunction power_growth(double p);
  static WarpingFunction power_log(double c);
  // Samples of phi, phi', phi'' on a strictly increasing grid with r[0] <= 1e-3.
  static WarpingFunction tabulated(std::vector<double> r, std::vector<double> phi,
                                   std::vector<double> dphi, std::vector<double> ddphi,
                                   GrowthClass growth = GrowthClass::unknown());

  Family family() const { return family_; }
  // a, p or c for the parametric families; 0 otherwise.
  double parameter() const { return parameter_; }
  const GrowthClass& growth() const { return growth_; }
  bool is_closed_form() const { return family_ != Family::Tabulated; }

  WarpValues eval(double r) const;
  double log_phi(double r) const;
  // log phi as a function of u = log r; stays finite for very large r.
  double log_phi_at_log(double u) const;

  // Smallest / largest r at which eval is defined.
  double domain_min() const;
  double domain_max() const;
  // Points inside [lo, hi] where phi is only finitely smooth.
  std::vector<double> breakpoints(double lo, double hi) const;

  std::string describe() const;

 private:
  struct Table {
    std::vector<double> r;
    MonotoneCubic phi, dphi, ddphi;
  };

  WarpingFunction(Family family, double parameter, GrowthClass growth)
      : family_(family), parameter_(parameter), growth_(growth) {}

  void check_domain(double r) const;

  Family family_;
  double parameter_;
  GrowthClass growth_;
  std::shared_ptr<const Table> table_;
};

// (phi, phi', phi'') at r.
WarpValues warp_eval(const WarpingFunction& w, double r);

// k(r) = -phi''(r) / phi(r).
double radial_curvature(const WarpingFunction& w, double r);

}  // namespace warpharm
