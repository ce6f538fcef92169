#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "warpharm/error.hpp"
#include "warpharm/extension.hpp"
#include "warpharm/oracle.hpp"

using namespace warpharm;

namespace {

const double kPi = std::numbers::pi;
const WarpingFunction kHyp = WarpingFunction::hyperbolic(1.0);

BoundaryData circle_data(int M, const std::function<double(double)>& f) {
  const SphereGrid g = grid_for_band(2, std::max(2 * M, M + 8));
  std::vector<double> s;
  for (const auto& p : g.nodes) s.push_back(f(p.theta));
  return BoundaryData::from_samples(g, s, M);
}

BoundaryData single_mode(int n, int m, int k, int M) {
  CoefficientTable c(n, M);
  c.at(m, k) = 1.0;
  return BoundaryData::from_coefficients(c);
}

}  // namespace

TEST(Extension, ConstantData) {
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(4, [](double) { return 2.5; }), 4, 1e-8);
  for (double r : {0.0, 0.3, 1.0, 7.0, 20.0})
    for (double t : {0.0, 1.0, 4.0}) EXPECT_NEAR(evaluate(e, r, {t, 0}), 2.5, 1e-12);
  EXPECT_NEAR(l2_distance_to_boundary(e, 3.0), 0.0, 1e-12);
  EXPECT_NEAR(sup_distance_on_grid(e, 3.0, circle_data(4, [](double) { return 2.5; })), 0.0, 1e-12);
}

TEST(Extension, CosineOnHyperbolicPlane) {
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(4, [](double t) { return std::cos(t); }), 4, 1e-8);
  EXPECT_NEAR(evaluate(e, 1.0, {0, 0}), std::tanh(0.5), 1e-5);
  EXPECT_NEAR(evaluate(e, 1.0, {0, 0}), 0.4621172, 1e-5);
  double worst = 0.0;
  for (double r = 0.0; r <= 20.0; r += 0.25)
    for (double t = 0.0; t < 2 * kPi; t += 0.3) worst = std::max(worst, std::abs(evaluate(e, r, {t, 0}) - std::tanh(0.5 * r) * std::cos(t)));
  EXPECT_LT(worst, 1e-5);
  EXPECT_TRUE(e.warnings().empty());
}

TEST(Extension, SecondModeVanishesAtOrigin) {
  const HarmonicExtension e = build_extension(kHyp, 2, single_mode(2, 2, 0, 3), 3, 1e-8);
  const RadialProfile& p2 = e.profiles()[2];
  for (double r : {0.5, 2.0, 9.0})
    for (double t : {0.0, 0.7}) EXPECT_NEAR(evaluate(e, r, {t, 0}), p2.value(r) * eigenfunction_eval(2, 2, 0, {t, 0}), 1e-13);
  EXPECT_EQ(evaluate(e, 0.0, {0.3, 0}), 0.0);
}

TEST(Extension, OriginValueIsBoundaryMean) {
  auto f = [](double t) { return std::exp(std::cos(t)) + 0.3 * std::sin(2 * t); };
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(12, f), 12, 1e-8);
  // Mean of exp(cos t) over the circle is I_0(1).
  EXPECT_NEAR(evaluate(e, 0.0, {1.0, 0}), std::cyl_bessel_i(0.0, 1.0), 1e-10);
}

TEST(Extension, OriginValueOnSphere) {
  CoefficientTable c(3, 3);
  c.at(0, 0) = 2.0;
  c.at(2, 3) = 1.0;
  const HarmonicExtension e = build_extension(kHyp, 3, BoundaryData::from_coefficients(c), 3, 1e-8);
  EXPECT_NEAR(evaluate(e, 0.0, {0.4, 1.1}), 2.0 / std::sqrt(4 * kPi), 1e-12);
}

TEST(Extension, EvaluationBeyondRangeIsRefused) {
  const HarmonicExtension e = build_extension(kHyp, 2, single_mode(2, 1, 0, 2), 2, 1e-8);
  try {
    evaluate(e, e.r_max() + 1.0, {0, 0});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::OutOfRange);
  }
  EXPECT_NEAR(evaluate_at_infinity(e, {0.0, 0}), 1.0 / std::sqrt(kPi), 1e-14);
}

TEST(Extension, DistanceForSingleMode) {
  const HarmonicExtension e = build_extension(kHyp, 2, single_mode(2, 1, 0, 1), 1, 1e-8);
  for (double r : {0.5, 1.0, 4.0, 12.0}) {
    EXPECT_NEAR(l2_distance_to_boundary(e, r), 1.0 - std::tanh(0.5 * r), 1e-7);
    EXPECT_NEAR(sup_distance_on_grid(e, r, single_mode(2, 1, 0, 1)), (1.0 - std::tanh(0.5 * r)) / std::sqrt(kPi), 1e-7);
  }
}

TEST(Extension, BandLimitedDataConvergesInSupNorm) {
  auto f = [](double t) {
    double s = 0.0;
    for (int m = 0; m <= 4; ++m) s += std::cos(m * t) / (1.0 + m) + std::sin(m * t) / (2.0 + m);
    return s;
  };
  const BoundaryData d = circle_data(4, f);
  const HarmonicExtension e = build_extension(kHyp, 2, d, 4, 1e-8);
  EXPECT_LT(sup_distance_on_grid(e, 15.0, d), 1e-3);
  EXPECT_LT(e.truncation_error_bound(), 1e-12);
}

TEST(Extension, L2DistanceDecreases) {
  for (const auto& w : {kHyp, WarpingFunction::hyperbolic(2.0), WarpingFunction::hyperbolic(0.5)}) {
    const HarmonicExtension e =
        build_extension(w, 2, circle_data(8, [](double t) { return std::exp(std::cos(t)); }), 8, 1e-8);
    double last = std::numeric_limits<double>::infinity();
    for (double r = 0.0; r <= e.r_max(); r += 0.5) {
      const double d = l2_distance_to_boundary(e, r);
      EXPECT_LE(d, last * (1 + 1e-12) + 1e-15) << w.describe() << " r=" << r;
      last = d;
    }
    EXPECT_LT(l2_distance_to_boundary(e, 10.0), l2_distance_to_boundary(e, 1.0));
    EXPECT_LT(l2_distance_to_boundary(e, e.r_max()), 1e-3 * l2_distance_to_boundary(e, 0.0));
  }
}

TEST(Extension, MaximumPrinciple) {
  auto f = [](double t) { return std::exp(std::cos(t)) - 2 * std::sin(3 * t); };
  const BoundaryData d = circle_data(10, f);
  const HarmonicExtension e = build_extension(kHyp, 2, d, 10, 1e-8);
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < 36000; ++j) lo = std::min(lo, f(j * kPi / 18000)), hi = std::max(hi, f(j * kPi / 18000));
  const double eps = e.truncation_error_bound() + 1e-9;
  for (double r = 0.0; r <= 20.0; r += 0.2)
    for (int j = 0; j < 360; ++j) {
      const double u = evaluate(e, r, {j * kPi / 180, 0});
      EXPECT_GE(u, lo - eps);
      EXPECT_LE(u, hi + eps);
    }
}

TEST(Extension, Linearity) {
  auto f = [](double t) { return std::exp(std::sin(t)); };
  auto g = [](double t) { return std::cos(2 * t) - 0.5 * std::sin(5 * t); };
  const double a = 1.7, b = -0.4;
  const int M = 10;
  const HarmonicExtension ef = build_extension(kHyp, 2, circle_data(M, f), M, 1e-8);
  const HarmonicExtension eg = build_extension(kHyp, 2, circle_data(M, g), M, 1e-8);
  const HarmonicExtension eh =
      build_extension(kHyp, 2, circle_data(M, [&](double t) { return a * f(t) + b * g(t); }), M, 1e-8);
  for (double r : {0.0, 0.8, 3.0, 15.0})
    for (double t : {0.0, 1.3, 4.4})
      EXPECT_NEAR(evaluate(eh, r, {t, 0}), a * evaluate(ef, r, {t, 0}) + b * evaluate(eg, r, {t, 0}), 1e-10);
}

TEST(Extension, RotationEquivariance) {
  const double t0 = 0.9;
  auto f = [](double t) { return 1.0 + std::cos(t) - 0.7 * std::sin(2 * t) + 0.2 * std::cos(4 * t); };
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(4, f), 4, 1e-8);
  const HarmonicExtension er = build_extension(kHyp, 2, circle_data(4, [&](double t) { return f(t - t0); }), 4, 1e-8);
  for (double r : {0.5, 2.0, 10.0})
    for (double t : {0.0, 2.0, 5.5}) EXPECT_NEAR(evaluate(er, r, {t, 0}), evaluate(e, r, {t - t0, 0}), 1e-10);

  CoefficientTable c(3, 3);
  for (int m = 0; m <= 3; ++m)
    for (int k = 0; k < c.multiplicity(m); ++k) c.at(m, k) = std::sin(1.0 + m + 2.0 * k);
  const HarmonicExtension s = build_extension(kHyp, 3, BoundaryData::from_coefficients(c), 3, 1e-8);
  const HarmonicExtension sr =
      build_extension(kHyp, 3, BoundaryData::from_coefficients(rotate_about_axis(c, t0)), 3, 1e-8);
  for (double r : {0.5, 4.0})
    for (double th : {0.3, 2.0})
      for (double lon : {0.0, 3.0}) EXPECT_NEAR(evaluate(sr, r, {th, lon}), evaluate(s, r, {th, lon - t0}), 1e-10);
}

TEST(Extension, DivergentWarpIsNotSolvable) {
  for (const auto& [w, n] : {std::pair{WarpingFunction::euclidean(), 2}, std::pair{WarpingFunction::euclidean(), 3},
                             std::pair{WarpingFunction::power_log(0.4), 3}}) {
    try {
      build_extension(w, n, single_mode(n, 1, 0, 2), 2, 1e-8);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotSolvable);
    }
  }
}

TEST(Extension, LooseTailIsReported) {
  try {
    build_extension(WarpingFunction::power_growth(2.0), 2, single_mode(2, 8, 0, 8), 8, 1e-8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailNotTight);
  }
}

TEST(Extension, WarnsWhenTruncationIsTooLow) {
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(3, [](double t) { return std::cos(3 * t); }), 3, 1e-8);
  EXPECT_FALSE(e.warnings().empty());
  const HarmonicExtension q =
      build_extension(kHyp, 2, circle_data(6, [](double t) { return 1 + std::cos(3 * t); }), 6, 1e-8);
  EXPECT_TRUE(q.warnings().empty());
}

TEST(Extension, TruncationBoundCoversDiscardedModes) {
  auto f = [](double t) { return std::exp(2 * std::cos(t)); };
  const int M = 6;
  const HarmonicExtension e = build_extension(kHyp, 2, circle_data(M, f), M, 1e-8);
  const BoundaryData fine = circle_data(40, f);
  const HarmonicExtension ref = build_extension(kHyp, 2, fine, 30, 1e-8);
  double worst = 0.0;
  for (double r : {2.0, 10.0})
    for (double t = 0; t < 2 * kPi; t += 0.1) worst = std::max(worst, std::abs(evaluate(e, r, {t, 0}) - evaluate(ref, r, {t, 0})));
  EXPECT_GT(e.truncation_error_bound(), 0.0);
  EXPECT_LE(worst, e.truncation_error_bound());
}

TEST(Extension, DiscreteHarmonicity) {
  const HarmonicExtension e = build_extension(
      kHyp, 2, circle_data(6, [](double t) { return std::cos(t) + 0.5 * std::sin(3 * t) + 0.25 * std::cos(6 * t); }), 6,
      1e-8);
  const AnnulusGrid g = AnnulusGrid::make(0.5, 3.0, 251, 64);
  const std::vector<double> u = sample(g, [&](double r, const SpherePoint& p) { return evaluate(e, r, p); });
  double worst = 0.0;
  for (int i = 1; i + 1 < g.n_r; i += 5)
    for (int j = 0; j < g.n_theta; ++j) worst = std::max(worst, std::abs(laplace_beltrami_residual(kHyp, g, u, i, j)));
  EXPECT_LT(worst, 1e-3);
}

TEST(Extension, SphereHarmonicity) {
  CoefficientTable c(3, 2);
  c.at(1, 0) = 1.0;
  c.at(2, 2) = 0.5;
  const HarmonicExtension e = build_extension(kHyp, 3, BoundaryData::from_coefficients(c), 2, 1e-8);
  const ShellGrid g = ShellGrid::make(1.0, 1.4, 21, 180, 360);
  const std::vector<double> u = sample(g, [&](double r, const SpherePoint& p) { return evaluate(e, r, p); });
  double worst = 0.0;
  for (int i = 1; i + 1 < g.n_r; i += 4)
    for (int j = 10; j < 170; j += 7)
      for (int k = 0; k < g.n_lon; k += 11) worst = std::max(worst, std::abs(laplace_beltrami_residual(kHyp, g, u, i, j, k)));
  EXPECT_LT(worst, 1e-3);
}

TEST(Extension, DeterministicBuild) {
  auto f = [](double t) { return std::exp(std::sin(t)); };
  const HarmonicExtension a = build_extension(kHyp, 2, circle_data(8, f), 8, 1e-8);
  const HarmonicExtension b = build_extension(kHyp, 2, circle_data(8, f), 8, 1e-8);
  for (int m = 0; m <= 8; ++m) EXPECT_EQ(a.profiles()[m].values, b.profiles()[m].values);
}
