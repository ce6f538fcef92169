#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "warpharm/error.hpp"
#include "warpharm/oracle.hpp"
#include "warpharm/spectrum.hpp"

using namespace warpharm;
constexpr double kPi = std::numbers::pi;

TEST(Spectrum, CircleEigenvalues) {
  const EigenMode e = eigen_round_sphere(2, 3);
  EXPECT_EQ(e.lambda_sq, 9.0);
  ASSERT_TRUE(e.multiplicity);
  EXPECT_EQ(*e.multiplicity, 2);
  EXPECT_EQ(*eigen_round_sphere(2, 0).multiplicity, 1);
}

TEST(Spectrum, SphereEigenvalues) {
  const EigenMode e = eigen_round_sphere(3, 2);
  EXPECT_EQ(e.lambda_sq, 6.0);
  EXPECT_EQ(*e.multiplicity, 5);
}

TEST(Spectrum, HigherDimensionConstants) {
  const EigenMode e = eigen_round_sphere(7, 0);
  EXPECT_EQ(e.lambda_sq, 0.0);
  ASSERT_TRUE(e.multiplicity);
  EXPECT_EQ(*e.multiplicity, 1);
  EXPECT_EQ(eigen_round_sphere(7, 2).lambda_sq, 14.0);
  EXPECT_FALSE(eigen_round_sphere(7, 2).multiplicity);
}

TEST(Spectrum, CircleEigenfunctionValues) {
  EXPECT_NEAR(eigenfunction_eval(2, 0, 0, {1.234, 0}), 1.0 / std::sqrt(2 * kPi), 1e-15);
  EXPECT_NEAR(eigenfunction_eval(2, 1, 0, {0, 0}), 0.5641896, 1e-7);
  EXPECT_NEAR(eigenfunction_eval(2, 3, 1, {0.4, 0}), std::sin(1.2) / std::sqrt(kPi), 1e-15);
}

TEST(Spectrum, SphereEigenfunctionsMatchClosedForms) {
  const SpherePoint north{0.0, 0.0};
  EXPECT_NEAR(eigenfunction_eval(3, 1, 0, north), std::sqrt(3.0 / (4 * kPi)), 1e-14);
  EXPECT_NEAR(eigenfunction_eval(3, 1, 0, north), 0.4886025, 1e-7);
  for (double t : {0.3, 1.1, 2.9})
    for (double l : {0.0, 0.7, 4.0}) {
      const SpherePoint p{t, l};
      const double c = std::cos(t), s = std::sin(t);
      EXPECT_NEAR(eigenfunction_eval(3, 0, 0, p), 1.0 / std::sqrt(4 * kPi), 1e-14);
      EXPECT_NEAR(eigenfunction_eval(3, 2, 0, p), std::sqrt(5.0 / (16 * kPi)) * (3 * c * c - 1), 1e-13);
      EXPECT_NEAR(std::abs(eigenfunction_eval(3, 1, 1, p)), std::abs(std::sqrt(3.0 / (4 * kPi)) * s * std::cos(l)),
                  1e-13);
      EXPECT_NEAR(std::abs(eigenfunction_eval(3, 2, 4, p)),
                  std::abs(std::sqrt(15.0 / (16 * kPi)) * s * s * std::sin(2 * l)), 1e-13);
    }
}

TEST(Spectrum, IndexChecks) {
  try {
    eigenfunction_eval(2, 2, 2, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
  try {
    eigenfunction_eval(4, 1, 0, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDimension);
  }
}

namespace {

void expect_gram_identity(int n, int M) {
  const SphereGrid g = grid_for_band(n, M);
  std::vector<std::pair<int, int>> idx;
  for (int m = 0; m <= M; ++m)
    for (int k = 0; k < *eigen_round_sphere(n, m).multiplicity; ++k) idx.push_back({m, k});
  std::vector<std::vector<double>> vals(idx.size(), std::vector<double>(g.nodes.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      vals[a][i] = eigenfunction_eval(n, idx[a].first, idx[a].second, g.nodes[i]);
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * vals[a][i] * vals[b][i];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  EXPECT_LT(worst, 1e-10) << "n=" << n << " M=" << M;
}

}  // namespace

TEST(Spectrum, CircleGramMatrixIsIdentity) {
  for (int M : {0, 1, 5, 16}) expect_gram_identity(2, M);
}

TEST(Spectrum, SphereGramMatrixIsIdentity) {
  for (int M : {0, 2, 8}) expect_gram_identity(3, M);
}

TEST(Spectrum, DiscreteEigenrelationOnOneDegreeGrid) {
  const int nc = 180, nl = 360;
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 2 * m + 1; ++k) {
      std::vector<double> f(nc * nl);
      for (int j = 0; j < nc; ++j)
        for (int q = 0; q < nl; ++q) f[j * nl + q] = eigenfunction_eval(3, m, k, {(j + 0.5) * kPi / nc, 2 * kPi * q / nl});
      const std::vector<double> lf = sphere_laplacian_fd(f, nc, nl);
      const double lam = m * (m + 1.0);
      double num = 0.0, den = 0.0, rq_num = 0.0, rq_den = 0.0;
      for (int j = 0; j < nc; ++j) {
        const double w = std::sin((j + 0.5) * kPi / nc);
        for (int q = 0; q < nl; ++q) {
          const double v = f[j * nl + q], d = lf[j * nl + q] + lam * v;
          num += w * d * d;
          den += w * lam * lam * v * v;
          rq_num -= w * v * lf[j * nl + q];
          rq_den += w * v * v;
        }
      }
      EXPECT_LT(std::sqrt(num / den), 1e-2) << "m=" << m << " k=" << k;
      if (m == 2) EXPECT_NEAR(rq_num / rq_den, 6.0, 1e-3);
    }
  }
}

TEST(Spectrum, ProjectSingleMode) {
  const SphereGrid g = grid_for_band(2, 4);
  std::vector<double> f;
  for (const auto& p : g.nodes) f.push_back(eigenfunction_eval(2, 1, 0, p));
  const CoefficientTable c = project_boundary(BoundaryData::from_samples(g, f, 4), 4);
  for (int m = 0; m <= 4; ++m)
    for (int k = 0; k < c.multiplicity(m); ++k) EXPECT_NEAR(c.at(m, k), (m == 1 && k == 0) ? 1.0 : 0.0, 1e-12);
}

TEST(Spectrum, ProjectConstantAndAffine) {
  const SphereGrid g = grid_for_band(2, 2);
  std::vector<double> one(g.nodes.size(), 1.0), aff;
  for (const auto& p : g.nodes) aff.push_back(3 * std::cos(p.theta) - 2);
  const CoefficientTable c1 = project_boundary(BoundaryData::from_samples(g, one, 2), 2);
  EXPECT_NEAR(c1.at(0, 0), std::sqrt(2 * kPi), 1e-12);
  EXPECT_NEAR(c1.at(0, 0), 2.5066283, 1e-7);
  EXPECT_NEAR(c1.at(1, 0), 0.0, 1e-12);
  const CoefficientTable c2 = project_boundary(BoundaryData::from_samples(g, aff, 2), 2);
  EXPECT_NEAR(c2.at(0, 0), -2 * std::sqrt(2 * kPi), 1e-12);
  EXPECT_NEAR(c2.at(1, 0), 3 * std::sqrt(kPi), 1e-12);
  EXPECT_NEAR(c2.at(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(c2.at(2, 0), 0.0, 1e-12);
  EXPECT_NEAR(c2.at(2, 1), 0.0, 1e-12);
}

TEST(Spectrum, CoarseGridIsRejected) {
  const SphereGrid g = circle_grid(6);
  std::vector<double> f(6, 1.0);
  try {
    project_boundary(BoundaryData::from_samples(g, f, 4), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
  }
}

TEST(Spectrum, SynthesizeProjectRoundTrip) {
  for (int n : {2, 3}) {
    const int M = n == 2 ? 12 : 6;
    CoefficientTable c(n, M);
    for (int m = 0; m <= M; ++m)
      for (int k = 0; k < c.multiplicity(m); ++k) c.at(m, k) = std::sin(1.0 + 3 * m + 7 * k);
    const SphereGrid g = grid_for_band(n, M);
    const CoefficientTable back = project_boundary(BoundaryData::from_samples(g, synthesize(c, g), M), M);
    for (int m = 0; m <= M; ++m)
      for (int k = 0; k < c.multiplicity(m); ++k) EXPECT_NEAR(back.at(m, k), c.at(m, k), 1e-10);
  }
}

TEST(Spectrum, RotationAboutAxisShiftsTheSignal) {
  for (int n : {2, 3}) {
    CoefficientTable c(n, 4);
    for (int m = 0; m <= 4; ++m)
      for (int k = 0; k < c.multiplicity(m); ++k) c.at(m, k) = std::cos(2.0 + m - 0.5 * k);
    const double angle = 0.7;
    const CoefficientTable rc = rotate_about_axis(c, angle);
    for (double t : {0.2, 1.3, 2.8})
      for (double l : {0.0, 1.9, 5.1}) {
        const SpherePoint p = n == 2 ? SpherePoint{t + l, 0} : SpherePoint{t, l};
        const SpherePoint back = n == 2 ? SpherePoint{p.theta - angle, 0} : SpherePoint{t, l - angle};
        EXPECT_NEAR(synthesize_at(rc, p), synthesize_at(c, back), 1e-12);
      }
  }
}

TEST(Spectrum, VolumeOfSpheres) {
  EXPECT_NEAR(RoundSphere(2).volume(), 2 * kPi, 1e-14);
  EXPECT_NEAR(RoundSphere(3).volume(), 4 * kPi, 1e-14);
  EXPECT_NEAR(RoundSphere(4).volume(), 2 * kPi * kPi, 1e-13);
}
