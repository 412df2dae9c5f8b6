#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ncgeo/errors.hpp"
#include "ncgeo/flow.hpp"
#include "ncgeo/linearized.hpp"
#include "oracles.hpp"

using namespace ncgeo;

namespace {

DiscreteLoop arc_loop(const SpaceFormSpec& sf, double angle, int N, bool reverse = false) {
  const int d = sf.n + 1;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d), dir = Eigen::VectorXd::Zero(d);
  x(0) = 1.0;
  dir(1) = reverse ? -1.0 : 1.0;
  return DiscreteLoop::make(great_arc_samples(x, dir, angle, N), sf, 1);
}

Eigen::MatrixXd random_symplectic(std::mt19937_64& rng, int k) {
  // Product of symplectic shears [[I, S], [0, I]] and [[I, 0], [S, I]].
  std::normal_distribution<double> nd(0.0, 0.5);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  for (int r = 0; r < 3; ++r) {
    Eigen::MatrixXd S(k, k);
    for (int i = 0; i < k * k; ++i) S.data()[i] = nd(rng);
    S = (S + S.transpose()).eval() / 2;
    Eigen::MatrixXd U = Eigen::MatrixXd::Identity(2 * k, 2 * k);
    if (r % 2 == 0) {
      U.topRightCorner(k, k) = S;
    } else {
      U.bottomLeftCorner(k, k) = S;
    }
    P = P * U;
  }
  return P;
}

double min_angle_distance(const std::vector<std::complex<double>>& eig, double angle) {
  double best = 1e300;
  for (const auto& z : eig) best = std::min(best, std::abs(std::abs(std::arg(z)) - angle));
  return best;
}

}  // namespace

TEST(Flow, RoundFlowIsGreatCircle) {
  const auto m = MetricSpec::round(3);
  Eigen::VectorXd z(8);
  z << 1, 0, 0, 0, 0, 0, 1, 0;
  for (double T : {0.5, 2.0, 7.0}) {
    const Eigen::VectorXd zt = geodesic_flow(m, z, T);
    Eigen::VectorXd want(8);
    want << std::cos(T), 0, std::sin(T), 0, -std::sin(T), 0, std::cos(T), 0;
    EXPECT_LT((zt - want).norm(), 1e-10) << T;
  }
}

TEST(Flow, FinslerSpeedIsConserved) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (MetricKind kind : {MetricKind::Randers, MetricKind::Katok}) {
    const auto m = MetricSpec::make(kind, 2, 0.2, 16);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(3), v(3);
      for (int i = 0; i < 3; ++i) x(i) = nd(rng);
      x.normalize();
      for (int i = 0; i < 3; ++i) v(i) = nd(rng);
      v -= v.dot(x) * x;
      v = unit_speed(m, x, v);
      Eigen::VectorXd z(6);
      z << x, v;
      const Eigen::VectorXd zt = geodesic_flow(m, z, 5.0);
      const Eigen::VectorXd xt = zt.head(3), vt = zt.tail(3);
      EXPECT_NEAR(xt.norm(), 1.0, 1e-10);
      EXPECT_NEAR(xt.dot(vt), 0.0, 1e-10);
      EXPECT_NEAR(eval_metric(m, TangentSample::make(xt.normalized(), vt - vt.dot(xt) * xt)), 1.0, 1e-9);
    }
  }
}

TEST(Flow, LagrangianJetMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  const auto m = MetricSpec::randers(3, 0.3);
  const double h = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(4), v(4);
    for (int i = 0; i < 4; ++i) {
      x(i) = nd(rng);
      v(i) = nd(rng);
    }
    x.normalize();
    v -= v.dot(x) * x;
    const LagrangianJet j = lagrangian_jet(m, x, v);
    const double F = eval_metric(m, TangentSample::make(x, v));
    EXPECT_NEAR(j.value, F * F / 2, 1e-12);
    // Directional derivative in v along a tangent direction.
    Eigen::VectorXd w(4);
    for (int i = 0; i < 4; ++i) w(i) = nd(rng);
    w -= w.dot(x) * x;
    auto L = [&](const Eigen::VectorXd& vv) {
      const double f = eval_metric(m, TangentSample::make(x, vv));
      return f * f / 2;
    };
    const double fd = (L(v + h * w) - L(v - h * w)) / (2 * h);
    EXPECT_NEAR(j.lv.dot(w), fd, 1e-7);
    const double fd2 = (L(v + 1e-4 * w) - 2 * L(v) + L(v - 1e-4 * w)) / 1e-8;
    EXPECT_NEAR(w.dot(j.lvv * w), fd2, 1e-4);
  }
}

TEST(Linearized, SymplecticPolishRestoresStructure) {
  std::mt19937_64 rng(12);
  for (int k : {1, 2, 3}) {
    const Eigen::MatrixXd J = standard_symplectic(k);
    EXPECT_LT((J * J + Eigen::MatrixXd::Identity(2 * k, 2 * k)).norm(), 1e-15);
    const Eigen::MatrixXd P = random_symplectic(rng, k);
    EXPECT_LT(symplectic_defect(P), 1e-12);
    Eigen::MatrixXd noisy = P;
    for (int i = 0; i < noisy.size(); ++i) noisy.data()[i] += 1e-6 * std::sin(17.0 * i);
    EXPECT_GT(symplectic_defect(noisy), 1e-8);
    const Eigen::MatrixXd Q = symplectic_polish(noisy);
    EXPECT_LT(symplectic_defect(Q), 1e-12);
    EXPECT_LT((Q - P).norm(), 1e-4);
  }
}

TEST(Linearized, SpectralSymmetryOfSymplecticMatrices) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd P = random_symplectic(rng, 2);
    const SpectralSummary s = spectral_summary(P);
    ASSERT_EQ(s.eigenvalues.size(), 4u);
    EXPECT_LE(spectral_symmetry_defect(s.eigenvalues), 1e-8);
    std::complex<double> prod = 1.0;
    for (const auto& z : s.eigenvalues) prod *= z;
    EXPECT_NEAR(prod.real(), 1.0, 1e-8);
  }
  std::vector<std::complex<double>> broken{{2.0, 0.0}, {3.0, 0.0}};
  EXPECT_GT(spectral_symmetry_defect(broken), 1.0);
}

TEST(Linearized, RoundGreatCircleReturnsIdentity) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::round(2);
  const auto full = iterate_loop(arc_loop(sf, M_PI, 128), 2, sf);
  const PoincareMap pm = poincare_map(m, sf, full);
  EXPECT_NEAR(pm.period, 2 * M_PI, 1e-8);
  EXPECT_LT((pm.matrix - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-6);
  EXPECT_LE(pm.defect, 1e-6);
  const SpectralSummary s = spectral_summary(pm.matrix);
  EXPECT_EQ(s.nullity, 2);
  EXPECT_FALSE(s.hyperbolic);
}

TEST(Linearized, LensSpaceRotation) {
  const auto sf = SpaceFormSpec::make(3, 3);
  const PoincareMap pm = poincare_map(MetricSpec::round(3), sf, arc_loop(sf, 2 * M_PI / 3, 128));
  const SpectralSummary s = spectral_summary(pm.matrix);
  ASSERT_EQ(s.eigenvalues.size(), 4u);
  EXPECT_LE(min_angle_distance(s.eigenvalues, 2 * M_PI / 3), 1e-6);
  EXPECT_LE(min_angle_distance(s.eigenvalues, 0.0), 1e-6);
  EXPECT_LE(spectral_symmetry_defect(s.eigenvalues), 1e-5);
}

TEST(Linearized, KatokCirclesAreElliptic) {
  const double alpha = 0.1;
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::katok(2, alpha, 16);
  struct Case {
    bool reverse;
    double length, angle;
  };
  for (const Case& c : {Case{false, oracle::katok_short(alpha), oracle::katok_rotation_short(alpha)},
                        Case{true, oracle::katok_long(alpha), oracle::katok_rotation_long(alpha)}}) {
    const PoincareMap pm = poincare_map(m, sf, arc_loop(sf, M_PI, 128, c.reverse));
    EXPECT_NEAR(pm.period, c.length, 1e-8);
    EXPECT_LE(pm.defect, 1e-6);
    const SpectralSummary s = spectral_summary(pm.matrix);
    EXPECT_EQ(s.elliptic_height, 2);
    EXPECT_EQ(s.nullity, 0);
    for (const auto& z : s.eigenvalues) {
      EXPECT_NEAR(std::abs(z), 1.0, 1e-6);
      EXPECT_NEAR(std::abs(std::arg(z)), c.angle, 1e-6);
    }
  }
}

TEST(Linearized, RoundMorseIndexMatchesJacobiModes) {
  const auto sf2 = SpaceFormSpec::make(2, 2);
  const auto m2 = MetricSpec::round(2);
  const auto g = arc_loop(sf2, M_PI, 64);
  for (int e : {1, 2, 3}) {
    const auto ge = iterate_loop(g, e, sf2);
    const MorseIndexEstimate est = numerical_morse_index(m2, ge, 1e-6);
    const auto want = oracle::round_iterate_index(2, 2, e);
    EXPECT_EQ(est.index, want.index) << e;
    EXPECT_EQ(est.nullity_est, want.kernel) << e;
  }
  const auto sf3 = SpaceFormSpec::make(3, 3);
  const auto h = arc_loop(sf3, 2 * M_PI / 3, 48);
  for (int e : {1, 2}) {
    const MorseIndexEstimate est = numerical_morse_index(MetricSpec::round(3), iterate_loop(h, e, sf3), 1e-6);
    const auto want = oracle::round_iterate_index(3, 3, e);
    EXPECT_EQ(est.index, want.index) << e;
    EXPECT_EQ(est.nullity_est, want.kernel) << e;
  }
}

TEST(Linearized, RejectsUnconvergedLoops) {
  const auto sf = SpaceFormSpec::make(2, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 0.1);
  Eigen::MatrixXd P = arc_loop(sf, M_PI, 32).points;
  for (int i = 0; i < P.size(); ++i) P.data()[i] += nd(rng);
  P.colwise().normalize();
  EXPECT_THROW(numerical_morse_index(MetricSpec::round(2), DiscreteLoop::make(P, sf, 1), 1e-6), Error);
}
