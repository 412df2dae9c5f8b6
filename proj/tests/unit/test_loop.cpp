#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ncgeo/banded.hpp"
#include "ncgeo/errors.hpp"
#include "ncgeo/loop.hpp"
#include "oracles.hpp"

using namespace ncgeo;

namespace {

DiscreteLoop half_circle(int N) {
  const auto sf = SpaceFormSpec::make(2, 2);
  Eigen::VectorXd x(3), dir(3);
  x << 1, 0, 0;
  dir << 0, 1, 0;
  return DiscreteLoop::make(great_arc_samples(x, dir, M_PI, N), sf, 1);
}

DiscreteLoop perturbed(const DiscreteLoop& g, const SpaceFormSpec& sf, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd P = g.points;
  for (Eigen::Index i = 0; i < P.size(); ++i) P.data()[i] += scale * nd(rng);
  P.colwise().normalize();
  return DiscreteLoop::make(P, sf, g.class_power);
}

}  // namespace

TEST(Loop, HalfGreatCircleEnergy) {
  const auto m = MetricSpec::round(2);
  const auto g = half_circle(256);
  EXPECT_NEAR(loop_energy(m, g), M_PI * M_PI / 2, 1e-4);
  EXPECT_NEAR(loop_length(m, g), M_PI, 1e-12);
  EXPECT_LE(std::abs(loop_energy(m, refine_loop(g)) - loop_energy(m, g)), 1e-5);
  EXPECT_LE(geodesic_residual(loop_energy_gradient(m, g)), 1e-8);
}

TEST(Loop, RejectsCoarseOrOffSphereLoops) {
  const auto sf = SpaceFormSpec::make(2, 2);
  Eigen::VectorXd x(3), dir(3);
  x << 1, 0, 0;
  dir << 0, 1, 0;
  EXPECT_THROW(DiscreteLoop::make(great_arc_samples(x, dir, M_PI, 8), sf, 1), ResolutionError);
  Eigen::MatrixXd pts = great_arc_samples(x, dir, M_PI, 32);
  pts(0, 3) += 1e-6;
  EXPECT_THROW(DiscreteLoop::make(pts, sf, 1), PreconditionError);
}

TEST(Loop, TwistedLoopsCannotShrink) {
  // Total turning angle of a twisted loop on RP^2 is at least pi, so the
  // round energy is at least pi^2 / 2.
  std::mt19937_64 rng(2);
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::round(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = perturbed(half_circle(32), sf, 0.3, rng);
    EXPECT_GE(loop_energy(m, g), M_PI * M_PI / 2 - 1e-12);
    EXPECT_GE(loop_length(m, g), M_PI - 1e-12);
  }
}

TEST(Loop, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  const auto sf = SpaceFormSpec::make(3, 3);
  for (MetricKind kind : {MetricKind::Round, MetricKind::Randers, MetricKind::Katok}) {
    const auto m = MetricSpec::make(kind, 3, kind == MetricKind::Round ? 0.0 : 0.2, 8);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(4), dir(4);
      x << 1, 0, 0, 0;
      dir << 0, 1, 0, 0;
      const auto base = DiscreteLoop::make(great_arc_samples(x, dir, 2 * M_PI / 3, 48), sf, 1);
      const auto g = perturbed(base, sf, 0.05, rng);
      const Eigen::MatrixXd G = loop_energy_gradient(m, g);
      for (int i = 0; i < g.samples(); ++i) EXPECT_LE(std::abs(G.col(i).dot(g.points.col(i))), 1e-12);
      for (int d = 0; d < 5; ++d) {
        Eigen::MatrixXd D(4, g.samples());
        for (Eigen::Index i = 0; i < D.size(); ++i) D.data()[i] = nd(rng);
        for (int i = 0; i < g.samples(); ++i) D.col(i) -= D.col(i).dot(g.points.col(i)) * g.points.col(i);
        const double eps = 1e-5;
        auto shifted = [&](double s) {
          Eigen::MatrixXd Q = g.points + s * D;
          Q.colwise().normalize();
          return DiscreteLoop::make(Q, sf, 1);
        };
        const double fd = (loop_energy(m, shifted(eps)) - loop_energy(m, shifted(-eps))) / (2 * eps);
        const double an = (G.array() * D.array()).sum();
        EXPECT_LE(std::abs(an - fd), 1e-5 * (1 + std::abs(an)));
      }
    }
  }
}

TEST(Loop, HessianMatchesSecondDifferences) {
  std::mt19937_64 rng(9);
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::katok(2, 0.1, 16);
  const auto g = perturbed(half_circle(64), sf, 0.05, rng);
  const LoopHessian lh = loop_energy_hessian(m, g);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd s(2 * 64);
    for (int i = 0; i < s.size(); ++i) s(i) = u(rng);
    const double eps = 1e-4;
    const double e0 = loop_energy(m, g);
    const double ep = loop_energy(m, retract(g, lh.frames, eps * s));
    const double em = loop_energy(m, retract(g, lh.frames, -eps * s));
    const double fd2 = (ep - 2 * e0 + em) / (eps * eps);
    const double fd1 = (ep - em) / (2 * eps);
    const double quad = s.dot(lh.hessian.multiply(s));
    EXPECT_LE(std::abs(quad - fd2), 1e-4 * (1 + std::abs(quad)));
    EXPECT_LE(std::abs(lh.gradient.dot(s) - fd1), 1e-6 * (1 + std::abs(fd1)));
  }
}

TEST(Loop, BandOrderingIsAPermutation) {
  for (int N : {16, 17, 64}) {
    std::vector<int> pos;
    for (int i = 0; i < N; ++i) pos.push_back(band_position(i, N));
    std::sort(pos.begin(), pos.end());
    for (int i = 0; i < N; ++i) EXPECT_EQ(pos[i], i);
    // Neighbours, including the closing pair, stay within two slots.
    for (int i = 0; i < N; ++i) EXPECT_LE(std::abs(band_position(i, N) - band_position((i + 1) % N, N)), 2);
  }
}

TEST(Banded, SolveAndSpectrumMatchDense) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedSym A(30, 4);
  for (int i = 0; i < 30; ++i) {
    A.add(i, i, 10.0);
    for (int j = i + 1; j <= std::min(29, i + 4); ++j) A.add(i, j, u(rng));
  }
  const Eigen::MatrixXd D = A.to_dense();
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(30, -1.0, 1.0), x;
  ASSERT_TRUE(A.solve_spd(b, x));
  EXPECT_LT((D * x - b).norm(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  EXPECT_LT((A.eigenvalues() - es.eigenvalues()).norm(), 1e-12);
  EXPECT_LT((A.squared().to_dense() - D * D).norm(), 1e-11);
}

TEST(Loop, IterateClassAndEnergy) {
  const auto sf2 = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::katok(2, 0.1, 16);
  const auto g = half_circle(64);
  const auto g3 = iterate_loop(g, 3, sf2);
  EXPECT_EQ(g3.class_power, 1);
  EXPECT_TRUE(iterate_in_class(1, 3, 2));
  EXPECT_NEAR(loop_energy(m, g3), 9 * loop_energy(m, g), 1e-8 * loop_energy(m, g3));
  const auto g1 = iterate_loop(g, 1, sf2);
  EXPECT_EQ(g1.points, g.points);

  const auto sf3 = SpaceFormSpec::make(3, 3);
  Eigen::VectorXd x(4), dir(4);
  x << 1, 0, 0, 0;
  dir << 0, 1, 0, 0;
  const auto h = DiscreteLoop::make(great_arc_samples(x, dir, 2 * M_PI / 3, 32), sf3, 1);
  EXPECT_EQ(iterate_loop(h, 2, sf3).class_power, 2);
  EXPECT_FALSE(iterate_in_class(1, 2, 3));
  EXPECT_TRUE(iterate_in_class(1, 4, 3));
}

TEST(Loop, SelfIntersections) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto simple = detect_self_intersections(half_circle(64), sf);
  EXPECT_TRUE(simple.simple);
  EXPECT_EQ(simple.crossings, 0);

  // Figure eight in a small cap around the north pole, closed on the sphere.
  Eigen::MatrixXd pts(3, 128);
  for (int i = 0; i < 128; ++i) {
    const double t = 2 * M_PI * i / 128;
    Eigen::Vector3d p(0.3 * std::sin(t), 0.3 * std::sin(t) * std::cos(t), 1.0);
    pts.col(i) = p.normalized();
  }
  const auto eight = DiscreteLoop::make(pts, sf, 0);
  const auto si = detect_self_intersections(eight, sf);
  EXPECT_FALSE(si.simple);
  EXPECT_EQ(si.crossings, 1);
}

TEST(Loop, ImageComparison) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto g = half_circle(64);
  // Same image started at another phase: shift by deck translation.
  Eigen::MatrixXd shifted(3, 64);
  for (int i = 0; i < 64; ++i) shifted.col(i) = i + 10 < 64 ? g.points.col(i + 10) : Eigen::VectorXd(-g.points.col(i + 10 - 64));
  const auto a = compare_images(g, DiscreteLoop::make(shifted, sf, 1), sf);
  EXPECT_LT(a.hausdorff, 1e-12);
  EXPECT_TRUE(a.same_orientation);
  Eigen::MatrixXd reversed = g.points.rowwise().reverse();
  const auto b = compare_images(g, DiscreteLoop::make(reversed, sf, 1), sf);
  EXPECT_LT(b.hausdorff, 1e-12);
  EXPECT_FALSE(b.same_orientation);
}
