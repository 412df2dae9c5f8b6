#include <gtest/gtest.h>

#include <cmath>

#include "ncgeo/errors.hpp"
#include "ncgeo/search.hpp"
#include "oracles.hpp"

using namespace ncgeo;

namespace {

SearchOptions small_options(int seeds, int N) {
  SearchOptions o;
  o.seeds = seeds;
  o.N = N;
  return o;
}

}  // namespace

TEST(Search, SeedsAreReproducible) {
  const auto sf = SpaceFormSpec::make(3, 3);
  const auto a = make_seed_loop(sf, 1, 64, 7, 3, 1e-2);
  const auto b = make_seed_loop(sf, 1, 64, 7, 3, 1e-2);
  const auto c = make_seed_loop(sf, 1, 64, 7, 4, 1e-2);
  EXPECT_EQ(a.points, b.points);
  EXPECT_GT((a.points - c.points).norm(), 1e-3);
  EXPECT_EQ(a.class_power, 1);
  EXPECT_EQ(make_seed_loop(sf, 2, 64, 7, 3, 1e-2).class_power, 2);
}

TEST(Search, DescentDecreasesEnergy) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::katok(2, 0.1, 16);
  const auto seed = make_seed_loop(sf, 1, 64, 3, 0, 0.2);
  const DescentResult d = descend(m, seed, 1e-5, 20000);
  ASSERT_FALSE(d.trace.empty());
  for (std::size_t i = 1; i < d.trace.size(); ++i) EXPECT_LE(d.trace[i], d.trace[i - 1] + 1e-14);
  EXPECT_LE(d.residual, 1e-5);
  const DescentResult nr = newton_refine(m, d.loop, 1e-10, 80);
  EXPECT_LE(nr.residual, 1e-10);
  EXPECT_NEAR(nr.energy, d.energy, 1e-4);
}

TEST(Search, RoundProjectivePlaneHasOneFamily) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto r = find_geodesics(MetricSpec::round(2), sf, 1, small_options(6, 64));
  EXPECT_FALSE(r.partial);
  ASSERT_EQ(r.records.size(), 1u);
  const auto& g = r.records[0];
  EXPECT_NEAR(g.length, M_PI, 1e-8);
  EXPECT_NEAR(g.energy, M_PI * M_PI / 2, 1e-6);
  EXPECT_LE(g.residual, 1e-8);
  EXPECT_TRUE(g.simple);
  // Rotations of the great circle (2) plus reparametrization (1).
  EXPECT_EQ(g.hessian_kernel, 3);
  EXPECT_EQ(r.diagnostics.size(), 12u);
}

TEST(Search, LensSpaceShortestLength) {
  const auto sf = SpaceFormSpec::make(3, 3);
  const auto r = find_geodesics(MetricSpec::round(3), sf, 1, small_options(4, 64));
  ASSERT_FALSE(r.records.empty());
  EXPECT_NEAR(r.records[0].length, 2 * M_PI / 3, 1e-8);
  for (const auto& g : r.records) EXPECT_EQ(g.class_power, 1);
}

TEST(Search, KatokLengthsMatchRotatingCircles) {
  const double alpha = 0.1;
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto r = find_geodesics(MetricSpec::katok(2, alpha, 16), sf, 1, small_options(12, 64));
  ASSERT_FALSE(r.records.empty());
  for (const auto& g : r.records) {
    const double d = std::min(std::abs(g.length - oracle::katok_short(alpha)), std::abs(g.length - oracle::katok_long(alpha)));
    EXPECT_LE(d, 1e-3) << g.length;
  }
  for (std::size_t i = 1; i < r.records.size(); ++i) EXPECT_LE(r.records[i - 1].energy, r.records[i].energy);
}

TEST(Search, SameSeedSameRecords) {
  const auto sf = SpaceFormSpec::make(2, 2);
  const auto m = MetricSpec::katok(2, 0.1, 16);
  const auto a = find_geodesics(m, sf, 1, small_options(4, 32));
  const auto b = find_geodesics(m, sf, 1, small_options(4, 32));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].length, b.records[i].length);
    EXPECT_EQ(a.records[i].loop.points, b.records[i].loop.points);
  }
}

TEST(Search, RejectsBadArguments) {
  const auto sf = SpaceFormSpec::make(3, 3);
  const auto m = MetricSpec::round(3);
  EXPECT_THROW(find_geodesics(m, sf, 0, small_options(2, 32)), PreconditionError);
  EXPECT_THROW(find_geodesics(m, sf, 3, small_options(2, 32)), PreconditionError);
  EXPECT_THROW(find_geodesics(m, sf, 1, small_options(0, 32)), PreconditionError);
  EXPECT_THROW(find_geodesics(m, sf, 1, small_options(2, 8)), ResolutionError);
  EXPECT_THROW(find_geodesics(MetricSpec::round(2), sf, 1, small_options(2, 32)), PreconditionError);
}
