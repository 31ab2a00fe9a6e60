#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qmeas/sweep.hpp"
#include "qmeas/tradeoff.hpp"

using namespace qmeas;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

HermitianOperator2 parallel_state(const XStateParams& xs, double theta, double t, double p, ReductionMode m) {
  MeasurementAttributes a;
  a.theta = theta;
  a.t = t;
  a.p = p;
  return reduced_states(xs, a, m).rho_parallel;
}

}  // namespace

TEST_CASE("disturbance and information gain of simple pairs") {
  const auto zero = HermitianOperator2::diagonal({1.0, 0.0});
  const auto one = HermitianOperator2::diagonal({0.0, 1.0});
  CHECK(disturbance(zero, zero).value == 0.0);
  CHECK(disturbance(zero, one).value == doctest::Approx(1.0));
  const InfoGain orth = info_gain(zero, one);
  CHECK(orth.nu == 0.0);
  CHECK(orth.gain == 1.0);
  const InfoGain same = info_gain(zero, zero);
  CHECK(same.nu == 0.5);
  CHECK(same.gain == 0.0);
}

TEST_CASE("gap is nonnegative for physical pairs") {
  std::mt19937_64 rng(55);
  for (int draw = 0; draw < 1000; ++draw) {
    const auto a = oracle::random_density<2>(rng);
    const auto b = oracle::random_density<2>(rng);
    const double d = disturbance(a, b).value;
    CHECK(std::abs(d - (1.0 - oracle::fidelity(oracle::to_eigen(a), oracle::to_eigen(b)))) < 1e-10);
    CHECK(d - info_gain(a, b).gain >= -1e-12);
  }
}

TEST_CASE("tradeoff point at the origin") {
  for (ReductionMode m : {ReductionMode::AsPublished, ReductionMode::FirstPrinciples})
    for (const auto& xs : {XStateParams::from_g(0.1, 0.7, 0.5), XStateParams::from_g(0.4, 0.1, 0.5)}) {
      const TradeoffPoint pt = tradeoff_point(xs, kHalfPi, 0.0, 0.0, m);
      CHECK(pt.gap == 0.0);
      CHECK(pt.disturbance == 0.0);
      CHECK(pt.info_gain == 0.0);
      CHECK_FALSE(pt.violated);
    }
}

TEST_CASE("frozen tradeoff values") {
  const XStateParams xs = XStateParams::from_g(0.1, 0.7, 0.5);
  const TradeoffPoint fp = tradeoff_point(xs, kHalfPi, 1.0, 0.5, ReductionMode::FirstPrinciples);
  CHECK(std::abs(fp.disturbance - 4.5439305910749235e-5) < 1e-12);
  CHECK(std::abs(fp.nu - 0.49737457642341069) < 1e-12);
  CHECK(std::abs(fp.info_gain - 1.9888649407869057e-5) < 1e-12);
  CHECK_FALSE(fp.projected);
  CHECK_FALSE(fp.violated);

  const TradeoffPoint ap = tradeoff_point(xs, kHalfPi, 1.0, 0.5, ReductionMode::AsPublished);
  CHECK(std::abs(ap.disturbance + 0.26222530708232413) < 1e-12);
  CHECK(std::abs(ap.nu - 0.42355506718121433) < 1e-12);
  CHECK(std::abs(ap.info_gain - 0.016928036002644055) < 1e-12);
  CHECK(ap.projected);
  CHECK(ap.violated);

  // trace distance against the eigendecomposition oracle
  const auto r1 = parallel_state(xs, kHalfPi, 0.0, 0.0, ReductionMode::FirstPrinciples);
  const auto r2 = parallel_state(xs, kHalfPi, 1.0, 0.5, ReductionMode::FirstPrinciples);
  const double td = oracle::trace_distance(oracle::to_eigen(r1), oracle::to_eigen(r2));
  CHECK(std::abs(td - 0.0052508471531786233) < 1e-12);
  CHECK(std::abs(fp.nu - (0.5 - 0.5 * td)) < 1e-14);
}

TEST_CASE("first-principles tradeoff map has no violation") {
  std::vector<double> t = linspace(0.0, 1.0, 21), p = linspace(0.0, 1.0, 21);
  for (const auto& xs : {XStateParams::from_g(0.1, 0.7, 0.5), XStateParams::from_g(0.4, 0.1, 0.5)}) {
    const TradeoffMap map = tradeoff_map(xs, kHalfPi, t, p, ReductionMode::FirstPrinciples, 1);
    CHECK(map.points.size() == 441);
    CHECK(map.violation_count() == 0);
    CHECK(map.min_gap() >= -1e-10);
    CHECK(map.at(0, 0).gap == 0.0);
    CHECK(map.at(20, 10).t == 1.0);
    CHECK(map.at(20, 10).p == 0.5);
  }
}

TEST_CASE("tradeoff map is independent of the thread count") {
  const XStateParams xs = XStateParams::from_g(0.4, 0.1, 0.5);
  std::vector<double> t = linspace(0.0, 1.0, 17), p = linspace(0.0, 1.0, 13);
  for (ReductionMode m : {ReductionMode::AsPublished, ReductionMode::FirstPrinciples}) {
    const TradeoffMap a = tradeoff_map(xs, kHalfPi, t, p, m, 1);
    const TradeoffMap b = tradeoff_map(xs, kHalfPi, t, p, m, 4);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].gap == b.points[i].gap);
      CHECK(a.points[i].nu == b.points[i].nu);
      CHECK(a.points[i].projected == b.points[i].projected);
    }
  }
}

TEST_CASE("tradeoff map validates its grid") {
  const XStateParams xs = XStateParams::from_g(0.4, 0.1, 0.5);
  CHECK_THROWS_AS(tradeoff_map(xs, kHalfPi, {-0.1}, {0.0}, ReductionMode::FirstPrinciples),
                  std::invalid_argument);
  CHECK_THROWS_AS(tradeoff_map(xs, kHalfPi, {0.1}, {-1.0}, ReductionMode::FirstPrinciples),
                  std::invalid_argument);
  CHECK_THROWS_AS(tradeoff_map(xs, 3.0, {0.1}, {0.0}, ReductionMode::FirstPrinciples), std::invalid_argument);
}
