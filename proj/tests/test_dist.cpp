#include <catch2/catch_amalgamated.hpp>
#include <vsd/dist.hpp>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "support/random_support.hpp"

using Catch::Approx;
using vsd::DiscreteDistribution;

namespace {
DiscreteDistribution fair_coin() {
  return DiscreteDistribution::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
}
DiscreteDistribution intro_x1() {
  return DiscreteDistribution::from_atoms({{0.0, 0.75}, {10.0, 0.25}});
}
DiscreteDistribution intro_x2() {
  return DiscreteDistribution::from_atoms({{-1.0, 0.25}, {4.0, 0.75}});
}
}  // namespace

TEST_CASE("construction validates and canonicalizes") {
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, -0.5}, {1.0, 1.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, 0.6}, {1.0, 0.6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      DiscreteDistribution::from_atoms({{std::nan(""), 0.5}, {1.0, 0.5}}),
      std::invalid_argument);

  auto d = DiscreteDistribution::from_atoms({{2.0, 0.25}, {-1.0, 0.5}, {2.0, 0.25}});
  REQUIRE(d.size() == 2);
  CHECK(d.values()[0] == -1.0);
  CHECK(d.values()[1] == 2.0);
  CHECK(d.probs()[0] == Approx(0.5).margin(1e-15));
  CHECK(d.probs()[1] == Approx(0.5).margin(1e-15));
  CHECK(d.cumulative().back() == 1.0);

  auto s = DiscreteDistribution::from_samples({3.0, 1.0, 3.0, 2.0});
  REQUIRE(s.size() == 3);
  CHECK(s.probs()[2] == Approx(0.5).margin(1e-15));
  CHECK(s.mean() == Approx(2.25).margin(1e-15));

  auto p = DiscreteDistribution::point_mass(4.0);
  CHECK(p.size() == 1);
  CHECK(p.mean() == 4.0);
}

TEST_CASE("lower quantile") {
  auto d = fair_coin();
  CHECK(d.quantile(0.25) == -1.0);
  CHECK(d.quantile(0.5) == -1.0);
  CHECK(d.quantile(0.5000001) == 1.0);
  CHECK(d.quantile(1.0) == 1.0);
  CHECK_THROWS_AS(d.quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(d.quantile(1.0000001), std::invalid_argument);
}

TEST_CASE("expected shortfall closed forms on the fair coin") {
  auto d = fair_coin();
  CHECK(d.es(0.0) == Approx(0.0).margin(1e-15));
  CHECK(d.es(0.25) == Approx(1.0 / 3.0).margin(1e-15));
  for (double p : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5})
    CHECK(d.es(p) == Approx(p / (1.0 - p)).margin(1e-14));
  CHECK(d.es(0.5) == Approx(1.0).margin(1e-15));
  CHECK(d.es(0.75) == Approx(1.0).margin(1e-15));
  CHECK(d.es(1.0) == 1.0);
  CHECK_THROWS_AS(d.es(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(d.es(1.1), std::invalid_argument);
}

TEST_CASE("expected shortfall against the Riemann oracle") {
  std::mt19937_64 rng(417);
  for (int it = 0; it < 12; ++it) {
    auto d = testrand::distribution(rng, 8, -4.0, 4.0);
    std::uniform_real_distribution<double> pd(0.0, 0.999);
    for (int k = 0; k < 4; ++k) {
      double p = pd(rng);
      CHECK(d.es(p) == Approx(oracles::es_riemann(d, p)).margin(2e-4));
    }
    CHECK(d.es(0.0) == Approx(-d.mean()).margin(1e-12));
    CHECK(d.es(1.0) == -d.min_value());
  }
}

TEST_CASE("scaled es is piecewise linear between breakpoints") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 8; ++it) {
    auto d = testrand::distribution(rng, 7, -5.0, 5.0);
    vsd::ESCurve curve(d);
    const auto& bps = curve.breakpoints();
    REQUIRE(bps.front() == 0.0);
    REQUIRE(bps.back() == 1.0);
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      double mid = 0.5 * (bps[i] + bps[i + 1]);
      double lin = 0.5 * (curve.scaled_es(bps[i]) + curve.scaled_es(bps[i + 1]));
      CHECK(curve.scaled_es(mid) == Approx(lin).margin(1e-12));
      CHECK(curve.scaled_es(mid) == Approx((1.0 - mid) * d.es(mid)).margin(1e-12));
    }
    // constant es beyond the last kink
    double pk = bps[bps.size() - 2];
    CHECK(d.es(0.5 * (pk + 1.0)) == Approx(-d.min_value()).margin(1e-12));
  }
}

TEST_CASE("intro lotteries: exact curves and the 0.6875 crossing") {
  auto x1 = intro_x1();
  auto x2 = intro_x2();
  CHECK(x1.mean() == Approx(2.5).margin(1e-15));
  CHECK(x2.mean() == Approx(2.75).margin(1e-15));

  for (double p : {0.0, 0.1, 0.2, 0.24}) {
    CHECK(x1.es(p) == Approx(-10.0 * (0.25 - p) / (1.0 - p)).margin(1e-13));
  }
  for (double p : {0.25, 0.5, 0.9}) CHECK(x1.es(p) == Approx(0.0).margin(1e-13));
  for (double p : {0.0, 0.25, 0.5, 0.6875, 0.75}) {
    CHECK(x2.es(p) == Approx((4.0 * p - 2.75) / (1.0 - p)).margin(1e-13));
  }
  for (double p : {0.75, 0.9, 1.0}) CHECK(x2.es(p) == Approx(1.0).margin(1e-13));

  vsd::ESCurve c1(x1), c2(x2);
  auto roots = vsd::es_crossings(c1, c2);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - 0.6875) < 1e-12);

  // x2 has the smaller es below the crossing, the larger one above it
  CHECK(x2.es(0.3) < x1.es(0.3));
  CHECK(x2.es(0.8) > x1.es(0.8));
}

TEST_CASE("crossing finder edge cases") {
  auto d = fair_coin();
  vsd::ESCurve base(d), shifted(d.shift(0.5));
  CHECK(vsd::es_crossings(base, shifted).empty());
  CHECK(vsd::es_crossings(base, base).empty());

  auto bp = vsd::merged_breakpoints(vsd::ESCurve(intro_x1()),
                                    vsd::ESCurve(intro_x2()));
  REQUIRE(bp.size() == 4);
  CHECK(bp[0] == 0.0);
  CHECK(bp[1] == Approx(0.25).margin(1e-15));
  CHECK(bp[2] == Approx(0.75).margin(1e-15));
  CHECK(bp[3] == 1.0);
}

TEST_CASE("transform, shift, scale, negate") {
  auto d = DiscreteDistribution::from_atoms({{-2.0, 0.25}, {0.0, 0.25}, {3.0, 0.5}});
  auto sq = d.transform([](double x) { return x * x * x; });
  CHECK(sq.min_value() == -8.0);
  CHECK(sq.max_value() == 27.0);

  auto sh = d.shift(1.5);
  CHECK(sh.mean() == Approx(d.mean() + 1.5).margin(1e-14));
  for (double p : {0.0, 0.3, 0.7, 1.0})
    CHECK(sh.es(p) == Approx(d.es(p) - 1.5).margin(1e-13));

  auto sc = d.scale(2.0);
  for (double p : {0.0, 0.3, 0.7, 1.0})
    CHECK(sc.es(p) == Approx(2.0 * d.es(p)).margin(1e-13));
  CHECK_THROWS_AS(d.scale(0.0), std::invalid_argument);
  CHECK_THROWS_AS(d.scale(-1.0), std::invalid_argument);

  auto neg = d.negate();
  CHECK(neg.min_value() == -3.0);
  CHECK(neg.max_value() == 2.0);
  auto back = neg.negate();
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.values()[i] == d.values()[i]);
    CHECK(back.probs()[i] == Approx(d.probs()[i]).margin(1e-15));
  }
}

TEST_CASE("mean preserving spreads") {
  auto s = vsd::mean_preserving_spread(0.4, 0.8, 0.3);
  CHECK(s.mean() == Approx(0.4).margin(1e-13));
  CHECK(s.size() == 2);

  auto delta = DiscreteDistribution::point_mass(0.4);
  CHECK(oracles::ssd_dense(s, delta));
  CHECK_FALSE(oracles::ssd_dense(delta, s, 4001, 1e-12));

  auto wide = vsd::mean_preserving_spread(0.4, 1.6, 0.3);
  CHECK(oracles::ssd_dense(wide, s));
  CHECK_FALSE(oracles::ssd_dense(s, wide, 4001, 1e-12));

  CHECK_THROWS_AS(vsd::mean_preserving_spread(0.0, -1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(vsd::mean_preserving_spread(0.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("log mgf") {
  auto d = fair_coin();
  for (double c : {-3.0, -1.0, 0.5, 2.0})
    CHECK(vsd::log_mgf(d, c) == Approx(std::log(std::cosh(c))).margin(1e-12));
  CHECK(vsd::log_mgf(d, 0.0) == 0.0);

  auto wide = DiscreteDistribution::from_atoms({{0.0, 0.5}, {1000.0, 0.5}});
  CHECK(vsd::log_mgf(wide, 5.0) == Approx(5000.0 + std::log(0.5)).margin(1e-9));
  CHECK(std::isfinite(vsd::log_mgf(wide, -5.0)));
}
