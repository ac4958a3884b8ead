#include <catch2/catch_amalgamated.hpp>
#include <vsd/timeseries.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using Catch::Approx;
using vsd::PricePoint;
using vsd::PriceSeries;
using vsd::ReturnPoint;
using vsd::ReturnSeries;

namespace {

std::string day_in_2020(int idx) {  // 0-based trading day, 28 per month
  char buf[32];
  std::snprintf(buf, sizeof buf, "2020-%02d-%02d", 1 + idx / 28,
                1 + idx % 28);
  return buf;
}

PriceSeries prices(std::vector<double> opens) {
  std::vector<PricePoint> pts;
  int idx = 0;
  for (double p : opens) pts.push_back({day_in_2020(idx++), p});
  return PriceSeries::of("test", std::move(pts));
}

ReturnSeries returns_on(std::vector<std::pair<std::string, double>> rows,
                        std::string label = "r") {
  std::vector<ReturnPoint> pts;
  for (auto& [d, v] : rows) pts.push_back({d, v});
  return ReturnSeries::of(std::move(label), std::move(pts));
}

}  // namespace

TEST_CASE("log returns") {
  SECTION("single ratio") {
    auto r = vsd::log_returns(prices({1.0, std::exp(1.0)}));
    REQUIRE(r.points().size() == 1);
    CHECK(r.points()[0].value == Approx(1.0));
    CHECK(r.points()[0].date == "2020-01-02");  // dated at the later day
  }

  SECTION("constant prices give zero returns") {
    auto r = vsd::log_returns(prices({3.0, 3.0, 3.0, 3.0}));
    for (const auto& pt : r.points()) CHECK(pt.value == 0.0);
  }

  SECTION("round trip up and down") {
    auto r = vsd::log_returns(prices({1.0, 2.0, 1.0}));
    REQUIRE(r.points().size() == 2);
    CHECK(r.points()[0].value == Approx(std::log(2.0)));
    CHECK(r.points()[1].value == Approx(-std::log(2.0)));
  }

  SECTION("price scaling is invariant") {
    std::mt19937_64 rng(811);
    std::uniform_real_distribution<double> price(10.0, 200.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int it = 0; it < 25; ++it) {
      std::vector<double> raw;
      for (int k = 0; k < 12; ++k) raw.push_back(price(rng));
      double t = scale(rng);
      auto base = vsd::log_returns(prices(raw));
      for (auto& p : raw) p *= t;
      auto scaled = vsd::log_returns(prices(raw));
      REQUIRE(base.points().size() == scaled.points().size());
      for (std::size_t i = 0; i < base.points().size(); ++i)
        CHECK(scaled.points()[i].value ==
              Approx(base.points()[i].value).margin(1e-12));
    }
  }

  SECTION("needs two observations") {
    CHECK_THROWS_AS(vsd::log_returns(prices({1.0})), std::invalid_argument);
  }
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(PriceSeries::of("p", {{"2020-01-01", -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PriceSeries::of("p", {{"2020-01-01", 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      PriceSeries::of("p", {{"2020-01-02", 1.0}, {"2020-01-01", 1.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      PriceSeries::of("p", {{"2020-01-01", 1.0}, {"2020-01-01", 1.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(PriceSeries::of("p", {{"2020-13-01", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PriceSeries::of("p", {{"20200101", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReturnSeries::of("r", {{"2020-01-01", 1.0 / 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("date windows") {
  auto p = prices({1.0, 2.0, 3.0, 4.0, 5.0});

  SECTION("closed on both ends") {
    auto w = p.window("2020-01-02", "2020-01-04");
    REQUIRE(w.points().size() == 3);
    CHECK(w.points().front().date == "2020-01-02");
    CHECK(w.points().back().date == "2020-01-04");
    CHECK(w.label() == p.label());
  }

  SECTION("full-range window is the identity") {
    auto w = p.window("2019-12-31", "2020-02-01");
    CHECK(w.points().size() == p.points().size());
  }

  SECTION("validation") {
    CHECK_THROWS_AS(p.window("2020-01-04", "2020-01-02"),
                    std::invalid_argument);
    CHECK_THROWS_AS(p.window("bad", "2020-01-02"), std::invalid_argument);
  }
}

TEST_CASE("aligned differences") {
  SECTION("a series against itself vanishes") {
    auto r = vsd::log_returns(prices({1.0, 1.5, 0.7, 2.0}));
    auto d = vsd::align_and_diff(r, r);
    REQUIRE(d.points().size() == r.points().size());
    for (const auto& pt : d.points()) CHECK(pt.value == 0.0);
  }

  SECTION("inner join keeps only shared dates") {
    auto a = returns_on({{"2020-01-01", 0.1},
                         {"2020-01-02", 0.2},
                         {"2020-01-04", 0.4}},
                        "a");
    auto b = returns_on({{"2020-01-02", 0.05},
                         {"2020-01-03", 0.3},
                         {"2020-01-04", 0.1}},
                        "b");
    auto d = vsd::align_and_diff(a, b);
    REQUIRE(d.points().size() == 2);
    CHECK(d.points()[0].date == "2020-01-02");
    CHECK(d.points()[0].value == Approx(0.15));
    CHECK(d.points()[1].date == "2020-01-04");
    CHECK(d.points()[1].value == Approx(0.3));
    CHECK(d.label() == "a - b");
  }

  SECTION("single shared date") {
    auto a = returns_on({{"2020-01-01", 1.0}, {"2020-01-02", 2.0}});
    auto b = returns_on({{"2020-01-02", 0.5}, {"2020-01-05", 9.0}});
    auto d = vsd::align_and_diff(a, b);
    REQUIRE(d.points().size() == 1);
    CHECK(d.points()[0].value == Approx(1.5));
  }

  SECTION("disjoint dates throw") {
    auto a = returns_on({{"2020-01-01", 1.0}});
    auto b = returns_on({{"2020-01-02", 1.0}});
    CHECK_THROWS_AS(vsd::align_and_diff(a, b), std::invalid_argument);
  }

  SECTION("antisymmetric datewise") {
    std::mt19937_64 rng(812);
    std::uniform_real_distribution<double> val(-0.1, 0.1);
    std::bernoulli_distribution keep(0.7);
    for (int it = 0; it < 20; ++it) {
      std::vector<ReturnPoint> pa, pb;
      for (int day = 1; day <= 20; ++day) {
        char buf[11];
        std::snprintf(buf, sizeof buf, "2021-03-%02d", day);
        if (keep(rng)) pa.push_back({buf, val(rng)});
        if (keep(rng)) pb.push_back({buf, val(rng)});
      }
      if (pa.empty() || pb.empty()) continue;
      auto a = ReturnSeries::of("a", pa);
      auto b = ReturnSeries::of("b", pb);
      bool shared = false;
      for (const auto& x : pa)
        for (const auto& y : pb)
          if (x.date == y.date) shared = true;
      if (!shared) continue;
      auto ab = vsd::align_and_diff(a, b);
      auto ba = vsd::align_and_diff(b, a);
      REQUIRE(ab.points().size() == ba.points().size());
      for (std::size_t i = 0; i < ab.points().size(); ++i) {
        CHECK(ab.points()[i].date == ba.points()[i].date);
        CHECK(ab.points()[i].value == Approx(-ba.points()[i].value));
      }
    }
  }
}

TEST_CASE("summary statistics") {
  auto of_values = [](std::vector<double> vs) {
    std::vector<std::pair<std::string, double>> rows;
    int idx = 0;
    for (double v : vs) rows.emplace_back(day_in_2020(idx++), v);
    return returns_on(std::move(rows));
  };

  SECTION("single value") {
    auto s = vsd::summary(of_values({1.0}));
    CHECK(s.min == 1.0);
    CHECK(s.q1 == 1.0);
    CHECK(s.median == 1.0);
    CHECK(s.mean == Approx(1.0));
    CHECK(s.q3 == 1.0);
    CHECK(s.max == 1.0);
  }

  SECTION("two values") {
    auto s = vsd::summary(of_values({0.0, 1.0}));
    CHECK(s.min == 0.0);
    CHECK(s.max == 1.0);
    CHECK(s.mean == Approx(0.5));
  }

  SECTION("lower-quantile quartiles") {
    auto s = vsd::summary(of_values({1.0, 2.0, 3.0, 4.0}));
    CHECK(s.q1 == 1.0);
    CHECK(s.median == 2.0);
    CHECK(s.q3 == 3.0);
  }

  SECTION("ordering invariant") {
    std::mt19937_64 rng(813);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int it = 0; it < 50; ++it) {
      std::vector<double> vs;
      int n = 1 + static_cast<int>(rng() % 40);
      for (int k = 0; k < n; ++k) vs.push_back(val(rng));
      auto s = vsd::summary(of_values(vs));
      CHECK(s.min <= s.q1);
      CHECK(s.q1 <= s.median);
      CHECK(s.median <= s.q3);
      CHECK(s.q3 <= s.max);
      CHECK(s.min <= s.mean);
      CHECK(s.mean <= s.max);
    }
  }

  SECTION("distribution view matches the sample") {
    auto r = of_values({0.5, -0.5, 0.5, 0.0});
    auto d = vsd::to_distribution(r);
    CHECK(d.mean() == Approx(0.125));
    REQUIRE(d.size() == 3);  // duplicate sample merged
    CHECK(d.probs()[2] == Approx(0.5));
  }
}

TEST_CASE("price csv parsing") {
  SECTION("plain file") {
    std::istringstream in(
        "date,open\n2020-01-01,100.5\n2020-01-02,101.25\n");
    auto p = vsd::read_price_csv(in, "idx");
    CHECK(p.label() == "idx");
    REQUIRE(p.points().size() == 2);
    CHECK(p.points()[0].open == Approx(100.5));
    CHECK(p.points()[1].date == "2020-01-02");
  }

  SECTION("comments, blank lines, quoting, and CRLF") {
    std::istringstream in(
        "# synthetic series\r\n"
        "date,open\r\n"
        "\r\n"
        "\"2020-01-01\",\"100.5\"\r\n"
        "# midstream note\r\n"
        "2020-01-02,99.75\r\n");
    auto p = vsd::read_price_csv(in, "q");
    REQUIRE(p.points().size() == 2);
    CHECK(p.points()[0].date == "2020-01-01");
    CHECK(p.points()[0].open == Approx(100.5));
  }

  SECTION("doubled quotes inside a quoted field") {
    std::istringstream in("date,open\n\"2020-01-01\",1\n");
    std::vector<std::string> fields;
    std::istringstream rec("\"say \"\"hi\"\"\",2\n");
    REQUIRE(vsd::detail::csv_record(rec, fields));
    REQUIRE(fields.size() == 2);
    CHECK(fields[0] == "say \"hi\"");
    CHECK(vsd::read_price_csv(in, "x").points().size() == 1);
  }

  SECTION("errors carry the row number") {
    std::istringstream bad_header("time,open\n2020-01-01,1\n");
    CHECK_THROWS_WITH(vsd::read_price_csv(bad_header, "x"),
                      Catch::Matchers::ContainsSubstring("row 1"));
    std::istringstream bad_price("date,open\n2020-01-01,abc\n");
    CHECK_THROWS_WITH(vsd::read_price_csv(bad_price, "x"),
                      Catch::Matchers::ContainsSubstring("row 2"));
    std::istringstream short_row("date,open\n2020-01-01\n");
    CHECK_THROWS_AS(vsd::read_price_csv(short_row, "x"),
                    std::invalid_argument);
    std::istringstream empty("");
    CHECK_THROWS_WITH(vsd::read_price_csv(empty, "x"),
                      Catch::Matchers::ContainsSubstring("header"));
    std::istringstream neg("date,open\n2020-01-01,-3\n");
    CHECK_THROWS_WITH(vsd::read_price_csv(neg, "x"),
                      Catch::Matchers::ContainsSubstring("positive"));
  }

  SECTION("no trailing newline") {
    std::istringstream in("date,open\n2020-01-01,1\n2020-01-02,2");
    CHECK(vsd::read_price_csv(in, "x").points().size() == 2);
  }
}
