#pragma once

// Price-series ingestion and the log-return pipeline: elementwise log
// ratios, inner-join differences, and lower-quantile summary statistics.

#include <cmath>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <vsd/dist.hpp>

namespace vsd {

struct PricePoint {
  std::string date;  // ISO-8601 day
  double open;
};

struct ReturnPoint {
  std::string date;
  double value;
};

namespace detail {

inline bool valid_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9') return false;
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

template <class Point>
inline void check_dates(const std::vector<Point>& pts, const char* what) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!valid_date(pts[i].date))
      invalid(std::string(what) + ": malformed ISO date: " + pts[i].date);
    if (i > 0 && pts[i].date <= pts[i - 1].date)
      invalid(std::string(what) + ": dates not strictly increasing at " +
              pts[i].date);
  }
}

// one RFC 4180 record; returns false at end of input
inline bool csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  int ch;
  while ((ch = in.get()) != std::char_traits<char>::eof()) {
    any = true;
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c != '"') {
        field.push_back(c);
      } else if (in.peek() == '"') {
        field.push_back('"');
        in.get();
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

inline bool comment_or_blank(const std::vector<std::string>& fields) {
  if (fields.size() == 1 && fields[0].empty()) return true;
  return !fields[0].empty() && fields[0][0] == '#';
}

}  // namespace detail

// Open prices on strictly increasing days.
class PriceSeries {
 public:
  static PriceSeries of(std::string label, std::vector<PricePoint> points) {
    detail::check_dates(points, "price series");
    for (const auto& pt : points)
      if (!(pt.open > 0.0) || !std::isfinite(pt.open))
        detail::invalid("price series: open price must be positive at " +
                        pt.date + ": " + detail::fmt_double(pt.open));
    PriceSeries p;
    p.label_ = std::move(label);
    p.points_ = std::move(points);
    return p;
  }

  const std::string& label() const { return label_; }
  const std::vector<PricePoint>& points() const { return points_; }

  // closed date window [from, to]
  PriceSeries window(const std::string& from, const std::string& to) const {
    if (!detail::valid_date(from) || !detail::valid_date(to))
      detail::invalid("window: malformed ISO date: " + from + " / " + to);
    if (to < from) detail::invalid("window: to precedes from");
    std::vector<PricePoint> kept;
    for (const auto& pt : points_)
      if (from <= pt.date && pt.date <= to) kept.push_back(pt);
    return of(label_, std::move(kept));
  }

 private:
  PriceSeries() = default;
  std::string label_;
  std::vector<PricePoint> points_;
};

// Dated log returns; one fewer point than the prices they came from.
class ReturnSeries {
 public:
  static ReturnSeries of(std::string label, std::vector<ReturnPoint> points) {
    detail::check_dates(points, "return series");
    for (const auto& pt : points)
      if (!std::isfinite(pt.value))
        detail::invalid("return series: non-finite value at " + pt.date);
    ReturnSeries r;
    r.label_ = std::move(label);
    r.points_ = std::move(points);
    return r;
  }

  const std::string& label() const { return label_; }
  const std::vector<ReturnPoint>& points() const { return points_; }

 private:
  ReturnSeries() = default;
  std::string label_;
  std::vector<ReturnPoint> points_;
};

// r_t = log(P_{t+1}/P_t), dated at the later day.
inline ReturnSeries log_returns(const PriceSeries& p) {
  const auto& pts = p.points();
  if (pts.size() < 2)
    detail::invalid("log_returns: need at least 2 observations, got " +
                    std::to_string(pts.size()));
  std::vector<ReturnPoint> out;
  out.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i)
    out.push_back({pts[i].date, std::log(pts[i].open / pts[i - 1].open)});
  return ReturnSeries::of(p.label(), std::move(out));
}

// inner join on dates, values a - b
inline ReturnSeries align_and_diff(const ReturnSeries& a,
                                   const ReturnSeries& b) {
  std::vector<ReturnPoint> out;
  std::size_t i = 0, j = 0;
  while (i < a.points().size() && j < b.points().size()) {
    const auto& pa = a.points()[i];
    const auto& pb = b.points()[j];
    if (pa.date < pb.date) {
      ++i;
    } else if (pb.date < pa.date) {
      ++j;
    } else {
      out.push_back({pa.date, pa.value - pb.value});
      ++i;
      ++j;
    }
  }
  if (out.empty())
    detail::invalid("align_and_diff: no shared dates between " + a.label() +
                    " and " + b.label());
  return ReturnSeries::of(a.label() + " - " + b.label(), std::move(out));
}

inline DiscreteDistribution to_distribution(const ReturnSeries& r) {
  std::vector<double> xs;
  xs.reserve(r.points().size());
  for (const auto& pt : r.points()) xs.push_back(pt.value);
  return DiscreteDistribution::from_samples(xs);
}

struct SummaryStats {
  double min;
  double q1;
  double median;
  double mean;
  double q3;
  double max;
};

// quartiles by the lower-quantile convention
inline SummaryStats summary(const ReturnSeries& r) {
  if (r.points().empty()) detail::invalid("summary: empty return series");
  auto d = to_distribution(r);
  return {d.min_value(), d.quantile(0.25), d.quantile(0.5),
          d.mean(),      d.quantile(0.75), d.max_value()};
}

// Header "date,open", RFC 4180 quoting, '#' lines skipped.
inline PriceSeries read_price_csv(std::istream& in, std::string label) {
  std::vector<std::string> fields;
  std::size_t row = 0;
  bool header_seen = false;
  std::vector<PricePoint> points;
  while (detail::csv_record(in, fields)) {
    ++row;
    if (detail::comment_or_blank(fields)) continue;
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "date" || fields[1] != "open")
        detail::invalid("price csv row " + std::to_string(row) +
                        ": expected header date,open");
      header_seen = true;
      continue;
    }
    if (fields.size() != 2)
      detail::invalid("price csv row " + std::to_string(row) + ": expected " +
                      "2 fields, got " + std::to_string(fields.size()));
    double open = 0.0;
    std::size_t used = 0;
    try {
      open = std::stod(fields[1], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != fields[1].size() || fields[1].empty())
      detail::invalid("price csv row " + std::to_string(row) +
                      ": unparseable open price: " + fields[1]);
    points.push_back({fields[0], open});
  }
  if (!header_seen) detail::invalid("price csv: missing header date,open");
  try {
    return PriceSeries::of(std::move(label), std::move(points));
  } catch (const std::invalid_argument& e) {
    detail::invalid("price csv: " + std::string(e.what()));
  }
}

}  // namespace vsd
