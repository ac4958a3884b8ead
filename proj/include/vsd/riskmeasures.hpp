#pragma once

// Worst/best-case and exponential-certainty-equivalent risk measures, the
// benchmark representation of shortfall-consistent measures (three closed
// forms, one per curvature sign), mixtures over curvature, base risk measures
// defined through v-SD acceptance sets, and the derived return-risk-measure
// transforms.

#include <vsd/orders.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vsd {

using RiskFunctional = std::function<double(const DiscreteDistribution&)>;

struct BenchmarkSet {
  std::vector<DiscreteDistribution> benchmarks;
  std::vector<std::string> labels;

  static BenchmarkSet of(std::vector<DiscreteDistribution> ys,
                         std::vector<std::string> ls = {}) {
    if (ys.empty()) detail::invalid("benchmark set is empty");
    if (ls.empty())
      for (std::size_t i = 0; i < ys.size(); ++i)
        ls.push_back("bench" + std::to_string(i));
    if (ls.size() != ys.size())
      detail::invalid("benchmark labels do not match benchmarks");
    return {std::move(ys), std::move(ls)};
  }
};

// Discrete mixing measure over curvature; +-infinity selects the worst/best
// case endpoints.
struct MasMixture {
  struct Weight {
    double c;
    double mass;
  };
  std::vector<Weight> weights;

  static MasMixture of(std::vector<Weight> ws) {
    if (ws.empty()) detail::invalid("mixture is empty");
    long double total = 0.0L;
    for (const auto& w : ws) {
      if (std::isnan(w.c)) detail::invalid("mixture point is not a number");
      if (!(w.mass > 0.0) || !std::isfinite(w.mass))
        detail::invalid("mixture mass outside (0,inf): " +
                        detail::fmt_double(w.mass));
      total += w.mass;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12)
      detail::invalid("mixture masses sum to " +
                      detail::fmt_double(static_cast<double>(total)) +
                      ", expected 1");
    std::vector<Weight> sorted = ws;
    std::sort(sorted.begin(), sorted.end(),
              [](const Weight& a, const Weight& b) { return a.c < b.c; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i].c == sorted[i + 1].c)
        detail::invalid("duplicate mixture point: " +
                        detail::fmt_double(sorted[i].c));
    return {std::move(ws)};
  }
};

inline double worst_case(const DiscreteDistribution& x) {
  return -x.min_value();
}

inline double best_case(const DiscreteDistribution& x) {
  return -x.max_value();
}

// Exponential certainty equivalent, extended to c in [-inf, +inf]; c = 0 is
// the analytic limit (the mean).
inline double k_c(const DiscreteDistribution& x, double c) {
  if (std::isinf(c)) return c < 0.0 ? x.min_value() : x.max_value();
  if (c == 0.0) return x.mean();
  return log_mgf(x, c) / c;
}

inline double mas(const DiscreteDistribution& x, const MasMixture& mix) {
  long double acc = 0.0L;
  for (const auto& w : mix.weights)
    acc += static_cast<long double>(w.mass) * k_c(x, w.c);
  return static_cast<double>(acc);
}

inline double mas_risk(const DiscreteDistribution& x, const MasMixture& mix) {
  return -mas(x, mix);
}

// inf{m | Z <= X + m in v-SD}.  The feasible set is upward closed in m, so
// plain bisection on the atom-hull bracket converges to the infimum.
inline double base_risk_measure(const DiscreteDistribution& z,
                                const ThresholdUtility& v,
                                const DiscreteDistribution& x,
                                double tol = 1e-8) {
  if (!(tol > 0.0)) detail::invalid("bisection tolerance must be positive");
  double lo = z.min_value() - x.max_value();
  double hi = z.max_value() - x.min_value();
  for (double t : z.values())
    if (!v.contains(t)) throw std::domain_error("shift leaves utility domain");
  if (!v.contains(x.min_value() + lo) || !v.contains(x.max_value() + hi))
    throw std::domain_error("shift leaves utility domain");

  auto feasible = [&](double m) {
    return vsd_dominates(z, x.shift(m), v).dominated;
  };
  if (feasible(lo)) return lo;
  if (!feasible(hi))
    throw std::runtime_error("no feasible shift on the atom-hull bracket");
  int it = 0;
  while (hi - lo > tol) {
    if (++it > 200) throw std::runtime_error("bisection did not converge");
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// sup over p of the representation objective for one benchmark, taken exactly
// at the merged breakpoints of the transformed curves (the objective is a
// monotone transform of a Moebius function of p on each segment, so interior
// points never beat the endpoints; p = 1 evaluates the left limit).
inline double meyer_single(const DiscreteDistribution& x, double c,
                           const DiscreteDistribution& y) {
  if (c == 0.0) {
    ESCurve cx(x), cy(y);
    double s = -std::numeric_limits<double>::infinity();
    for (double p : merged_breakpoints(cx, cy))
      s = std::max(s, x.es(p) - y.es(p));
    return s;
  }
  // centre each variable on its midrange so the exponentials stay in range;
  // the scale factors leave the representation as an exact additive shift
  const double mx = 0.5 * (x.min_value() + x.max_value());
  const double my = 0.5 * (y.min_value() + y.max_value());
  const double sign = c < 0.0 ? -1.0 : 1.0;
  auto tx = x.transform([&](double t) { return sign * std::exp(c * (t - mx)); });
  auto ty = y.transform([&](double t) { return sign * std::exp(c * (t - my)); });
  ESCurve cx(tx), cy(ty);
  double s = -std::numeric_limits<double>::infinity();
  for (double p : merged_breakpoints(cx, cy)) {
    double ratio = c < 0.0 ? tx.es(p) / ty.es(p) : ty.es(p) / tx.es(p);
    s = std::max(s, std::log(ratio) / std::abs(c));
  }
  return (my - mx) + s;
}

}  // namespace detail

struct BenchmarkChoice {
  double value;
  std::size_t index;  // benchmark attaining the minimum
};

inline BenchmarkChoice cara_meyer_choice(const DiscreteDistribution& x,
                                         double c, const BenchmarkSet& bench) {
  if (!std::isfinite(c)) detail::invalid("representation needs finite c");
  BenchmarkChoice best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < bench.benchmarks.size(); ++i) {
    double v = detail::meyer_single(x, c, bench.benchmarks[i]);
    if (v < best.value) best = {v, i};
  }
  return best;
}

inline double cara_meyer(const DiscreteDistribution& x, double c,
                         const BenchmarkSet& bench) {
  return cara_meyer_choice(x, c, bench).value;
}

struct CMaxResult {
  std::optional<double> c_star;
  bool degenerate = false;
  std::string note;
};

// Smallest curvature at which the nondecreasing curve c -> cara_meyer(X,c,{Y})
// crosses from nonpositive to nonnegative; none if the curve keeps one strict
// sign on the whole bracket.
inline CMaxResult c_max(const DiscreteDistribution& x,
                        const DiscreteDistribution& y, double c_lo,
                        double c_hi, double tol = 1e-8) {
  if (!(c_lo < c_hi)) detail::invalid("curvature bracket needs c_lo < c_hi");
  if (!(tol > 0.0)) detail::invalid("bisection tolerance must be positive");
  auto bench = BenchmarkSet::of({y});
  auto f = [&](double c) { return cara_meyer(x, c, bench); };
  const double ztol = 1e-12 * detail::value_scale(x, y);

  double flo = f(c_lo), fhi = f(c_hi);
  if (flo > ztol) return {};
  if (fhi < -ztol) return {};
  if (std::abs(flo) <= ztol) {
    CMaxResult r;
    r.c_star = c_lo;
    if (std::abs(fhi) <= ztol) {
      r.degenerate = true;
      r.note = "degenerate: curve == 0 on bracket";
    }
    return r;
  }
  double lo = c_lo, hi = c_hi;
  int it = 0;
  while (hi - lo > tol) {
    if (++it > 200) throw std::runtime_error("bisection did not converge");
    double mid = 0.5 * (lo + hi);
    (f(mid) < -ztol ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false, ""};
}

namespace detail {

inline void require_positive_atoms(const DiscreteDistribution& x) {
  if (!(x.min_value() > 0.0))
    invalid("return transform needs strictly positive atoms");
}

}  // namespace detail

// Return risk measure on gross returns: (exp o rho)(log X).
inline double rrm_eta(const RiskFunctional& rho, const DiscreteDistribution& x) {
  detail::require_positive_atoms(x);
  return std::exp(rho(x.transform([](double t) { return std::log(t); })));
}

// Return risk measure on loss factors: (exp o rho)(-log L).
inline double rrm_kappa(const RiskFunctional& rho,
                        const DiscreteDistribution& l) {
  detail::require_positive_atoms(l);
  return std::exp(rho(l.transform([](double t) { return -std::log(t); })));
}

struct SlopeReport {
  double slope;                  // rho(n_max X) / n_max
  std::vector<double> sequence;  // rho(n X) / n for n = 1..n_max
  bool nondecreasing;
  bool nonincreasing;
};

inline SlopeReport asymptotic_slope(const RiskFunctional& rho,
                                    const DiscreteDistribution& x, int n_max) {
  if (n_max < 2) detail::invalid("asymptotic slope needs n_max >= 2");
  SlopeReport r;
  r.nondecreasing = r.nonincreasing = true;
  for (int n = 1; n <= n_max; ++n) {
    r.sequence.push_back(rho(x.scale(n)) / n);
    if (r.sequence.size() > 1) {
      double prev = r.sequence[r.sequence.size() - 2];
      double cur = r.sequence.back();
      if (cur < prev - 1e-12) r.nondecreasing = false;
      if (cur > prev + 1e-12) r.nonincreasing = false;
    }
  }
  r.slope = r.sequence.back();
  return r;
}

}  // namespace vsd
