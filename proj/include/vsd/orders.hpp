#pragma once

// Exact stochastic-dominance decisions, certainty equivalents, and
// expected-utility comparison curves.

#include <vsd/dist.hpp>
#include <vsd/utility.hpp>

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace vsd {

struct DominanceVerdict {
  bool dominated = false;            // first argument is weakly riskier everywhere
  std::optional<double> witness_p;   // first breakpoint where the inequality fails
  bool strict = false;               // dominance holds strictly at some breakpoint
};

namespace detail {

inline double value_scale(const DiscreteDistribution& a,
                          const DiscreteDistribution& b) {
  double m = 1.0;
  for (double x : a.values()) m = std::max(m, std::abs(x));
  for (double x : b.values()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

// X <= Y in second-order stochastic dominance iff es_X(p) >= es_Y(p) for all
// p.  The difference of the scaled curves is piecewise linear, so checking the
// merged breakpoints is exact; ties within tolerance count as dominance.
inline DominanceVerdict ssd_dominates(const DiscreteDistribution& x,
                                      const DiscreteDistribution& y) {
  ESCurve cx(x), cy(y);
  const double tol = 1e-10 * detail::value_scale(x, y);
  DominanceVerdict verdict;
  verdict.dominated = true;
  for (double p : merged_breakpoints(cx, cy)) {
    double d = cx.scaled_es(p) - cy.scaled_es(p);
    if (d < -tol) {
      verdict.dominated = false;
      verdict.strict = false;
      verdict.witness_p = p;
      return verdict;
    }
    if (d > tol) verdict.strict = true;
  }
  return verdict;
}

// X <= Y in the v-SD order iff v(X) <= v(Y) in SSD.
inline DominanceVerdict vsd_dominates(const DiscreteDistribution& x,
                                      const DiscreteDistribution& y,
                                      const ThresholdUtility& v) {
  auto tx = x.transform([&](double t) { return v.eval(t); });
  auto ty = y.transform([&](double t) { return v.eval(t); });
  return ssd_dominates(tx, ty);
}

// K_u(X) = u^{-1}(E[u(X)]).  The CARA families go through log_mgf so that the
// translation identity K(X+d) = K(X)+d holds to machine precision.
inline double certainty_equivalent(const DiscreteDistribution& x,
                                   const ThresholdUtility& u) {
  if (u.family() == UtilityFamily::cara) {
    const double c = -u.risk_aversion(0.0);
    if (c == 0.0) return x.mean();
    return log_mgf(x, c) / c;
  }
  if (x.size() == 1) {
    u.eval(x.values()[0]);  // domain check
    return x.values()[0];
  }
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += static_cast<long double>(x.probs()[i]) * u.eval(x.values()[i]);
  return u.inverse(static_cast<double>(acc));
}

// f(c) = E[-e^{-c X1}] / E[-e^{-c X2}] for c > 0, in log space.
inline std::vector<std::pair<double, double>> eu_ratio_curve(
    const DiscreteDistribution& x1, const DiscreteDistribution& x2,
    const std::vector<double>& c_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(c_grid.size());
  for (double c : c_grid) {
    if (!(std::isfinite(c) && c > 0.0))
      detail::invalid("eu ratio grid values must be positive: " +
                      detail::fmt_double(c));
    out.emplace_back(c, std::exp(log_mgf(x1, -c) - log_mgf(x2, -c)));
  }
  return out;
}

inline std::vector<double> log_spaced_grid(double lo, double hi, int n = 200) {
  if (!(lo > 0.0 && hi > lo) || n < 2)
    detail::invalid("log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return g;
}

}  // namespace vsd
