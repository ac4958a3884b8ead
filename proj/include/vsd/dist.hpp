#pragma once

// Finitely supported distributions on the reals with exact lower quantiles
// and expected-shortfall curves.  All operations are pure; a constructed
// distribution is immutable and always in canonical form (values strictly
// increasing, probabilities positive, cumulative masses ending at exactly 1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vsd {

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

namespace detail {

inline std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] inline void invalid(const std::string& msg) {
  throw std::invalid_argument(msg);
}

inline bool values_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

class DiscreteDistribution {
 public:
  static DiscreteDistribution from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) detail::invalid("distribution needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms) {
      if (!std::isfinite(a.value))
        detail::invalid("atom value is not finite: " + detail::fmt_double(a.value));
      if (!std::isfinite(a.prob) || a.prob <= 0.0 || a.prob > 1.0)
        detail::invalid("atom probability outside (0,1]: " + detail::fmt_double(a.prob));
      total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
      detail::invalid("atom probabilities sum to " + detail::fmt_double(total) +
                      ", expected 1 within 1e-12");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });

    DiscreteDistribution d;
    for (const Atom& a : atoms) {
      if (!d.values_.empty() && detail::values_equal(d.values_.back(), a.value)) {
        double p = d.probs_.back() + a.prob;
        d.values_.back() =
            (d.values_.back() * d.probs_.back() + a.value * a.prob) / p;
        d.probs_.back() = p;
      } else {
        d.values_.push_back(a.value);
        d.probs_.push_back(a.prob);
      }
    }
    d.finalize(total);
    return d;
  }

  static DiscreteDistribution from_samples(const std::vector<double>& xs) {
    if (xs.empty()) detail::invalid("sample set is empty");
    std::vector<Atom> atoms;
    atoms.reserve(xs.size());
    const double w = 1.0 / static_cast<double>(xs.size());
    for (double x : xs) atoms.push_back({x, w});
    return from_atoms(std::move(atoms));
  }

  static DiscreteDistribution point_mass(double x) {
    return from_atoms({{x, 1.0}});
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  Atom atom(std::size_t i) const { return {values_[i], probs_[i]}; }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }
  double mean() const { return prefix_.back(); }

  // Lower quantile q(r) = inf{x : F(x) >= r}, defined for r in (0,1].
  double quantile(double r) const {
    if (!(r > 0.0 && r <= 1.0))
      detail::invalid("quantile level outside (0,1]: " + detail::fmt_double(r));
    return values_[seg_index(r)];
  }

  // es(p) = -(1/(1-p)) * integral of the quantile over [0, 1-p]; es(1) is the
  // negated worst outcome.
  double es(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
      detail::invalid("expected shortfall level outside [0,1]: " +
                      detail::fmt_double(p));
    if (p == 1.0) return -values_.front();
    return -lower_integral(1.0 - p) / (1.0 - p);
  }

  // (1-p)*es(p).  Piecewise linear in p with kinks exactly at p = 1 - F(x_i);
  // every dominance and crossing computation works on this function.
  double scaled_es(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
      detail::invalid("expected shortfall level outside [0,1]: " +
                      detail::fmt_double(p));
    return -lower_integral(1.0 - p);
  }

  template <class F>
  DiscreteDistribution transform(F&& f) const {
    std::vector<Atom> atoms;
    atoms.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
      atoms.push_back({static_cast<double>(f(values_[i])), probs_[i]});
    return from_atoms(std::move(atoms));
  }

  DiscreteDistribution shift(double d) const {
    if (!std::isfinite(d)) detail::invalid("shift is not finite");
    return transform([d](double x) { return x + d; });
  }

  DiscreteDistribution scale(double t) const {
    if (!(std::isfinite(t) && t > 0.0))
      detail::invalid("scale factor must be positive and finite: " +
                      detail::fmt_double(t));
    return transform([t](double x) { return t * x; });
  }

  DiscreteDistribution negate() const {
    return transform([](double x) { return -x; });
  }

  const std::vector<double>& cumulative() const { return cum_; }

 private:
  friend class ESCurve;

  void finalize(double total) {
    cum_.resize(values_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      run += probs_[i] / total;
      cum_[i] = run;
    }
    cum_.back() = 1.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      probs_[i] = cum_[i] - prev;
      if (!(probs_[i] > 0.0))
        detail::invalid("atom probability underflows at value " +
                        detail::fmt_double(values_[i]));
      prev = cum_[i];
    }
    prefix_.resize(values_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      s += values_[i] * probs_[i];
      prefix_[i] = s;
    }
  }

  // First index i with cum_[i] >= r (r in (0,1]).
  std::size_t seg_index(double r) const {
    return static_cast<std::size_t>(
        std::lower_bound(cum_.begin(), cum_.end(), r) - cum_.begin());
  }

  // integral of the lower quantile over [0, T]; exact segment summation.
  double lower_integral(double T) const {
    if (T <= 0.0) return 0.0;
    std::size_t j = seg_index(std::min(T, 1.0));
    double below = (j == 0) ? 0.0 : prefix_[j - 1];
    double pj = (j == 0) ? 0.0 : cum_[j - 1];
    return below + values_[j] * (T - pj);
  }

  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cum_;
  std::vector<double> prefix_;
};

// log E[exp(c X)], evaluated with the usual max-shift so that large |c| and
// wide supports do not overflow.
inline double log_mgf(const DiscreteDistribution& d, double c) {
  if (!std::isfinite(c)) detail::invalid("log_mgf needs finite c");
  if (c == 0.0) return 0.0;
  double m = -std::numeric_limits<double>::infinity();
  for (double x : d.values()) m = std::max(m, c * x);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    s += d.probs()[i] * std::exp(c * d.values()[i] - m);
  return m + std::log(s);
}

// Exact expected-shortfall curve of one distribution: breakpoints are
// {1 - F(x_i)} together with 0 and 1, and (1-p)*es(p) is linear between them.
class ESCurve {
 public:
  explicit ESCurve(DiscreteDistribution d) : dist_(std::move(d)) {
    const auto& cum = dist_.cum_;
    bps_.reserve(cum.size() + 1);
    for (std::size_t i = cum.size(); i-- > 0;) bps_.push_back(1.0 - cum[i]);
    bps_.push_back(1.0);
    bps_.erase(std::unique(bps_.begin(), bps_.end()), bps_.end());
  }

  const std::vector<double>& breakpoints() const { return bps_; }
  const DiscreteDistribution& distribution() const { return dist_; }
  double es(double p) const { return dist_.es(p); }
  double scaled_es(double p) const { return dist_.scaled_es(p); }
  double operator()(double p) const { return dist_.es(p); }

 private:
  DiscreteDistribution dist_;
  std::vector<double> bps_;
};

inline std::vector<double> merged_breakpoints(const ESCurve& a,
                                              const ESCurve& b) {
  std::vector<double> out;
  out.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(),
             b.breakpoints().begin(), b.breakpoints().end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Levels p in [0,1) where the two es curves cross strictly.  The difference of
// the scaled curves is piecewise linear on the merged breakpoints, so each
// segment is solved exactly.
inline std::vector<double> es_crossings(const ESCurve& a, const ESCurve& b) {
  const std::vector<double> bps = merged_breakpoints(a, b);
  std::vector<double> diff(bps.size());
  for (std::size_t i = 0; i < bps.size(); ++i)
    diff[i] = a.scaled_es(bps[i]) - b.scaled_es(bps[i]);

  std::vector<double> roots;
  int last_sign = 0;
  double last_zero = -1.0;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    int s = (diff[i] > 0.0) - (diff[i] < 0.0);
    if (s == 0) {
      if (last_sign != 0) last_zero = bps[i];
      continue;
    }
    if (last_sign != 0 && s != last_sign) {
      // Sign changed since the last nonzero sample: either through an exact
      // zero breakpoint, or inside the previous segment.
      if (last_zero >= 0.0) {
        roots.push_back(last_zero);
      } else {
        double d0 = diff[i - 1], d1 = diff[i];
        roots.push_back(bps[i - 1] +
                        d0 * (bps[i] - bps[i - 1]) / (d0 - d1));
      }
    }
    last_sign = s;
    last_zero = -1.0;
  }
  return roots;
}

// Two-point lottery with mean exactly `center`: takes center + (1-p)*width
// with probability p and center - p*width with probability 1-p.
inline DiscreteDistribution mean_preserving_spread(double center, double width,
                                                   double p) {
  if (!(width > 0.0) || !std::isfinite(width))
    detail::invalid("spread width must be positive: " + detail::fmt_double(width));
  if (!(p > 0.0 && p < 1.0))
    detail::invalid("spread probability outside (0,1): " + detail::fmt_double(p));
  return DiscreteDistribution::from_atoms(
      {{center - p * width, 1.0 - p}, {center + (1.0 - p) * width, p}});
}

}  // namespace vsd
