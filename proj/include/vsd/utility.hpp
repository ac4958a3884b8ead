#pragma once

// Threshold utilities: increasing, twice-differentiable functions on an open
// interval, exposed with exact derivatives, absolute risk aversion, inverses,
// and the closed-form regularity predicates per family.

#include <vsd/dist.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace vsd {

enum class UtilityFamily {
  cara,
  crra,
  logistic,
  sahara,
  kahneman_tversky,
  plain_log,
  neg_log_neg,
};

namespace detail {

[[noreturn]] inline void out_of_domain(const std::string& what, double x) {
  throw std::domain_error(what + ": " + fmt_double(x));
}

inline std::string fmt_param(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// 1/(1+e^{-t}) without overflow.
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace detail

class ThresholdUtility {
 public:
  static ThresholdUtility cara(double c) {
    if (!std::isfinite(c)) detail::invalid("cara parameter must be finite");
    ThresholdUtility v(UtilityFamily::cara);
    v.p1_ = c;
    if (c > 0.0) {
      v.range_lo_ = 0.0;
    } else if (c < 0.0) {
      v.range_hi_ = 0.0;
    }
    return v;
  }

  static ThresholdUtility crra(double a) {
    if (!(std::isfinite(a) && a >= 0.0))
      detail::invalid("crra power must be >= 0: " + detail::fmt_param(a));
    ThresholdUtility v(UtilityFamily::crra);
    v.p1_ = a;
    v.lo_ = 0.0;
    if (a > 0.0) v.range_lo_ = 0.0;
    return v;
  }

  static ThresholdUtility logistic(double alpha) {
    if (!(std::isfinite(alpha) && alpha > 0.0))
      detail::invalid("logistic steepness must be > 0: " +
                      detail::fmt_param(alpha));
    ThresholdUtility v(UtilityFamily::logistic);
    v.p1_ = alpha;
    v.range_lo_ = 0.0;
    v.range_hi_ = 1.0;
    return v;
  }

  static ThresholdUtility sahara(double alpha, double beta, double d) {
    if (!(std::isfinite(alpha) && alpha > 0.0) ||
        !(std::isfinite(beta) && beta > 0.0) || !std::isfinite(d))
      detail::invalid("sahara needs alpha > 0, beta > 0, finite d");
    ThresholdUtility v(UtilityFamily::sahara);
    v.p1_ = alpha;
    v.p2_ = beta;
    v.p3_ = d;
    if (alpha > 1.0) v.range_hi_ = 0.0;
    return v;
  }

  static ThresholdUtility kahneman_tversky(double alpha, double beta,
                                           double eps = 0.05) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0) ||
        !(std::isfinite(beta) && beta > 0.0 && beta < 1.0) ||
        !(std::isfinite(eps) && eps > 0.0))
      detail::invalid("kt needs alpha, beta in (0,1) and eps > 0");
    ThresholdUtility v(UtilityFamily::kahneman_tversky);
    v.p1_ = alpha;
    v.p2_ = beta;
    v.p3_ = eps;
    v.build_kt_bridge();
    return v;
  }

  static ThresholdUtility plain_log() {
    ThresholdUtility v(UtilityFamily::plain_log);
    v.lo_ = 0.0;
    return v;
  }

  static ThresholdUtility neg_log_neg() {
    ThresholdUtility v(UtilityFamily::neg_log_neg);
    v.hi_ = 0.0;
    return v;
  }

  UtilityFamily family() const { return family_; }
  double domain_lower() const { return lo_; }
  double domain_upper() const { return hi_; }
  double range_lower() const { return range_lo_; }
  double range_upper() const { return range_hi_; }
  bool contains(double x) const {
    return std::isfinite(x) && x > lo_ && x < hi_;
  }

  double operator()(double x) const { return eval(x); }

  double eval(double x) const {
    check_domain(x);
    switch (family_) {
      case UtilityFamily::cara:
        if (p1_ > 0.0) return std::exp(p1_ * x);
        if (p1_ < 0.0) return -std::exp(p1_ * x);
        return x;
      case UtilityFamily::crra:
        return p1_ == 0.0 ? std::log(x) : std::pow(x, p1_) / p1_;
      case UtilityFamily::logistic:
        return detail::sigmoid(p1_ * x);
      case UtilityFamily::sahara:
        return sahara_eval(x);
      case UtilityFamily::kahneman_tversky:
        if (x >= p3_) return std::pow(x, p1_);
        if (x <= -p3_) return -std::pow(-x, p2_);
        return kt_bridge(x / p3_);
      case UtilityFamily::plain_log:
        return std::log(x);
      case UtilityFamily::neg_log_neg:
        return -std::log(-x);
    }
    return 0.0;
  }

  double deriv(double x) const {
    check_domain(x);
    switch (family_) {
      case UtilityFamily::cara:
        if (p1_ == 0.0) return 1.0;
        return std::abs(p1_) * std::exp(p1_ * x);
      case UtilityFamily::crra:
        return std::pow(x, p1_ - 1.0);
      case UtilityFamily::logistic: {
        double s = detail::sigmoid(p1_ * x);
        return p1_ * s * (1.0 - s);
      }
      case UtilityFamily::sahara:
        return std::pow(sahara_w(x), -p1_);
      case UtilityFamily::kahneman_tversky:
        if (x >= p3_) return p1_ * std::pow(x, p1_ - 1.0);
        if (x <= -p3_) return p2_ * std::pow(-x, p2_ - 1.0);
        return kt_bridge_d1(x / p3_) / p3_;
      case UtilityFamily::plain_log:
        return 1.0 / x;
      case UtilityFamily::neg_log_neg:
        return -1.0 / x;
    }
    return 0.0;
  }

  // Arrow-Pratt absolute risk aversion -v''/v'.
  double risk_aversion(double x) const {
    check_domain(x);
    switch (family_) {
      case UtilityFamily::cara:
        return -p1_;
      case UtilityFamily::crra:
        return (1.0 - p1_) / x;
      case UtilityFamily::logistic:
        return p1_ * std::tanh(0.5 * p1_ * x);
      case UtilityFamily::sahara:
        return p1_ / std::hypot(x - p3_, p2_);
      case UtilityFamily::kahneman_tversky:
        if (x >= p3_) return (1.0 - p1_) / x;
        if (x <= -p3_) return (1.0 - p2_) / x;
        return -kt_bridge_d2(x / p3_) / (p3_ * kt_bridge_d1(x / p3_));
      case UtilityFamily::plain_log:
        return 1.0 / x;
      case UtilityFamily::neg_log_neg:
        return 1.0 / x;
    }
    return 0.0;
  }

  double inverse(double y) const {
    if (!std::isfinite(y) || y <= range_lo_ || y >= range_hi_)
      detail::out_of_domain("value outside utility range", y);
    switch (family_) {
      case UtilityFamily::cara:
        if (p1_ > 0.0) return std::log(y) / p1_;
        if (p1_ < 0.0) return std::log(-y) / p1_;
        return y;
      case UtilityFamily::crra:
        return p1_ == 0.0 ? std::exp(y) : std::pow(p1_ * y, 1.0 / p1_);
      case UtilityFamily::logistic:
        return std::log(y / (1.0 - y)) / p1_;
      case UtilityFamily::sahara:
        return invert_monotone(y, p3_);
      case UtilityFamily::kahneman_tversky: {
        double hi = std::pow(p3_, p1_), lo = -std::pow(p3_, p2_);
        if (y >= hi) return std::pow(y, 1.0 / p1_);
        if (y <= lo) return -std::pow(-y, 1.0 / p2_);
        return invert_bridge(y);
      }
      case UtilityFamily::plain_log:
        return std::exp(y);
      case UtilityFamily::neg_log_neg:
        return -std::exp(-y);
    }
    return 0.0;
  }

  bool satisfies_inada() const {
    switch (family_) {
      case UtilityFamily::cara:
        return p1_ < 0.0;
      case UtilityFamily::crra:
        return p1_ < 1.0;
      case UtilityFamily::logistic:
      case UtilityFamily::sahara:
      case UtilityFamily::kahneman_tversky:
      case UtilityFamily::plain_log:
        return true;
      case UtilityFamily::neg_log_neg:
        return false;
    }
    return false;
  }

  bool satisfies_star() const {
    switch (family_) {
      case UtilityFamily::cara:
        return p1_ < 0.0;
      case UtilityFamily::crra:
        return p1_ == 0.0;
      case UtilityFamily::logistic:
      case UtilityFamily::sahara:
      case UtilityFamily::plain_log:
        return true;
      case UtilityFamily::kahneman_tversky:
        return p1_ < p2_;
      case UtilityFamily::neg_log_neg:
        return false;
    }
    return false;
  }

  std::string name() const {
    switch (family_) {
      case UtilityFamily::cara:
        return "cara:" + detail::fmt_param(p1_);
      case UtilityFamily::crra:
        return "crra:" + detail::fmt_param(p1_);
      case UtilityFamily::logistic:
        return "logistic:" + detail::fmt_param(p1_);
      case UtilityFamily::sahara:
        return "sahara:" + detail::fmt_param(p1_) + "," +
               detail::fmt_param(p2_) + "," + detail::fmt_param(p3_);
      case UtilityFamily::kahneman_tversky:
        return "kt:" + detail::fmt_param(p1_) + "," + detail::fmt_param(p2_) +
               "," + detail::fmt_param(p3_);
      case UtilityFamily::plain_log:
        return "log";
      case UtilityFamily::neg_log_neg:
        return "neglogneg";
    }
    return "?";
  }

 private:
  explicit ThresholdUtility(UtilityFamily f) : family_(f) {}

  void check_domain(double x) const {
    if (!contains(x))
      detail::out_of_domain("utility argument outside open domain", x);
  }

  // w(x) = (x-d) + sqrt((x-d)^2 + beta^2), written to avoid cancellation for
  // x far below d.
  double sahara_w(double x) const {
    double z = x - p3_;
    double h = std::hypot(z, p2_);
    return z >= 0.0 ? z + h : p2_ * p2_ / (h - z);
  }

  double sahara_eval(double x) const {
    double w = sahara_w(x);
    double a = p1_;
    if (a == 1.0) {
      double r = p2_ / w;
      return 0.5 * std::log(w / p2_) - 0.25 * r * r;
    }
    return 0.5 * (std::pow(w, 1.0 - a) / (1.0 - a) -
                  p2_ * p2_ * std::pow(w, -(1.0 + a)) / (1.0 + a));
  }

  // Quintic bridge coefficients in u = x/eps, matched in value, first and
  // second derivative at u = +-1 to the power tails.
  void build_kt_bridge() {
    const double e = p3_;
    const double A0 = std::pow(e, p1_);
    const double A1 = p1_ * A0;
    const double A2 = p1_ * (p1_ - 1.0) * A0;
    const double B0 = -std::pow(e, p2_);
    const double B1 = p2_ * std::pow(e, p2_);
    const double B2 = -p2_ * (p2_ - 1.0) * std::pow(e, p2_);

    const double E0 = 0.5 * (A0 + B0), E1 = 0.5 * (A1 - B1),
                 E2 = 0.5 * (A2 + B2);
    const double O0 = 0.5 * (A0 - B0), O1 = 0.5 * (A1 + B1),
                 O2 = 0.5 * (A2 - B2);

    kt_[4] = (E2 - E1) / 8.0;
    kt_[2] = 0.5 * (E1 - 4.0 * kt_[4]);
    kt_[0] = E0 - kt_[2] - kt_[4];
    kt_[5] = (O2 - 3.0 * (O1 - O0)) / 8.0;
    kt_[3] = 0.5 * ((O1 - O0) - 4.0 * kt_[5]);
    kt_[1] = O0 - kt_[3] - kt_[5];

    for (int i = 0; i <= 2000; ++i) {
      double u = -1.0 + i / 1000.0;
      if (!(kt_bridge_d1(u) > 0.0))
        detail::invalid("kt bridge is not monotone for these parameters");
    }
  }

  double kt_bridge(double u) const {
    double r = 0.0;
    for (int k = 5; k >= 0; --k) r = r * u + kt_[k];
    return r;
  }

  double kt_bridge_d1(double u) const {
    double r = 0.0;
    for (int k = 5; k >= 1; --k) r = r * u + k * kt_[k];
    return r;
  }

  double kt_bridge_d2(double u) const {
    double r = 0.0;
    for (int k = 5; k >= 2; --k) r = r * u + k * (k - 1) * kt_[k];
    return r;
  }

  double invert_bridge(double y) const {
    double lo = -p3_, hi = p3_;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi));
         ++i) {
      double mid = 0.5 * (lo + hi);
      (kt_bridge(mid / p3_) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Bracket-doubling + bisection; used where no closed-form inverse exists.
  double invert_monotone(double y, double center) const {
    double step = 1.0;
    double lo = center, hi = center;
    for (int i = 0; i < 200 && eval(lo) > y; ++i, step *= 2.0) lo -= step;
    if (eval(lo) > y) detail::out_of_domain("value outside utility range", y);
    step = 1.0;
    for (int i = 0; i < 200 && eval(hi) < y; ++i, step *= 2.0) hi += step;
    if (eval(hi) < y) detail::out_of_domain("value outside utility range", y);
    for (int i = 0;
         i < 200 && hi - lo > 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)});
         ++i) {
      double mid = 0.5 * (lo + hi);
      (eval(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  UtilityFamily family_;
  double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  double range_lo_ = -std::numeric_limits<double>::infinity();
  double range_hi_ = std::numeric_limits<double>::infinity();
  std::array<double, 6> kt_{};
};

}  // namespace vsd
