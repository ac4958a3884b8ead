#pragma once

// Risk minimisation under a budget constraint for loss-based return risk
// measures driven by a family of shortfall benchmark curves g: the pricing
// measures phi and mu, the closed-form single-curve solution, the family
// solver, and the Hardy-Littlewood identity verifier.

#include <vsd/dist.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace vsd {

// Right-continuous step function on [0,1): value pieces[i].value holds on
// [pieces[i].t, pieces[i+1].t).  Used both for pricing quantiles and for
// candidate loss profiles coupled comonotonically with a uniform U.
class StepFunction {
 public:
  struct Piece {
    double t;
    double value;
  };

  static StepFunction of(std::vector<Piece> ps) {
    if (ps.empty()) detail::invalid("step function needs at least one piece");
    if (ps.front().t != 0.0)
      detail::invalid("step function must start at t = 0");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!(ps[i].t >= 0.0 && ps[i].t < 1.0))
        detail::invalid("step breakpoint outside [0,1): " +
                        detail::fmt_double(ps[i].t));
      if (!std::isfinite(ps[i].value))
        detail::invalid("step value is not finite");
      if (i > 0 && !(ps[i].t > ps[i - 1].t))
        detail::invalid("step breakpoints must increase");
    }
    StepFunction f;
    f.pieces_ = std::move(ps);
    return f;
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  double operator()(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      detail::invalid("step argument outside [0,1): " + detail::fmt_double(u));
    std::size_t i = pieces_.size();
    while (i > 0 && pieces_[i - 1].t > u) --i;
    return pieces_[i - 1].value;
  }

  double integral() const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      acc += static_cast<long double>(pieces_[i].value) * width(i);
    return static_cast<double>(acc);
  }

  StepFunction scaled(double s) const {
    if (!std::isfinite(s)) detail::invalid("scale factor is not finite");
    StepFunction f = *this;
    for (auto& p : f.pieces_) p.value *= s;
    return f;
  }

  // Nondecreasing rearrangement: same distribution, sorted pieces.
  StepFunction sorted() const {
    std::vector<std::pair<double, double>> vw;  // (value, width)
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      vw.emplace_back(pieces_[i].value, width(i));
    std::sort(vw.begin(), vw.end());
    std::vector<Piece> ps;
    double t = 0.0;
    for (const auto& [v, w] : vw) {
      ps.push_back({t, v});
      t += w;
    }
    StepFunction f;
    f.pieces_ = std::move(ps);
    f.pieces_.front().t = 0.0;
    return f;
  }

  // Law of f(U) for uniform U.
  DiscreteDistribution distribution() const {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      atoms.push_back({pieces_[i].value, width(i)});
    return DiscreteDistribution::from_atoms(atoms);
  }

 private:
  double width(std::size_t i) const {
    double next = i + 1 < pieces_.size() ? pieces_[i + 1].t : 1.0;
    return next - pieces_[i].t;
  }

  std::vector<Piece> pieces_;
};

// Quantile of a pricing density dQ/dP: nondecreasing positive step function
// with unit integral.
class PricingQuantile {
 public:
  static PricingQuantile of(std::vector<StepFunction::Piece> steps) {
    PricingQuantile q;
    q.step_ = StepFunction::of(std::move(steps));
    double prev = 0.0;
    for (const auto& p : q.step_.pieces()) {
      if (!(p.value > 0.0))
        detail::invalid("pricing quantile must be positive: " +
                        detail::fmt_double(p.value));
      if (p.value < prev)
        detail::invalid("pricing quantile must be nondecreasing");
      prev = p.value;
    }
    if (std::abs(q.step_.integral() - 1.0) > 1e-10)
      detail::invalid("pricing density must have unit mean, integral is " +
                      detail::fmt_double(q.step_.integral()));
    return q;
  }

  static PricingQuantile physical() { return of({{0.0, 1.0}}); }

  double operator()(double u) const { return step_(u); }
  const StepFunction& step() const { return step_; }

 private:
  PricingQuantile() : step_(StepFunction::of({{0.0, 1.0}})) {}
  StepFunction step_;
};

struct GridMeasure {
  struct MassPoint {
    double t;
    double mass;
  };
  std::vector<MassPoint> atoms;

  double total() const {
    long double acc = 0.0L;
    for (const auto& a : atoms) acc += a.mass;
    return static_cast<double>(acc);
  }
};

// phi has the pricing quantile as cumulative mass; mu reweights its atoms by
// (1 - t).
inline GridMeasure build_mu(const PricingQuantile& pricing) {
  const auto& ps = pricing.step().pieces();
  GridMeasure mu;
  mu.atoms.push_back({0.0, ps.front().value});
  for (std::size_t i = 1; i < ps.size(); ++i)
    mu.atoms.push_back(
        {ps[i].t, (ps[i].value - ps[i - 1].value) * (1.0 - ps[i].t)});
  return mu;
}

// A shortfall benchmark curve g: nondecreasing, positive on [0,1], with
// ghat(p) = (1-p) g(p) concave and strictly decreasing.  Either the exact
// shortfall curve of a positive benchmark loss, or a tabulated curve whose
// ghat is interpolated piecewise linearly.
class GFunction {
 public:
  static GFunction benchmark_es(const DiscreteDistribution& l_prime) {
    if (!(l_prime.min_value() > 0.0))
      detail::invalid("invalid g family: benchmark loss must be positive");
    GFunction g;
    g.neg_ = l_prime.negate();
    std::vector<StepFunction::Piece> ps;
    double cum = 0.0;
    for (std::size_t i = 0; i < l_prime.size(); ++i) {
      ps.push_back({cum, l_prime.values()[i]});
      cum += l_prime.probs()[i];
    }
    g.profile_ = StepFunction::of(std::move(ps));
    return g;
  }

  static GFunction tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) detail::invalid("invalid g family: no knots");
    if (knots.front().first != 0.0)
      detail::invalid("invalid g family: first knot must sit at p = 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      auto [p, gp] = knots[i];
      if (!(p >= 0.0 && p < 1.0))
        detail::invalid("invalid g family: knot outside [0,1)");
      if (!(gp > 0.0) || !std::isfinite(gp))
        detail::invalid("invalid g family: g must be positive");
      if (i > 0 && !(p > knots[i - 1].first))
        detail::invalid("invalid g family: knots must increase");
      if (i > 0 && gp < knots[i - 1].second)
        detail::invalid("invalid g family: g must be nondecreasing");
    }
    // ghat knots, closed by ghat(1) = 0; slopes must be negative and
    // nonincreasing (concavity), which also makes -ghat' a valid quantile
    std::vector<double> hp, hv;
    for (auto [p, gp] : knots) {
      hp.push_back(p);
      hv.push_back((1.0 - p) * gp);
    }
    hp.push_back(1.0);
    hv.push_back(0.0);
    std::vector<StepFunction::Piece> ps;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < hp.size(); ++i) {
      double slope = (hv[i + 1] - hv[i]) / (hp[i + 1] - hp[i]);
      if (!(slope < 0.0))
        detail::invalid("invalid g family: ghat must be strictly decreasing");
      if (slope > prev + 1e-12 * std::abs(prev))
        detail::invalid("invalid g family: ghat must be concave");
      prev = slope;
      ps.push_back({hp[i], -slope});
    }
    GFunction g;
    g.knot_p_ = std::move(hp);
    g.ghat_ = std::move(hv);
    g.profile_ = StepFunction::of(std::move(ps));
    return g;
  }

  double operator()(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
      detail::invalid("g argument outside [0,1]: " + detail::fmt_double(p));
    if (neg_) return neg_->es(p);
    if (p == 1.0) return profile_.pieces().back().value;
    std::size_t i = knot_p_.size() - 1;
    while (i > 0 && knot_p_[i - 1] > p) --i;
    double lo = knot_p_[i - 1], hi = knot_p_[i];
    double ghat = ghat_[i - 1] + (ghat_[i] - ghat_[i - 1]) * (p - lo) / (hi - lo);
    return ghat / (1.0 - p);
  }

  double ghat(double p) const {
    return p == 1.0 ? 0.0 : (1.0 - p) * (*this)(p);
  }

  // u -> -ghat'_(u): the quantile profile of the optimal loss at unit scale.
  const StepFunction& unit_loss_profile() const { return profile_; }

  // p-levels at which the sup of a shortfall ratio against g is attained.
  std::vector<double> knot_levels() const {
    if (!neg_) return knot_p_;
    ESCurve c(*neg_);
    return c.breakpoints();
  }

 private:
  GFunction() : profile_(StepFunction::of({{0.0, 1.0}})) {}

  std::optional<DiscreteDistribution> neg_;  // -L' for the benchmark form
  std::vector<double> knot_p_, ghat_;        // tabulated form
  StepFunction profile_;
};

struct RiskMinInstance {
  PricingQuantile pricing;
  double x0;
  std::vector<GFunction> family;

  static RiskMinInstance of(PricingQuantile pricing, double x0,
                            std::vector<GFunction> family) {
    if (!(x0 > 0.0) || !std::isfinite(x0))
      detail::invalid("budget must be positive: " + detail::fmt_double(x0));
    if (family.empty()) detail::invalid("g family is empty");
    return {std::move(pricing), x0, std::move(family)};
  }
};

inline double integral_g_mu(const GFunction& g, const GridMeasure& mu) {
  long double acc = 0.0L;
  for (const auto& a : mu.atoms)
    if (a.mass != 0.0) acc += static_cast<long double>(a.mass) * g(a.t);
  return static_cast<double>(acc);
}

// Exact integral of the product of two step functions over [0,1).
inline double integrate_product(const StepFunction& a, const StepFunction& b) {
  std::vector<double> grid{0.0, 1.0};
  for (const auto& p : a.pieces()) grid.push_back(p.t);
  for (const auto& p : b.pieces()) grid.push_back(p.t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  long double acc = 0.0L;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double mid = 0.5 * (grid[i] + grid[i + 1]);
    acc += static_cast<long double>(a(mid)) * b(mid) * (grid[i + 1] - grid[i]);
  }
  return static_cast<double>(acc);
}

inline double expectation_q(const StepFunction& l, const PricingQuantile& q) {
  return integrate_product(l, q.step());
}

struct SingleSolution {
  double kappa_star;
  StepFunction l_star;
};

inline SingleSolution solve_single(const GFunction& g,
                                   const PricingQuantile& pricing, double x0) {
  if (!(x0 > 0.0) || !std::isfinite(x0))
    detail::invalid("budget must be positive: " + detail::fmt_double(x0));
  double denom = integral_g_mu(g, build_mu(pricing));
  if (!(denom > 0.0)) detail::invalid("invalid g family: nonpositive integral");
  double kappa = x0 / denom;
  return {kappa, g.unit_loss_profile().scaled(kappa)};
}

struct FamilySolution {
  double kappa_star;
  std::size_t g_star_index;
  StepFunction l_star;
};

inline FamilySolution solve_family(const RiskMinInstance& inst) {
  auto mu = build_mu(inst.pricing);
  std::size_t best = 0;
  double best_integral = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst.family.size(); ++i) {
    double v = integral_g_mu(inst.family[i], mu);
    if (v > best_integral) {
      best_integral = v;
      best = i;
    }
  }
  auto single = solve_single(inst.family[best], inst.pricing, inst.x0);
  return {single.kappa_star, best, single.l_star};
}

// kappa_g(L) = sup_p ES_p(-L) / g(p), taken exactly: the scaled numerator and
// (1-p) g(p) are both piecewise linear, so the ratio is monotone between the
// merged knots; p = 1 is the left limit, evaluated directly.
inline double kappa_g(const StepFunction& l, const GFunction& g) {
  auto neg = l.distribution().negate();
  ESCurve cn(neg);
  std::vector<double> cand = cn.breakpoints();
  for (double p : g.knot_levels()) cand.push_back(p);
  cand.push_back(0.0);
  cand.push_back(1.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double sup = -std::numeric_limits<double>::infinity();
  for (double p : cand) sup = std::max(sup, neg.es(p) / g(p));
  return sup;
}

struct HLReport {
  double lhs;  // integral of the sorted rearrangement against the quantile
  double rhs;  // expectation under Q with the coupling as given
};

inline HLReport verify_hl(const StepFunction& l, const PricingQuantile& q) {
  return {integrate_product(l.sorted(), q.step()), expectation_q(l, q)};
}

}  // namespace vsd
