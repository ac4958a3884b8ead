#pragma once

// Constructive consistency falsifiers.  Each search either returns a Witness
// whose violated inequality re-verifies end to end, or reports that the grid
// holds no counterexample: translation gaps of the utility certainty
// equivalent (benchmark risk measures lose cash-additivity away from the
// exponential family), mean-preserving-spread pairs a risk functional ranks
// against the dominance order, and a grid search for comonotone reallocations
// that improve both coordinates of a two-point allocation.

#include <vsd/orders.hpp>
#include <vsd/riskmeasures.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vsd {

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(n);
  for (int i = 0; i < n; ++i)
    g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace detail

// A certificate that a risk functional violates dominance consistency: the
// pair satisfies dominated <= dominating in the v-SD order, yet the
// functional assigns the dominating position the larger risk.  For the
// translation kind the functional is the base risk measure against the
// stored benchmark and `shift` is the translation that opened the gap.
struct Witness {
  enum class Kind { translation_gap, mps, comonotone_infeasible };

  Kind kind;
  DiscreteDistribution dominated;
  DiscreteDistribution dominating;
  double rho_dominated;   // consistency demands rho_dominated >= rho_dominating
  double rho_dominating;
  double violation;       // rho_dominating - rho_dominated, > 0 when emitted
  std::optional<DiscreteDistribution> benchmark;
  double shift;
  std::string note;
};

// K_v(Z + d) - K_v(Z) - d: zero for every Z, d exactly when the certainty
// equivalent is cash-additive (the exponential family).
inline double translation_gap(const ThresholdUtility& v,
                              const DiscreteDistribution& z, double d) {
  return certainty_equivalent(z.shift(d), v) - certainty_equivalent(z, v) - d;
}

// Search grid for translation-gap witnesses: symmetric two-point spreads
// centred at `centers` with widths `spreads`, translated by `shifts`.
struct PrattGrid {
  std::vector<double> centers;
  std::vector<double> spreads;
  std::vector<double> shifts;

  static PrattGrid default_for(const ThresholdUtility& v) {
    double lo = std::max(v.domain_lower(), -10.0);
    double hi = std::min(v.domain_upper(), 10.0);
    double pad = 0.1 * (hi - lo);
    return {detail::linspace(lo + pad, hi - pad, 21),
            log_spaced_grid(0.01, 1.0, 7), detail::linspace(-5.0, 5.0, 41)};
  }
};

namespace detail {

// Certify a strictly negative gap K_v(bench + shift) < K_v(bench) + shift:
// bench + shift sits below the point mass at its own certainty equivalent in
// the v-SD order, yet the base risk measure against bench ranks it lower.
inline std::optional<Witness> translation_witness(
    const ThresholdUtility& v, const DiscreteDistribution& bench,
    double shift) {
  try {
    auto xdom = bench.shift(shift);
    auto ydom = DiscreteDistribution::point_mass(certainty_equivalent(xdom, v));
    if (!vsd_dominates(xdom, ydom, v).dominated) return std::nullopt;
    double rx = base_risk_measure(bench, v, xdom);
    double ry = base_risk_measure(bench, v, ydom);
    if (!(ry - rx > 1e-8)) return std::nullopt;
    return Witness{Witness::Kind::translation_gap,
                   xdom,
                   ydom,
                   rx,
                   ry,
                   ry - rx,
                   bench,
                   shift,
                   "dominated <= dominating in v-SD, but the base risk "
                   "measure puts the dominating position higher"};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline std::optional<Witness> pratt_witness(const ThresholdUtility& v,
                                            const PrattGrid& grid) {
  const double tol = 1e-6;
  for (double x : grid.centers) {
    for (double s : grid.spreads) {
      auto z = mean_preserving_spread(x, s, 0.5);
      if (!v.contains(z.min_value()) || !v.contains(z.max_value())) continue;
      double kz = certainty_equivalent(z, v);
      for (double d : grid.shifts) {
        if (d == 0.0) continue;
        if (!v.contains(z.min_value() + d) || !v.contains(z.max_value() + d))
          continue;
        double gap = certainty_equivalent(z.shift(d), v) - kz - d;
        std::optional<Witness> w;
        if (gap < -tol)
          w = detail::translation_witness(v, z, d);
        else if (gap > tol)  // mirror: the shifted lottery is the benchmark
          w = detail::translation_witness(v, z.shift(d), -d);
        if (w) return w;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Witness> pratt_witness(const ThresholdUtility& v) {
  return pratt_witness(v, PrattGrid::default_for(v));
}

// Search grid for mean-preserving-spread witnesses: two-point lotteries in
// utility space with upper-atom probability from `probs`, centred at
// `centers`, widened through `width_fractions` of the admissible width.
struct MpsGrid {
  std::vector<double> probs;
  std::vector<double> centers;
  std::vector<double> width_fractions;

  static MpsGrid default_for(const ThresholdUtility& v) {
    double lo = std::max(v.range_lower(), -10.0);
    double hi = std::min(v.range_upper(), 10.0);
    double pad = 0.02 * (hi - lo);
    return {{0.05, 0.1, 0.5, 0.9, 0.95, 0.99},
            detail::linspace(lo + pad, hi - pad, 21),
            log_spaced_grid(0.05, 0.95, 5)};
  }
};

// Search for a pair of two-point payoffs with matched means in utility space
// (the wider one is a mean-preserving spread of the narrower in v-space, so
// it is v-SD dominated) that rho nevertheless ranks the other way round.
inline std::optional<Witness> mps_witness(const RiskFunctional& rho,
                                          const ThresholdUtility& v,
                                          const MpsGrid& grid) {
  const double tol = 1e-6;
  double rlo = std::max(v.range_lower(), -10.0);
  double rhi = std::min(v.range_upper(), 10.0);
  auto payoff = [&](double m, double pa, double w) {
    return DiscreteDistribution::from_atoms(
        {{v.inverse(m - pa * w), 1.0 - pa}, {v.inverse(m + (1.0 - pa) * w), pa}});
  };
  for (double pa : grid.probs) {
    for (double m : grid.centers) {
      if (!(m > rlo && m < rhi)) continue;
      double wmax = std::min((m - rlo) / pa, (rhi - m) / (1.0 - pa));
      for (std::size_t i = 0; i < grid.width_fractions.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.width_fractions.size(); ++j) {
          try {
            auto narrow = payoff(m, pa, grid.width_fractions[i] * wmax);
            auto wide = payoff(m, pa, grid.width_fractions[j] * wmax);
            double rn = rho(narrow), rw = rho(wide);
            if (!(rn - rw > tol)) continue;
            if (!vsd_dominates(wide, narrow, v).dominated) continue;
            return Witness{Witness::Kind::mps,
                           wide,
                           narrow,
                           rw,
                           rn,
                           rn - rw,
                           std::nullopt,
                           0.0,
                           "the spread is v-SD dominated by the narrow payoff "
                           "with the same utility mean, but rho ranks the "
                           "narrow payoff riskier"};
          } catch (const std::exception&) {
            continue;
          }
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Witness> mps_witness(const RiskFunctional& rho,
                                          const ThresholdUtility& v) {
  return mps_witness(rho, v, MpsGrid::default_for(v));
}

// Two-point allocation on a common event A of probability one half: the
// first coordinate pays x1_a on A and x1_c off it, the second likewise.
struct TwoPointAllocation {
  double x1_a, x1_c;
  double x2_a, x2_c;
};

// The two frozen infeasibility instances: an anticomonotone allocation with
// all payoffs in the loss domain (for the risk-loving -log(-x) utility) and
// its sign-mirrored twin in the gain domain (for log x).
inline TwoPointAllocation negative_domain_instance() {
  return {-0.1, -1.9, -0.9, -0.1};
}

inline TwoPointAllocation positive_domain_instance() {
  return {0.1, 1.9, 0.9, 0.1};
}

struct Improvement {
  double a, b;
  bool strict;  // false marks the reflexive hit on comonotone inputs
};

// Scan reallocations Y1 = (x1_a - a, x1_c + b), Y2 = (x2_a + a, x2_c - b)
// over the lattice of admissible (a, b) that keep Y comonotone with the
// total, returning the first pair both of whose coordinates v-SD-improve.
// Grid points whose atoms leave the domain of v are skipped.  When given,
// `scanned` receives the lattice size.
inline std::optional<Improvement> comonotone_improvement_search(
    const TwoPointAllocation& alloc, const ThresholdUtility& v,
    int resolution, std::size_t* scanned = nullptr) {
  if (resolution < 100)
    detail::invalid("resolution must be at least 100, got " +
                    detail::fmt_double(resolution));
  if (scanned) *scanned = 0;
  const double dlo = v.domain_lower(), dhi = v.domain_upper();
  double a_lo = std::max(alloc.x1_a - dhi, dlo - alloc.x2_a);
  double a_hi = std::min(alloc.x1_a - dlo, dhi - alloc.x2_a);
  double b_lo = std::max(dlo - alloc.x1_c, alloc.x2_c - dhi);
  double b_hi = std::min(dhi - alloc.x1_c, alloc.x2_c - dlo);
  a_lo = std::max(a_lo, -100.0);
  b_lo = std::max(b_lo, -100.0);
  a_hi = std::min(a_hi, 100.0);
  b_hi = std::min(b_hi, 100.0);
  if (!(a_lo < a_hi) || !(b_lo < b_hi)) return std::nullopt;

  // comonotonicity with the total payoff pins a + b into a band whose
  // endpoints come from the two coordinate gaps
  double diff = (alloc.x1_a + alloc.x2_a) - (alloc.x1_c + alloc.x2_c);
  double e1 = alloc.x1_a - alloc.x1_c;
  double e2 = alloc.x2_c - alloc.x2_a;
  double band_lo = diff >= 0.0 ? e2 : e1;
  double band_hi = diff >= 0.0 ? e1 : e2;
  if (!(band_lo <= band_hi)) return std::nullopt;

  // the lattice keeps 0 when the range straddles it, so the reflexive
  // improvement on already-comonotone inputs is discoverable
  auto axis = [&](double lo, double hi) {
    std::vector<double> g = detail::linspace(lo, hi, resolution + 1);
    if (lo < 0.0 && hi > 0.0) g.push_back(0.0);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  };
  auto as = axis(a_lo, a_hi), bs = axis(b_lo, b_hi);
  if (scanned) *scanned = as.size() * bs.size();

  auto x1 = DiscreteDistribution::from_atoms(
      {{alloc.x1_a, 0.5}, {alloc.x1_c, 0.5}});
  auto x2 = DiscreteDistribution::from_atoms(
      {{alloc.x2_a, 0.5}, {alloc.x2_c, 0.5}});
  for (double a : as) {
    for (double b : bs) {
      double s = a + b;
      if (s < band_lo || s > band_hi) continue;
      double y1a = alloc.x1_a - a, y1c = alloc.x1_c + b;
      double y2a = alloc.x2_a + a, y2c = alloc.x2_c - b;
      if (!v.contains(y1a) || !v.contains(y1c) || !v.contains(y2a) ||
          !v.contains(y2c))
        continue;
      auto y1 = DiscreteDistribution::from_atoms({{y1a, 0.5}, {y1c, 0.5}});
      auto d1 = vsd_dominates(x1, y1, v);
      if (!d1.dominated) continue;
      auto y2 = DiscreteDistribution::from_atoms({{y2a, 0.5}, {y2c, 0.5}});
      auto d2 = vsd_dominates(x2, y2, v);
      if (!d2.dominated) continue;
      return Improvement{a, b, d1.strict || d2.strict};
    }
  }
  return std::nullopt;
}

}  // namespace vsd
