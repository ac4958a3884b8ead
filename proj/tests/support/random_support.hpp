#pragma once

#include <vsd/dist.hpp>
#include <vsd/utility.hpp>

#include <random>
#include <vector>

namespace testrand {

// Random distribution with values snapped to a 1e-3 lattice (keeps atoms well
// separated from the merge tolerance) and probabilities bounded away from 0.
inline vsd::DiscreteDistribution distribution(std::mt19937_64& rng,
                                              int max_atoms, double lo,
                                              double hi) {
  std::uniform_int_distribution<int> nd(1, max_atoms);
  std::uniform_real_distribution<double> vd(lo, hi);
  std::uniform_real_distribution<double> wd(0.5, 1.5);
  const int n = nd(rng);
  std::vector<double> vals;
  std::vector<double> ws;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = std::round(vd(rng) * 1000.0) / 1000.0;
    bool dup = false;
    for (double u : vals) dup |= (u == v);
    if (dup) continue;
    vals.push_back(v);
    ws.push_back(wd(rng));
    total += ws.back();
  }
  if (vals.empty()) {
    vals.push_back(std::round(vd(rng) * 1000.0) / 1000.0);
    ws.push_back(1.0);
    total = 1.0;
  }
  std::vector<vsd::Atom> atoms;
  for (std::size_t i = 0; i < vals.size(); ++i)
    atoms.push_back({vals[i], ws[i] / total});
  return vsd::DiscreteDistribution::from_atoms(atoms);
}

// Pull a contiguous group of atoms toward its conditional mean in utility
// space.  The result dominates the input in the v-SD order: the original is a
// mean-preserving spread of the contraction after transforming by v.
inline vsd::DiscreteDistribution ce_contraction(
    const vsd::DiscreteDistribution& x, const vsd::ThresholdUtility& v,
    std::mt19937_64& rng, double lambda = 0.0) {
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = v.eval(x.values()[i]);
  std::size_t n = x.size();
  std::uniform_int_distribution<std::size_t> id(0, n - 1);
  std::size_t i = id(rng), j = id(rng);
  if (i > j) std::swap(i, j);

  double mass = 0.0;
  long double wsum = 0.0L;
  for (std::size_t k = i; k <= j; ++k) {
    mass += x.probs()[k];
    wsum += static_cast<long double>(x.probs()[k]) * w[k];
  }
  const double wbar = static_cast<double>(wsum) / mass;

  std::vector<vsd::Atom> atoms;
  for (std::size_t k = 0; k < n; ++k) {
    double wk = (k >= i && k <= j) ? wbar + lambda * (w[k] - wbar) : w[k];
    atoms.push_back({v.inverse(wk), x.probs()[k]});
  }
  return vsd::DiscreteDistribution::from_atoms(atoms);
}

}  // namespace testrand
