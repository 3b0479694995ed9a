// test_support.hpp
//
// Independent reference computations used only by the test suites. Nothing
// here calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "predictability/core.hpp"

namespace predictability::testing {

// O(n^2) longest-previous-match: for every earlier start j, extend while the
// match stays inside [0, i).
inline std::vector<std::size_t> naive_match_lengths(std::span<const StateId> s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < i; ++j) {
      std::size_t k = 0;
      while (i + k < n && j + k < i && s[j + k] == s[i + k]) ++k;
      best = std::max(best, k);
    }
    out[i] = best + 1;
  }
  return out;
}

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

struct BoundsRef {
  long double lower;
  long double upper;
};

// Multiclass bounds evaluated term by term in long double, both alpha
// branches written out, before the trivial-bound clip.
inline BoundsRef multiclass_bounds_reference(const std::vector<double>& priors,
                                const std::vector<double>& subs) {
  const long double m = static_cast<long double>(priors.size());
  long double s = 0.0L;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    s += (1.0L - priors[i]) * static_cast<long double>(subs[i]);
  }
  const long double lower = (m - 1.0L) / ((m - 2.0L) * m) * s;
  const long double alpha0 = 1.0L / m * s + 1.0L / m;
  const long double alpha1 = 1.0L / (m - 2.0L) * s + 0.0L / (m - 2.0L);
  long double upper = alpha0 < alpha1 ? alpha0 : alpha1;
  long double pmax = 0.0L;
  for (double p : priors) pmax = std::max<long double>(pmax, p);
  if (upper > 1.0L - pmax) upper = 1.0L - pmax;
  return {lower, upper};
}

inline Series random_series(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<StateId> v(n);
  for (auto& x : v) x = static_cast<StateId>(rng() % m);
  return Series(m, std::move(v));
}

// Pearson statistic of observed counts against expected probabilities.
inline double chi_square(const std::vector<double>& observed,
                         const std::vector<double>& expected_prob, double total) {
  double chi = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_prob[i] * total;
    if (e > 0.0) chi += (observed[i] - e) * (observed[i] - e) / e;
  }
  return chi;
}

// Upper acceptance threshold: mean + 3 standard deviations of chi^2_df.
inline double chi_square_3sigma(double df) { return df + 3.0 * std::sqrt(2.0 * df); }

}  // namespace predictability::testing
