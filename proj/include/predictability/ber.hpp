// ber.hpp
//
// Bayes-error route to predictability. Each state is a class and the r
// preceding states are the feature, so predictability equals one minus the
// Bayes error rate of that classification problem. The multiclass error is
// bracketed from the errors of the M leave-one-class-out sub-problems:
//
//   S = sum_i (1 - p_i) R_i
//   (M-1) / ((M-2) M) * S  <=  R  <=  min_{a in {0,1}} (S + 1 - a) / (M - 2a)
//
// Sub-problem errors are plug-in (majority rule per feature) estimates.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "predictability/core.hpp"

namespace predictability {

struct BerBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Leave-one-out sub-problem errors, aligned with priors.
  std::vector<double> sub_bers;
  std::vector<double> priors;
  /// Set when lower > upper had to be collapsed to the midpoint.
  bool degenerate = false;
};

/// In-sample error of the majority-class-per-feature rule with every count
/// row restricted to `classes`. Needs at least two distinct classes and at
/// least one sample in the subset.
double plugin_ber(const CountsTable& counts, std::span<const StateId> classes);

/// plugin_ber over the full alphabet.
double plugin_ber(const CountsTable& counts);

/// plugin_ber for every leave-one-out sub-problem of `classes` in one pass
/// over the table; entry i drops classes[i].
std::vector<double> leave_one_out_bers(const CountsTable& counts,
                                       std::span<const StateId> classes);

/// Multiclass bounds from priors and leave-one-out errors, M = priors.size()
/// >= 3. The upper bound is clipped to 1 - max prior.
BerBounds eq10_bounds(std::span<const double> priors,
                      std::span<const double> sub_bers);

/// BER-inspired predictability of a labeled dataset. Classes that never occur
/// are dropped before the bounds are applied; with two observed classes the
/// bounds collapse to the plug-in error itself.
PredictabilityEstimate ber_predictability(const LabeledDataset& dataset);
PredictabilityEstimate ber_predictability(const CountsTable& counts);

/// In-sample accuracy of the majority rule: sum_x max_c n(x,c) / n.
double empirical_predictability(const LabeledDataset& dataset);
double empirical_predictability(const CountsTable& counts);

}  // namespace predictability
