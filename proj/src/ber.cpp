// ber.cpp
#include "predictability/ber.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace predictability {

namespace {

void check_classes(std::span<const StateId> classes, std::size_t alphabet_size) {
  if (classes.size() < 2) {
    throw Error(ErrorCode::parameter, "class subset needs at least 2 classes");
  }
  std::vector<bool> seen(alphabet_size, false);
  for (StateId c : classes) {
    if (c >= alphabet_size) {
      throw Error(ErrorCode::parameter, "class " + std::to_string(c) + " outside alphabet");
    }
    if (seen[c]) {
      throw Error(ErrorCode::parameter, "class " + std::to_string(c) + " listed twice");
    }
    seen[c] = true;
  }
}

std::vector<StateId> all_classes(std::size_t alphabet_size) {
  std::vector<StateId> classes(alphabet_size);
  std::iota(classes.begin(), classes.end(), StateId{0});
  return classes;
}

}  // namespace

double plugin_ber(const CountsTable& counts, std::span<const StateId> classes) {
  check_classes(classes, counts.alphabet_size());
  std::uint64_t errors = 0;
  std::uint64_t mass = 0;
  for (const auto& [feature, row] : counts.entries()) {
    std::uint64_t total = 0;
    std::uint64_t best = 0;
    for (StateId c : classes) {
      total += row[c];
      best = std::max(best, row[c]);
    }
    errors += total - best;
    mass += total;
  }
  if (mass == 0) {
    throw Error(ErrorCode::empty_subset, "no samples fall in the class subset");
  }
  return static_cast<double>(errors) / static_cast<double>(mass);
}

double plugin_ber(const CountsTable& counts) {
  const auto classes = all_classes(counts.alphabet_size());
  return plugin_ber(counts, classes);
}

std::vector<double> leave_one_out_bers(const CountsTable& counts,
                                       std::span<const StateId> classes) {
  check_classes(classes, counts.alphabet_size());
  const std::size_t k = classes.size();
  std::vector<std::uint64_t> errors(k, 0);
  std::vector<std::uint64_t> mass(k, 0);
  for (const auto& [feature, row] : counts.entries()) {
    // The largest count after removing class i is the runner-up when i holds
    // the (first) maximum, and the maximum otherwise. Ties make both equal.
    std::uint64_t total = 0;
    std::uint64_t top1 = 0;
    std::uint64_t top2 = 0;
    std::size_t arg1 = k;
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint64_t v = row[classes[j]];
      total += v;
      if (arg1 == k || v > top1) {
        top2 = top1;
        top1 = v;
        arg1 = j;
      } else if (v > top2) {
        top2 = v;
      }
    }
    if (total == 0) continue;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t rest = total - row[classes[i]];
      const std::uint64_t best = i == arg1 ? top2 : top1;
      errors[i] += rest - best;
      mass[i] += rest;
    }
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (mass[i] == 0) {
      throw Error(ErrorCode::empty_subset,
                  "no samples remain after removing class " + std::to_string(classes[i]));
    }
    out[i] = static_cast<double>(errors[i]) / static_cast<double>(mass[i]);
  }
  return out;
}

BerBounds eq10_bounds(std::span<const double> priors,
                      std::span<const double> sub_bers) {
  const std::size_t m = priors.size();
  if (m < 3) {
    throw Error(ErrorCode::parameter, "multiclass bounds need M >= 3");
  }
  if (sub_bers.size() != m) {
    throw Error(ErrorCode::parameter, "priors and sub-problem errors differ in length");
  }
  const double prior_sum = std::accumulate(priors.begin(), priors.end(), 0.0);
  if (std::abs(prior_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::parameter, "priors must sum to 1");
  }

  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += (1.0 - priors[i]) * sub_bers[i];

  const double md = static_cast<double>(m);
  BerBounds b;
  b.lower = (md - 1.0) / ((md - 2.0) * md) * s;
  b.upper = std::min((s + 1.0) / md, s / (md - 2.0));
  b.upper = std::min(b.upper, 1.0 - *std::max_element(priors.begin(), priors.end()));
  if (b.lower > b.upper) {
    b.lower = b.upper = 0.5 * (b.lower + b.upper);
    b.degenerate = true;
  }
  b.priors.assign(priors.begin(), priors.end());
  b.sub_bers.assign(sub_bers.begin(), sub_bers.end());
  return b;
}

PredictabilityEstimate ber_predictability(const CountsTable& counts) {
  if (counts.total() == 0) {
    throw Error(ErrorCode::empty_input, "cannot estimate from an empty table");
  }
  const auto totals = counts.class_totals();
  std::vector<StateId> observed;
  std::vector<double> priors;
  for (std::size_t c = 0; c < totals.size(); ++c) {
    if (totals[c] == 0) continue;
    observed.push_back(static_cast<StateId>(c));
    priors.push_back(static_cast<double>(totals[c]) / static_cast<double>(counts.total()));
  }
  if (observed.size() < 2) {
    throw Error(ErrorCode::degenerate_dataset,
                "only one class observed; predictability is trivially 1");
  }

  double lower_r = 0.0;
  double upper_r = 0.0;
  if (observed.size() == 2) {
    lower_r = upper_r = plugin_ber(counts, observed);
  } else {
    const auto sub = leave_one_out_bers(counts, observed);
    const BerBounds b = eq10_bounds(priors, sub);
    lower_r = b.lower;
    upper_r = b.upper;
  }

  PredictabilityEstimate est;
  est.method = Method::ber;
  est.lower = 1.0 - upper_r;
  est.upper = 1.0 - lower_r;
  est.point = 0.5 * (est.lower + est.upper);
  est.meta.alphabet_size = counts.alphabet_size();
  return est;
}

PredictabilityEstimate ber_predictability(const LabeledDataset& dataset) {
  PredictabilityEstimate est = ber_predictability(build_counts(dataset));
  est.meta.cutoff = dataset.cutoff();
  est.meta.length = dataset.size() + dataset.cutoff();
  return est;
}

double empirical_predictability(const CountsTable& counts) {
  if (counts.total() == 0) {
    throw Error(ErrorCode::empty_input, "cannot estimate from an empty table");
  }
  std::uint64_t hits = 0;
  for (const auto& [feature, row] : counts.entries()) {
    hits += *std::max_element(row.begin(), row.end());
  }
  return static_cast<double>(hits) / static_cast<double>(counts.total());
}

double empirical_predictability(const LabeledDataset& dataset) {
  return empirical_predictability(build_counts(dataset));
}

}  // namespace predictability
