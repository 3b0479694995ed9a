// oracle.hpp
//
// Ground truth for the synthetic generators: closed-form true predictability
// and an independent Bayes error computed from the process definition rather
// than from sampled counts.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "predictability/generators.hpp"

namespace predictability {

struct TruthRecord {
  GeneratorSpec spec;
  std::size_t cutoff = 1;
  double true_predictability = 0.0;
  double true_ber = 0.0;
};

/// Markov3: q (only validated for q in [0.4, 1]); Additive: q + (1-q)/M,
/// needs r >= 2; Copy: max(q1..q_min(r,3)) + (1-q1-q2-q3)/M.
double true_predictability(const GeneratorParams& params, std::size_t cutoff);

TruthRecord truth_record(const GeneratorSpec& spec, std::size_t cutoff);

struct BruteForceBer {
  double value = 0.0;
  /// Zero for exact analyses.
  double standard_error = 0.0;
  bool exact = true;
};

/// 1 - sum_w P(w) max_s P(s | w) over length-r windows. Exact stationary
/// analysis for Markov3 and Additive; Monte Carlo over `horizon` steps of the
/// process (seeded with spec.seed) for Copy. Requires M^r <= 10^6.
BruteForceBer brute_force_ber(const GeneratorSpec& spec, std::size_t cutoff,
                              std::size_t horizon);

/// Next-state law of an order-k chain: given the last k states (oldest
/// first) fill `out` (length M) with P(next = s).
using NextStateLaw =
    std::function<void(std::span<const StateId> window, std::span<double> out)>;

/// Exact Bayes error of an order-k chain for cutoff r, from the stationary
/// law of its k-windows (lazy power iteration from uniform). Requires
/// M^(k+1) <= 2e7.
double window_chain_ber(std::size_t alphabet_size, std::size_t order,
                        const NextStateLaw& law, std::size_t cutoff);

/// Next-state laws of the three generators.
NextStateLaw markov3_law(double q);
NextStateLaw additive_law(std::size_t alphabet_size, double q);
NextStateLaw copy_law(std::size_t alphabet_size, double q1, double q2, double q3);

/// Stationary distribution of the three-state chain, via an eigen-solve.
std::vector<double> markov3_stationary(double q);

}  // namespace predictability
