// entropy.hpp
//
// Entropy-rate route to predictability: a Lempel-Ziv match-length estimate of
// the entropy rate, inverted through the Fano relation
//
//   H = h(P) + (1 - P) log2(M - 1),   h(P) = -P log2 P - (1-P) log2(1-P).
#pragma once

#include <cstddef>
#include <vector>

#include "predictability/core.hpp"

namespace predictability {

struct EntropyEstimate {
  double bits_per_symbol = 0.0;
  std::size_t length = 0;
};

/// Lambda_i for every position (0-based here): one plus the length of the
/// longest substring starting at i that occurs entirely inside states[0, i).
/// A match that reaches the end of the series counts its full length.
/// Suffix-automaton based, O(n * alphabet) worst case, near linear in practice.
std::vector<std::size_t> lz_match_lengths(const Series& series);

/// n log2(n) / sum(Lambda_i). Requires n >= 2.
EntropyEstimate lz_entropy_rate(const Series& series);

/// Right-hand side of the Fano relation at predictability p for M states.
double fano_rhs(double p, std::size_t alphabet_size);

/// Root of fano_rhs(p, M) = H on [1/M, 1] by bisection to 1e-10.
/// H >= log2 M gives 1/M; H <= 0 gives 1.
double fano_solve(double entropy, std::size_t alphabet_size);

/// lz_entropy_rate followed by fano_solve with the nominal alphabet size.
PredictabilityEstimate entropy_predictability(const Series& series);

}  // namespace predictability
