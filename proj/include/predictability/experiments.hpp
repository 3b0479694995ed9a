// experiments.hpp
//
// Parameter sweeps over the synthetic generators comparing the entropy and
// Bayes-error estimators against the analytic truth, written as CSV.
//
// Panels:
//   A  Markov3, q in {0.4, 0.6, 0.8}, n = 2^6..2^20, entropy only
//   B  Markov3, q = 0.40..1.00 step 0.05, n = 2^15, r = 1, both methods
//   C  Additive M = 100, q in {0.2, 0.4, 0.6, 0.8}, n = 2^6..2^20, entropy only
//   D  Additive M = 100, q = 0.0..1.0 step 0.1, n = 2^15, r = 2, both methods
//   E  Copy (0.1, 0.2, 0.3), M = 20, r = 1..5, n = 2^15, both methods
//   F  Copy (0.1, 0.2, 0.3), r = 3, M in {5, 10, 20, 50, 100}, n = 2^15, both
//
// A series is generated once per (M, q, n, run) and shared by every cutoff r
// of that cell, so entropy rows repeat unchanged across r.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "predictability/core.hpp"

namespace predictability {

enum class GeneratorKind { markov3, additive, copy };

struct PanelConfig {
  char panel = 'B';
  GeneratorKind generator = GeneratorKind::markov3;
  std::vector<double> q_values;
  std::vector<std::size_t> alphabet_sizes;
  /// Empty means entropy-only panels without a cutoff.
  std::vector<std::size_t> cutoffs;
  std::vector<std::size_t> lengths;
  double q1 = 0.1;
  double q2 = 0.2;
  double q3 = 0.3;
  bool entropy = true;
  bool ber = true;
  std::size_t runs = 10;
  std::uint64_t base_seed = 2023;
};

/// Default grid for panel 'A'..'F'; throws Error(parameter) otherwise.
PanelConfig default_panel_config(char panel);

/// Applies `key = value` overrides (one per line, '#' comments) on top of
/// `base`. Keys: runs, base_seed, q, M, r, n, q1, q2, q3, methods. List
/// values are comma-separated; methods is a subset of {entropy, ber}.
PanelConfig parse_panel_config(std::istream& in, PanelConfig base);

void validate(const PanelConfig& config);

/// Seed for the series of grid cell `series_index` in run `run`:
/// splitmix64(splitmix64(splitmix64(base) ^ series_index) ^ run).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t series_index,
                          std::uint64_t run);

struct ResultRow {
  char panel = 'B';
  std::string generator;
  std::size_t alphabet_size = 0;
  std::optional<double> q;
  std::optional<double> q1, q2, q3;
  std::optional<std::size_t> cutoff;
  std::size_t length = 0;
  std::size_t run = 0;
  Method method = Method::entropy;
  std::optional<double> estimate, lower, upper, truth, abs_error;
  std::uint64_t seed = 0;
  /// Non-empty for rows whose estimate could not be computed.
  std::string error;
};

/// Rows ordered by grid cell, then run, then method (entropy before ber).
/// Deterministic for any `jobs` >= 1.
std::vector<ResultRow> run_panel(const PanelConfig& config, std::size_t jobs = 1);

struct AggregateRow {
  ResultRow key;  // run, seed and error unused
  std::size_t runs = 0;
  double estimate = 0.0, lower = 0.0, upper = 0.0, abs_error = 0.0;
  std::optional<double> truth;
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Per (cell, method) mean and standard error (sample sd / sqrt(runs)) of the
/// estimate; rows without an estimate are skipped.
std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);

void write_raw_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Writes panel<X>_raw.csv and panel<X>_agg.csv into `out_dir`.
void write_panel_files(const std::string& out_dir, char panel,
                       const std::vector<ResultRow>& rows);

}  // namespace predictability
