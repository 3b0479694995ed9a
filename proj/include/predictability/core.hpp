// core.hpp
//
// Domain types shared by every estimator: discrete series, the fixed-window
// classification view of a series, and the per-window class counts that all
// plug-in estimates are computed from.
//
// States are 0-based indices in [0, M). Generators that are naturally written
// with 1-based labels S_1..S_M translate at their boundary.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "predictability/error.hpp"

namespace predictability {

using StateId = std::uint32_t;

/// Immutable sequence of states over an alphabet of size M >= 2.
class Series {
public:
  Series(std::size_t alphabet_size, std::vector<StateId> states);

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const StateId> states() const noexcept { return states_; }
  StateId operator[](std::size_t i) const { return states_[i]; }

  friend bool operator==(const Series&, const Series&) = default;

private:
  std::size_t alphabet_size_;
  std::vector<StateId> states_;
};

/// The r states immediately preceding a predicted state, oldest first.
using FeatureWindow = std::vector<StateId>;

struct FeatureWindowHash {
  std::size_t operator()(std::span<const StateId> window) const noexcept;
  std::size_t operator()(const FeatureWindow& window) const noexcept {
    return (*this)(std::span<const StateId>(window));
  }
};

struct Sample {
  std::span<const StateId> feature;
  StateId label;
};

/// (feature window, class) pairs with a fixed cutoff r. Features are stored
/// flattened, r states per sample.
class LabeledDataset {
public:
  LabeledDataset(std::size_t alphabet_size, std::size_t cutoff,
                 std::vector<StateId> features, std::vector<StateId> labels);

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  Sample operator[](std::size_t i) const {
    return {std::span<const StateId>(features_).subspan(i * cutoff_, cutoff_),
            labels_[i]};
  }
  std::span<const StateId> labels() const noexcept { return labels_; }

private:
  std::size_t alphabet_size_;
  std::size_t cutoff_;
  std::vector<StateId> features_;
  std::vector<StateId> labels_;
};

/// Feature window -> per-class occurrence counts. Sufficient statistic for
/// every plug-in estimate in the library.
class CountsTable {
public:
  using Row = std::vector<std::uint64_t>;
  using Map = std::unordered_map<FeatureWindow, Row, FeatureWindowHash>;

  explicit CountsTable(std::size_t alphabet_size);

  /// Builds a table directly from rows; every row must have length M.
  static CountsTable from_rows(
      std::size_t alphabet_size,
      const std::vector<std::pair<FeatureWindow, Row>>& rows);

  void add(std::span<const StateId> feature, StateId label);

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::uint64_t total() const noexcept { return total_; }
  const Map& entries() const noexcept { return entries_; }
  const Row* find(const FeatureWindow& feature) const;

  /// Total count of each class over all features.
  std::vector<std::uint64_t> class_totals() const;

private:
  std::size_t alphabet_size_;
  std::uint64_t total_ = 0;
  Map entries_;
};

enum class Method { entropy, ber, empirical };

const char* to_string(Method method) noexcept;

struct EstimateMeta {
  std::size_t alphabet_size = 0;
  std::optional<std::size_t> cutoff;
  std::size_t length = 0;
  std::optional<std::uint64_t> seed;
};

struct PredictabilityEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;
  Method method = Method::entropy;
  EstimateMeta meta;
};

LabeledDataset extract_features(const Series& series, std::size_t cutoff);

CountsTable build_counts(const LabeledDataset& dataset);

std::vector<double> empirical_priors(const LabeledDataset& dataset);

// Series text format: "M n" on the first line, then n whitespace-separated
// integers in [0, M).
void write_series(std::ostream& out, const Series& series);
Series read_series(std::istream& in);

void write_series_file(const std::string& path, const Series& series);
Series read_series_file(const std::string& path);

}  // namespace predictability
