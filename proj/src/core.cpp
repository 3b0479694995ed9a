// core.cpp
#include "predictability/core.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace predictability {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_cutoff: return "invalid-cutoff";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::empty_subset: return "empty-subset";
    case ErrorCode::degenerate_dataset: return "degenerate-dataset";
    case ErrorCode::out_of_validated_range: return "out-of-validated-range";
    case ErrorCode::insufficient_memory: return "insufficient-memory";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::entropy: return "entropy";
    case Method::ber: return "ber";
    case Method::empirical: return "empirical";
  }
  return "unknown";
}

Series::Series(std::size_t alphabet_size, std::vector<StateId> states)
    : alphabet_size_(alphabet_size), states_(std::move(states)) {
  if (alphabet_size_ < 2) {
    throw Error(ErrorCode::parameter, "alphabet size must be at least 2");
  }
  if (states_.empty()) {
    throw Error(ErrorCode::empty_input, "series must hold at least one state");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] >= alphabet_size_) {
      throw Error(ErrorCode::parameter,
                  "state " + std::to_string(states_[i]) + " at position " +
                      std::to_string(i) + " is outside [0, " +
                      std::to_string(alphabet_size_) + ")");
    }
  }
}

std::size_t FeatureWindowHash::operator()(
    std::span<const StateId> window) const noexcept {
  // FNV-1a over the state values followed by a splitmix finalizer.
  std::uint64_t h = 1469598103934665603ull;
  for (StateId s : window) {
    h ^= s;
    h *= 1099511628211ull;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return static_cast<std::size_t>(h);
}

LabeledDataset::LabeledDataset(std::size_t alphabet_size, std::size_t cutoff,
                               std::vector<StateId> features,
                               std::vector<StateId> labels)
    : alphabet_size_(alphabet_size),
      cutoff_(cutoff),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  if (alphabet_size_ < 2) {
    throw Error(ErrorCode::parameter, "alphabet size must be at least 2");
  }
  if (cutoff_ < 1) {
    throw Error(ErrorCode::invalid_cutoff, "cutoff r must be at least 1");
  }
  if (features_.size() != labels_.size() * cutoff_) {
    throw Error(ErrorCode::parameter,
                "feature storage does not hold r states per label");
  }
  for (StateId s : features_) {
    if (s >= alphabet_size_) {
      throw Error(ErrorCode::parameter, "feature state outside alphabet");
    }
  }
  for (StateId s : labels_) {
    if (s >= alphabet_size_) {
      throw Error(ErrorCode::parameter, "class label outside alphabet");
    }
  }
}

CountsTable::CountsTable(std::size_t alphabet_size)
    : alphabet_size_(alphabet_size) {
  if (alphabet_size_ < 2) {
    throw Error(ErrorCode::parameter, "alphabet size must be at least 2");
  }
}

CountsTable CountsTable::from_rows(
    std::size_t alphabet_size,
    const std::vector<std::pair<FeatureWindow, Row>>& rows) {
  CountsTable table(alphabet_size);
  for (const auto& [feature, row] : rows) {
    if (row.size() != alphabet_size) {
      throw Error(ErrorCode::parameter, "count row length differs from M");
    }
    auto& dst = table.entries_[feature];
    if (dst.empty()) dst.assign(alphabet_size, 0);
    for (std::size_t c = 0; c < alphabet_size; ++c) {
      dst[c] += row[c];
      table.total_ += row[c];
    }
  }
  return table;
}

void CountsTable::add(std::span<const StateId> feature, StateId label) {
  if (label >= alphabet_size_) {
    throw Error(ErrorCode::parameter, "class label outside alphabet");
  }
  auto [it, inserted] =
      entries_.try_emplace(FeatureWindow(feature.begin(), feature.end()));
  if (inserted) it->second.assign(alphabet_size_, 0);
  ++it->second[label];
  ++total_;
}

const CountsTable::Row* CountsTable::find(const FeatureWindow& feature) const {
  auto it = entries_.find(feature);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> CountsTable::class_totals() const {
  std::vector<std::uint64_t> totals(alphabet_size_, 0);
  for (const auto& [feature, row] : entries_) {
    for (std::size_t c = 0; c < alphabet_size_; ++c) totals[c] += row[c];
  }
  return totals;
}

LabeledDataset extract_features(const Series& series, std::size_t cutoff) {
  const std::size_t n = series.size();
  if (cutoff < 1 || cutoff >= n) {
    throw Error(ErrorCode::invalid_cutoff,
                "cutoff r=" + std::to_string(cutoff) +
                    " must satisfy 1 <= r < n=" + std::to_string(n));
  }
  const std::size_t count = n - cutoff;
  const auto states = series.states();
  std::vector<StateId> features;
  features.reserve(count * cutoff);
  std::vector<StateId> labels;
  labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    features.insert(features.end(), states.begin() + i,
                    states.begin() + i + cutoff);
    labels.push_back(states[i + cutoff]);
  }
  return LabeledDataset(series.alphabet_size(), cutoff, std::move(features),
                        std::move(labels));
}

CountsTable build_counts(const LabeledDataset& dataset) {
  if (dataset.empty()) {
    throw Error(ErrorCode::empty_input, "cannot count an empty dataset");
  }
  CountsTable table(dataset.alphabet_size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Sample s = dataset[i];
    table.add(s.feature, s.label);
  }
  return table;
}

std::vector<double> empirical_priors(const LabeledDataset& dataset) {
  if (dataset.empty()) {
    throw Error(ErrorCode::empty_input, "cannot estimate priors of an empty dataset");
  }
  std::vector<std::uint64_t> counts(dataset.alphabet_size(), 0);
  for (StateId label : dataset.labels()) ++counts[label];
  std::vector<double> priors(counts.size());
  const double total = static_cast<double>(dataset.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    priors[j] = static_cast<double>(counts[j]) / total;
  }
  return priors;
}

void write_series(std::ostream& out, const Series& series) {
  out << series.alphabet_size() << ' ' << series.size() << '\n';
  const auto states = series.states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    out << states[i] << ((i + 1) % 32 == 0 || i + 1 == states.size() ? '\n' : ' ');
  }
}

namespace {

// Reads one base-10 unsigned token; returns nullopt at end of input.
std::optional<std::uint64_t> next_integer(std::istream& in,
                                          const std::string& what) {
  std::string token;
  if (!(in >> token)) return std::nullopt;
  if (token.empty() || token.size() > 19 ||
      token.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::parse, "malformed " + what + ": '" + token + "'");
  }
  return std::stoull(token);
}

}  // namespace

Series read_series(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::parse, "missing header line 'M n'");
  }
  std::istringstream hs(header);
  const auto m = next_integer(hs, "header field M");
  const auto n = next_integer(hs, "header field n");
  std::string extra;
  if (!m || !n || (hs >> extra)) {
    throw Error(ErrorCode::parse, "header must be exactly 'M n'");
  }
  if (*m < 2) throw Error(ErrorCode::parse, "header M must be at least 2");
  if (*n < 1) throw Error(ErrorCode::parse, "header n must be at least 1");

  std::vector<StateId> states;
  states.reserve(*n);
  for (std::uint64_t i = 0; i < *n; ++i) {
    const auto v = next_integer(in, "state at position " + std::to_string(i));
    if (!v) {
      throw Error(ErrorCode::parse, "expected " + std::to_string(*n) +
                                        " states, found " + std::to_string(i));
    }
    if (*v >= *m) {
      throw Error(ErrorCode::parse, "state " + std::to_string(*v) +
                                        " at position " + std::to_string(i) +
                                        " is outside [0, " + std::to_string(*m) + ")");
    }
    states.push_back(static_cast<StateId>(*v));
  }
  std::string trailing;
  if (in >> trailing) {
    throw Error(ErrorCode::parse, "unexpected data after " + std::to_string(*n) +
                                      " states at position " + std::to_string(*n));
  }
  return Series(static_cast<std::size_t>(*m), std::move(states));
}

void write_series_file(const std::string& path, const Series& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_series(out, series);
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

Series read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return read_series(in);
}

}  // namespace predictability
