// experiments.cpp
#include "predictability/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "predictability/ber.hpp"
#include "predictability/entropy.hpp"
#include "predictability/generators.hpp"
#include "predictability/oracle.hpp"

namespace predictability {

namespace {

// Counts tables beyond this many cells are refused.
constexpr double max_count_cells = 64.0 * 1024 * 1024;

std::vector<std::size_t> powers_of_two(int from, int to) {
  std::vector<std::size_t> out;
  for (int e = from; e <= to; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

std::vector<double> q_grid(int from, int to, double step) {
  std::vector<double> out;
  for (int k = from; k <= to; ++k) out.push_back(k * step);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) {
    throw Error(ErrorCode::parse, "config key '" + key + "': bad number '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::parse, "config key '" + key + "': bad integer '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, "config key '" + key + "': integer out of range");
  }
}

const char* kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::markov3: return "markov3";
    case GeneratorKind::additive: return "additive";
    case GeneratorKind::copy: return "copy";
  }
  return "unknown";
}

std::size_t natural_memory(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::markov3: return 1;
    case GeneratorKind::additive: return 2;
    case GeneratorKind::copy: return 3;
  }
  return 1;
}

struct SeriesCell {
  std::size_t alphabet_size;
  double q;
  std::size_t length;
};

std::vector<SeriesCell> series_cells(const PanelConfig& c) {
  std::vector<SeriesCell> cells;
  const std::vector<double> qs =
      c.generator == GeneratorKind::copy ? std::vector<double>{0.0} : c.q_values;
  for (std::size_t m : c.alphabet_sizes) {
    for (double q : qs) {
      for (std::size_t n : c.lengths) cells.push_back({m, q, n});
    }
  }
  return cells;
}

GeneratorParams make_params(const PanelConfig& c, const SeriesCell& cell) {
  switch (c.generator) {
    case GeneratorKind::markov3: return Markov3Params{cell.q};
    case GeneratorKind::additive: return AdditiveParams{cell.alphabet_size, cell.q};
    case GeneratorKind::copy: return CopyParams{cell.alphabet_size, c.q1, c.q2, c.q3};
  }
  return Markov3Params{cell.q};
}

ResultRow row_template(const PanelConfig& c, const SeriesCell& cell,
                       std::optional<std::size_t> cutoff, std::size_t run,
                       std::uint64_t seed, Method method) {
  ResultRow row;
  row.panel = c.panel;
  row.generator = kind_name(c.generator);
  row.alphabet_size = cell.alphabet_size;
  if (c.generator == GeneratorKind::copy) {
    row.q1 = c.q1;
    row.q2 = c.q2;
    row.q3 = c.q3;
  } else {
    row.q = cell.q;
  }
  row.cutoff = cutoff;
  row.length = cell.length;
  row.run = run;
  row.seed = seed;
  row.method = method;
  return row;
}

void set_estimate(ResultRow& row, const PredictabilityEstimate& est) {
  row.estimate = est.point;
  row.lower = est.lower;
  row.upper = est.upper;
  if (row.truth) row.abs_error = std::abs(est.point - *row.truth);
}

void attach_truth(ResultRow& row, const GeneratorParams& params, std::size_t cutoff) {
  try {
    row.truth = true_predictability(params, cutoff);
  } catch (const Error&) {
    row.truth.reset();
  }
}

// All rows for one (series cell, run): entropy once, then ber per cutoff.
std::vector<ResultRow> run_unit(const PanelConfig& c, const SeriesCell& cell,
                                std::size_t series_index, std::size_t run) {
  const std::uint64_t seed = derive_seed(c.base_seed, series_index, run);
  const GeneratorParams params = make_params(c, cell);
  std::vector<ResultRow> rows;

  std::optional<Series> series;
  std::string gen_error;
  try {
    series = generate({params, cell.length, seed});
  } catch (const Error& e) {
    gen_error = e.what();
  }

  std::vector<std::optional<std::size_t>> cutoffs;
  if (c.cutoffs.empty()) {
    cutoffs.push_back(std::nullopt);
  } else {
    cutoffs.assign(c.cutoffs.begin(), c.cutoffs.end());
  }

  std::optional<PredictabilityEstimate> entropy;
  std::string entropy_error = gen_error;
  if (c.entropy && series) {
    try {
      entropy = entropy_predictability(*series);
    } catch (const Error& e) {
      entropy_error = e.what();
    }
  }

  for (const auto& cutoff : cutoffs) {
    const std::size_t truth_r = cutoff.value_or(natural_memory(c.generator));
    if (c.entropy) {
      ResultRow row = row_template(c, cell, cutoff, run, seed, Method::entropy);
      attach_truth(row, params, truth_r);
      if (entropy) {
        set_estimate(row, *entropy);
      } else {
        row.error = entropy_error;
      }
      rows.push_back(std::move(row));
    }
    if (c.ber && cutoff) {
      ResultRow row = row_template(c, cell, cutoff, run, seed, Method::ber);
      attach_truth(row, params, truth_r);
      if (!series) {
        row.error = gen_error;
      } else {
        const double windows =
            std::pow(static_cast<double>(cell.alphabet_size), static_cast<double>(*cutoff));
        const double cells = std::min(windows, static_cast<double>(cell.length)) *
                             static_cast<double>(cell.alphabet_size);
        if (cells > max_count_cells) {
          row.error = "infeasible: counts table exceeds memory budget";
        } else {
          try {
            set_estimate(row, ber_predictability(extract_features(*series, *cutoff)));
          } catch (const Error& e) {
            if (e.code() == ErrorCode::degenerate_dataset) {
              // A single observed class is perfectly predictable.
              PredictabilityEstimate one;
              one.lower = one.upper = one.point = 1.0;
              set_estimate(row, one);
            } else {
              row.error = e.what();
            }
          }
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

std::string fmt_opt(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void write_key(std::ostream& out, const ResultRow& r) {
  out << r.panel << ',' << r.generator << ',' << r.alphabet_size << ','
      << fmt_opt(r.q) << ',' << fmt_opt(r.q1) << ',' << fmt_opt(r.q2) << ','
      << fmt_opt(r.q3) << ',' << fmt_opt(r.cutoff) << ',' << r.length << ',';
}

}  // namespace

PanelConfig default_panel_config(char panel) {
  PanelConfig c;
  c.panel = panel;
  switch (panel) {
    case 'A':
      c.generator = GeneratorKind::markov3;
      c.q_values = {0.4, 0.6, 0.8};
      c.alphabet_sizes = {3};
      c.lengths = powers_of_two(6, 20);
      c.ber = false;
      break;
    case 'B':
      c.generator = GeneratorKind::markov3;
      c.q_values = q_grid(8, 20, 0.05);
      c.alphabet_sizes = {3};
      c.cutoffs = {1};
      c.lengths = {std::size_t{1} << 15};
      break;
    case 'C':
      c.generator = GeneratorKind::additive;
      c.q_values = {0.2, 0.4, 0.6, 0.8};
      c.alphabet_sizes = {100};
      c.lengths = powers_of_two(6, 20);
      c.ber = false;
      break;
    case 'D':
      c.generator = GeneratorKind::additive;
      c.q_values = q_grid(0, 10, 0.1);
      c.alphabet_sizes = {100};
      c.cutoffs = {2};
      c.lengths = {std::size_t{1} << 15};
      break;
    case 'E':
      c.generator = GeneratorKind::copy;
      c.alphabet_sizes = {20};
      c.cutoffs = {1, 2, 3, 4, 5};
      c.lengths = {std::size_t{1} << 15};
      break;
    case 'F':
      c.generator = GeneratorKind::copy;
      c.alphabet_sizes = {5, 10, 20, 50, 100};
      c.cutoffs = {3};
      c.lengths = {std::size_t{1} << 15};
      break;
    default:
      throw Error(ErrorCode::parameter,
                  std::string("unknown panel '") + panel + "' (expected A-F)");
  }
  return c;
}

PanelConfig parse_panel_config(std::istream& in, PanelConfig c) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse,
                  "config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto items = split_list(value);
    if (items.empty()) {
      throw Error(ErrorCode::parse, "config key '" + key + "' has no value");
    }

    if (key == "runs") {
      c.runs = parse_unsigned(key, value);
    } else if (key == "base_seed") {
      c.base_seed = parse_unsigned(key, value);
    } else if (key == "q") {
      c.q_values.clear();
      for (const auto& s : items) c.q_values.push_back(parse_double(key, s));
    } else if (key == "M") {
      c.alphabet_sizes.clear();
      for (const auto& s : items) c.alphabet_sizes.push_back(parse_unsigned(key, s));
    } else if (key == "r") {
      c.cutoffs.clear();
      for (const auto& s : items) c.cutoffs.push_back(parse_unsigned(key, s));
    } else if (key == "n") {
      c.lengths.clear();
      for (const auto& s : items) c.lengths.push_back(parse_unsigned(key, s));
    } else if (key == "q1") {
      c.q1 = parse_double(key, value);
    } else if (key == "q2") {
      c.q2 = parse_double(key, value);
    } else if (key == "q3") {
      c.q3 = parse_double(key, value);
    } else if (key == "methods") {
      c.entropy = c.ber = false;
      for (const auto& s : items) {
        if (s == "entropy") {
          c.entropy = true;
        } else if (s == "ber") {
          c.ber = true;
        } else {
          throw Error(ErrorCode::parse, "config key 'methods': unknown method '" + s + "'");
        }
      }
    } else {
      throw Error(ErrorCode::parse, "unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

void validate(const PanelConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::parameter, what); };
  if (c.runs < 1) fail("runs must be at least 1");
  if (!c.entropy && !c.ber) fail("at least one method is required");
  if (c.ber && c.cutoffs.empty()) fail("the ber method needs at least one cutoff r");
  if (c.lengths.empty()) fail("at least one series length n is required");
  if (c.alphabet_sizes.empty()) fail("at least one alphabet size M is required");
  if (c.generator != GeneratorKind::copy && c.q_values.empty()) fail("q grid is empty");
  if (c.generator == GeneratorKind::markov3 &&
      (c.alphabet_sizes.size() != 1 || c.alphabet_sizes[0] != 3)) {
    fail("markov3 panels have M = 3");
  }
  for (double q : c.q_values) {
    if (!(q >= 0.0 && q <= 1.0)) fail("q values must lie in [0, 1]");
  }
  for (std::size_t m : c.alphabet_sizes) {
    if (m < 2) fail("M must be at least 2");
  }
  for (std::size_t r : c.cutoffs) {
    if (r < 1) fail("r must be at least 1");
    for (std::size_t n : c.lengths) {
      if (r >= n) fail("every r must be smaller than every n");
    }
  }
  for (std::size_t n : c.lengths) {
    if (n < 2) fail("n must be at least 2");
  }
  if (c.generator == GeneratorKind::copy) {
    predictability::validate(
        GeneratorSpec{CopyParams{c.alphabet_sizes[0], c.q1, c.q2, c.q3}, 2, 0});
  }
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t series_index,
                          std::uint64_t run) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ series_index) ^ run);
}

std::vector<ResultRow> run_panel(const PanelConfig& config, std::size_t jobs) {
  validate(config);
  const auto cells = series_cells(config);
  const std::size_t units = cells.size() * config.runs;
  std::vector<std::vector<ResultRow>> results(units);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < units; u = next++) {
      const std::size_t cell = u / config.runs;
      results[u] = run_unit(config, cells[cell], cell, u % config.runs);
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(units, 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  // Units are (series cell, run); reorder to (series cell, r, run, method).
  std::vector<ResultRow> rows;
  const std::size_t per_cut = config.cutoffs.empty() ? 1 : config.cutoffs.size();
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    for (std::size_t k = 0; k < per_cut; ++k) {
      for (std::size_t run = 0; run < config.runs; ++run) {
        const auto& unit = results[cell * config.runs + run];
        const std::size_t per_r = unit.size() / per_cut;
        for (std::size_t i = 0; i < per_r; ++i) rows.push_back(unit[k * per_r + i]);
      }
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<char, std::string, std::size_t, std::optional<double>,
                         std::optional<double>, std::optional<double>,
                         std::optional<double>, std::optional<std::size_t>,
                         std::size_t, Method>;
  std::map<Key, std::size_t> index;
  std::vector<AggregateRow> out;
  std::vector<std::vector<double>> estimates;

  for (const auto& r : rows) {
    if (!r.estimate) continue;
    const Key key{r.panel, r.generator, r.alphabet_size, r.q, r.q1, r.q2, r.q3,
                  r.cutoff, r.length, r.method};
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      AggregateRow a;
      a.key = r;
      a.key.estimate = a.key.lower = a.key.upper = a.key.abs_error = std::nullopt;
      a.truth = r.truth;
      out.push_back(std::move(a));
      estimates.emplace_back();
    }
    AggregateRow& a = out[it->second];
    ++a.runs;
    a.estimate += *r.estimate;
    a.lower += *r.lower;
    a.upper += *r.upper;
    if (r.abs_error) a.abs_error += *r.abs_error;
    estimates[it->second].push_back(*r.estimate);
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    AggregateRow& a = out[i];
    const double k = static_cast<double>(a.runs);
    a.estimate /= k;
    a.lower /= k;
    a.upper /= k;
    a.abs_error /= k;
    a.mean = a.estimate;
    if (a.runs > 1) {
      // Deviations from the first run, so identical runs give exactly zero.
      const double v0 = estimates[i].front();
      double sd = 0.0, sd2 = 0.0;
      for (double v : estimates[i]) {
        sd += v - v0;
        sd2 += (v - v0) * (v - v0);
      }
      const double ss = std::max(0.0, sd2 - sd * sd / k);
      a.standard_error = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
  }
  return out;
}

void write_raw_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "panel,generator,M,q,q1,q2,q3,r,n,run,method,estimate,lower,upper,truth,abs_error\n";
  for (const auto& r : rows) {
    write_key(out, r);
    out << r.run << ',' << to_string(r.method) << ',' << fmt_opt(r.estimate) << ','
        << fmt_opt(r.lower) << ',' << fmt_opt(r.upper) << ',' << fmt_opt(r.truth) << ','
        << fmt_opt(r.abs_error) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "panel,generator,M,q,q1,q2,q3,r,n,runs,method,estimate,lower,upper,truth,"
         "abs_error,mean,stderr\n";
  for (const auto& a : rows) {
    write_key(out, a.key);
    out << a.runs << ',' << to_string(a.key.method) << ',' << fmt_double(a.estimate) << ','
        << fmt_double(a.lower) << ',' << fmt_double(a.upper) << ',' << fmt_opt(a.truth)
        << ',' << (a.truth ? fmt_double(a.abs_error) : std::string()) << ','
        << fmt_double(a.mean) << ',' << fmt_double(a.standard_error) << '\n';
  }
}

void write_panel_files(const std::string& out_dir, char panel,
                       const std::vector<ResultRow>& rows) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string stem = std::string("panel") + panel;
  const fs::path raw = fs::path(out_dir) / (stem + "_raw.csv");
  const fs::path agg = fs::path(out_dir) / (stem + "_agg.csv");

  std::ofstream raw_out(raw);
  if (!raw_out) throw Error(ErrorCode::io, "cannot write '" + raw.string() + "'");
  write_raw_csv(raw_out, rows);
  std::ofstream agg_out(agg);
  if (!agg_out) throw Error(ErrorCode::io, "cannot write '" + agg.string() + "'");
  write_aggregate_csv(agg_out, aggregate(rows));
  if (!raw_out || !agg_out) throw Error(ErrorCode::io, "failed writing panel CSVs");
}

}  // namespace predictability
