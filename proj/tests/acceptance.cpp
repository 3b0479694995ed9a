// acceptance.cpp
//
// Prints one [PASS]/[FAIL] line per acceptance criterion, with the measured
// numbers underneath, and exits non-zero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "predictability/ber.hpp"
#include "predictability/entropy.hpp"
#include "predictability/experiments.hpp"
#include "predictability/generators.hpp"
#include "predictability/oracle.hpp"
#include "test_support.hpp"

#ifndef PREDICTABILITY_CLI
#error "PREDICTABILITY_CLI must name the command-line binary"
#endif

namespace fs = std::filesystem;
using namespace predictability;

namespace {

constexpr std::size_t n15 = std::size_t{1} << 15;

struct Report {
  std::vector<std::string> lines;
  bool ok = true;

  void require(bool cond, const char* fmt, auto... args) {
    if (!cond) ok = false;
    char buf[512];
    if constexpr (sizeof...(args) == 0) {
      std::snprintf(buf, sizeof buf, "%s", fmt);
    } else {
      std::snprintf(buf, sizeof buf, fmt, args...);
    }
    lines.emplace_back(std::string(cond ? "      ok   " : "      BAD  ") + buf);
  }
};

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Mean estimate / abs_error per (q or M or r, method) from a panel run.
struct CellStats {
  double estimate = 0.0;
  double abs_error = 0.0;
  std::size_t runs = 0;
};

using Key = std::pair<double, Method>;

std::map<Key, CellStats> means_by(const std::vector<ResultRow>& rows,
                                  const std::function<double(const ResultRow&)>& key) {
  std::map<Key, CellStats> out;
  for (const auto& r : rows) {
    if (!r.estimate) continue;
    auto& c = out[{key(r), r.method}];
    c.estimate += *r.estimate;
    c.abs_error += r.abs_error.value_or(std::numeric_limits<double>::quiet_NaN());
    ++c.runs;
  }
  for (auto& [k, c] : out) {
    c.estimate /= static_cast<double>(c.runs);
    c.abs_error /= static_cast<double>(c.runs);
  }
  return out;
}

const CellStats& at(const std::map<Key, CellStats>& m, double x, Method method) {
  for (const auto& [k, c] : m) {
    if (k.second == method && std::abs(k.first - x) < 1e-9) return c;
  }
  throw std::runtime_error("no rows for grid value " + std::to_string(x));
}

LabeledDataset random_dataset(std::mt19937_64& rng) {
  const std::size_t m = 2 + rng() % 8;
  const std::size_t r = 1 + rng() % 3;
  const std::size_t samples = 5 + rng() % 200;
  std::vector<StateId> f, l;
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < r; ++j) f.push_back(static_cast<StateId>(rng() % 3));
    l.push_back(static_cast<StateId>(rng() % m));
  }
  return LabeledDataset(std::max<std::size_t>(m, 3), r, f, l);
}

Report criterion1() {
  Report rep;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const CountsTable t = build_counts(random_dataset(rng));
    worst = std::max(worst, std::abs(empirical_predictability(t) + plugin_ber(t) - 1.0));
  }
  rep.require(worst <= 4 * std::numeric_limits<double>::epsilon(),
              "max |empirical + plugin_ber - 1| = %.3g over 100 datasets", worst);
  return rep;
}

Report criterion2() {
  Report rep;
  double worst = 0.0;
  for (std::size_t m : {2u, 3u, 10u, 20u, 100u}) {
    const double lo = 1.0 / static_cast<double>(m);
    for (int k = 0; k < 50; ++k) {
      const double p = lo + (1.0 - lo) * (k + 0.5) / 50.0;
      worst = std::max(worst, std::abs(fano_solve(fano_rhs(p, m), m) - p));
    }
  }
  rep.require(worst <= 1e-8, "max round-trip error %.3g on the 50x5 grid", worst);
  bool boundary = true;
  for (std::size_t m : {2u, 3u, 10u, 20u, 100u}) {
    boundary = boundary && fano_solve(0.0, m) == 1.0 &&
               fano_solve(std::log2(static_cast<double>(m)), m) == 1.0 / static_cast<double>(m);
  }
  rep.require(boundary, "H = 0 gives 1 and H = log2 M gives 1/M exactly");
  return rep;
}

Report criterion3() {
  Report rep;
  int same = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t m = std::vector<std::size_t>{2, 3, 10}[seed % 3];
    const std::size_t n = 1 + (seed * 997 + 13) % 1000;
    const Series s = testing::random_series(m, n, 500 + seed);
    same += lz_match_lengths(s) == testing::naive_match_lengths(s.states());
  }
  rep.require(same == 50, "%d / 50 match-length vectors identical to the quadratic scan", same);
  return rep;
}

Report criterion4() {
  Report rep;
  {
    const double q = 0.8;
    const Series s = gen_markov3(q, n15, 4);
    double counts[3][3] = {};
    for (std::size_t t = 1; t < s.size(); ++t) counts[s[t - 1]][s[t]] += 1;
    const double want[3] = {q, 2.0 / 3.0 * (1 - q), 1.0 / 3.0 * (1 - q)};
    double worst = 0.0;
    for (int u = 0; u < 3; ++u) {
      const double total = counts[u][0] + counts[u][1] + counts[u][2];
      for (int d = 0; d < 3; ++d) {
        worst = std::max(worst, std::abs(counts[u][(u + d) % 3] / total - want[d]));
      }
    }
    rep.require(worst <= 0.02, "Markov3 q=0.8 max transition deviation %.4f", worst);
  }
  {
    const double q = 0.6;
    const Series s = gen_markov3(q, n15, 5);
    std::vector<std::vector<double>> rows(3, std::vector<double>(3, 0.0));
    for (std::size_t t = 1; t < s.size(); ++t) rows[s[t - 1]][s[t]] += 1;
    double chi = 0.0;
    for (int u = 0; u < 3; ++u) {
      std::vector<double> p(3);
      p[u] = q;
      p[(u + 1) % 3] = 2.0 / 3.0 * (1 - q);
      p[(u + 2) % 3] = 1.0 / 3.0 * (1 - q);
      chi += testing::chi_square(rows[u], p, rows[u][0] + rows[u][1] + rows[u][2]);
    }
    rep.require(chi < testing::chi_square_3sigma(6), "Markov3 chi2 = %.2f (limit %.2f)", chi,
                testing::chi_square_3sigma(6));
  }
  {
    const std::size_t m = 100;
    const double q = 0.6;
    const Series s = gen_additive(m, q, n15, 6);
    std::vector<double> obs(m, 0.0);
    for (std::size_t t = 2; t < s.size(); ++t) {
      obs[(s[t] + m - (s[t - 2] + s[t - 1] + 1) % m) % m] += 1;
    }
    std::vector<double> p(m, (1 - q) / static_cast<double>(m));
    p[0] += q;
    const double chi = testing::chi_square(obs, p, static_cast<double>(s.size() - 2));
    const double lim = testing::chi_square_3sigma(static_cast<double>(m - 1));
    rep.require(chi < lim, "Additive chi2 = %.2f (limit %.2f)", chi, lim);
  }
  {
    const std::size_t m = 20;
    const Series s = gen_copy(m, 0.1, 0.2, 0.3, n15, 7);
    std::vector<double> obs(4, 0.0);
    for (std::size_t t = 3; t < s.size(); ++t) {
      const StateId a = s[t - 3], b = s[t - 2], c = s[t - 1];
      if (a == b || b == c || a == c) continue;
      const StateId x = s[t];
      obs[x == c ? 0 : x == b ? 1 : x == a ? 2 : 3] += 1;
    }
    const double u = 0.4 / static_cast<double>(m);
    const std::vector<double> p = {0.1 + u, 0.2 + u, 0.3 + u, (m - 3) * u};
    const double chi = testing::chi_square(obs, p, obs[0] + obs[1] + obs[2] + obs[3]);
    rep.require(chi < testing::chi_square_3sigma(3), "Copy chi2 = %.2f (limit %.2f)", chi,
                testing::chi_square_3sigma(3));
  }
  return rep;
}

Report criterion5() {
  Report rep;
  const auto rows = run_panel(default_panel_config('B'), jobs());
  const auto m = means_by(rows, [](const ResultRow& r) { return *r.q; });
  for (int k = 8; k <= 18; ++k) {
    const double q = 0.05 * k;
    const auto& e = at(m, q, Method::entropy);
    const auto& b = at(m, q, Method::ber);
    rep.require(b.abs_error < e.abs_error, "q=%.2f  ber |err| %.4f < entropy |err| %.4f", q,
                b.abs_error, e.abs_error);
  }
  const double b08 = at(m, 0.05 * 16, Method::ber).estimate;
  const double e08 = at(m, 0.05 * 16, Method::entropy).estimate;
  rep.require(std::abs(b08 - 0.778) <= 0.02, "q=0.80  mean ber estimate %.4f = 0.778 +- 0.02",
              b08);
  rep.require(e08 > 0.8, "q=0.80  mean entropy estimate %.4f > 0.8", e08);
  return rep;
}

Report criterion6() {
  Report rep;
  const auto rows = run_panel(default_panel_config('D'), jobs());
  const auto m = means_by(rows, [](const ResultRow& r) { return *r.q; });
  for (int k = 0; k <= 8; ++k) {
    const double q = 0.1 * k;
    const auto& e = at(m, q, Method::entropy);
    const auto& b = at(m, q, Method::ber);
    rep.require(b.abs_error < e.abs_error, "q=%.1f  ber |err| %.4f < entropy |err| %.4f", q,
                b.abs_error, e.abs_error);
  }
  return rep;
}

Report criterion7() {
  Report rep;
  const auto rows_e = run_panel(default_panel_config('E'), jobs());
  bool invariant = true;
  for (const auto& a : rows_e) {
    for (const auto& b : rows_e) {
      if (a.method == Method::entropy && b.method == Method::entropy && a.run == b.run) {
        invariant = invariant && a.estimate == b.estimate;
      }
    }
  }
  rep.require(invariant, "entropy estimates identical across r within every run");

  const auto by_r = means_by(rows_e, [](const ResultRow& r) { return double(*r.cutoff); });
  for (int r = 1; r < 3; ++r) {
    const double lo = at(by_r, double(r), Method::ber).estimate;
    const double hi = at(by_r, double(r + 1), Method::ber).estimate;
    rep.require(lo <= hi, "ber mean r=%d %.4f <= r=%d %.4f", r, lo, r + 1, hi);
  }

  const auto rows_f = run_panel(default_panel_config('F'), jobs());
  const auto by_m = means_by(rows_f, [](const ResultRow& r) { return double(r.alphabet_size); });
  const std::vector<double> ms = {5, 10, 20, 50, 100};
  for (Method method : {Method::entropy, Method::ber}) {
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
      const double a = at(by_m, ms[i], method).estimate;
      const double b = at(by_m, ms[i + 1], method).estimate;
      rep.require(b <= a, "%s mean M=%g %.4f >= M=%g %.4f", to_string(method), ms[i], a,
                  ms[i + 1], b);
    }
  }
  return rep;
}

Report criterion8() {
  Report rep;
  std::uint64_t seed = 800;
  for (int k = 8; k <= 20; ++k) {
    const double q = 0.05 * k;
    const GeneratorSpec spec{Markov3Params{q}, n15, ++seed};
    const double plug = plugin_ber(build_counts(extract_features(generate(spec), 1)));
    const double exact = brute_force_ber(spec, 1, 1).value;
    rep.require(std::abs(plug - exact) <= 0.02, "Markov3 q=%.2f r=1  |%.4f - %.4f| <= 0.02", q,
                plug, exact);
  }
  for (std::size_t m : {10u, 100u}) {
    for (int k = 0; k <= 10; ++k) {
      const double q = 0.1 * k;
      const GeneratorSpec spec{AdditiveParams{m, q}, n15, ++seed};
      const double plug = plugin_ber(build_counts(extract_features(generate(spec), 2)));
      const double exact = brute_force_ber(spec, 2, 1).value;
      rep.require(std::abs(plug - exact) <= 0.02,
                  "Additive M=%zu q=%.1f r=2  |%.4f - %.4f| <= 0.02", m, q, plug, exact);
    }
  }
  return rep;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Report criterion9() {
  Report rep;
  const fs::path dir = fs::temp_directory_path() /
                       ("predictability_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](const std::string& sub, int j) {
    const std::string cmd = std::string(PREDICTABILITY_CLI) + " experiment --panel B --jobs " +
                            std::to_string(j) + " --out-dir " + (dir / sub).string();
    return std::system(cmd.c_str());
  };
  const int a = run("first", 1);
  const int b = run("second", 2);
  rep.require(a == 0 && b == 0, "both runs exit 0 (%d, %d)", a, b);
  for (const char* name : {"panelB_raw.csv", "panelB_agg.csv"}) {
    const std::string x = slurp(dir / "first" / name);
    const std::string y = slurp(dir / "second" / name);
    rep.require(!x.empty() && x == y, "%s byte-identical (%zu bytes)", name, x.size());
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return rep;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Report (*run)();
  };
  const Criterion criteria[] = {
      {1, "empirical predictability plus plug-in error equals one", criterion1},
      {2, "Fano inversion round trip and boundary values", criterion2},
      {3, "match lengths equal the quadratic reference", criterion3},
      {4, "generator transition frequencies and chi-square checks", criterion4},
      {5, "Markov3 q sweep: BER beats entropy, q=0.8 levels", criterion5},
      {6, "Additive M=100 q sweep: BER beats entropy for q <= 0.8", criterion6},
      {7, "Copy sweeps: r-invariance and monotone trends", criterion7},
      {8, "plug-in error within 0.02 of the exact Bayes error", criterion8},
      {9, "panel B CSVs are byte-identical across runs", criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Report rep;
    try {
      rep = c.run();
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.lines.push_back(std::string("      exception: ") + e.what());
    }
    std::printf("[%s] %d %s\n", rep.ok ? "PASS" : "FAIL", c.id, c.name);
    for (const auto& l : rep.lines) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
    failed += !rep.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
