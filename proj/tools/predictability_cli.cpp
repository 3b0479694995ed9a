// predictability_cli.cpp
//
//   predictability generate   --gen markov3|additive|copy [params] --n N --seed S --out FILE
//   predictability estimate   --method entropy|ber [--r R] --input FILE
//   predictability oracle     --gen ... [--r R] [--brute-force --horizon H --seed S]
//   predictability experiment --panel A..F [--config FILE] --out-dir DIR [--jobs J]
//
// Standard output carries CSV (or the generate summary) only; diagnostics go
// to standard error. Exit status: 0 success, 1 usage error, 2 runtime/data error.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "predictability/ber.hpp"
#include "predictability/core.hpp"
#include "predictability/entropy.hpp"
#include "predictability/experiments.hpp"
#include "predictability/generators.hpp"
#include "predictability/oracle.hpp"

namespace pr = predictability;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

struct GeneratorFlags {
  std::string gen;
  double q = -1.0;
  std::size_t alphabet_size = 0;
  double q1 = 0.1;
  double q2 = 0.2;
  double q3 = 0.3;
};

void add_generator_flags(CLI::App* cmd, GeneratorFlags& f) {
  cmd->add_option("--gen", f.gen, "Generator: markov3, additive or copy")
      ->required()
      ->check(CLI::IsMember({"markov3", "additive", "copy"}));
  cmd->add_option("--q", f.q, "Markov3/Additive probability q")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--M", f.alphabet_size, "Alphabet size (additive, copy)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  cmd->add_option("--q1", f.q1, "Copy weight for the previous state")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--q2", f.q2, "Copy weight two steps back")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--q3", f.q3, "Copy weight three steps back")->check(CLI::Range(0.0, 1.0));
}

// Usage errors are reported as CLI::ValidationError so they exit with 1.
pr::GeneratorParams to_params(const GeneratorFlags& f) {
  if (f.gen == "markov3") {
    if (f.q < 0) throw CLI::ValidationError("--q", "required for --gen markov3");
    if (f.alphabet_size != 0 && f.alphabet_size != 3) {
      throw CLI::ValidationError("--M", "markov3 has M = 3");
    }
    return pr::Markov3Params{f.q};
  }
  if (f.alphabet_size == 0) throw CLI::ValidationError("--M", "required for --gen " + f.gen);
  if (f.gen == "additive") {
    if (f.q < 0) throw CLI::ValidationError("--q", "required for --gen additive");
    return pr::AdditiveParams{f.alphabet_size, f.q};
  }
  if (f.q1 + f.q2 + f.q3 > 1.0 + 1e-12) {
    throw CLI::ValidationError("--q1/--q2/--q3", "weights must sum to at most 1");
  }
  return pr::CopyParams{f.alphabet_size, f.q1, f.q2, f.q3};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void print_param_columns(const pr::GeneratorParams& p) {
  const char* name = pr::generator_name(p);
  std::cout << name << ',' << pr::alphabet_size(p) << ',';
  if (const auto* c = std::get_if<pr::CopyParams>(&p)) {
    std::cout << ',' << num(c->q1) << ',' << num(c->q2) << ',' << num(c->q3) << ',';
  } else if (const auto* m = std::get_if<pr::Markov3Params>(&p)) {
    std::cout << num(m->q) << ",,,,";
  } else {
    std::cout << num(std::get<pr::AdditiveParams>(p).q) << ",,,,";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictability limits of discrete time series"};
  app.require_subcommand(1);

  GeneratorFlags gen_flags;
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic series file");
  add_generator_flags(generate, gen_flags);
  generate->add_option("--n", gen_n, "Series length")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_seed, "RNG seed")->required();
  generate->add_option("--out", gen_out, "Output series file")->required();

  std::string est_method;
  std::optional<std::size_t> est_r;
  std::string est_input;
  auto* estimate = app.add_subcommand("estimate", "Estimate predictability of a series file");
  estimate->add_option("--method", est_method, "entropy or ber")
      ->required()
      ->check(CLI::IsMember({"entropy", "ber"}));
  estimate->add_option("--r", est_r, "History cutoff (ber)")->check(CLI::PositiveNumber);
  estimate->add_option("--input", est_input, "Series file")->required();

  GeneratorFlags orc_flags;
  std::optional<std::size_t> orc_r;
  bool orc_brute = false;
  std::size_t orc_horizon = 1000000;
  std::uint64_t orc_seed = 0;
  auto* oracle = app.add_subcommand("oracle", "Print the analytic truth as CSV");
  add_generator_flags(oracle, orc_flags);
  oracle->add_option("--r", orc_r, "History cutoff (default: generator memory)")
      ->check(CLI::PositiveNumber);
  oracle->add_flag("--brute-force", orc_brute, "Also compute the brute-force Bayes error");
  oracle->add_option("--horizon", orc_horizon, "Monte Carlo steps (copy)")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", orc_seed, "Monte Carlo seed (copy)");

  std::string exp_panel;
  std::string exp_config;
  std::string exp_out_dir;
  std::size_t exp_jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* experiment = app.add_subcommand("experiment", "Run a figure panel sweep");
  experiment->add_option("--panel", exp_panel, "Panel letter A-F")
      ->required()
      ->check(CLI::IsMember({"A", "B", "C", "D", "E", "F"}));
  experiment->add_option("--config", exp_config, "key = value overrides")
      ->check(CLI::ExistingFile);
  experiment->add_option("--out-dir", exp_out_dir, "Directory for the CSV files")->required();
  experiment->add_option("--jobs", exp_jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);

    if (*generate) {
      const pr::GeneratorSpec spec{to_params(gen_flags), gen_n, gen_seed};
      const pr::Series s = pr::generate(spec);
      pr::write_series_file(gen_out, s);
      std::cout << s.alphabet_size() << ' ' << s.size() << ' ' << gen_seed << '\n';
    } else if (*estimate) {
      if (est_method == "ber" && !est_r) {
        throw CLI::RequiredError("--r (with --method ber)");
      }
      const pr::Series s = pr::read_series_file(est_input);
      std::optional<std::size_t> cutoff;
      pr::PredictabilityEstimate est;
      if (est_method == "entropy") {
        if (est_r) std::cerr << "warning: --r is ignored by --method entropy\n";
        est = pr::entropy_predictability(s);
      } else {
        cutoff = est_r;
        est = pr::ber_predictability(pr::extract_features(s, *est_r));
      }
      std::cout << "panel,generator,M,q,q1,q2,q3,r,n,run,method,estimate,lower,upper,"
                   "truth,abs_error\n";
      std::cout << ",," << s.alphabet_size() << ",,,,,"
                << (cutoff ? std::to_string(*cutoff) : std::string()) << ',' << s.size()
                << ",," << est_method << ',' << num(est.point) << ',' << num(est.lower)
                << ',' << num(est.upper) << ",,\n";
    } else if (*oracle) {
      const pr::GeneratorParams params = to_params(orc_flags);
      const std::size_t r = orc_r.value_or(
          std::holds_alternative<pr::Markov3Params>(params) ? 1
          : std::holds_alternative<pr::AdditiveParams>(params) ? 2
                                                               : 3);
      const pr::TruthRecord rec = pr::truth_record({params, 1, orc_seed}, r);
      std::cout << "generator,M,q,q1,q2,q3,r,true_predictability,true_ber";
      std::optional<pr::BruteForceBer> brute;
      if (orc_brute) {
        brute = pr::brute_force_ber({params, 1, orc_seed}, r, orc_horizon);
        std::cout << ",brute_force_ber,brute_force_stderr";
      }
      std::cout << '\n';
      print_param_columns(params);
      std::cout << r << ',' << num(rec.true_predictability) << ',' << num(rec.true_ber);
      if (brute) std::cout << ',' << num(brute->value) << ',' << num(brute->standard_error);
      std::cout << '\n';
    } else if (*experiment) {
      pr::PanelConfig config = pr::default_panel_config(exp_panel[0]);
      if (!exp_config.empty()) {
        std::ifstream in(exp_config);
        if (!in) throw pr::Error(pr::ErrorCode::io, "cannot open '" + exp_config + "'");
        config = pr::parse_panel_config(in, config);
      }
      const auto rows = pr::run_panel(config, exp_jobs);
      for (const auto& row : rows) {
        if (!row.error.empty()) {
          std::cerr << "cell M=" << row.alphabet_size << " n=" << row.length
                    << " run=" << row.run << " " << pr::to_string(row.method) << ": "
                    << row.error << '\n';
        }
      }
      pr::write_panel_files(exp_out_dir, config.panel, rows);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_usage;
  } catch (const pr::Error& e) {
    std::cerr << "error (" << pr::to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == pr::ErrorCode::parameter ? exit_usage : exit_runtime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return 0;
}
