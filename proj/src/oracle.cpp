// oracle.cpp
#include "predictability/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace predictability {

namespace {

constexpr double max_windows = 1e6;

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) v *= base;
  return v;
}

void check_feasible(std::size_t alphabet_size, std::size_t cutoff) {
  if (std::pow(static_cast<double>(alphabet_size), static_cast<double>(cutoff)) >
      max_windows) {
    throw Error(ErrorCode::infeasible,
                "window space M^r = " + std::to_string(alphabet_size) + "^" +
                    std::to_string(cutoff) + " exceeds 10^6");
  }
}

Eigen::Matrix3d markov3_matrix(double q) {
  const double next = 2.0 / 3.0 * (1.0 - q);
  const double other = 1.0 / 3.0 * (1.0 - q);
  Eigen::Matrix3d p;
  p << q, next, other,
       other, q, next,
       next, other, q;
  return p;
}

// Batch-means standard error of the mean of a per-step statistic.
class BatchMeans {
public:
  BatchMeans(std::size_t steps, std::size_t batches)
      : batch_size_(std::max<std::size_t>(1, steps / batches)) {}

  void add(double v) {
    sum_ += v;
    batch_sum_ += v;
    ++count_;
    if (++in_batch_ == batch_size_) {
      batch_means_.push_back(batch_sum_ / static_cast<double>(batch_size_));
      batch_sum_ = 0.0;
      in_batch_ = 0;
    }
  }

  double mean() const { return sum_ / static_cast<double>(count_); }

  double standard_error() const {
    const std::size_t b = batch_means_.size();
    if (b < 2) return 0.0;
    double m = 0.0;
    for (double v : batch_means_) m += v;
    m /= static_cast<double>(b);
    double ss = 0.0;
    for (double v : batch_means_) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
  }

private:
  std::size_t batch_size_;
  std::size_t in_batch_ = 0;
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double batch_sum_ = 0.0;
  std::vector<double> batch_means_;
};

BruteForceBer copy_monte_carlo(const CopyParams& p, std::size_t cutoff,
                               std::size_t horizon, std::uint64_t seed) {
  if (horizon < 1) throw Error(ErrorCode::parameter, "horizon must be positive");
  const std::size_t m = p.alphabet_size;
  const Series path = gen_copy(m, p.q1, p.q2, p.q3, horizon + 3, seed);
  const auto s = path.states();
  const double noise = (1.0 - p.q1 - p.q2 - p.q3) / static_cast<double>(m);
  BatchMeans acc(horizon, 100);

  if (cutoff >= 3) {
    // Given the last three states the next-state law is known exactly.
    for (std::size_t t = 3; t < s.size(); ++t) {
      const StateId c = s[t - 1];
      const StateId b = s[t - 2];
      const StateId a = s[t - 3];
      const double pc = noise + p.q1 + (b == c ? p.q2 : 0.0) + (a == c ? p.q3 : 0.0);
      const double pb = noise + p.q2 + (b == c ? p.q1 : 0.0) + (a == b ? p.q3 : 0.0);
      const double pa = noise + p.q3 + (a == c ? p.q1 : 0.0) + (a == b ? p.q2 : 0.0);
      acc.add(std::max({pa, pb, pc}));
    }
  } else {
    // Shorter windows: majority rule fitted on the whole path, then scored.
    const std::size_t windows = ipow(m, cutoff);
    std::vector<std::uint64_t> table(windows * m, 0);
    auto window_at = [&](std::size_t t) {
      std::size_t w = 0;
      for (std::size_t j = t - cutoff; j < t; ++j) w = w * m + s[j];
      return w;
    };
    for (std::size_t t = 3; t < s.size(); ++t) ++table[window_at(t) * m + s[t]];
    std::vector<StateId> rule(windows);
    for (std::size_t w = 0; w < windows; ++w) {
      const auto row = table.begin() + static_cast<std::ptrdiff_t>(w * m);
      rule[w] = static_cast<StateId>(std::max_element(row, row + static_cast<std::ptrdiff_t>(m)) - row);
    }
    for (std::size_t t = 3; t < s.size(); ++t) {
      acc.add(rule[window_at(t)] == s[t] ? 1.0 : 0.0);
    }
  }
  return {1.0 - acc.mean(), acc.standard_error(), false};
}

}  // namespace

double true_predictability(const GeneratorParams& params, std::size_t cutoff) {
  if (cutoff < 1) throw Error(ErrorCode::invalid_cutoff, "cutoff r must be at least 1");
  if (const auto* p = std::get_if<Markov3Params>(&params)) {
    if (p->q < 0.4 || p->q > 1.0) {
      throw Error(ErrorCode::out_of_validated_range,
                  "Markov3 truth T = q only holds for q in [0.4, 1]");
    }
    return p->q;
  }
  if (const auto* p = std::get_if<AdditiveParams>(&params)) {
    if (cutoff < 2) {
      throw Error(ErrorCode::insufficient_memory,
                  "Additive truth needs both anterior states (r >= 2)");
    }
    return p->q + (1.0 - p->q) / static_cast<double>(p->alphabet_size);
  }
  const auto& p = std::get<CopyParams>(params);
  const double weights[3] = {p.q1, p.q2, p.q3};
  const double best = *std::max_element(weights, weights + std::min<std::size_t>(cutoff, 3));
  return best + (1.0 - p.q1 - p.q2 - p.q3) / static_cast<double>(p.alphabet_size);
}

TruthRecord truth_record(const GeneratorSpec& spec, std::size_t cutoff) {
  validate(spec);
  TruthRecord rec;
  rec.spec = spec;
  rec.cutoff = cutoff;
  rec.true_predictability = true_predictability(spec.params, cutoff);
  rec.true_ber = 1.0 - rec.true_predictability;
  return rec;
}

std::vector<double> markov3_stationary(double q) {
  const Eigen::Matrix3d p = markov3_matrix(q);
  Eigen::EigenSolver<Eigen::Matrix3d> solver(p.transpose());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < 3; ++i) {
    if (std::abs(solver.eigenvalues()[i] - 1.0) <
        std::abs(solver.eigenvalues()[best] - 1.0)) {
      best = i;
    }
  }
  const Eigen::Vector3d v = solver.eigenvectors().col(best).real();
  const Eigen::Vector3d pi = v / v.sum();
  return {pi[0], pi[1], pi[2]};
}

NextStateLaw markov3_law(double q) {
  const Eigen::Matrix3d p = markov3_matrix(q);
  return [p](std::span<const StateId> window, std::span<double> out) {
    const StateId cur = window.back();
    for (int s = 0; s < 3; ++s) out[s] = p(cur, s);
  };
}

NextStateLaw additive_law(std::size_t alphabet_size, double q) {
  return [alphabet_size, q](std::span<const StateId> window, std::span<double> out) {
    const double noise = (1.0 - q) / static_cast<double>(alphabet_size);
    std::fill(out.begin(), out.end(), noise);
    const std::size_t k = window.size();
    out[(window[k - 2] + window[k - 1] + 1) % alphabet_size] += q;
  };
}

NextStateLaw copy_law(std::size_t alphabet_size, double q1, double q2, double q3) {
  return [=](std::span<const StateId> window, std::span<double> out) {
    const double noise = (1.0 - q1 - q2 - q3) / static_cast<double>(alphabet_size);
    std::fill(out.begin(), out.end(), noise);
    const std::size_t k = window.size();
    out[window[k - 1]] += q1;
    out[window[k - 2]] += q2;
    out[window[k - 3]] += q3;
  };
}

double window_chain_ber(std::size_t alphabet_size, std::size_t order,
                        const NextStateLaw& law, std::size_t cutoff) {
  const std::size_t m = alphabet_size;
  if (order < 1 || cutoff < 1) {
    throw Error(ErrorCode::parameter, "order and cutoff must be at least 1");
  }
  if (std::pow(static_cast<double>(m), static_cast<double>(order + 1)) > 2e7) {
    throw Error(ErrorCode::infeasible, "window chain too large for exact analysis");
  }
  const std::size_t states = ipow(m, order);
  const std::size_t tail = states / m;

  // Tabulate the law once: row u holds P(next = s | window u).
  std::vector<double> law_table(states * m);
  std::vector<StateId> window(order);
  for (std::size_t u = 0; u < states; ++u) {
    std::size_t code = u;
    for (std::size_t j = order; j-- > 0;) {
      window[j] = static_cast<StateId>(code % m);
      code /= m;
    }
    law(window, std::span<double>(law_table).subspan(u * m, m));
  }

  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states);
  for (int iter = 0; iter < 200000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < states; ++u) {
      const std::size_t base = (u % tail) * m;
      for (std::size_t s = 0; s < m; ++s) next[base + s] += pi[u] * law_table[u * m + s];
    }
    double diff = 0.0;
    for (std::size_t u = 0; u < states; ++u) {
      const double v = 0.5 * (pi[u] + next[u]);
      diff += std::abs(v - pi[u]);
      pi[u] = v;
    }
    if (diff < 1e-15) break;
  }

  // Marginalize onto the last min(r, k) states; longer windows add nothing
  // beyond the chain's memory.
  const std::size_t keep = std::min(cutoff, order);
  const std::size_t kept_windows = ipow(m, keep);
  std::vector<double> joint(kept_windows * m, 0.0);
  for (std::size_t u = 0; u < states; ++u) {
    const std::size_t w = u % kept_windows;
    for (std::size_t s = 0; s < m; ++s) joint[w * m + s] += pi[u] * law_table[u * m + s];
  }
  double hit = 0.0;
  for (std::size_t w = 0; w < kept_windows; ++w) {
    const auto row = joint.begin() + static_cast<std::ptrdiff_t>(w * m);
    hit += *std::max_element(row, row + static_cast<std::ptrdiff_t>(m));
  }
  return std::max(0.0, 1.0 - hit);
}

BruteForceBer brute_force_ber(const GeneratorSpec& spec, std::size_t cutoff,
                              std::size_t horizon) {
  validate(spec);
  if (cutoff < 1) throw Error(ErrorCode::invalid_cutoff, "cutoff r must be at least 1");
  check_feasible(alphabet_size(spec.params), cutoff);

  if (const auto* p = std::get_if<Markov3Params>(&spec.params)) {
    // First-order chain: only the latest state matters for any r >= 1.
    const auto pi = markov3_stationary(p->q);
    const Eigen::Matrix3d tm = markov3_matrix(p->q);
    double hit = 0.0;
    for (int u = 0; u < 3; ++u) hit += pi[u] * tm.row(u).maxCoeff();
    return {std::max(0.0, 1.0 - hit), 0.0, true};
  }
  if (const auto* p = std::get_if<AdditiveParams>(&spec.params)) {
    return {window_chain_ber(p->alphabet_size, 2, additive_law(p->alphabet_size, p->q),
                             cutoff),
            0.0, true};
  }
  return copy_monte_carlo(std::get<CopyParams>(spec.params), cutoff, horizon, spec.seed);
}

}  // namespace predictability
