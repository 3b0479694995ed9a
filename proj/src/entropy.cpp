// entropy.cpp
#include "predictability/entropy.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace predictability {

namespace {

// Suffix automaton over the whole series. Each state also records the end
// position of the first occurrence of its strings, which tells us whether a
// substring already occurred entirely before a given position.
class SuffixAutomaton {
public:
  static constexpr std::int32_t none = -1;

  explicit SuffixAutomaton(std::span<const StateId> text) {
    const std::size_t cap = 2 * text.size() + 1;
    len_.reserve(cap);
    link_.reserve(cap);
    first_end_.reserve(cap);
    head_.reserve(cap);
    edges_.reserve(3 * text.size() + 1);
    new_state(0, none, -1);
    for (std::size_t i = 0; i < text.size(); ++i) {
      extend(text[i], static_cast<std::int32_t>(i));
    }
  }

  std::int32_t next(std::int32_t state, StateId symbol) const {
    for (std::int32_t e = head_[state]; e != none; e = edges_[e].next) {
      if (edges_[e].symbol == symbol) return edges_[e].target;
    }
    return none;
  }

  std::int32_t len(std::int32_t state) const { return len_[state]; }
  std::int32_t link(std::int32_t state) const { return link_[state]; }
  std::int32_t first_end(std::int32_t state) const { return first_end_[state]; }

private:
  struct Edge {
    StateId symbol;
    std::int32_t target;
    std::int32_t next;
  };

  std::int32_t new_state(std::int32_t len, std::int32_t link, std::int32_t first_end) {
    len_.push_back(len);
    link_.push_back(link);
    first_end_.push_back(first_end);
    head_.push_back(none);
    return static_cast<std::int32_t>(len_.size() - 1);
  }

  void add_edge(std::int32_t from, StateId symbol, std::int32_t to) {
    edges_.push_back({symbol, to, head_[from]});
    head_[from] = static_cast<std::int32_t>(edges_.size() - 1);
  }

  void redirect(std::int32_t from, StateId symbol, std::int32_t to) {
    for (std::int32_t e = head_[from]; e != none; e = edges_[e].next) {
      if (edges_[e].symbol == symbol) {
        edges_[e].target = to;
        return;
      }
    }
  }

  void extend(StateId c, std::int32_t pos) {
    const std::int32_t cur = new_state(len_[last_] + 1, none, pos);
    std::int32_t p = last_;
    while (p != none && next(p, c) == none) {
      add_edge(p, c, cur);
      p = link_[p];
    }
    if (p == none) {
      link_[cur] = 0;
    } else {
      const std::int32_t q = next(p, c);
      if (len_[p] + 1 == len_[q]) {
        link_[cur] = q;
      } else {
        const std::int32_t clone = new_state(len_[p] + 1, link_[q], first_end_[q]);
        for (std::int32_t e = head_[q]; e != none; e = edges_[e].next) {
          add_edge(clone, edges_[e].symbol, edges_[e].target);
        }
        while (p != none && next(p, c) == q) {
          redirect(p, c, clone);
          p = link_[p];
        }
        link_[q] = clone;
        link_[cur] = clone;
      }
    }
    last_ = cur;
  }

  std::vector<std::int32_t> len_;
  std::vector<std::int32_t> link_;
  std::vector<std::int32_t> first_end_;
  std::vector<std::int32_t> head_;
  std::vector<Edge> edges_;
  std::int32_t last_ = 0;
};

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

std::vector<std::size_t> lz_match_lengths(const Series& series) {
  const auto text = series.states();
  const std::size_t n = text.size();
  if (n > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max() / 2)) {
    throw Error(ErrorCode::parameter, "series too long for the match-length index");
  }
  const SuffixAutomaton sam(text);

  // (state, matched) always describes text[i, i + matched), a substring whose
  // first occurrence ends before i. Dropping the leading symbol keeps that
  // property for i + 1, so matched shrinks by at most one per step.
  std::vector<std::size_t> lambda(n);
  std::int32_t state = 0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (i + matched < n) {
      const std::int32_t to = sam.next(state, text[i + matched]);
      if (to == SuffixAutomaton::none ||
          sam.first_end(to) >= static_cast<std::int32_t>(i)) {
        break;
      }
      state = to;
      ++matched;
    }
    lambda[i] = matched + 1;
    if (matched > 0) {
      --matched;
      if (static_cast<std::int32_t>(matched) <= sam.len(sam.link(state))) {
        state = sam.link(state);
      }
    }
  }
  return lambda;
}

EntropyEstimate lz_entropy_rate(const Series& series) {
  const std::size_t n = series.size();
  if (n < 2) {
    throw Error(ErrorCode::insufficient_data,
                "entropy-rate estimation needs at least 2 states");
  }
  const auto lambda = lz_match_lengths(series);
  double sum = 0.0;
  for (std::size_t l : lambda) sum += static_cast<double>(l);
  const double nd = static_cast<double>(n);
  return {nd * std::log2(nd) / sum, n};
}

double fano_rhs(double p, std::size_t alphabet_size) {
  const double m = static_cast<double>(alphabet_size);
  return -plogp(p) - plogp(1.0 - p) + (1.0 - p) * std::log2(m - 1.0);
}

double fano_solve(double entropy, std::size_t alphabet_size) {
  if (alphabet_size < 2) {
    throw Error(ErrorCode::parameter, "Fano inversion needs M >= 2");
  }
  if (std::isnan(entropy)) {
    throw Error(ErrorCode::parameter, "entropy must not be NaN");
  }
  const double m = static_cast<double>(alphabet_size);
  if (entropy >= std::log2(m)) return 1.0 / m;
  if (entropy <= 0.0) return 1.0;

  // fano_rhs decreases strictly from log2 M at 1/M to 0 at 1.
  double lo = 1.0 / m;
  double hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (fano_rhs(mid, alphabet_size) > entropy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PredictabilityEstimate entropy_predictability(const Series& series) {
  const EntropyEstimate h = lz_entropy_rate(series);
  const double p = fano_solve(h.bits_per_symbol, series.alphabet_size());
  PredictabilityEstimate est;
  est.lower = est.upper = est.point = p;
  est.method = Method::entropy;
  est.meta.alphabet_size = series.alphabet_size();
  est.meta.length = series.size();
  return est;
}

}  // namespace predictability
