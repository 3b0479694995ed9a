// generators.cpp
#include "predictability/generators.hpp"

#include <cmath>
#include <vector>

namespace predictability {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::parameter,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

void check_common(std::size_t alphabet_size, std::size_t n) {
  if (alphabet_size < 2) {
    throw Error(ErrorCode::parameter, "M must be at least 2");
  }
  if (n < 1) throw Error(ErrorCode::parameter, "n must be at least 1");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the low (2^64 mod bound) values so the modulo is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x = engine_();
  while (x < threshold) x = engine_();
  return x % bound;
}

const char* generator_name(const GeneratorParams& params) noexcept {
  return std::visit(overloaded{
                        [](const Markov3Params&) { return "markov3"; },
                        [](const AdditiveParams&) { return "additive"; },
                        [](const CopyParams&) { return "copy"; },
                    },
                    params);
}

std::size_t alphabet_size(const GeneratorParams& params) noexcept {
  return std::visit(overloaded{
                        [](const Markov3Params&) -> std::size_t { return 3; },
                        [](const AdditiveParams& p) { return p.alphabet_size; },
                        [](const CopyParams& p) { return p.alphabet_size; },
                    },
                    params);
}

void validate(const GeneratorSpec& spec) {
  std::visit(overloaded{
                 [&](const Markov3Params& p) {
                   check_probability(p.q, "q");
                   check_common(3, spec.length);
                 },
                 [&](const AdditiveParams& p) {
                   check_probability(p.q, "q");
                   check_common(p.alphabet_size, spec.length);
                 },
                 [&](const CopyParams& p) {
                   check_probability(p.q1, "q1");
                   check_probability(p.q2, "q2");
                   check_probability(p.q3, "q3");
                   // Allow for decimal inputs such as 0.1 + 0.2 + 0.7.
                   if (p.q1 + p.q2 + p.q3 > 1.0 + 1e-12) {
                     throw Error(ErrorCode::parameter, "q1 + q2 + q3 must not exceed 1");
                   }
                   check_common(p.alphabet_size, spec.length);
                 },
             },
             spec.params);
}

Series generate(const GeneratorSpec& spec) {
  return std::visit(
      overloaded{
          [&](const Markov3Params& p) { return gen_markov3(p.q, spec.length, spec.seed); },
          [&](const AdditiveParams& p) {
            return gen_additive(p.alphabet_size, p.q, spec.length, spec.seed);
          },
          [&](const CopyParams& p) {
            return gen_copy(p.alphabet_size, p.q1, p.q2, p.q3, spec.length, spec.seed);
          },
      },
      spec.params);
}

Series gen_markov3(double q, std::size_t n, std::uint64_t seed) {
  validate({Markov3Params{q}, n, seed});
  Rng rng(seed);
  std::vector<StateId> states(n);
  states[0] = static_cast<StateId>(rng.below(3));
  const double to_next = q + 2.0 / 3.0 * (1.0 - q);
  for (std::size_t t = 1; t < n; ++t) {
    const StateId cur = states[t - 1];
    const double u = rng.uniform();
    if (u < q) {
      states[t] = cur;
    } else if (u < to_next) {
      states[t] = (cur + 1) % 3;
    } else {
      states[t] = (cur + 2) % 3;
    }
  }
  return Series(3, std::move(states));
}

Series gen_additive(std::size_t alphabet_size, double q, std::size_t n,
                    std::uint64_t seed) {
  validate({AdditiveParams{alphabet_size, q}, n, seed});
  Rng rng(seed);
  const auto m = static_cast<StateId>(alphabet_size);
  std::vector<StateId> states(n);
  for (std::size_t t = 0; t < std::min<std::size_t>(2, n); ++t) {
    states[t] = static_cast<StateId>(rng.below(m));
  }
  for (std::size_t t = 2; t < n; ++t) {
    if (rng.uniform() < q) {
      // 1-based k = i + j, wrapped by M, is (i0 + j0 + 1) mod M in 0-based.
      states[t] = (states[t - 2] + states[t - 1] + 1) % m;
    } else {
      states[t] = static_cast<StateId>(rng.below(m));
    }
  }
  return Series(alphabet_size, std::move(states));
}

Series gen_copy(std::size_t alphabet_size, double q1, double q2, double q3,
                std::size_t n, std::uint64_t seed) {
  validate({CopyParams{alphabet_size, q1, q2, q3}, n, seed});
  Rng rng(seed);
  const auto m = static_cast<StateId>(alphabet_size);
  std::vector<StateId> states(n);
  for (std::size_t t = 0; t < std::min<std::size_t>(3, n); ++t) {
    states[t] = static_cast<StateId>(rng.below(m));
  }
  const double c1 = q1;
  const double c2 = q1 + q2;
  const double c3 = q1 + q2 + q3;
  for (std::size_t t = 3; t < n; ++t) {
    const double u = rng.uniform();
    if (u < c1) {
      states[t] = states[t - 1];
    } else if (u < c2) {
      states[t] = states[t - 2];
    } else if (u < c3) {
      states[t] = states[t - 3];
    } else {
      states[t] = static_cast<StateId>(rng.below(m));
    }
  }
  return Series(alphabet_size, std::move(states));
}

}  // namespace predictability
