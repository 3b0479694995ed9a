// generators.hpp
//
// Seeded synthetic series with known predictability:
//
//   Markov3   three states, first-order chain with self-transition q, the
//             cyclic successor (A->B->C->A) with 2/3(1-q), the remaining
//             state with 1/3(1-q).
//   Additive  M states; with probability q the next state is S_{i+j}
//             (1-based, wrapped once by M) where S_i, S_j are the two
//             previous states, otherwise uniform.
//   Copy      M states; the next state repeats the state 1, 2 or 3 steps
//             back with probabilities q1, q2, q3, otherwise uniform.
//
// Every series draws from its own std::mt19937_64 stream seeded with the
// spec's seed. Uniform variates are derived from raw engine output (not from
// <random> distributions, whose algorithms are implementation-defined), so a
// (spec, seed) pair yields the same series on every platform.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "predictability/core.hpp"

namespace predictability {

struct Markov3Params {
  double q = 0.0;
};

struct AdditiveParams {
  std::size_t alphabet_size = 2;
  double q = 0.0;
};

struct CopyParams {
  std::size_t alphabet_size = 2;
  double q1 = 0.1;
  double q2 = 0.2;
  double q3 = 0.3;
};

using GeneratorParams = std::variant<Markov3Params, AdditiveParams, CopyParams>;

struct GeneratorSpec {
  GeneratorParams params;
  std::size_t length = 1;
  std::uint64_t seed = 0;
};

/// "markov3", "additive" or "copy".
const char* generator_name(const GeneratorParams& params) noexcept;
std::size_t alphabet_size(const GeneratorParams& params) noexcept;

/// Throws Error(parameter) when probabilities fall outside [0,1], the copy
/// weights sum above 1, M < 2 or n < 1.
void validate(const GeneratorSpec& spec);

Series generate(const GeneratorSpec& spec);

Series gen_markov3(double q, std::size_t n, std::uint64_t seed);
Series gen_additive(std::size_t alphabet_size, double q, std::size_t n,
                    std::uint64_t seed);
Series gen_copy(std::size_t alphabet_size, double q1, double q2, double q3,
                std::size_t n, std::uint64_t seed);

/// Random source used by every generator.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound), unbiased (modulo with rejection).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t operator()() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace predictability
