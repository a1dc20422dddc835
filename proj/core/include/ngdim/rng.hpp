#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace ngdim {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). The
// output for a given (key, counter) is fixed by the algorithm, so streams are
// reproducible bit-for-bit on every platform.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t key = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // The raw bijection; exposed for known-answer tests.
  static Block encrypt(Block counter, Key key) noexcept;

 private:
  void refill() noexcept;

  Key key_;
  Block counter_;
  Block buffer_{};
  unsigned next_ = 4;
};

// Mixes a master seed with a sequence of indices into an independent 64-bit
// stream seed (SplitMix64 finalizer chain). Used for every
// "hash(seed, index)" stream derivation in the library.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                          Rest... rest) noexcept {
  return derive_seed(derive_seed(seed, index),
                     static_cast<std::uint64_t>(rest)...);
}

// Distribution front-end over Philox4x32. The transforms are implemented here
// rather than taken from <random> because the standard distributions are
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : engine_(seed) {}

  std::uint32_t next_u32() noexcept { return engine_(); }
  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform on (0, 1).
  double uniform_open() noexcept;
  // Uniform integer in [0, n); n must be in [1, 2^32].
  std::size_t index(std::size_t n) noexcept;

  double normal() noexcept;
  double gamma(double shape) noexcept;
  double chi_squared(double df) noexcept { return 2.0 * gamma(0.5 * df); }

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ngdim
