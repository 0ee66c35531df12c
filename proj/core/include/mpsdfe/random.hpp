#pragma once

#include <cstdint>
#include <limits>

namespace mpsdfe {

/// Independent purposes a stream can be drawn for. Part of every stream key,
/// so e.g. setting #7 and shot batch #7 never share random bits.
enum class Phase : std::uint64_t {
  Target = 1,
  Settings = 2,
  Sorting = 3,
  Shots = 4,
  Trial = 5,
  Method = 6,
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Key of the child stream `index` of `parent`.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept;

/// Key of stream `(phase, index)` under a master seed.
std::uint64_t stream_key(std::uint64_t seed, Phase phase, std::uint64_t index) noexcept;

/// Counter-based SplitMix64 stream. The output at draw k depends only on
/// (key, k), so streams keyed by index can be consumed in any order or in
/// parallel with identical results.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mpsdfe
