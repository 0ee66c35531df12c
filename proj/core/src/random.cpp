#include "mpsdfe/random.hpp"

namespace mpsdfe {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent + kGolden) ^ (index * 0xd1b54a32d192ed03ull + 1));
}

std::uint64_t stream_key(std::uint64_t seed, Phase phase, std::uint64_t index) noexcept {
  return derive_key(derive_key(seed, static_cast<std::uint64_t>(phase)), index);
}

Stream::result_type Stream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Stream::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

}  // namespace mpsdfe
