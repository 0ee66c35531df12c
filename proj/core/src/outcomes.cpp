#include "mpsdfe/outcomes.hpp"

#include <algorithm>

namespace mpsdfe {

OutcomeHistogram make_histogram(std::span<const SignVector> shots) {
  std::vector<SignVector> sorted(shots.begin(), shots.end());
  std::sort(sorted.begin(), sorted.end());
  OutcomeHistogram out;
  for (auto& s : sorted) {
    if (!out.empty() && out.back().signs == s) ++out.back().count;
    else out.push_back({std::move(s), 1});
  }
  return out;
}

std::vector<SignVector> expand_histogram(const OutcomeHistogram& histogram) {
  std::vector<SignVector> out;
  out.reserve(total_shots(histogram));
  for (const auto& o : histogram)
    for (std::uint64_t k = 0; k < o.count; ++k) out.push_back(o.signs);
  return out;
}

std::uint64_t total_shots(const OutcomeHistogram& histogram) {
  std::uint64_t total = 0;
  for (const auto& o : histogram) total += o.count;
  return total;
}

}  // namespace mpsdfe
