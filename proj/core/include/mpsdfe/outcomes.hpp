#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpsdfe/pauli.hpp"

namespace mpsdfe {

struct OutcomeCount {
  SignVector signs;
  std::uint64_t count = 0;
};

/// Distinct sign vectors with multiplicities, sorted by sign vector.
using OutcomeHistogram = std::vector<OutcomeCount>;

OutcomeHistogram make_histogram(std::span<const SignVector> shots);

/// Shots in histogram order.
std::vector<SignVector> expand_histogram(const OutcomeHistogram& histogram);

std::uint64_t total_shots(const OutcomeHistogram& histogram);

}  // namespace mpsdfe
