#pragma once

// Meet-in-the-middle evaluation of product-operator expectations over a
// histogram of sign vectors. Left environments are shared between outcomes
// with a common prefix up to the cut, right environments between outcomes
// with a common suffix, so the per-outcome cost is one combine.

#include <algorithm>
#include <numeric>
#include <vector>

#include "mpsdfe/outcomes.hpp"

namespace mpsdfe::detail {

/// values[j] = combine(left env of outcome j, right env of outcome j).
/// left_step(env, site, sign) and right_step(env, site, sign) absorb one site.
template <class Env, class LeftStep, class RightStep, class Combine>
std::vector<Complex> batch_expectations(const OutcomeHistogram& hist, std::size_t n, const Env& left0,
                                        const Env& right0, LeftStep left_step, RightStep right_step,
                                        Combine combine) {
  const std::size_t m = hist.size();
  std::vector<Complex> values(m);
  if (m == 0) return values;
  const std::size_t cut = n / 2;

  std::vector<Env> lefts;
  std::vector<std::size_t> left_of(m);
  {
    std::vector<Env> stack(cut + 1);
    stack[0] = left0;
    const SignVector* prev = nullptr;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& s = hist[j].signs;
      std::size_t common = 0;
      if (prev)
        while (common < cut && (*prev)[common] == s[common]) ++common;
      if (prev && common == cut) {
        left_of[j] = lefts.size() - 1;
        continue;
      }
      for (std::size_t i = common; i < cut; ++i) stack[i + 1] = left_step(stack[i], i, s[i]);
      lefts.push_back(stack[cut]);
      left_of[j] = lefts.size() - 1;
      prev = &s;
    }
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = hist[a].signs;
    const auto& y = hist[b].signs;
    for (std::size_t i = n; i-- > cut;)
      if (x[i] != y[i]) return x[i] < y[i];
    return a < b;
  });

  const std::size_t depth = n - cut;
  std::vector<Env> stack(depth + 1);
  stack[0] = right0;
  const SignVector* prev = nullptr;
  for (std::size_t j : order) {
    const auto& s = hist[j].signs;
    std::size_t common = 0;
    if (prev)
      while (common < depth && (*prev)[n - 1 - common] == s[n - 1 - common]) ++common;
    for (std::size_t t = common; t < depth; ++t) {
      const std::size_t site = n - 1 - t;
      stack[t + 1] = right_step(stack[t], site, s[site]);
    }
    values[j] = combine(lefts[left_of[j]], stack[depth]);
    prev = &s;
  }
  return values;
}

}  // namespace mpsdfe::detail
