#include "nashstream/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

namespace {

void validate(std::span<const double> u_prime, std::span<const double> values,
              double supply) {
  if (u_prime.empty() || u_prime.size() != values.size())
    throw PreconditionError("waterfill: empty or mismatched vectors");
  if (!(supply > 0.0) || !std::isfinite(supply))
    throw PreconditionError("waterfill: supply must be positive and finite");
  for (std::size_t i = 0; i < u_prime.size(); ++i) {
    if (u_prime[i] < 0.0 || !std::isfinite(u_prime[i]))
      throw PreconditionError("waterfill: utilities must be nonnegative and finite");
    if (values[i] < 0.0 || !std::isfinite(values[i]))
      throw PreconditionError("waterfill: values must be nonnegative and finite");
  }
}

}  // namespace

WaterfillResult waterfill(std::span<const double> u_prime,
                          std::span<const double> values, double supply) {
  validate(u_prime, values, supply);
  const std::size_t n = u_prime.size();

  WaterfillResult out;
  out.amounts.assign(n, 0.0);
  out.post_utilities.assign(u_prime.begin(), u_prime.end());

  // Breakpoints b_i = u'_i / v_i for agents that value the item. Sorting them
  // ascending, the first k agents are active at water level w when
  // w = (supply + sum of their b) / k lies below the next breakpoint.
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (values[i] > 0.0) order.push_back(i);
  if (order.empty()) return out;  // nu_star stays at the 0 sentinel

  std::vector<double> b(n, 0.0);
  for (std::size_t i : order) b[i] = u_prime[i] / values[i];
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return b[x] != b[y] ? b[x] < b[y] : x < y;
  });

  KahanSum prefix;
  double level = 0.0;
  std::size_t active = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    prefix.add(b[order[k]]);
    double w = (supply + prefix.value()) / static_cast<double>(k + 1);
    if (k + 1 == order.size() || w <= b[order[k + 1]]) {
      level = w;
      active = k + 1;
      break;
    }
  }

  for (std::size_t k = 0; k < active; ++k) {
    std::size_t i = order[k];
    out.amounts[i] = std::max(level - b[i], 0.0);
  }

  // The scan determines the level from rounded breakpoints, so sum(z) can miss
  // the supply by ~active * ulp(level); fold the residual into the largest
  // amount to pin the budget exactly.
  KahanSum allocated;
  for (double z : out.amounts) allocated.add(z);
  double residual = supply - allocated.value();
  std::size_t widest = order[0];
  for (std::size_t k = 1; k < active; ++k)
    if (out.amounts[order[k]] > out.amounts[widest]) widest = order[k];
  out.amounts[widest] = std::max(out.amounts[widest] + residual, 0.0);

  out.nu_star = 1.0 / level;
  for (std::size_t i = 0; i < n; ++i)
    out.post_utilities[i] = u_prime[i] + values[i] * out.amounts[i];
  return out;
}

double gain_lower_bound_residual(const WaterfillResult& result,
                                 std::span<const double> u_prime,
                                 std::span<const double> values, double supply) {
  const std::size_t n = u_prime.size();
  if (result.amounts.size() != n || result.post_utilities.size() != n ||
      values.size() != n)
    throw PreconditionError("gain residual: mismatched vectors");

  KahanSum gain;
  double max_ratio = 0.0;
  bool rose_from_zero = false;
  for (std::size_t i = 0; i < n; ++i) {
    double post = result.post_utilities[i];
    if (post <= 0.0) continue;  // stuck at zero: contributes to neither side
    if (u_prime[i] == 0.0) {
      rose_from_zero = true;  // log gain unbounded, inequality trivially holds
    } else {
      gain.add(std::log(post) - std::log(u_prime[i]));
    }
    max_ratio = std::max(max_ratio, values[i] / post);
  }
  if (rose_from_zero) return std::numeric_limits<double>::infinity();
  return gain.value() - supply * max_ratio;
}

}  // namespace nashstream
