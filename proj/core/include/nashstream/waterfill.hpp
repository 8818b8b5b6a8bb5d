#pragma once

#include <span>
#include <vector>

namespace nashstream {

struct WaterfillResult {
  std::vector<double> amounts;        // z_i, sums to the supply when any v_i > 0
  double nu_star = 0.0;               // KKT multiplier; 0 sentinel when all v_i = 0
  std::vector<double> post_utilities; // u'_i + v_i * z_i
};

// Single-item log-utility maximizer: choose z >= 0 with sum z_i <= supply to
// maximize sum_i log(u'_i + v_i z_i). Closed form: z_i = max(1/nu - u'_i/v_i, 0)
// with the water level 1/nu fixed by an ascending scan over the breakpoints
// b_i = u'_i / v_i. Agents with v_i = 0 get exactly 0. Throws PreconditionError
// on negative or non-finite inputs, empty vectors, mismatched lengths, or
// supply <= 0.
WaterfillResult waterfill(std::span<const double> u_prime,
                          std::span<const double> values, double supply);

// Residual of the per-step gain bound:
//   sum_i [log(u'_i + v_i z_i) - log u'_i] - supply * max_i v_i / (u'_i + v_i z_i),
// taken over agents with positive post-utility. Agents stuck at zero (u'_i = 0,
// v_i = 0) contribute to neither side. +infinity when some agent rises from
// zero (the log gain is unbounded). Nonnegative in exact arithmetic; callers
// assert it stays above kGainResidualFloor.
double gain_lower_bound_residual(const WaterfillResult& result,
                                 std::span<const double> u_prime,
                                 std::span<const double> values, double supply);

}  // namespace nashstream
