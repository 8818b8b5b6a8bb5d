#pragma once

#include <span>
#include <vector>

#include "nashstream/instance.hpp"

namespace nashstream {

// Per-agent utilities u_i = sum_t v_it * x_it, accumulated in item order with
// compensated summation.
std::vector<double> utilities(const Allocation& alloc, const Instance& inst);

// Geometric mean of utilities, computed as exp(mean of logs); exactly 0 when
// any utility is 0. Natural logarithms everywhere.
double nash_welfare(std::span<const double> utils);

// V_i: the utility agent i would get if handed every item in full.
std::vector<double> monopolist_utilities(const Instance& inst);

// lambda* = max_i V_i / min_i V_i. Throws UndefinedRatioError when some V_i = 0.
double balance_ratio(const Instance& inst);

// opt_nw / alg_nw with the conventions: 1 when both are 0, +infinity when the
// algorithm got 0 but the optimum is positive. Throws InconsistencyError when
// alg_nw exceeds opt_nw beyond relative kInvariantTol.
double competitive_ratio(double opt_nw, double alg_nw);

// For 1 <= a_1 <= ... <= a_N: mean log a_i minus mean log of the prefix
// averages (1/i) sum_{j<=i} a_j. Throws PreconditionError when unsorted or
// some a_i < 1. For entries bounded by mu the result is at most
// log(log mu + 1) + 1; callers assert that bound.
double prefix_average_gap(std::span<const double> a);

}  // namespace nashstream
