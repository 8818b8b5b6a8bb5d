#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nashstream/errors.hpp"
#include "nashstream/instance.hpp"

namespace nashstream {

// What the benchmark solver returns: the best iterate, its utilities and
// objective sum_i log u_i, and the final Frank-Wolfe gap
//   max_d <grad F(x), d - x>  over the feasible product of scaled simplices,
// which upper-bounds the suboptimality of the iterate by concavity. The gap is
// an honest certificate no matter how the iterate was produced.
struct EGSolution {
  Allocation allocation;
  std::vector<double> utilities;
  double objective = 0.0;
  double fw_gap = 0.0;
  std::size_t iterations = 0;
};

enum class EGStepRule {
  fixed,        // 2/(k+2), falling back to line search if it would not ascend
  line_search,  // exact maximization along the Frank-Wolfe segment
};

struct EGOptions {
  double tol = 1e-7;              // absolute gap target
  std::size_t max_iters = 1'000'000;
  EGStepRule step_rule = EGStepRule::fixed;
  // Interleave per-item pairwise mass transfers (closed-form two-coordinate
  // ascent) between Frank-Wolfe steps. Plain Frank-Wolfe zigzags at O(1/k) when
  // the optimum splits an item, which cannot certify 1e-7 within the cap; the
  // transfers restore fast convergence while the gap certificate stays exact.
  bool refine = true;
  // Feasible warm start with strictly positive utilities; defaults to the
  // uniform split s_t / N.
  std::optional<Allocation> init;
  // Observation hook, called once per iteration with (iteration, objective,
  // gap). Used by tests to assert the objective never decreases.
  std::function<void(std::size_t, double, double)> on_iteration;
};

// Thrown when the iteration cap is hit with gap > tol; carries the best
// iterate so callers can still use (and error-bar) the result.
class EGNonconvergenceError;

// Maximize sum_i log u_i(x) over per-item allocations with sum_i x_it <= s_t.
// Preconditions: every agent has positive monopolist utility (otherwise the
// objective is identically -infinity); any provided init must be feasible with
// positive utilities. Deterministic: ties in the linear maximizer split
// equally.
EGSolution solve_eg(const Instance& inst, const EGOptions& opts = {});

// Exhaustive grid search over per-item integer compositions of grid_steps.
// Refuses N > 3 or T > 3 (the search space is (grid_steps+1)^((N-1)T)).
struct OracleResult {
  Allocation allocation;
  double objective = 0.0;
};
OracleResult brute_force_oracle(const Instance& inst, std::size_t grid_steps);

// Rigorous bound on how much the continuum optimum can exceed the best grid
// point: rounding the optimum down to the grid costs each agent at most
// V_i / grid_steps, and u_i* >= V_i / N, so the objective drops at most
// N * log(grid_steps / (grid_steps - N)). Requires grid_steps > N.
double grid_error_bound(const Instance& inst, std::size_t grid_steps);

// Audit of a solution against its instance: feasibility, utility consistency,
// proportionality u_i >= V_i/N - tol, and the support condition that any
// entry above support_eps = 1e-8 * s_t has value within tolerance of
// max_j v_jt / impartiality ratio. Returns human-readable violations; empty
// means clean.
std::vector<std::string> check_eg_invariants(const EGSolution& sol,
                                             const Instance& inst);

// mu* = max_i u_i* / min_i u_i* of the solver's utilities. Throws
// UndefinedRatioError if some utility is 0. The solver's fw_gap is the error
// bar callers should attach.
double impartiality_ratio(const EGSolution& sol);

// Balance and impartiality ratios side by side, with the solver gap recorded
// as the error bar on mu*.
struct RatioReport {
  double balance_ratio = 0.0;
  double impartiality_ratio = 0.0;
  std::vector<double> monopolist_utils;
  double fw_gap = 0.0;  // error bar carried by the EG solve behind mu*
};
RatioReport compute_ratio_report(const Instance& inst, const EGSolution& sol);

// lambda* <= N mu* and mu* <= N lambda*, at relative kInvariantTol.
std::vector<std::string> check_ratio_relations(const RatioReport& report,
                                               std::size_t num_agents);

class EGNonconvergenceError : public Error {
 public:
  EGNonconvergenceError(std::string message, EGSolution best)
      : Error(std::move(message)), best_(std::move(best)) {}
  const EGSolution& best() const { return best_; }

 private:
  EGSolution best_;
};

}  // namespace nashstream
