#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nashstream/instance.hpp"
#include "nashstream/numeric.hpp"
#include "nashstream/waterfill.hpp"

namespace nashstream {

// ----- run traces ------------------------------------------------------------

// One greedy convex-program solve inside an online run. For plain items the
// level is 0; the rounded algorithms emit one call per sub-item level (1-based).
struct WaterfillCall {
  std::size_t item_index = 0;
  int level = 0;
  std::vector<double> anticipated;  // utilities the decision saw (rounded domain
                                    // for the rounded algorithms)
  std::vector<double> values;       // value vector the decision saw
  double budget = 0.0;
  WaterfillResult fill;
  double gain_residual = 0.0;
};

// Committed outcome of one arriving item, in true units.
struct ItemRecord {
  std::vector<double> amounts;
  std::vector<double> running_utilities;  // true utilities after this item
};

enum class TraceDetail {
  full,     // keep every waterfill call and per-item record
  summary,  // keep only the final allocation, utilities, and aggregates
};

struct RunTrace {
  std::string algorithm;
  std::size_t num_agents = 0;
  std::size_t num_items = 0;
  Allocation allocation;
  std::vector<double> final_utilities;  // true utilities, matches allocation

  std::vector<WaterfillCall> calls;  // full detail only
  std::vector<ItemRecord> items;     // full detail only

  std::size_t waterfill_steps = 0;
  double min_gain_residual = std::numeric_limits<double>::infinity();

  // Parameters of the run. lambda / mu are +infinity when a guessed exponent
  // exceeds double range; guess_k records the raw guess.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  std::optional<int> guess_k;
  std::size_t levels = 0;       // rounded algorithms: sub-items per item
  bool level_cap_hit = false;   // guess wanted more levels than the cap

  // Half-and-half only: the anticipated utilities after the last item. The
  // anticipation guarantee is final_utilities[i] >= anticipated_final[i] for
  // balance-bounded runs.
  std::vector<double> anticipated_final;
};

// Violations of trace-level guarantees: allocation feasibility, consistency of
// final_utilities with the allocation, gain residual floor, and (for
// half-and-half run with lambda at least the instance's balance ratio) the
// anticipation inequality. Empty result means clean.
std::vector<std::string> audit_trace(const RunTrace& trace, const Instance& inst);

// ----- half-and-half ----------------------------------------------------------

// Streaming state: half of every item is split equally; the other half is
// waterfilled against anticipated utilities
//   u'_it = coeff * M_t + S_i(t-1),
// where M_t is the cumulative monopolist sum including item t, S_i the
// accumulated second-half utility excluding item t, and coeff = 1/(2 lambda N^2).
class HalfAndHalfRunner {
 public:
  // lambda >= 1 (PreconditionError otherwise).
  HalfAndHalfRunner(std::size_t num_agents, double lambda);
  // Guess 2^(2^k): exact double arithmetic while 2^(2^k) is representable,
  // log-space beyond that, coefficient underflowing to 0 from k = 11 on.
  static HalfAndHalfRunner from_guess(std::size_t num_agents, int k);

  // Commit the next item; returns its allocation x_t = s_t/(2N) + z_t.
  // Records the call into *call when given.
  std::vector<double> step(const Item& item, WaterfillCall* call = nullptr);

  std::size_t num_agents() const { return num_agents_; }
  double cumulative_monopolist() const { return monopolist_sum_.value(); }
  const std::vector<double>& second_half_utilities() const { return second_half_; }
  // u-hat after the items seen so far: coeff * M_t + S_i(t).
  std::vector<double> anticipated_utilities() const;

  std::size_t steps_taken() const { return steps_; }
  double min_gain_residual() const { return min_residual_; }

 private:
  HalfAndHalfRunner(std::size_t num_agents, double lambda, double coeff);

  std::size_t num_agents_;
  double lambda_;
  double coeff_;
  KahanSum monopolist_sum_;
  std::vector<double> second_half_;
  std::vector<KahanSum> second_half_acc_;
  std::size_t steps_ = 0;
  double min_residual_ = std::numeric_limits<double>::infinity();

  friend RunTrace run_half_and_half_guess(const Instance&, int, TraceDetail);
};

RunTrace run_half_and_half(const Instance& inst, double lambda,
                           TraceDetail detail = TraceDetail::full);
RunTrace run_half_and_half_guess(const Instance& inst, int k,
                                 TraceDetail detail = TraceDetail::full);
// Draws k from the guess distribution seeded by `seed`, then runs.
RunTrace run_half_and_half_guessed(const Instance& inst, std::uint64_t seed,
                                   TraceDetail detail = TraceDetail::full);

// ----- guess sampling ---------------------------------------------------------

// P(k) = (6/pi^2) / (k+1)^2 over k = 0, 1, 2, ...; the guess is 2^(2^k).
struct GuessSample {
  int k = 0;
  double probability = 0.0;
};
double guess_probability(int k);
// Inverse-CDF walk on one uniform draw from mt19937_64(seed).
GuessSample sample_guess(std::uint64_t seed);

// ----- myopic greedy ----------------------------------------------------------

class MyopicGreedyRunner {
 public:
  explicit MyopicGreedyRunner(std::size_t num_agents);
  std::vector<double> step(const Item& item, WaterfillCall* call = nullptr);

  const std::vector<double>& running_utilities() const { return running_; }
  std::size_t steps_taken() const { return steps_; }
  double min_gain_residual() const { return min_residual_; }

 private:
  std::size_t num_agents_;
  std::vector<double> running_;
  std::vector<KahanSum> running_acc_;
  std::size_t steps_ = 0;
  double min_residual_ = std::numeric_limits<double>::infinity();
};

RunTrace run_myopic_greedy(const Instance& inst,
                           TraceDetail detail = TraceDetail::full);

// ----- greedy with rounded values ---------------------------------------------

// Sub-item j of a parent item: supply s_t / levels, value vbar_t / 2^j for
// agents with v_it >= vbar_t / 2^j and 0 otherwise.
struct SubItem {
  std::size_t parent_item = 0;
  int level = 0;  // 1-based
  double supply = 0.0;
  std::vector<double> values;
};

// Split an item into max(1, ceil(log2 mu)) value-rounded sub-items. An all-zero
// item yields an empty sequence. mu >= 1 required.
std::vector<SubItem> round_item(const Item& item, double mu,
                                std::size_t parent_index = 0);
std::vector<SubItem> round_item_levels(const Item& item, std::size_t levels,
                                       std::size_t parent_index = 0);

inline constexpr std::size_t kDefaultLevelCap = 64;

// Myopic greedy over the sub-item stream. Decisions use rounded running
// utilities; true utilities are tracked separately for evaluation.
class RoundedGreedyRunner {
 public:
  RoundedGreedyRunner(std::size_t num_agents, std::size_t levels);

  // Commits the whole item (all its sub-items); returns true-unit amounts.
  // Appends one WaterfillCall per sub-item when a sink is given.
  std::vector<double> step(const Item& item,
                           std::vector<WaterfillCall>* calls = nullptr,
                           std::size_t item_index = 0);

  std::size_t levels() const { return levels_; }
  const std::vector<double>& rounded_utilities() const { return rounded_; }
  const std::vector<double>& true_utilities() const { return true_; }
  std::size_t steps_taken() const { return steps_; }
  double min_gain_residual() const { return min_residual_; }

 private:
  std::size_t num_agents_;
  std::size_t levels_;
  std::vector<double> rounded_;
  std::vector<KahanSum> rounded_acc_;
  std::vector<double> true_;
  std::vector<KahanSum> true_acc_;
  std::size_t steps_ = 0;
  double min_residual_ = std::numeric_limits<double>::infinity();
};

RunTrace run_rounded_greedy(const Instance& inst, double mu,
                            TraceDetail detail = TraceDetail::full,
                            std::size_t level_cap = kDefaultLevelCap);
RunTrace run_rounded_greedy_guess(const Instance& inst, int k,
                                  TraceDetail detail = TraceDetail::full,
                                  std::size_t level_cap = kDefaultLevelCap);
RunTrace run_rounded_greedy_guessed(const Instance& inst, std::uint64_t seed,
                                    TraceDetail detail = TraceDetail::full,
                                    std::size_t level_cap = kDefaultLevelCap);

// ----- derandomization --------------------------------------------------------

// Probability-weighted average of the traces' allocations. Requires matching
// dimensions and sum(probs) <= 1; leftover mass is folded onto the last trace.
// Nash welfare of the result is at least the weighted mean of the traces'
// welfares, by concavity.
Allocation derandomize_mixture(std::span<const RunTrace> traces,
                               std::span<const double> probs);

}  // namespace nashstream
