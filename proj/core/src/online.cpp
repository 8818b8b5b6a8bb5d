#include "nashstream/online.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "nashstream/errors.hpp"
#include "nashstream/metrics.hpp"

namespace nashstream {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_item(const Item& item, std::size_t num_agents) {
  if (item.values.size() != num_agents)
    throw PreconditionError("item has wrong number of values");
}

// Smallest J with 2^J >= mu, clamped to at least one level. Integer walk, so
// exact powers of two land on the exact level count.
std::size_t levels_for_mu(double mu) {
  if (!(mu >= 1.0))
    throw PreconditionError("rounding parameter mu must be at least 1");
  std::size_t j = 0;
  double p = 1.0;
  while (p < mu && j < 1100) {
    p *= 2.0;
    ++j;
  }
  return std::max<std::size_t>(j, 1);
}

// 2^(2^k) as a double: exact while representable, +infinity beyond.
double guess_value(int k) {
  if (k < 0) throw PreconditionError("guess exponent k must be nonnegative");
  if (k >= 10) return kInf;
  return std::exp2(std::exp2(static_cast<double>(k)));
}

}  // namespace

// ----- half-and-half ----------------------------------------------------------

HalfAndHalfRunner::HalfAndHalfRunner(std::size_t num_agents, double lambda)
    : HalfAndHalfRunner(num_agents, lambda,
                        1.0 / (2.0 * lambda * static_cast<double>(num_agents) *
                               static_cast<double>(num_agents))) {
  if (!(lambda >= 1.0))
    throw PreconditionError("half-and-half requires lambda >= 1");
}

HalfAndHalfRunner::HalfAndHalfRunner(std::size_t num_agents, double lambda,
                                     double coeff)
    : num_agents_(num_agents), lambda_(lambda), coeff_(coeff),
      second_half_(num_agents, 0.0), second_half_acc_(num_agents) {
  if (num_agents_ == 0) throw PreconditionError("need at least one agent");
}

HalfAndHalfRunner HalfAndHalfRunner::from_guess(std::size_t num_agents, int k) {
  double lambda = guess_value(k);
  if (k <= 9) {
    // 2^(2^k) is an exact double here; use the same arithmetic as the known-
    // lambda path so a guessed run with k and a direct run with that lambda
    // produce identical traces.
    return HalfAndHalfRunner(num_agents, lambda);
  }
  // Beyond double range: log-space. exp underflows to exactly 0 from k = 11 on
  // (and to a subnormal at k = 10), which fades the monopolist term out and
  // leaves the second-half waterfill running on its own.
  double n2 = 2.0 * static_cast<double>(num_agents) * static_cast<double>(num_agents);
  double coeff =
      std::exp(-std::exp2(static_cast<double>(k)) * std::numbers::ln2 - std::log(n2));
  return HalfAndHalfRunner(num_agents, lambda, coeff);
}

std::vector<double> HalfAndHalfRunner::step(const Item& item, WaterfillCall* call) {
  check_item(item, num_agents_);
  for (std::size_t j = 0; j < num_agents_; ++j)
    monopolist_sum_.add(item.values[j] * item.supply);

  std::vector<double> anticipated(num_agents_);
  double first_term = coeff_ * monopolist_sum_.value();
  for (std::size_t i = 0; i < num_agents_; ++i)
    anticipated[i] = first_term + second_half_[i];

  double budget = item.supply / 2.0;
  WaterfillResult fill = waterfill(anticipated, item.values, budget);
  double residual = gain_lower_bound_residual(fill, anticipated, item.values, budget);
  min_residual_ = std::min(min_residual_, residual);
  ++steps_;

  double equal_share = item.supply / (2.0 * static_cast<double>(num_agents_));
  std::vector<double> amounts(num_agents_);
  for (std::size_t i = 0; i < num_agents_; ++i) {
    amounts[i] = equal_share + fill.amounts[i];
    second_half_acc_[i].add(item.values[i] * fill.amounts[i]);
    second_half_[i] = second_half_acc_[i].value();
  }

  if (call) {
    call->level = 0;
    call->anticipated = std::move(anticipated);
    call->values = item.values;
    call->budget = budget;
    call->fill = std::move(fill);
    call->gain_residual = residual;
  }
  return amounts;
}

std::vector<double> HalfAndHalfRunner::anticipated_utilities() const {
  std::vector<double> out(num_agents_);
  double first_term = coeff_ * monopolist_sum_.value();
  for (std::size_t i = 0; i < num_agents_; ++i)
    out[i] = first_term + second_half_[i];
  return out;
}

namespace {

// Shared driver: streams the instance through a per-item commit function,
// recording the trace at the requested detail.
RunTrace run_stream(const Instance& inst, std::string algorithm,
                    TraceDetail detail,
                    const std::function<std::vector<double>(
                        const Item&, std::size_t, std::vector<WaterfillCall>*)>& commit) {
  RunTrace trace;
  trace.algorithm = std::move(algorithm);
  trace.num_agents = inst.num_agents();
  trace.num_items = inst.num_items();
  trace.allocation = Allocation(inst.num_agents(), inst.num_items());

  std::vector<KahanSum> true_acc(inst.num_agents());
  std::vector<double> running(inst.num_agents(), 0.0);
  std::vector<WaterfillCall> calls;

  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    const Item& item = inst.item(t);
    calls.clear();
    std::vector<double> amounts =
        commit(item, t, detail == TraceDetail::full ? &calls : nullptr);
    trace.allocation.set_item(t, amounts);
    for (std::size_t i = 0; i < inst.num_agents(); ++i) {
      true_acc[i].add(item.values[i] * amounts[i]);
      running[i] = true_acc[i].value();
    }
    if (detail == TraceDetail::full) {
      for (WaterfillCall& c : calls) {
        c.item_index = t;
        trace.calls.push_back(std::move(c));
      }
      trace.items.push_back(ItemRecord{std::move(amounts), running});
    }
  }
  trace.final_utilities = running;
  return trace;
}

}  // namespace

RunTrace run_half_and_half(const Instance& inst, double lambda, TraceDetail detail) {
  HalfAndHalfRunner runner(inst.num_agents(), lambda);
  RunTrace trace = run_stream(
      inst, "half-and-half", detail,
      [&](const Item& item, std::size_t, std::vector<WaterfillCall>* calls) {
        if (!calls) return runner.step(item);
        WaterfillCall call;
        auto amounts = runner.step(item, &call);
        calls->push_back(std::move(call));
        return amounts;
      });
  trace.lambda = lambda;
  trace.waterfill_steps = runner.steps_taken();
  trace.min_gain_residual = runner.min_gain_residual();
  trace.anticipated_final = runner.anticipated_utilities();
  return trace;
}

RunTrace run_half_and_half_guess(const Instance& inst, int k, TraceDetail detail) {
  HalfAndHalfRunner runner = HalfAndHalfRunner::from_guess(inst.num_agents(), k);
  RunTrace trace = run_stream(
      inst, "half-and-half-guessed", detail,
      [&](const Item& item, std::size_t, std::vector<WaterfillCall>* calls) {
        if (!calls) return runner.step(item);
        WaterfillCall call;
        auto amounts = runner.step(item, &call);
        calls->push_back(std::move(call));
        return amounts;
      });
  trace.lambda = guess_value(k);
  trace.guess_k = k;
  trace.waterfill_steps = runner.steps_taken();
  trace.min_gain_residual = runner.min_gain_residual();
  trace.anticipated_final = runner.anticipated_utilities();
  return trace;
}

RunTrace run_half_and_half_guessed(const Instance& inst, std::uint64_t seed,
                                   TraceDetail detail) {
  return run_half_and_half_guess(inst, sample_guess(seed).k, detail);
}

// ----- guess sampling ---------------------------------------------------------

double guess_probability(int k) {
  if (k < 0) throw PreconditionError("guess exponent k must be nonnegative");
  double kk = static_cast<double>(k) + 1.0;
  return 6.0 / (std::numbers::pi * std::numbers::pi) / (kk * kk);
}

GuessSample sample_guess(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double u = unit_from_bits(rng());
  double cum = 0.0;
  // The walk terminates with probability 1; the cap only guards the fp tail
  // where the partial sums stall below u (mass ~6e-6).
  constexpr int kMaxK = 100000;
  for (int k = 0; k < kMaxK; ++k) {
    cum += guess_probability(k);
    if (u < cum) return GuessSample{k, guess_probability(k)};
  }
  return GuessSample{kMaxK, guess_probability(kMaxK)};
}

// ----- myopic greedy ----------------------------------------------------------

MyopicGreedyRunner::MyopicGreedyRunner(std::size_t num_agents)
    : num_agents_(num_agents), running_(num_agents, 0.0), running_acc_(num_agents) {
  if (num_agents_ == 0) throw PreconditionError("need at least one agent");
}

std::vector<double> MyopicGreedyRunner::step(const Item& item, WaterfillCall* call) {
  check_item(item, num_agents_);
  WaterfillResult fill = waterfill(running_, item.values, item.supply);
  double residual =
      gain_lower_bound_residual(fill, running_, item.values, item.supply);
  min_residual_ = std::min(min_residual_, residual);
  ++steps_;

  if (call) {
    call->level = 0;
    call->anticipated = running_;
    call->values = item.values;
    call->budget = item.supply;
    call->gain_residual = residual;
  }
  std::vector<double> amounts = fill.amounts;
  for (std::size_t i = 0; i < num_agents_; ++i) {
    running_acc_[i].add(item.values[i] * amounts[i]);
    running_[i] = running_acc_[i].value();
  }
  if (call) call->fill = std::move(fill);
  return amounts;
}

RunTrace run_myopic_greedy(const Instance& inst, TraceDetail detail) {
  MyopicGreedyRunner runner(inst.num_agents());
  RunTrace trace = run_stream(
      inst, "myopic", detail,
      [&](const Item& item, std::size_t, std::vector<WaterfillCall>* calls) {
        if (!calls) return runner.step(item);
        WaterfillCall call;
        auto amounts = runner.step(item, &call);
        calls->push_back(std::move(call));
        return amounts;
      });
  trace.waterfill_steps = runner.steps_taken();
  trace.min_gain_residual = runner.min_gain_residual();
  return trace;
}

// ----- greedy with rounded values ---------------------------------------------

std::vector<SubItem> round_item_levels(const Item& item, std::size_t levels,
                                       std::size_t parent_index) {
  if (levels == 0) throw PreconditionError("round_item: need at least one level");
  double vbar = *std::max_element(item.values.begin(), item.values.end());
  std::vector<SubItem> out;
  if (vbar == 0.0) return out;  // nothing to allocate
  out.reserve(levels);
  double sub_supply = item.supply / static_cast<double>(levels);
  for (std::size_t j = 1; j <= levels; ++j) {
    SubItem sub;
    sub.parent_item = parent_index;
    sub.level = static_cast<int>(j);
    sub.supply = sub_supply;
    double w = std::ldexp(vbar, -static_cast<int>(j));  // vbar / 2^j, exact
    sub.values.resize(item.values.size());
    for (std::size_t i = 0; i < item.values.size(); ++i)
      sub.values[i] = item.values[i] >= w ? w : 0.0;
    out.push_back(std::move(sub));
  }
  return out;
}

std::vector<SubItem> round_item(const Item& item, double mu,
                                std::size_t parent_index) {
  return round_item_levels(item, levels_for_mu(mu), parent_index);
}

RoundedGreedyRunner::RoundedGreedyRunner(std::size_t num_agents, std::size_t levels)
    : num_agents_(num_agents), levels_(levels), rounded_(num_agents, 0.0),
      rounded_acc_(num_agents), true_(num_agents, 0.0), true_acc_(num_agents) {
  if (num_agents_ == 0) throw PreconditionError("need at least one agent");
  if (levels_ == 0) throw PreconditionError("need at least one rounding level");
}

std::vector<double> RoundedGreedyRunner::step(const Item& item,
                                              std::vector<WaterfillCall>* calls,
                                              std::size_t item_index) {
  check_item(item, num_agents_);
  std::vector<double> amounts(num_agents_, 0.0);
  std::vector<SubItem> subs = round_item_levels(item, levels_, item_index);
  for (const SubItem& sub : subs) {
    WaterfillResult fill = waterfill(rounded_, sub.values, sub.supply);
    double residual =
        gain_lower_bound_residual(fill, rounded_, sub.values, sub.supply);
    min_residual_ = std::min(min_residual_, residual);
    ++steps_;
    if (calls) {
      WaterfillCall call;
      call.item_index = item_index;
      call.level = sub.level;
      call.anticipated = rounded_;
      call.values = sub.values;
      call.budget = sub.supply;
      call.gain_residual = residual;
      call.fill = fill;
      calls->push_back(std::move(call));
    }
    for (std::size_t i = 0; i < num_agents_; ++i) {
      rounded_acc_[i].add(sub.values[i] * fill.amounts[i]);
      rounded_[i] = rounded_acc_[i].value();
      amounts[i] += fill.amounts[i];
    }
  }
  for (std::size_t i = 0; i < num_agents_; ++i) {
    true_acc_[i].add(item.values[i] * amounts[i]);
    true_[i] = true_acc_[i].value();
  }
  return amounts;
}

namespace {

RunTrace run_rounded_impl(const Instance& inst, std::string algorithm,
                          std::size_t levels, TraceDetail detail) {
  RoundedGreedyRunner runner(inst.num_agents(), levels);
  RunTrace trace = run_stream(
      inst, std::move(algorithm), detail,
      [&](const Item& item, std::size_t t, std::vector<WaterfillCall>* calls) {
        return runner.step(item, calls, t);
      });
  trace.levels = levels;
  trace.waterfill_steps = runner.steps_taken();
  trace.min_gain_residual = runner.min_gain_residual();
  return trace;
}

}  // namespace

RunTrace run_rounded_greedy(const Instance& inst, double mu, TraceDetail detail,
                            std::size_t level_cap) {
  if (level_cap == 0) throw PreconditionError("level cap must be positive");
  std::size_t wanted = levels_for_mu(mu);
  std::size_t levels = std::min(wanted, level_cap);
  RunTrace trace = run_rounded_impl(inst, "rounded", levels, detail);
  trace.mu = mu;
  trace.level_cap_hit = wanted > level_cap;
  return trace;
}

RunTrace run_rounded_greedy_guess(const Instance& inst, int k, TraceDetail detail,
                                  std::size_t level_cap) {
  if (k < 0) throw PreconditionError("guess exponent k must be nonnegative");
  if (level_cap == 0) throw PreconditionError("level cap must be positive");
  // mu = 2^(2^k) wants 2^k levels.
  bool capped = k >= 63 || (std::size_t{1} << k) > level_cap;
  std::size_t levels = capped ? level_cap : (std::size_t{1} << k);
  RunTrace trace = run_rounded_impl(inst, "rounded-guessed", levels, detail);
  trace.mu = guess_value(k);
  trace.guess_k = k;
  trace.level_cap_hit = capped;
  return trace;
}

RunTrace run_rounded_greedy_guessed(const Instance& inst, std::uint64_t seed,
                                    TraceDetail detail, std::size_t level_cap) {
  return run_rounded_greedy_guess(inst, sample_guess(seed).k, detail, level_cap);
}

// ----- derandomization --------------------------------------------------------

Allocation derandomize_mixture(std::span<const RunTrace> traces,
                               std::span<const double> probs) {
  if (traces.empty() || traces.size() != probs.size())
    throw PreconditionError("derandomize_mixture: need one probability per trace");
  const std::size_t n = traces[0].allocation.num_agents();
  const std::size_t m = traces[0].allocation.num_items();
  KahanSum total;
  for (std::size_t g = 0; g < traces.size(); ++g) {
    if (traces[g].allocation.num_agents() != n ||
        traces[g].allocation.num_items() != m)
      throw ValidationError("derandomize_mixture: traces come from different instances");
    if (probs[g] < 0.0 || !std::isfinite(probs[g]))
      throw PreconditionError("derandomize_mixture: probabilities must be nonnegative");
    total.add(probs[g]);
  }
  if (total.value() > 1.0 + 1e-12)
    throw PreconditionError("derandomize_mixture: probabilities sum beyond 1");

  std::vector<double> weights(probs.begin(), probs.end());
  weights.back() += std::max(0.0, 1.0 - total.value());

  Allocation mix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < m; ++t) {
      KahanSum cell;
      for (std::size_t g = 0; g < traces.size(); ++g)
        cell.add(weights[g] * traces[g].allocation.at(i, t));
      mix.at(i, t) = cell.value();
    }
  return mix;
}

// ----- trace audit ------------------------------------------------------------

std::vector<std::string> audit_trace(const RunTrace& trace, const Instance& inst) {
  std::vector<std::string> bad;
  if (trace.allocation.num_agents() != inst.num_agents() ||
      trace.allocation.num_items() != inst.num_items()) {
    bad.push_back("allocation shape does not match the instance");
    return bad;
  }
  if (!is_feasible(trace.allocation, inst)) bad.push_back("allocation infeasible");

  std::vector<double> fresh = utilities(trace.allocation, inst);
  if (trace.final_utilities.size() != fresh.size()) {
    bad.push_back("final utility vector has wrong length");
    return bad;
  }
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    double scale = std::max(std::abs(fresh[i]), 1e-300);
    if (std::abs(fresh[i] - trace.final_utilities[i]) > 1e-12 * scale)
      bad.push_back("final utility of agent " + std::to_string(i) +
                    " disagrees with the allocation");
  }

  if (trace.min_gain_residual < kGainResidualFloor)
    bad.push_back("gain lower bound violated: min residual " +
                  format_double(trace.min_gain_residual));
  for (const WaterfillCall& c : trace.calls)
    if (c.gain_residual < kGainResidualFloor)
      bad.push_back("gain lower bound violated at item " +
                    std::to_string(c.item_index) + " level " +
                    std::to_string(c.level));

  // Valued items must be exhausted (the equal half plus an exhausting
  // waterfill, a full-supply waterfill, or exhausted sub-items).
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    const Item& item = inst.item(t);
    double vmax = *std::max_element(item.values.begin(), item.values.end());
    if (vmax == 0.0) continue;
    KahanSum given;
    for (std::size_t i = 0; i < inst.num_agents(); ++i)
      given.add(trace.allocation.at(i, t));
    if (given.value() < item.supply * (1.0 - kFeasibilityTol))
      bad.push_back("valued item " + std::to_string(t) + " not fully allocated");
  }

  // Anticipation guarantee, checked when the run's lambda covers the
  // instance's true balance ratio.
  if (!trace.anticipated_final.empty()) {
    bool have_lambda_star = true;
    double lambda_star = 0.0;
    try {
      lambda_star = balance_ratio(inst);
    } catch (const UndefinedRatioError&) {
      have_lambda_star = false;
    }
    if (have_lambda_star && trace.lambda >= lambda_star * (1.0 - 1e-12)) {
      for (std::size_t i = 0; i < fresh.size(); ++i)
        if (fresh[i] < trace.anticipated_final[i] * (1.0 - 1e-9))
          bad.push_back("anticipated utility exceeds the real one for agent " +
                        std::to_string(i));
    }
  }
  return bad;
}

}  // namespace nashstream
