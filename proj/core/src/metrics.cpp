#include "nashstream/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

std::vector<double> utilities(const Allocation& alloc, const Instance& inst) {
  if (alloc.num_agents() != inst.num_agents() ||
      alloc.num_items() != inst.num_items())
    throw PreconditionError("utilities: allocation/instance shape mismatch");
  std::vector<KahanSum> acc(inst.num_agents());
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    const Item& item = inst.item(t);
    for (std::size_t i = 0; i < inst.num_agents(); ++i)
      acc[i].add(item.values[i] * alloc.at(i, t));
  }
  std::vector<double> out(inst.num_agents());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
  return out;
}

double nash_welfare(std::span<const double> utils) {
  if (utils.empty()) throw PreconditionError("nash_welfare: empty utility vector");
  KahanSum log_sum;
  for (double u : utils) {
    if (u < 0.0 || !std::isfinite(u))
      throw PreconditionError("nash_welfare: utilities must be finite and nonnegative");
    if (u == 0.0) return 0.0;
    log_sum.add(std::log(u));
  }
  return std::exp(log_sum.value() / static_cast<double>(utils.size()));
}

std::vector<double> monopolist_utilities(const Instance& inst) {
  std::vector<KahanSum> acc(inst.num_agents());
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    const Item& item = inst.item(t);
    for (std::size_t i = 0; i < inst.num_agents(); ++i)
      acc[i].add(item.values[i] * item.supply);
  }
  std::vector<double> out(inst.num_agents());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
  return out;
}

double balance_ratio(const Instance& inst) {
  std::vector<double> v = monopolist_utilities(inst);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0)
      throw UndefinedRatioError("balance ratio undefined: agent " +
                                std::to_string(i) + " has zero monopolist utility");
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  return hi / lo;
}

double competitive_ratio(double opt_nw, double alg_nw) {
  if (opt_nw < 0.0 || alg_nw < 0.0 || !std::isfinite(opt_nw) || !std::isfinite(alg_nw))
    throw PreconditionError("competitive_ratio: welfare values must be finite and nonnegative");
  if (alg_nw > opt_nw * (1.0 + kInvariantTol))
    throw InconsistencyError("algorithm welfare " + format_double(alg_nw) +
                             " exceeds offline optimum " + format_double(opt_nw));
  if (opt_nw == 0.0 && alg_nw == 0.0) return 1.0;
  if (alg_nw == 0.0) return std::numeric_limits<double>::infinity();
  return opt_nw / alg_nw;
}

double prefix_average_gap(std::span<const double> a) {
  if (a.empty()) throw PreconditionError("prefix_average_gap: empty input");
  if (a.front() < 1.0)
    throw PreconditionError("prefix_average_gap: entries must be at least 1");
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (a[i] > a[i + 1])
      throw PreconditionError("prefix_average_gap: input must be sorted ascending");
  KahanSum log_terms;
  KahanSum log_prefix;
  KahanSum prefix;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]))
      throw PreconditionError("prefix_average_gap: non-finite entry");
    log_terms.add(std::log(a[i]));
    prefix.add(a[i]);
    log_prefix.add(std::log(prefix.value() / static_cast<double>(i + 1)));
  }
  double n = static_cast<double>(a.size());
  return log_terms.value() / n - log_prefix.value() / n;
}

}  // namespace nashstream
