#include "nashstream/offline_eg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashstream/metrics.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_objective(std::span<const double> utils) {
  KahanSum s;
  for (double u : utils) {
    if (u <= 0.0) return -kInf;
    s.add(std::log(u));
  }
  return s.value();
}

Allocation uniform_init(const Instance& inst) {
  Allocation x(inst.num_agents(), inst.num_items());
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    double share = inst.item(t).supply / static_cast<double>(inst.num_agents());
    for (std::size_t i = 0; i < inst.num_agents(); ++i) x.at(i, t) = share;
  }
  return x;
}

struct Lmo {
  Allocation direction;
  std::vector<double> direction_utils;
  double gap = 0.0;
};

// Linear maximization over the product of scaled simplices: each item goes
// fully to the agents with the highest marginal ratio v_it / u_i, split
// equally on ties; items nobody values are left unallocated.
Lmo linear_maximizer(const Instance& inst, const Allocation& x,
                     std::span<const double> utils) {
  const std::size_t n = inst.num_agents();
  const std::size_t m = inst.num_items();
  Lmo out;
  out.direction = Allocation(n, m);
  KahanSum best_total;   // <grad, d>
  KahanSum current_total;  // <grad, x>
  std::vector<KahanSum> du(n);
  std::vector<std::size_t> argmax;
  for (std::size_t t = 0; t < m; ++t) {
    const Item& item = inst.item(t);
    double best = 0.0;
    argmax.clear();
    KahanSum held;
    for (std::size_t i = 0; i < n; ++i) {
      double g = item.values[i] / utils[i];
      held.add(g * x.at(i, t));
      if (g > best) {
        best = g;
        argmax.assign(1, i);
      } else if (g == best && g > 0.0) {
        argmax.push_back(i);
      }
    }
    current_total.add(held.value());
    if (best > 0.0) {
      double share = item.supply / static_cast<double>(argmax.size());
      for (std::size_t i : argmax) {
        out.direction.at(i, t) = share;
        du[i].add(item.values[i] * share);
      }
      best_total.add(item.supply * best);
    }
  }
  out.direction_utils.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.direction_utils[i] = du[i].value();
  out.gap = best_total.value() - current_total.value();
  return out;
}

// Exact maximization of gamma -> sum_i log(u_i + gamma (ud_i - u_i)) on [0, 1]:
// concave, so bisect on the sign of the derivative.
double exact_line_search(std::span<const double> u, std::span<const double> ud) {
  auto deriv = [&](double g) {
    KahanSum s;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double d = ud[i] - u[i];
      s.add(d / (u[i] + g * d));
    }
    return s.value();
  };
  if (deriv(0.0) <= 0.0) return 0.0;
  double d1 = deriv(1.0);
  if (std::isfinite(d1) && d1 >= 0.0) {
    bool finite_at_one = true;
    for (double v : ud) finite_at_one = finite_at_one && v > 0.0;
    if (finite_at_one) return 1.0;
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo > 1e-18; ++it) {
    double mid = 0.5 * (lo + hi);
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

void apply_segment_step(Allocation& x, std::vector<double>& u, const Lmo& lmo,
                        double gamma) {
  const std::size_t n = x.num_agents();
  const std::size_t m = x.num_items();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < m; ++t)
      x.at(i, t) += gamma * (lmo.direction.at(i, t) - x.at(i, t));
  for (std::size_t i = 0; i < n; ++i)
    u[i] += gamma * (lmo.direction_utils[i] - u[i]);
}

// One pass of closed-form two-coordinate ascent: within each item, move mass
// from the active agent with the lowest marginal ratio to the agent with the
// highest. The interior optimum of
//   log(u_g - v_g d) + log(u_r + v_r d)
// is d = (v_r u_g - v_g u_r) / (2 v_g v_r), clamped to the giver's holding.
// Never drives a utility to zero (the log barrier keeps the optimum interior).
void pairwise_sweep(const Instance& inst, Allocation& x, std::vector<double>& u) {
  const std::size_t n = inst.num_agents();
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    const Item& item = inst.item(t);
    for (std::size_t round = 0; round < 4 * n; ++round) {
      std::size_t recv = n;
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double g = item.values[i] / u[i];
        if (g > best) {
          best = g;
          recv = i;
        }
      }
      if (recv == n) break;  // nobody values the item
      std::size_t give = n;
      double worst = kInf;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == recv || x.at(i, t) <= 0.0) continue;
        double g = item.values[i] / u[i];
        if (g < worst) {
          worst = g;
          give = i;
        }
      }
      if (give == n || worst >= best * (1.0 - 1e-15)) break;
      double vg = item.values[give];
      double vr = item.values[recv];
      double held = x.at(give, t);
      double delta =
          vg == 0.0 ? held
                    : std::min(held, (vr * u[give] - vg * u[recv]) / (2.0 * vg * vr));
      if (delta <= 0.0) break;
      x.at(give, t) = held - delta;
      x.at(recv, t) += delta;
      u[give] -= vg * delta;
      u[recv] += vr * delta;
    }
  }
}

}  // namespace

EGSolution solve_eg(const Instance& inst, const EGOptions& opts) {
  const std::size_t n = inst.num_agents();
  std::vector<double> monopolist = monopolist_utilities(inst);
  for (std::size_t i = 0; i < n; ++i)
    if (monopolist[i] <= 0.0)
      throw PreconditionError("solve_eg: agent " + std::to_string(i) +
                              " has zero monopolist utility");
  if (!(opts.tol > 0.0)) throw PreconditionError("solve_eg: tol must be positive");

  Allocation x;
  if (opts.init.has_value()) {
    x = *opts.init;
    if (!is_feasible(x, inst))
      throw PreconditionError("solve_eg: init allocation is not feasible");
    for (double u : utilities(x, inst))
      if (u <= 0.0)
        throw PreconditionError("solve_eg: init must give every agent positive utility");
  } else {
    x = uniform_init(inst);
  }

  std::vector<double> u = utilities(x, inst);
  double objective = log_objective(u);
  std::size_t iter = 0;
  double gap = kInf;

  auto snapshot = [&]() {
    EGSolution sol;
    sol.allocation = x;
    sol.utilities = utilities(x, inst);
    sol.objective = log_objective(sol.utilities);
    sol.fw_gap = linear_maximizer(inst, x, sol.utilities).gap;
    sol.iterations = iter;
    return sol;
  };

  for (iter = 1; iter <= opts.max_iters; ++iter) {
    u = utilities(x, inst);
    objective = log_objective(u);
    Lmo lmo = linear_maximizer(inst, x, u);
    gap = lmo.gap;
    if (opts.on_iteration) opts.on_iteration(iter, objective, gap);
    if (gap <= opts.tol) {
      EGSolution sol = snapshot();
      sol.iterations = iter;
      return sol;
    }

    double gamma;
    if (opts.step_rule == EGStepRule::fixed) {
      gamma = 2.0 / static_cast<double>(iter + 2);
      // The open-loop step may overshoot; keep the objective monotone by
      // falling back to the exact step when it would not ascend.
      std::vector<double> trial(u);
      for (std::size_t i = 0; i < n; ++i)
        trial[i] += gamma * (lmo.direction_utils[i] - trial[i]);
      if (log_objective(trial) < objective)
        gamma = exact_line_search(u, lmo.direction_utils);
    } else {
      gamma = exact_line_search(u, lmo.direction_utils);
    }
    apply_segment_step(x, u, lmo, gamma);
    if (opts.refine) pairwise_sweep(inst, x, u);
  }

  EGSolution best = snapshot();
  best.iterations = opts.max_iters;
  if (best.fw_gap <= opts.tol) return best;
  throw EGNonconvergenceError(
      "solve_eg: gap " + format_double(best.fw_gap) + " above tol " +
          format_double(opts.tol) + " after " + std::to_string(opts.max_iters) +
          " iterations",
      std::move(best));
}

// ----- exhaustive oracle -------------------------------------------------------

namespace {

void enumerate_compositions(std::size_t agents, std::size_t total,
                            std::vector<std::size_t>& current,
                            std::vector<std::vector<std::size_t>>& out) {
  if (agents == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (std::size_t c = 0; c <= total; ++c) {
    current.push_back(c);
    enumerate_compositions(agents - 1, total - c, current, out);
    current.pop_back();
  }
}

}  // namespace

OracleResult brute_force_oracle(const Instance& inst, std::size_t grid_steps) {
  const std::size_t n = inst.num_agents();
  const std::size_t m = inst.num_items();
  if (n > 3 || m > 3)
    throw OracleLimitError("brute_force_oracle: refuses N > 3 or T > 3");
  if (grid_steps == 0)
    throw PreconditionError("brute_force_oracle: grid_steps must be positive");

  std::vector<std::vector<std::size_t>> comps;
  {
    std::vector<std::size_t> cur;
    enumerate_compositions(n, grid_steps, cur, comps);
  }
  // Per item, the utility delta vector of every composition.
  std::vector<std::vector<std::vector<double>>> deltas(m);
  for (std::size_t t = 0; t < m; ++t) {
    const Item& item = inst.item(t);
    double unit = item.supply / static_cast<double>(grid_steps);
    deltas[t].reserve(comps.size());
    for (const auto& c : comps) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i)
        d[i] = static_cast<double>(c[i]) * unit * item.values[i];
      deltas[t].push_back(std::move(d));
    }
  }

  double best = -kInf;
  std::vector<std::size_t> best_choice(m, 0), choice(m, 0);
  std::vector<double> partial(n, 0.0);

  auto dfs = [&](auto&& self, std::size_t t) -> void {
    if (t == m) {
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (partial[i] <= 0.0) return;
        obj += std::log(partial[i]);
      }
      if (obj > best) {
        best = obj;
        best_choice = choice;
      }
      return;
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& d = deltas[t][c];
      for (std::size_t i = 0; i < n; ++i) partial[i] += d[i];
      choice[t] = c;
      self(self, t + 1);
      for (std::size_t i = 0; i < n; ++i) partial[i] -= d[i];
    }
  };
  dfs(dfs, 0);

  OracleResult out;
  out.allocation = Allocation(n, m);
  if (best == -kInf) {
    // Every grid point zeroes someone; report the best anyway as -inf with the
    // empty allocation. Happens only when an agent values nothing.
    out.objective = best;
    return out;
  }
  for (std::size_t t = 0; t < m; ++t) {
    double unit = inst.item(t).supply / static_cast<double>(grid_steps);
    for (std::size_t i = 0; i < n; ++i)
      out.allocation.at(i, t) = static_cast<double>(comps[best_choice[t]][i]) * unit;
  }
  out.objective = log_objective(utilities(out.allocation, inst));
  return out;
}

double grid_error_bound(const Instance& inst, std::size_t grid_steps) {
  const auto n = static_cast<double>(inst.num_agents());
  const auto g = static_cast<double>(grid_steps);
  if (g <= n)
    throw PreconditionError("grid_error_bound: grid_steps must exceed the agent count");
  // Rounding the true optimum down to the grid loses each agent at most
  // V_i / grid_steps, and the optimum is proportional (u_i* >= V_i / N).
  return n * std::log(g / (g - n));
}

// ----- audits and ratios --------------------------------------------------------

std::vector<std::string> check_eg_invariants(const EGSolution& sol,
                                             const Instance& inst) {
  std::vector<std::string> bad;
  const std::size_t n = inst.num_agents();
  if (sol.allocation.num_agents() != n ||
      sol.allocation.num_items() != inst.num_items()) {
    bad.push_back("allocation shape does not match the instance");
    return bad;
  }
  if (!is_feasible(sol.allocation, inst)) bad.push_back("allocation infeasible");

  std::vector<double> fresh = utilities(sol.allocation, inst);
  if (fresh.size() != sol.utilities.size()) {
    bad.push_back("utility vector has wrong length");
    return bad;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double scale = std::max(std::abs(fresh[i]), 1e-300);
    if (std::abs(fresh[i] - sol.utilities[i]) > 1e-9 * scale)
      bad.push_back("stored utility of agent " + std::to_string(i) +
                    " disagrees with the allocation");
  }
  double obj = log_objective(fresh);
  if (std::abs(obj - sol.objective) > 1e-9 * std::max(1.0, std::abs(obj)))
    bad.push_back("stored objective disagrees with the allocation");

  std::vector<double> v = monopolist_utilities(inst);
  for (std::size_t i = 0; i < n; ++i)
    if (fresh[i] < v[i] / static_cast<double>(n) - kInvariantTol * v[i])
      bad.push_back("proportionality violated for agent " + std::to_string(i));

  double mu = 0.0;
  bool have_mu = true;
  try {
    mu = impartiality_ratio(sol);
  } catch (const UndefinedRatioError&) {
    bad.push_back("impartiality ratio undefined (zero utility)");
    have_mu = false;
  }
  if (have_mu) {
    for (std::size_t t = 0; t < inst.num_items(); ++t) {
      const Item& item = inst.item(t);
      double vmax = *std::max_element(item.values.begin(), item.values.end());
      if (vmax == 0.0) continue;
      double eps = 1e-8 * item.supply;
      for (std::size_t i = 0; i < n; ++i)
        if (sol.allocation.at(i, t) > eps &&
            item.values[i] < vmax / mu - kInvariantTol * vmax)
          bad.push_back("support condition violated at agent " + std::to_string(i) +
                        ", item " + std::to_string(t));
    }
  }
  return bad;
}

double impartiality_ratio(const EGSolution& sol) {
  if (sol.utilities.empty())
    throw PreconditionError("impartiality_ratio: empty solution");
  double lo = kInf, hi = 0.0;
  for (double u : sol.utilities) {
    if (u <= 0.0)
      throw UndefinedRatioError("impartiality ratio undefined: zero optimal utility");
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return hi / lo;
}

RatioReport compute_ratio_report(const Instance& inst, const EGSolution& sol) {
  RatioReport r;
  r.balance_ratio = balance_ratio(inst);
  r.impartiality_ratio = impartiality_ratio(sol);
  r.monopolist_utils = monopolist_utilities(inst);
  r.fw_gap = sol.fw_gap;
  return r;
}

std::vector<std::string> check_ratio_relations(const RatioReport& report,
                                               std::size_t num_agents) {
  std::vector<std::string> bad;
  const auto n = static_cast<double>(num_agents);
  if (report.balance_ratio > n * report.impartiality_ratio * (1.0 + kInvariantTol))
    bad.push_back("balance ratio exceeds N * impartiality ratio");
  if (report.impartiality_ratio > n * report.balance_ratio * (1.0 + kInvariantTol))
    bad.push_back("impartiality ratio exceeds N * balance ratio");
  return bad;
}

}  // namespace nashstream
