// Command-line front end: instance generation, single runs, benchmark sweeps,
// and ratio reports. Exit codes: 0 success, 2 usage or invalid input, 3 audit
// violation, 4 benchmark-solver nonconvergence under --strict.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nashstream/errors.hpp"
#include "nashstream/generators.hpp"
#include "nashstream/instance_io.hpp"
#include "nashstream/metrics.hpp"
#include "nashstream/offline_eg.hpp"
#include "nashstream/online.hpp"
#include "nashstream/report.hpp"

namespace {

using namespace nashstream;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAudit = 3;
constexpr int kExitNonconvergence = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ----- shared helpers -----------------------------------------------------------

struct OfflineResult {
  bool attempted = false;
  bool converged = false;
  EGSolution solution;  // best iterate even when not converged
};

OfflineResult solve_offline(const Instance& inst, double tol) {
  OfflineResult out;
  out.attempted = true;
  EGOptions opts;
  opts.tol = tol;
  try {
    out.solution = solve_eg(inst, opts);
    out.converged = true;
  } catch (const EGNonconvergenceError& e) {
    out.solution = e.best();
    out.converged = false;
  }
  return out;
}

std::optional<double> instance_lambda_star(const Instance& inst) {
  try {
    return balance_ratio(inst);
  } catch (const UndefinedRatioError&) {
    return std::nullopt;
  }
}

// Fills the offline-dependent cells of a report row. Nonconverged solves leave
// offline_nw / competitive_ratio / mu_star empty; fw_gap still records the best
// certificate so the row is recognizably incomplete.
void fill_offline_cells(ReportRow& row, const OfflineResult& off,
                        double algorithm_nw) {
  if (!off.attempted) return;
  row.fw_gap = off.solution.fw_gap;
  if (!off.converged) return;
  double opt = nash_welfare(off.solution.utilities);
  row.offline_nw = opt;
  row.competitive_ratio = competitive_ratio(opt, algorithm_nw);
  try {
    row.mu_star = impartiality_ratio(off.solution);
  } catch (const UndefinedRatioError&) {
  }
}

double half_and_half_bound(double lambda, std::size_t n) {
  double nn = static_cast<double>(n);
  return 4.0 * std::log(4.0 * lambda * lambda * nn * nn * nn);
}

std::size_t worker_count(std::size_t flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("NASH_STREAM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    throw UsageError("NASH_STREAM_THREADS must be a positive integer");
  }
  return 1;
}

// Runs fn(i) for i in [0, count) on `threads` workers. Results must be written
// to preallocated slots so output order is deterministic.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, count == 0 ? std::size_t{1} : count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
          fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ----- gen ----------------------------------------------------------------------

struct GenArgs {
  std::string family;
  std::size_t n = 0;
  std::string base_path;
  std::size_t copies = 0;
  std::string order = "interleaved";
  std::size_t agents = 0;
  std::size_t items = 0;
  double lambda = 1.0;
  double density = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string mode = "number";
  bool solve = false;
  double tol = 1e-7;
};

int cmd_gen(const GenArgs& a, const CLI::App& sub) {
  Instance inst(1, {Item{1.0, {0.0}}});
  auto need = [&](const char* flag) {
    if (sub.count(flag) == 0)
      throw UsageError(std::string("family ") + a.family + " requires " + flag);
  };
  if (a.family == "hard-table2" || a.family == "hard-table2-binary") {
    need("--n");
    inst = a.family == "hard-table2" ? gen_hard_table2(a.n)
                                     : gen_hard_table2_binary(a.n);
  } else if (a.family == "copies") {
    need("--base");
    need("--copies");
    if (a.order != "interleaved" && a.order != "sequential")
      throw UsageError("--order must be interleaved or sequential");
    Instance base = read_instance(a.base_path);
    inst = gen_copies(base, a.copies,
                      a.order == "interleaved" ? CopyOrder::interleaved
                                               : CopyOrder::sequential);
  } else if (a.family == "random-balanced") {
    need("--agents");
    need("--items");
    inst = gen_random_balanced(a.agents, a.items, a.lambda, a.seed);
  } else if (a.family == "random-binary") {
    need("--agents");
    need("--items");
    inst = gen_random_binary(a.agents, a.items, a.density, a.seed);
  } else {
    throw UsageError("unknown family: " + a.family +
                     " (expected hard-table2, hard-table2-binary, copies, "
                     "random-balanced, or random-binary)");
  }

  NumberMode mode =
      a.mode == "string" ? NumberMode::decimal_string : NumberMode::json_number;
  if (a.mode != "string" && a.mode != "number")
    throw UsageError("--mode must be number or string");

  // Metrics go to stdout when the instance goes to a file; otherwise the
  // instance owns stdout and metrics move to stderr.
  std::ostream* metrics = &std::cout;
  if (a.out.empty()) {
    std::cout << instance_to_json(inst, mode) << '\n';
    metrics = &std::cerr;
  } else {
    write_instance(a.out, inst, mode);
  }

  auto lam = instance_lambda_star(inst);
  if (lam) {
    *metrics << "lambda_star=" << format_double(*lam) << '\n';
  } else {
    *metrics << "lambda_star=undefined (an agent has zero monopolist utility)\n";
  }
  if (a.solve) {
    OfflineResult off = solve_offline(inst, a.tol);
    if (off.converged) {
      *metrics << "mu_star=" << format_double(impartiality_ratio(off.solution))
               << " fw_gap=" << format_double(off.solution.fw_gap) << '\n';
    } else {
      *metrics << "mu_star=unavailable (solver gap "
               << format_double(off.solution.fw_gap) << " above tolerance)\n";
    }
  }
  return kExitOk;
}

// ----- run ----------------------------------------------------------------------

struct RunArgs {
  std::string instance_path;
  std::string alg;
  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  int k = -1;
  std::size_t level_cap = kDefaultLevelCap;
  std::string out;
  std::string report_path;
  std::string id;
  bool audit = false;
  bool no_offline = false;
  bool strict = false;
  bool timings = false;
  double tol = 1e-7;
};

RunTrace dispatch_run(const Instance& inst, const RunArgs& a, const CLI::App& sub,
                      TraceDetail detail, std::string* seed_or_k) {
  auto need = [&](const char* flag) {
    if (sub.count(flag) == 0)
      throw UsageError(std::string("algorithm ") + a.alg + " requires " + flag);
  };
  if (a.alg == "half-and-half") {
    need("--lambda");
    *seed_or_k = "lambda=" + format_double(a.lambda);
    return run_half_and_half(inst, a.lambda, detail);
  }
  if (a.alg == "half-and-half-guessed") {
    if (sub.count("--k") > 0) {
      *seed_or_k = "k=" + std::to_string(a.k);
      return run_half_and_half_guess(inst, a.k, detail);
    }
    need("--seed");
    RunTrace t = run_half_and_half_guessed(inst, a.seed, detail);
    *seed_or_k = "seed=" + std::to_string(a.seed) + ",k=" +
                 std::to_string(t.guess_k.value());
    return t;
  }
  if (a.alg == "myopic") {
    *seed_or_k = "";
    return run_myopic_greedy(inst, detail);
  }
  if (a.alg == "rounded") {
    need("--mu");
    *seed_or_k = "mu=" + format_double(a.mu);
    return run_rounded_greedy(inst, a.mu, detail, a.level_cap);
  }
  if (a.alg == "rounded-guessed") {
    if (sub.count("--k") > 0) {
      *seed_or_k = "k=" + std::to_string(a.k);
      return run_rounded_greedy_guess(inst, a.k, detail, a.level_cap);
    }
    need("--seed");
    RunTrace t = run_rounded_greedy_guessed(inst, a.seed, detail, a.level_cap);
    *seed_or_k = "seed=" + std::to_string(a.seed) + ",k=" +
                 std::to_string(t.guess_k.value());
    return t;
  }
  throw UsageError("unknown algorithm: " + a.alg +
                   " (expected half-and-half, half-and-half-guessed, myopic, "
                   "rounded, or rounded-guessed)");
}

void emit_report(const std::string& path, const std::vector<ReportRow>& rows) {
  if (path.empty() || path == "-") {
    write_report(std::cout, rows);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_report(out, rows);
  if (!out) throw Error("failed writing " + path);
}

int cmd_run(const RunArgs& a, const CLI::App& sub) {
  Instance inst = read_instance(a.instance_path);
  TraceDetail detail = a.audit ? TraceDetail::full : TraceDetail::summary;

  std::string seed_or_k;
  auto started = std::chrono::steady_clock::now();
  RunTrace trace = dispatch_run(inst, a, sub, detail, &seed_or_k);
  double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                started)
          .count();

  if (a.audit) {
    std::vector<std::string> bad = audit_trace(trace, inst);
    if (!bad.empty()) {
      for (const std::string& b : bad) std::cerr << "audit: " << b << '\n';
      return kExitAudit;
    }
  }
  if (!a.out.empty()) write_allocation(a.out, trace.allocation);

  ReportRow row;
  row.instance_id =
      a.id.empty() ? std::filesystem::path(a.instance_path).filename().string()
                   : a.id;
  row.algorithm = trace.algorithm;
  row.seed_or_k = seed_or_k;
  double alg_nw = nash_welfare(trace.final_utilities);
  row.algorithm_nw = alg_nw;
  if (auto lam = instance_lambda_star(inst)) row.lambda_star = *lam;
  if (a.timings) row.wall_time_ms = elapsed_ms;

  OfflineResult off;
  if (!a.no_offline) {
    off = solve_offline(inst, a.tol);
    fill_offline_cells(row, off, alg_nw);
  }
  if (trace.algorithm == "half-and-half" && std::isfinite(trace.lambda)) {
    double bound = half_and_half_bound(trace.lambda, inst.num_agents());
    row.bound_value = bound;
    if (row.competitive_ratio)
      row.bound_satisfied = *row.competitive_ratio <= bound ? "yes" : "no";
  }

  emit_report(a.report_path, {row});
  if (a.strict && off.attempted && !off.converged) return kExitNonconvergence;
  return kExitOk;
}

// ----- bench --------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> families;  // default: all three groups
  std::vector<std::size_t> hard_n = {3, 4, 5, 6};
  std::vector<std::size_t> agents = {2, 4, 8};
  std::vector<double> lambdas = {1.0, 2.0, 16.0};
  std::size_t items = 40;
  std::size_t seeds = 3;
  double density = 0.5;
  int enumerate_k = -1;
  std::size_t threads = 0;
  std::string out;
  bool timings = false;
  bool strict = false;
  double tol = 1e-7;
};

struct BenchInstance {
  std::string id;
  std::string params;
  Instance inst;
  bool hard = false;
  std::size_t hard_n = 0;
  OfflineResult offline;
};

struct BenchCell {
  std::size_t instance_index = 0;
  std::string alg;  // half-and-half | myopic | rounded | guessed-hh | guessed-rounded
  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
};

// Expected-welfare evaluation of a guessed algorithm: per-k rows for k = 0..K,
// a certified lower bound on the expectation (tail mass counted as zero
// welfare), and the derandomized mixture.
std::vector<ReportRow> enumerate_guessed(const BenchInstance& bi,
                                         const std::string& alg, int max_k,
                                         bool timings) {
  std::vector<ReportRow> rows;
  std::vector<RunTrace> traces;
  std::vector<double> probs;
  KahanSum expected;
  for (int k = 0; k <= max_k; ++k) {
    auto started = std::chrono::steady_clock::now();
    RunTrace t = alg == "half-and-half-guessed"
                     ? run_half_and_half_guess(bi.inst, k, TraceDetail::summary)
                     : run_rounded_greedy_guess(bi.inst, k, TraceDetail::summary);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();
    double p = guess_probability(k);
    double nw = nash_welfare(t.final_utilities);
    expected.add(p * nw);

    ReportRow row;
    row.instance_id = bi.id;
    row.generator_params = bi.params;
    row.algorithm = alg;
    row.seed_or_k = "k=" + std::to_string(k);
    row.algorithm_nw = nw;
    if (auto lam = instance_lambda_star(bi.inst)) row.lambda_star = *lam;
    fill_offline_cells(row, bi.offline, nw);
    if (alg == "half-and-half-guessed") {
      row.bound_value = half_and_half_bound(t.lambda, bi.inst.num_agents());
      if (row.competitive_ratio)
        row.bound_satisfied = *row.competitive_ratio <= *row.bound_value ? "yes" : "no";
    }
    if (timings) row.wall_time_ms = ms;
    rows.push_back(std::move(row));
    traces.push_back(std::move(t));
    probs.push_back(p);
  }

  Allocation mix = derandomize_mixture(traces, probs);
  double mix_nw = nash_welfare(utilities(mix, bi.inst));
  double lb = expected.value();

  ReportRow lb_row;
  lb_row.instance_id = bi.id;
  lb_row.generator_params = bi.params;
  lb_row.algorithm = alg;
  lb_row.seed_or_k = "expected-lb";
  lb_row.algorithm_nw = lb;
  if (auto lam = instance_lambda_star(bi.inst)) lb_row.lambda_star = *lam;
  fill_offline_cells(lb_row, bi.offline, lb);
  rows.push_back(std::move(lb_row));

  // The mixture's bound column records the concavity relation: mixture welfare
  // is at least the probability-weighted mean.
  ReportRow mix_row;
  mix_row.instance_id = bi.id;
  mix_row.generator_params = bi.params;
  mix_row.algorithm = alg;
  mix_row.seed_or_k = "mixture";
  mix_row.algorithm_nw = mix_nw;
  if (auto lam = instance_lambda_star(bi.inst)) mix_row.lambda_star = *lam;
  fill_offline_cells(mix_row, bi.offline, mix_nw);
  mix_row.bound_value = lb;
  mix_row.bound_satisfied = mix_nw >= lb * (1.0 - 1e-12) ? "yes" : "no";
  rows.push_back(std::move(mix_row));
  return rows;
}

int cmd_bench(const BenchArgs& a) {
  std::vector<std::string> families = a.families;
  if (families.empty()) families = {"hard-table2", "random-balanced", "random-binary"};

  // Phase 0: construct instances.
  std::vector<BenchInstance> instances;
  for (const std::string& fam : families) {
    if (fam == "hard-table2") {
      for (std::size_t n : a.hard_n) {
        BenchInstance bi{"hard-table2(n=" + std::to_string(n) + ")",
                         "n=" + std::to_string(n), gen_hard_table2(n), true, n, {}};
        instances.push_back(std::move(bi));
      }
    } else if (fam == "random-balanced") {
      for (std::size_t n : a.agents)
        for (double lam : a.lambdas)
          for (std::uint64_t s = 0; s < a.seeds; ++s) {
            std::string p = "agents=" + std::to_string(n) +
                            ",items=" + std::to_string(a.items) +
                            ",lambda=" + format_double(lam) +
                            ",seed=" + std::to_string(s);
            instances.push_back(BenchInstance{
                "random-balanced(" + p + ")", p,
                gen_random_balanced(n, a.items, lam, s), false, 0, {}});
          }
    } else if (fam == "random-binary") {
      for (std::size_t n : a.agents)
        for (std::uint64_t s = 0; s < a.seeds; ++s) {
          std::string p = "agents=" + std::to_string(n) +
                          ",items=" + std::to_string(a.items) +
                          ",density=" + format_double(a.density) +
                          ",seed=" + std::to_string(s);
          instances.push_back(BenchInstance{"random-binary(" + p + ")", p,
                                            gen_random_binary(n, a.items, a.density, s),
                                            false, 0, {}});
        }
    } else {
      throw UsageError("unknown family: " + fam);
    }
  }

  std::size_t threads = worker_count(a.threads);

  // Phase 1: one offline solve per instance, parallel across instances.
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    instances[i].offline = solve_offline(instances[i].inst, a.tol);
  });

  // Phase 2: algorithm cells, parallel, written in deterministic order.
  std::vector<BenchCell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const BenchInstance& bi = instances[i];
    double lam_run = instance_lambda_star(bi.inst).value_or(1.0);
    cells.push_back(BenchCell{i, "half-and-half", std::max(1.0, lam_run), 0, 0});
    cells.push_back(BenchCell{i, "myopic", 0, 0, 0});
    double mu_run = 2.0;
    if (bi.offline.converged) {
      try {
        mu_run = std::max(1.0, impartiality_ratio(bi.offline.solution));
      } catch (const UndefinedRatioError&) {
      }
    }
    cells.push_back(BenchCell{i, "rounded", 0, mu_run, 0});
    if (a.enumerate_k >= 0) {
      cells.push_back(BenchCell{i, "half-and-half-guessed", 0, 0, 0});
      cells.push_back(BenchCell{i, "rounded-guessed", 0, 0, 0});
    } else {
      for (std::uint64_t s = 0; s < a.seeds; ++s) {
        cells.push_back(BenchCell{i, "half-and-half-guessed", 0, 0, s});
        cells.push_back(BenchCell{i, "rounded-guessed", 0, 0, s});
      }
    }
  }

  std::vector<std::vector<ReportRow>> results(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    const BenchCell& cell = cells[c];
    const BenchInstance& bi = instances[cell.instance_index];
    if (a.enumerate_k >= 0 && (cell.alg == "half-and-half-guessed" ||
                               cell.alg == "rounded-guessed")) {
      results[c] = enumerate_guessed(bi, cell.alg, a.enumerate_k, a.timings);
      return;
    }
    auto started = std::chrono::steady_clock::now();
    RunTrace t;
    std::string seed_or_k;
    if (cell.alg == "half-and-half") {
      t = run_half_and_half(bi.inst, cell.lambda, TraceDetail::summary);
      seed_or_k = "lambda=" + format_double(cell.lambda);
    } else if (cell.alg == "myopic") {
      t = run_myopic_greedy(bi.inst, TraceDetail::summary);
    } else if (cell.alg == "rounded") {
      t = run_rounded_greedy(bi.inst, cell.mu, TraceDetail::summary);
      seed_or_k = "mu=" + format_double(cell.mu);
    } else if (cell.alg == "half-and-half-guessed") {
      t = run_half_and_half_guessed(bi.inst, cell.seed, TraceDetail::summary);
      seed_or_k = "seed=" + std::to_string(cell.seed) + ",k=" +
                  std::to_string(t.guess_k.value());
    } else {
      t = run_rounded_greedy_guessed(bi.inst, cell.seed, TraceDetail::summary);
      seed_or_k = "seed=" + std::to_string(cell.seed) + ",k=" +
                  std::to_string(t.guess_k.value());
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();

    ReportRow row;
    row.instance_id = bi.id;
    row.generator_params = bi.params;
    row.algorithm = t.algorithm;
    row.seed_or_k = seed_or_k;
    double nw = nash_welfare(t.final_utilities);
    row.algorithm_nw = nw;
    if (auto lam = instance_lambda_star(bi.inst)) row.lambda_star = *lam;
    fill_offline_cells(row, bi.offline, nw);
    if (cell.alg == "half-and-half" ||
        (cell.alg == "half-and-half-guessed" && std::isfinite(t.lambda))) {
      double bound = half_and_half_bound(t.lambda, bi.inst.num_agents());
      row.bound_value = bound;
      if (row.competitive_ratio)
        row.bound_satisfied = *row.competitive_ratio <= bound ? "yes" : "no";
    }
    if (bi.hard && cell.alg == "myopic" && row.competitive_ratio) {
      // Hard instances certify a ratio at least (n-1)/e for any online play.
      double bound = (static_cast<double>(bi.hard_n) - 1.0) / std::exp(1.0);
      row.bound_value = bound;
      row.bound_satisfied = *row.competitive_ratio >= bound ? "yes" : "no";
    }
    if (a.timings) row.wall_time_ms = ms;
    results[c] = {std::move(row)};
  });

  std::vector<ReportRow> rows;
  for (auto& group : results)
    for (auto& row : group) rows.push_back(std::move(row));
  emit_report(a.out, rows);

  if (a.strict)
    for (const BenchInstance& bi : instances)
      if (bi.offline.attempted && !bi.offline.converged) return kExitNonconvergence;
  return kExitOk;
}

// ----- ratios -------------------------------------------------------------------

int cmd_ratios(const std::string& path, double tol, bool strict) {
  Instance inst = read_instance(path);
  std::vector<double> mono = monopolist_utilities(inst);
  std::vector<std::size_t> zero_agents;
  for (std::size_t i = 0; i < mono.size(); ++i)
    if (mono[i] <= 0.0) zero_agents.push_back(i);
  if (!zero_agents.empty()) {
    std::cerr << "ratios are undefined: zero monopolist utility for agent";
    if (zero_agents.size() > 1) std::cerr << 's';
    for (std::size_t i : zero_agents) std::cerr << ' ' << i;
    std::cerr << '\n';
    return kExitUsage;
  }

  OfflineResult off = solve_offline(inst, tol);
  nlohmann::ordered_json doc;
  doc["lambda_star"] = balance_ratio(inst);
  if (off.converged) {
    doc["mu_star"] = impartiality_ratio(off.solution);
  } else {
    doc["mu_star"] = nullptr;
  }
  doc["fw_gap"] = off.solution.fw_gap;
  doc["converged"] = off.converged;
  doc["monopolist_utilities"] = mono;
  doc["eg_utilities"] = off.solution.utilities;
  std::cout << doc.dump(2) << '\n';
  if (strict && !off.converged) return kExitNonconvergence;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nashstream: online Nash-welfare allocation of divisible items.\n"
      "Exit codes: 0 ok, 2 usage or invalid input, 3 audit violation,\n"
      "4 benchmark-solver nonconvergence under --strict."};
  app.require_subcommand(1);

  GenArgs g;
  CLI::App* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--family", g.family,
                  "hard-table2 | hard-table2-binary | copies | random-balanced | "
                  "random-binary")
      ->required();
  gen->add_option("--n", g.n, "size of the hard instance (agents = items = n)");
  gen->add_option("--base", g.base_path, "base instance file for copies");
  gen->add_option("--copies", g.copies, "number of copies");
  gen->add_option("--order", g.order, "copies arrival order: interleaved | sequential");
  gen->add_option("--agents", g.agents, "number of agents");
  gen->add_option("--items", g.items, "number of items");
  gen->add_option("--lambda", g.lambda, "balance-ratio target (random-balanced)");
  gen->add_option("--density", g.density, "owner probability (random-binary)");
  gen->add_option("--seed", g.seed, "RNG seed");
  gen->add_option("--out", g.out, "output path (default: instance JSON to stdout)");
  gen->add_option("--mode", g.mode, "JSON number encoding: number | string");
  gen->add_flag("--solve", g.solve, "also solve the benchmark program and print mu_star");
  gen->add_option("--tol", g.tol, "benchmark solver gap tolerance");

  RunArgs r;
  CLI::App* run = app.add_subcommand("run", "Run one online algorithm on an instance");
  run->add_option("instance", r.instance_path, "instance JSON file")->required();
  run->add_option("--alg", r.alg,
                  "half-and-half | half-and-half-guessed | myopic | rounded | "
                  "rounded-guessed")
      ->required();
  run->add_option("--lambda", r.lambda, "balance upper bound (half-and-half)");
  run->add_option("--mu", r.mu, "impartiality upper bound (rounded)");
  run->add_option("--seed", r.seed, "guess seed (guessed algorithms)");
  run->add_option("--k", r.k, "explicit guess exponent instead of a seed");
  run->add_option("--level-cap", r.level_cap, "max rounding levels per item");
  run->add_option("--out", r.out, "allocation CSV path");
  run->add_option("--report", r.report_path, "report CSV path (default: stdout)");
  run->add_option("--id", r.id, "instance id for the report row");
  run->add_flag("--audit", r.audit, "verify trace guarantees; exit 3 on violation");
  run->add_flag("--no-offline", r.no_offline, "skip the offline benchmark solve");
  run->add_flag("--strict", r.strict, "exit 4 if the benchmark solve does not converge");
  run->add_flag("--timings", r.timings, "fill the wall-time column");
  run->add_option("--tol", r.tol, "benchmark solver gap tolerance");

  BenchArgs b;
  CLI::App* bench = app.add_subcommand("bench", "Run a generator x algorithm sweep");
  bench->add_option("--families", b.families,
                    "subset of {hard-table2, random-balanced, random-binary}");
  bench->add_option("--hard-n", b.hard_n, "hard instance sizes");
  bench->add_option("--agents", b.agents, "agent counts for random families");
  bench->add_option("--lambdas", b.lambdas, "balance targets for random-balanced");
  bench->add_option("--items", b.items, "items per random instance");
  bench->add_option("--seeds", b.seeds, "seeds per random cell");
  bench->add_option("--density", b.density, "owner probability for random-binary");
  bench->add_option("--enumerate-k", b.enumerate_k,
                    "enumerate guesses k=0..K with expected-lb and mixture rows");
  bench->add_option("--threads", b.threads,
                    "worker count (default: NASH_STREAM_THREADS or 1)");
  bench->add_option("--out", b.out, "report CSV path (default: stdout)");
  bench->add_flag("--timings", b.timings, "fill the wall-time column");
  bench->add_flag("--strict", b.strict, "exit 4 if any benchmark solve fails");
  bench->add_option("--tol", b.tol, "benchmark solver gap tolerance");

  std::string ratios_path;
  double ratios_tol = 1e-7;
  bool ratios_strict = false;
  CLI::App* ratios = app.add_subcommand("ratios", "Print balance and impartiality ratios");
  ratios->add_option("instance", ratios_path, "instance JSON file")->required();
  ratios->add_option("--tol", ratios_tol, "benchmark solver gap tolerance");
  ratios->add_flag("--strict", ratios_strict,
                   "exit 4 if the benchmark solve does not converge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(g, *gen);
    if (*run) return cmd_run(r, *run);
    if (*bench) return cmd_bench(b);
    if (*ratios) return cmd_ratios(ratios_path, ratios_tol, ratios_strict);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InconsistencyError& e) {
    // Broken internal invariant: not an input problem.
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    // Library-reported input problems: validation, preconditions, undefined
    // ratios, oracle limits, unreadable files.
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
