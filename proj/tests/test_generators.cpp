#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "nashstream/errors.hpp"
#include "nashstream/generators.hpp"
#include "nashstream/instance.hpp"
#include "nashstream/metrics.hpp"
#include "nashstream/offline_eg.hpp"

using namespace nashstream;

TEST_CASE("staircase instance layout") {
  Instance inst = gen_hard_table2(3);
  CHECK(inst.num_agents() == 3);
  CHECK(inst.num_items() == 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(inst.item(t).supply == 1.0);
  CHECK(inst.item(0).values == std::vector<double>{9.0, 9.0, 9.0});
  CHECK(inst.item(1).values == std::vector<double>{0.0, 81.0, 81.0});
  CHECK(inst.item(2).values == std::vector<double>{0.0, 0.0, 729.0});
  CHECK(balance_ratio(inst) == doctest::Approx(91.0).epsilon(1e-15));

  CHECK_THROWS_AS(gen_hard_table2(1), PreconditionError);
  CHECK_THROWS_AS(gen_hard_table2(26), PreconditionError);

  // Ratios stay under n^(2n) for the sizes we benchmark.
  for (std::size_t n : {2, 3, 4, 5, 6}) {
    Instance h = gen_hard_table2(n);
    double cap = std::pow(static_cast<double>(n), 2.0 * static_cast<double>(n));
    CHECK(balance_ratio(h) <= cap);
    EGSolution sol = solve_eg(h);
    CHECK(impartiality_ratio(sol) <= cap);
  }
}

TEST_CASE("binary staircase matches the value staircase") {
  Instance bin = gen_hard_table2_binary(3);
  CHECK(bin.item(0).supply == 9.0);
  CHECK(bin.item(1).supply == 81.0);
  CHECK(bin.item(2).supply == 729.0);
  CHECK(bin.item(1).values == std::vector<double>{0.0, 1.0, 1.0});

  EGSolution a = solve_eg(gen_hard_table2(3));
  EGSolution b = solve_eg(bin);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(a.utilities[i] == doctest::Approx(b.utilities[i]).epsilon(1e-5));
}

TEST_CASE("copies are block-diagonal and ratio-preserving") {
  Instance base(2, {Item{1.0, {3.0, 1.0}}, Item{2.0, {1.0, 4.0}}});
  Instance inter = gen_copies(base, 3, CopyOrder::interleaved);
  CHECK(inter.num_agents() == 6);
  CHECK(inter.num_items() == 6);

  // Interleaved: item index t*m + c carries base item t for copy c's block.
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t c = 0; c < 3; ++c) {
      const Item& it = inter.item(t * 3 + c);
      CHECK(it.supply == base.item(t).supply);
      for (std::size_t g = 0; g < 3; ++g)
        for (std::size_t i = 0; i < 2; ++i)
          CHECK(it.values[g * 2 + i] ==
                (g == c ? base.item(t).values[i] : 0.0));
    }

  // Sequential: copy c's items are contiguous.
  Instance seq = gen_copies(base, 3, CopyOrder::sequential);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t t = 0; t < 2; ++t) {
      const Item& it = seq.item(c * 2 + t);
      CHECK(it.supply == base.item(t).supply);
      CHECK(it.values[c * 2] == base.item(t).values[0]);
      CHECK(it.values[c * 2 + 1] == base.item(t).values[1]);
    }

  CHECK(balance_ratio(inter) == doctest::Approx(balance_ratio(base)));
  EGSolution sol_base = solve_eg(base);
  EGSolution sol_copy = solve_eg(inter);
  CHECK(impartiality_ratio(sol_copy) ==
        doctest::Approx(impartiality_ratio(sol_base)).epsilon(1e-5));

  CHECK_THROWS_AS(gen_copies(base, 0), PreconditionError);
}

TEST_CASE("balanced generator hits its ratio target") {
  std::mt19937_64 seeds(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + seeds() % 7;
    double target = 1.0 + 30.0 * (static_cast<double>(seeds() % 1000) / 1000.0);
    Instance inst = gen_random_balanced(n, 20, target, seeds());
    CHECK(balance_ratio(inst) == doctest::Approx(target).epsilon(1e-9));
    for (std::size_t t = 0; t < inst.num_items(); ++t) {
      CHECK(inst.item(t).supply > 0.5);
      CHECK(inst.item(t).supply <= 2.0);
    }
  }

  // Deterministic in the seed, sensitive to it.
  Instance a = gen_random_balanced(3, 5, 2.0, 99);
  Instance b = gen_random_balanced(3, 5, 2.0, 99);
  Instance c = gen_random_balanced(3, 5, 2.0, 100);
  CHECK(a.item(0).values == b.item(0).values);
  CHECK(a.item(0).values != c.item(0).values);

  CHECK_THROWS_AS(gen_random_balanced(3, 5, 0.5, 0), PreconditionError);
  CHECK_THROWS_AS(gen_random_balanced(0, 5, 2.0, 0), PreconditionError);
  CHECK_THROWS_AS(gen_random_balanced(3, 0, 2.0, 0), PreconditionError);

  // lambda = 1 means identical monopolist utilities.
  Instance flat = gen_random_balanced(4, 10, 1.0, 5);
  std::vector<double> v = monopolist_utilities(flat);
  for (double x : v) CHECK(x == doctest::Approx(v[0]).epsilon(1e-12));
}

TEST_CASE("binary generator structure") {
  std::mt19937_64 seeds(15);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + seeds() % 7;
    Instance inst = gen_random_binary(n, 15, 0.5, seeds());
    for (std::size_t t = 0; t < inst.num_items(); ++t) {
      const Item& it = inst.item(t);
      CHECK(it.supply == 1.0);
      double common = 0.0;
      std::size_t owners = 0;
      for (double x : it.values)
        if (x > 0.0) {
          ++owners;
          if (common == 0.0) common = x;
          CHECK(x == common);  // binary structure: one shared positive value
        }
      CHECK(owners >= 1);
      CHECK(common > 0.0);
      CHECK(common <= 1.0);
    }
  }

  // density = 1: every agent owns every item.
  Instance all = gen_random_binary(3, 4, 1.0, 2);
  for (std::size_t t = 0; t < 4; ++t)
    for (double x : all.item(t).values) CHECK(x > 0.0);

  CHECK_THROWS_AS(gen_random_binary(3, 4, 0.0, 0), PreconditionError);
  CHECK_THROWS_AS(gen_random_binary(3, 4, 1.5, 0), PreconditionError);
}
