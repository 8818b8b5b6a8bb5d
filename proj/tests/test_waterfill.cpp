#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"
#include "nashstream/waterfill.hpp"

using namespace nashstream;

namespace {

// KKT conditions for max sum log(u'_i + v_i z_i), sum z_i = s, z >= 0:
// a single water level nu with v_i / post_i <= nu everywhere (equality where
// z_i > 0), plus exact budget use whenever some v_i > 0.
void check_kkt(const WaterfillResult& r, const std::vector<double>& u,
               const std::vector<double>& v, double s) {
  double total = kahan_total(r.amounts);
  bool any_value = std::any_of(v.begin(), v.end(), [](double x) { return x > 0; });
  if (any_value) {
    CHECK(total == doctest::Approx(s).epsilon(1e-12));
    CHECK(r.nu_star > 0.0);
  } else {
    CHECK(total == 0.0);
    CHECK(r.nu_star == 0.0);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(r.amounts[i] >= 0.0);
    CHECK(r.post_utilities[i] ==
          doctest::Approx(u[i] + v[i] * r.amounts[i]).epsilon(1e-12));
    if (v[i] == 0.0) {
      CHECK(r.amounts[i] == 0.0);
      continue;
    }
    double ratio = v[i] / r.post_utilities[i];
    CHECK(ratio <= r.nu_star * (1.0 + 1e-9));
    if (r.amounts[i] > 1e-12 * s)
      CHECK(ratio == doctest::Approx(r.nu_star).epsilon(1e-9));
  }
}

}  // namespace

TEST_CASE("waterfill closed-form cases") {
  // Equal empty stakes: split equally, post = s*v/n each.
  WaterfillResult r = waterfill(std::vector<double>{0.0, 0.0},
                                std::vector<double>{1.0, 3.0}, 2.0);
  CHECK(r.amounts[0] == doctest::Approx(1.0));
  CHECK(r.amounts[1] == doctest::Approx(1.0));
  check_kkt(r, {0.0, 0.0}, {1.0, 3.0}, 2.0);

  // One agent far ahead: the poor agent takes everything.
  r = waterfill(std::vector<double>{100.0, 0.0}, std::vector<double>{1.0, 1.0},
                1.0);
  CHECK(r.amounts[0] == 0.0);
  CHECK(r.amounts[1] == doctest::Approx(1.0));

  // Hand-solved interior split: u = (0.5, 0.5), v = (1, 3), s = 2.
  // Level w solves (w - 0.5) + (w - 1/6) = 2 -> w = 4/3; z = (5/6, 7/6).
  r = waterfill(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 3.0},
                2.0);
  CHECK(r.amounts[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK(r.amounts[1] == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
  CHECK(r.nu_star == doctest::Approx(3.0 / 4.0).epsilon(1e-13));
  check_kkt(r, {0.5, 0.5}, {1.0, 3.0}, 2.0);

  // Zero-valued agents receive exactly zero.
  r = waterfill(std::vector<double>{1.0, 1.0, 0.0},
                std::vector<double>{2.0, 0.0, 0.0}, 1.0);
  CHECK(r.amounts == std::vector<double>{1.0, 0.0, 0.0});

  // All-zero values: zero allocation, sentinel multiplier.
  r = waterfill(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0},
                5.0);
  CHECK(r.amounts == std::vector<double>{0.0, 0.0});
  CHECK(r.nu_star == 0.0);
}

TEST_CASE("waterfill rejects bad inputs") {
  std::vector<double> u{1.0}, v{1.0};
  CHECK_THROWS_AS(waterfill(u, v, 0.0), PreconditionError);
  CHECK_THROWS_AS(waterfill(u, v, -1.0), PreconditionError);
  CHECK_THROWS_AS(waterfill(std::vector<double>{}, std::vector<double>{}, 1.0),
                  PreconditionError);
  CHECK_THROWS_AS(waterfill(std::vector<double>{1.0, 2.0}, v, 1.0),
                  PreconditionError);
  CHECK_THROWS_AS(waterfill(std::vector<double>{-0.1}, v, 1.0),
                  PreconditionError);
  CHECK_THROWS_AS(waterfill(u, std::vector<double>{-1.0}, 1.0),
                  PreconditionError);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(waterfill(std::vector<double>{inf}, v, 1.0),
                  PreconditionError);
}

TEST_CASE("waterfill satisfies KKT on random inputs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3000; ++trial) {
    std::size_t n = 1 + rng() % 12;
    std::vector<double> u(n), v(n);
    for (double& x : u) x = (rng() % 4 == 0) ? 0.0 : 10.0 * unit_from_bits(rng());
    for (double& x : v) x = (rng() % 4 == 0) ? 0.0 : std::exp(6.0 * unit_from_bits(rng()) - 3.0);
    double s = 0.01 + 5.0 * unit_from_bits(rng());
    WaterfillResult r = waterfill(u, v, s);
    check_kkt(r, u, v, s);
  }
}

TEST_CASE("waterfill beats random feasible alternatives") {
  // Optimality spot check: the claimed optimum never loses to sampled points.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 5;
    std::vector<double> u(n), v(n);
    for (double& x : u) x = 0.2 + 3.0 * unit_from_bits(rng());
    for (double& x : v) x = 0.1 + 2.0 * unit_from_bits(rng());
    double s = 0.5 + 2.0 * unit_from_bits(rng());
    WaterfillResult r = waterfill(u, v, s);
    double opt = 0.0;
    for (std::size_t i = 0; i < n; ++i) opt += std::log(r.post_utilities[i]);
    for (int probe = 0; probe < 50; ++probe) {
      std::vector<double> w(n);
      double tot = 0.0;
      for (double& x : w) {
        x = unit_from_bits(rng());
        tot += x;
      }
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        obj += std::log(u[i] + v[i] * (s * w[i] / tot));
      CHECK(obj <= opt + 1e-9);
    }
  }
}

TEST_CASE("gain residual oracle values") {
  // u = (1, 1), v = (1, 1), s = 2: gain = 2 log 2, drop = 2 * 1/2, residual
  // = 2 log 2 - 1 = log 4 - 1.
  std::vector<double> u{1.0, 1.0}, v{1.0, 1.0};
  WaterfillResult r = waterfill(u, v, 2.0);
  CHECK(gain_lower_bound_residual(r, u, v, 2.0) ==
        doctest::Approx(0.386294361119891).epsilon(1e-13));

  // u = (1, 2), v = (1, 0), s = 2: gain = log 3, drop = 2 * (1/3);
  // residual = log 3 - 2/3.
  u = {1.0, 2.0};
  v = {1.0, 0.0};
  r = waterfill(u, v, 2.0);
  CHECK(gain_lower_bound_residual(r, u, v, 2.0) ==
        doctest::Approx(0.431945622001443).epsilon(1e-13));

  // An agent rising from zero: unbounded log gain.
  u = {0.0, 1.0};
  v = {1.0, 1.0};
  r = waterfill(u, v, 1.0);
  CHECK(std::isinf(gain_lower_bound_residual(r, u, v, 1.0)));

  // All-zero values: both sides empty, residual 0.
  u = {1.0, 1.0};
  v = {0.0, 0.0};
  r = waterfill(u, v, 1.0);
  CHECK(gain_lower_bound_residual(r, u, v, 1.0) == 0.0);
}

TEST_CASE("gain residual is nonnegative on random inputs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5000; ++trial) {
    std::size_t n = 1 + rng() % 10;
    std::vector<double> u(n), v(n);
    for (double& x : u) x = 0.05 + 20.0 * unit_from_bits(rng());
    for (double& x : v)
      x = (rng() % 5 == 0) ? 0.0 : std::exp(8.0 * unit_from_bits(rng()) - 4.0);
    double s = 0.01 + 10.0 * unit_from_bits(rng());
    WaterfillResult r = waterfill(u, v, s);
    double res = gain_lower_bound_residual(r, u, v, s);
    CHECK(res >= kGainResidualFloor);
  }
}

TEST_CASE("waterfill invariances: joint scaling and permutation") {
  // Scaling utilities and values together shifts the log objective by a
  // constant, so the split is unchanged; permuting agents permutes the split.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 6;
    std::vector<double> u(n), v(n), u2(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = 5.0 * unit_from_bits(rng());
      v[i] = 0.01 + unit_from_bits(rng());
      u2[i] = u[i] * 4.0;  // exact power-of-two scaling
      v2[i] = v[i] * 4.0;
    }
    double s = 0.1 + unit_from_bits(rng());
    WaterfillResult a = waterfill(u, v, s);
    WaterfillResult b = waterfill(u2, v2, s);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(a.amounts[i] == doctest::Approx(b.amounts[i]).epsilon(1e-13));

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> up(n), vp(n);
    for (std::size_t i = 0; i < n; ++i) {
      up[i] = u[perm[i]];
      vp[i] = v[perm[i]];
    }
    WaterfillResult p = waterfill(up, vp, s);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(p.amounts[i] == doctest::Approx(a.amounts[perm[i]]).epsilon(1e-13));
  }
}
