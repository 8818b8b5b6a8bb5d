#include "nashstream/generators.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

namespace {

// n^e by successive multiplication: deterministic across libm versions.
double int_power(std::size_t n, std::size_t e) {
  double p = 1.0;
  for (std::size_t i = 0; i < e; ++i) p *= static_cast<double>(n);
  return p;
}

void check_table2_n(std::size_t n) {
  if (n < 2 || n > 25)
    throw PreconditionError("hard instance size must be in [2, 25], got " +
                            std::to_string(n));
}

void check_shape(std::size_t num_agents, std::size_t num_items) {
  if (num_agents == 0) throw PreconditionError("need at least one agent");
  if (num_items == 0) throw PreconditionError("need at least one item");
}

double unit_open(std::mt19937_64& rng) {
  return 1.0 - unit_from_bits(rng());  // (0, 1]
}

}  // namespace

Instance gen_hard_table2(std::size_t n) {
  check_table2_n(n);
  std::vector<Item> items;
  items.reserve(n);
  for (std::size_t t = 1; t <= n; ++t) {
    Item item;
    item.supply = 1.0;
    item.values.assign(n, 0.0);
    double v = int_power(n, 2 * t);
    for (std::size_t i = t; i <= n; ++i) item.values[i - 1] = v;
    items.push_back(std::move(item));
  }
  return Instance(n, std::move(items));
}

Instance gen_hard_table2_binary(std::size_t n) {
  check_table2_n(n);
  std::vector<Item> items;
  items.reserve(n);
  for (std::size_t t = 1; t <= n; ++t) {
    Item item;
    item.supply = int_power(n, 2 * t);
    item.values.assign(n, 0.0);
    for (std::size_t i = t; i <= n; ++i) item.values[i - 1] = 1.0;
    items.push_back(std::move(item));
  }
  return Instance(n, std::move(items));
}

Instance gen_copies(const Instance& base, std::size_t m, CopyOrder order) {
  if (m == 0) throw PreconditionError("need at least one copy");
  const std::size_t n = base.num_agents();
  std::vector<Item> items;
  items.reserve(base.num_items() * m);
  auto emit = [&](std::size_t t, std::size_t c) {
    const Item& src = base.item(t);
    Item item;
    item.supply = src.supply;
    item.values.assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) item.values[c * n + i] = src.values[i];
    items.push_back(std::move(item));
  };
  if (order == CopyOrder::interleaved) {
    for (std::size_t t = 0; t < base.num_items(); ++t)
      for (std::size_t c = 0; c < m; ++c) emit(t, c);
  } else {
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t t = 0; t < base.num_items(); ++t) emit(t, c);
  }
  return Instance(n * m, std::move(items));
}

Instance gen_random_balanced(std::size_t num_agents, std::size_t num_items,
                             double lambda_target, std::uint64_t seed) {
  check_shape(num_agents, num_items);
  if (!(lambda_target >= 1.0) || !std::isfinite(lambda_target))
    throw PreconditionError("lambda target must be finite and at least 1");

  std::mt19937_64 rng(seed);
  // Draw order is part of the format: supplies first, then values item-major.
  std::vector<Item> items(num_items);
  for (Item& item : items) item.supply = 0.5 + 1.5 * unit_open(rng);
  for (Item& item : items) {
    item.values.resize(num_agents);
    for (double& v : item.values) v = unit_open(rng);
  }

  // Rescale each agent's row so monopolist utilities form a geometric spread
  // from 1 to lambda_target.
  std::vector<KahanSum> raw(num_agents);
  for (const Item& item : items)
    for (std::size_t i = 0; i < num_agents; ++i)
      raw[i].add(item.values[i] * item.supply);
  for (std::size_t i = 0; i < num_agents; ++i) {
    double frac = num_agents == 1
                      ? 0.0
                      : static_cast<double>(i) / static_cast<double>(num_agents - 1);
    double scale = std::pow(lambda_target, frac) / raw[i].value();
    for (Item& item : items) item.values[i] *= scale;
  }
  return Instance(num_agents, std::move(items));
}

Instance gen_random_binary(std::size_t num_agents, std::size_t num_items,
                           double density, std::uint64_t seed) {
  check_shape(num_agents, num_items);
  if (!(density > 0.0) || density > 1.0)
    throw PreconditionError("density must lie in (0, 1]");

  std::mt19937_64 rng(seed);
  std::vector<Item> items;
  items.reserve(num_items);
  for (std::size_t t = 0; t < num_items; ++t) {
    Item item;
    item.supply = 1.0;
    double v = unit_open(rng);
    item.values.assign(num_agents, 0.0);
    bool any = false;
    int attempts = 0;
    while (!any) {
      if (++attempts > 100000)
        throw ValidationError("density too small: could not draw a nonempty owner set");
      for (std::size_t i = 0; i < num_agents; ++i) {
        bool keep = unit_from_bits(rng()) < density;
        item.values[i] = keep ? v : 0.0;
        any = any || keep;
      }
    }
    items.push_back(std::move(item));
  }
  return Instance(num_agents, std::move(items));
}

}  // namespace nashstream
