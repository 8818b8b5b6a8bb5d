#include "nashstream/instance.hpp"

#include <cmath>
#include <string>

#include "nashstream/errors.hpp"
#include "nashstream/numeric.hpp"

namespace nashstream {

Instance::Instance(std::size_t num_agents, std::vector<Item> items)
    : num_agents_(num_agents), items_(std::move(items)) {
  if (num_agents_ == 0) throw ValidationError("instance needs at least one agent");
  if (items_.empty()) throw ValidationError("instance needs at least one item");
  for (std::size_t t = 0; t < items_.size(); ++t) {
    const Item& it = items_[t];
    const std::string where = "item " + std::to_string(t);
    if (!(it.supply > 0.0) || !std::isfinite(it.supply))
      throw ValidationError(where + ": supply must be positive and finite");
    if (it.values.size() != num_agents_)
      throw ValidationError(where + ": expected " + std::to_string(num_agents_) +
                            " values, got " + std::to_string(it.values.size()));
    for (double v : it.values)
      if (v < 0.0 || !std::isfinite(v))
        throw ValidationError(where + ": values must be nonnegative and finite");
  }
}

Instance Instance::prefix(std::size_t count) const {
  if (count == 0 || count > items_.size())
    throw PreconditionError("prefix length out of range");
  return Instance(num_agents_,
                  std::vector<Item>(items_.begin(), items_.begin() + count));
}

void Allocation::set_item(std::size_t item, const std::vector<double>& amounts) {
  if (amounts.size() != num_agents_)
    throw PreconditionError("set_item: wrong number of amounts");
  for (std::size_t i = 0; i < num_agents_; ++i) data_[i * num_items_ + item] = amounts[i];
}

bool is_feasible(const Allocation& alloc, const Instance& inst) {
  if (alloc.num_agents() != inst.num_agents() ||
      alloc.num_items() != inst.num_items())
    return false;
  for (std::size_t t = 0; t < inst.num_items(); ++t) {
    KahanSum total;
    for (std::size_t i = 0; i < inst.num_agents(); ++i) {
      double x = alloc.at(i, t);
      if (x < 0.0 || !std::isfinite(x)) return false;
      total.add(x);
    }
    double s = inst.item(t).supply;
    if (total.value() > s * (1.0 + kFeasibilityTol)) return false;
  }
  return true;
}

}  // namespace nashstream
