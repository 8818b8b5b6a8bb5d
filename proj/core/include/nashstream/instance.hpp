#pragma once

#include <cstddef>
#include <vector>

namespace nashstream {

// One divisible item: a positive supply and one nonnegative value per agent.
struct Item {
  double supply = 0.0;
  std::vector<double> values;
};

// A fixed agent population plus the item sequence in arrival order. Validated
// on construction: N >= 1, T >= 1, every value vector has length N, supplies
// are positive and finite, values are nonnegative and finite. Agents whose
// value row is all zeros are accepted here (the online algorithms tolerate
// them); ratio computations reject them separately.
class Instance {
 public:
  Instance(std::size_t num_agents, std::vector<Item> items);

  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_items() const { return items_.size(); }
  const Item& item(std::size_t t) const { return items_[t]; }
  const std::vector<Item>& items() const { return items_; }

  // The first `count` items with the same agent population. Used to check that
  // online decisions depend only on the consumed prefix.
  Instance prefix(std::size_t count) const;

 private:
  std::size_t num_agents_;
  std::vector<Item> items_;
};

// Dense N x T allocation, agent-major. Entries are amounts of each item's
// supply assigned to each agent.
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::size_t num_agents, std::size_t num_items)
      : num_agents_(num_agents), num_items_(num_items),
        data_(num_agents * num_items, 0.0) {}

  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_items() const { return num_items_; }

  double at(std::size_t agent, std::size_t item) const {
    return data_[agent * num_items_ + item];
  }
  double& at(std::size_t agent, std::size_t item) {
    return data_[agent * num_items_ + item];
  }
  void set_item(std::size_t item, const std::vector<double>& amounts);

  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t num_agents_ = 0;
  std::size_t num_items_ = 0;
  std::vector<double> data_;
};

// Nonnegative entries and per-item totals within s_t * (1 + kFeasibilityTol).
bool is_feasible(const Allocation& alloc, const Instance& inst);

}  // namespace nashstream
