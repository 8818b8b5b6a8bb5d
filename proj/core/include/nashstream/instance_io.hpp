#pragma once

#include <filesystem>
#include <string>

#include "nashstream/instance.hpp"

namespace nashstream {

// On-disk instance schema:
//   {"num_agents": N, "items": [{"supply": s, "values": [v_1, ..., v_N]}, ...]}
// The reader accepts each number either as a JSON number or as a decimal
// string; the writer emits one or the other per `NumberMode`. Both modes
// round-trip doubles bit-exactly (shortest round-trip formatting). Keys are
// written in the order shown above.
enum class NumberMode {
  json_number,
  decimal_string,
};

std::string instance_to_json(const Instance& inst,
                             NumberMode mode = NumberMode::json_number);
Instance instance_from_json(const std::string& text);

void write_instance(const std::filesystem::path& path, const Instance& inst,
                    NumberMode mode = NumberMode::json_number);
Instance read_instance(const std::filesystem::path& path);

// Allocation dump: header "agent,item_1,...,item_T", then one row per agent
// with shortest-round-trip amounts.
std::string allocation_to_csv(const Allocation& alloc);
void write_allocation(const std::filesystem::path& path, const Allocation& alloc);

}  // namespace nashstream
