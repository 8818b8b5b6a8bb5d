#pragma once

#include <cstdint>

#include "nashstream/instance.hpp"

namespace nashstream {

// Hard sequence for myopic play: N = T = n, unit supplies, item t worth n^(2t)
// to agents t..n and nothing to the rest. Balance and impartiality ratios stay
// below n^(2n); no online algorithm beats (n-1)/e on it. n in [2, 25]
// (n^(2n) must stay comfortably inside double range).
Instance gen_hard_table2(std::size_t n);

// Binary twin: item t has supply n^(2t) and value 1 for agents t..n. Same
// optimal utilities as gen_hard_table2(n).
Instance gen_hard_table2_binary(std::size_t n);

enum class CopyOrder {
  interleaved,  // copy 1 of item 1, copy 2 of item 1, ..., copy 1 of item 2, ...
  sequential,   // all of copy 1's items, then all of copy 2's, ...
};

// m independent copies of a base economy: m * N agents; each base item appears
// once per copy with the base supply, valued only by that copy's agent block
// (zeros elsewhere). Balance and impartiality ratios match the base.
Instance gen_copies(const Instance& base, std::size_t m,
                    CopyOrder order = CopyOrder::interleaved);

// Random values rescaled per agent so monopolist utilities form a geometric
// spread from 1 to lambda_target; the resulting balance ratio equals
// lambda_target to ~1e-9. Supplies drawn in (0.5, 2]. lambda_target >= 1.
Instance gen_random_balanced(std::size_t num_agents, std::size_t num_items,
                             double lambda_target, std::uint64_t seed);

// Binary-structured items: common value v_t drawn uniform (0, 1], owned by a
// random nonempty agent subset (each agent kept with probability `density`,
// resampled until nonempty). Unit supplies. density in (0, 1].
Instance gen_random_binary(std::size_t num_agents, std::size_t num_items,
                           double density, std::uint64_t seed);

}  // namespace nashstream
