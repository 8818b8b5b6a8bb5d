#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace nashstream {

// Tolerances shared across the library. Feasibility slack and invariant checks
// are relative; the waterfill budget check is relative to the supply.
inline constexpr double kFeasibilityTol = 1e-9;   // supply overshoot, relative
inline constexpr double kInvariantTol = 1e-6;     // generic invariant checks, relative
inline constexpr double kSupplyExhaustTol = 1e-12;  // waterfill budget, relative
inline constexpr double kGainResidualFloor = -1e-9;  // gain lower bound residual

// Compensated (Kahan) accumulator. Utilities are sums of products spanning many
// orders of magnitude (hard instances reach n^(2n)), so plain accumulation can
// lose the small terms entirely.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

double kahan_total(std::span<const double> xs);

// Shortest decimal representation that parses back to the identical double.
std::string format_double(double x);

// Strict full-string parse; throws ValidationError on anything else.
double parse_double(std::string_view text);

// Portable uniform draw in [0, 1) from a 64-bit word: the top 53 bits scaled by
// 2^-53. Used instead of std::uniform_real_distribution, whose output is
// implementation-defined; this mapping is identical on every platform.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace nashstream
