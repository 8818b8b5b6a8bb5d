#include "nashstream/numeric.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "nashstream/errors.hpp"

namespace nashstream {

double kahan_total(std::span<const double> xs) {
  KahanSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw PreconditionError("format_double: to_chars failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ValidationError("not a decimal number: '" + std::string(text) + "'");
  return value;
}

}  // namespace nashstream
