#include <algorithm>
#include <stdexcept>
#include <utility>

#include "relmap/errors.hpp"
#include "relmap/mapping_types.hpp"

namespace relmap {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("solution space exceeds 64 bits");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("solution space exceeds 64 bits");
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    result = checked_mul(result, n - k + i) / i;
  }
  return result;
}

}  // namespace

std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < k; ++i) result = checked_mul(result, n - i);
  return result;
}

std::uint64_t solution_space_size(std::uint64_t n, std::uint64_t m, CardinalityVariant variant) {
  if (n == 0 || m == 0) throw InputError("solution space needs at least one entity per domain");
  if (n > m) std::swap(n, m);
  // i = number of mapped entities: choose i of the n, injectively place them among m.
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    total = checked_add(total, checked_mul(binomial(n, i), falling_factorial(m, i)));
  }
  if (variant == CardinalityVariant::ExcludeSingletons) total -= n * m;
  return total;
}

}  // namespace relmap
