#include "sparsecert/combinatorics.hpp"

#include <numeric>
#include <string>

#include "sparsecert/errors.hpp"

namespace sparsecert {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit) {
  const BigInt value = binomial(n, k);
  if (value > limit) return limit + 1;
  return value.convert_to<std::uint64_t>();
}

bool for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(const std::vector<int>&)>& visit) {
  if (k > n) return true;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!visit(idx)) return false;
    // advance to the next subset in lexicographic order
    std::size_t i = k;
    while (i > 0 && static_cast<std::size_t>(idx[i - 1]) == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void require_combinations_within(std::uint64_t n, std::uint64_t k, std::uint64_t cap,
                                 const char* what) {
  if (binomial(n, k) > cap) {
    throw CapExceeded(std::string(what) + ": C(" + std::to_string(n) + ", " +
                      std::to_string(k) + ") exceeds enumeration cap " +
                      std::to_string(cap));
  }
}

}  // namespace sparsecert
