#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sparsecert {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient; zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Binomial coefficient clamped to `limit + 1`, for cap checks that must not
/// overflow.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit);

/// Visits every k-subset of {0, ..., n-1} in lexicographic order. The visitor
/// may return false to stop early. Returns false iff stopped early.
bool for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(const std::vector<int>&)>& visit);

/// Throws CapExceeded when C(n, k) > cap.
void require_combinations_within(std::uint64_t n, std::uint64_t k, std::uint64_t cap,
                                 const char* what);

}  // namespace sparsecert
