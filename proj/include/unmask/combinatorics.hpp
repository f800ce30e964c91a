#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace unmask {

/// C(n, k) saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// n! / (s_1! ... s_k!) saturating at UINT64_MAX.
std::uint64_t multinomial(const std::vector<int>& sizes);

/// All compositions of n (ordered tuples of positive integers summing to n).
/// There are 2^(n-1) of them.
std::vector<std::vector<int>> compositions(int n);

/// Calls `visit(blocks)` for every ordered partition of {0..n-1} into blocks
/// of the given sizes; each block is a position bitmask.
void for_each_ordered_partition(
    const std::vector<int>& sizes,
    const std::function<void(const std::vector<std::uint32_t>&)>& visit);

/// Calls `visit(mask)` for every subset of {0..n-1} of size k.
void for_each_subset(int n, int k, const std::function<void(std::uint32_t)>& visit);

}  // namespace unmask
