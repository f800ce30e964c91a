#include "unmask/combinatorics.hpp"

#include <algorithm>
#include <numeric>

namespace unmask {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t multinomial(const std::vector<int>& sizes) {
  int remaining = std::accumulate(sizes.begin(), sizes.end(), 0);
  unsigned __int128 r = 1;
  for (int s : sizes) {
    r *= binomial(remaining, s);
    if (r > UINT64_MAX) return UINT64_MAX;
    remaining -= s;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  if (n < 1) return out;
  // Bit b of `cuts` set means a block ends after position b.
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<int> parts;
    int len = 1;
    for (int b = 0; b < n - 1; ++b) {
      if (cuts & (1u << b)) {
        parts.push_back(len);
        len = 1;
      } else {
        ++len;
      }
    }
    parts.push_back(len);
    out.push_back(std::move(parts));
  }
  return out;
}

namespace {

void subsets_of(std::uint32_t pool, int k, std::uint32_t chosen, int from, int n,
                const std::function<void(std::uint32_t)>& visit) {
  if (k == 0) {
    visit(chosen);
    return;
  }
  for (int p = from; p < n; ++p) {
    if (!(pool & (1u << p))) continue;
    subsets_of(pool, k - 1, chosen | (1u << p), p + 1, n, visit);
  }
}

void partitions_from(const std::vector<int>& sizes, std::size_t block,
                     std::uint32_t pool, int n, std::vector<std::uint32_t>& blocks,
                     const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  if (block == sizes.size()) {
    visit(blocks);
    return;
  }
  subsets_of(pool, sizes[block], 0, 0, n, [&](std::uint32_t chosen) {
    blocks[block] = chosen;
    partitions_from(sizes, block + 1, pool & ~chosen, n, blocks, visit);
  });
}

}  // namespace

void for_each_subset(int n, int k, const std::function<void(std::uint32_t)>& visit) {
  const std::uint32_t all = n >= 32 ? ~0u : ((1u << n) - 1);
  subsets_of(all, k, 0, 0, n, visit);
}

void for_each_ordered_partition(
    const std::vector<int>& sizes,
    const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<std::uint32_t> blocks(sizes.size(), 0);
  partitions_from(sizes, 0, (1u << n) - 1, n, blocks, visit);
}

}  // namespace unmask
