#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace chowforge {

// Subsets of the ground set are bitmasks; element i (0-based) is bit i.
using Subset = uint32_t;

constexpr int kMaxGroundSize = 12;

inline int popcount(Subset s) { return std::popcount(s); }

inline bool subset_le(Subset a, Subset b) { return (a & ~b) == 0; }

inline bool comparable(Subset a, Subset b) {
  return subset_le(a, b) || subset_le(b, a);
}

inline Subset full_set(int n) { return (Subset(1) << n) - 1; }

// Elements of s in increasing order, 0-based.
std::vector<int> subset_elements(Subset s);

// Renders as "{1,3,4}" with 1-based elements; "{}" for the empty set.
std::string subset_to_string(Subset s);

// Builds a mask from 1-based elements; throws Error(Parse) on duplicates
// or elements outside [1, n].
Subset subset_from_elements(const std::vector<int>& elements_1based, int n);

// Maps a subset of `within` to a mask over [0, popcount(within)) by
// compressing the elements of `within` in increasing order.
Subset compress_subset(Subset s, Subset within);

// Inverse of compress_subset for masks over popcount(within) elements.
Subset uncompress_subset(Subset compressed, Subset within);

}  // namespace chowforge
