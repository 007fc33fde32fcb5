#pragma once

#include <cstddef>
#include <utility>

#include "drqm/types.hpp"

namespace drqm {

// Index of the unordered pair (i, j), i < j < n, in lexicographic pair
// order. Throws input_error unless 0 <= i < j < n.
std::size_t condensed_index(std::size_t i, std::size_t j, std::size_t n);

// Inverse of condensed_index. Throws input_error if k is out of range.
std::pair<std::size_t, std::size_t> condensed_pair(std::size_t k,
                                                   std::size_t n);

// Euclidean distances over all unordered point pairs.
// Throws input_error on non-finite coordinates or fewer than 2 points.
CondensedDistances pairwise_euclidean(const DataMatrix& points);

// Divides every entry by the maximum so the new maximum is exactly 1.
// Throws degenerate_input_error when all entries are zero.
CondensedDistances max_normalize(const CondensedDistances& d);

// Multiplies every entry by alpha. Throws input_error for alpha < 0.
CondensedDistances scale_distances(const CondensedDistances& d, double alpha);

}  // namespace drqm
