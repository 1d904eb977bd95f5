#pragma once

#include <vector>

#include "efg/structures.hpp"

namespace efg {

// Every metric space with at most `max_points` points and pairwise distances
// drawn from {1, .., max_distance}, one representative per isometry class, in
// a deterministic order (size first, then the lexicographically least
// distance matrix). Labels are p1, p2, ...
std::vector<FiniteMetricSpace> metric_corpus(unsigned max_points = 4,
                                             unsigned max_distance = 3);

}  // namespace efg
