#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "efg/scott.hpp"

namespace efg {

// Largest gap |d_A - d_B| over all pairs of linked pairs. The pair list must
// cover both carriers.
Rational correspondence_distortion(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                   const std::vector<std::pair<int, int>>& pairs);

struct GhResult {
  Rational distance;  // half the least achievable distortion
  std::vector<std::pair<int, int>> witness;
};

// Exhaustive minimum over all correspondences, with pruning on the partial
// distortion.
GhResult gh_bruteforce(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

struct LipschitzResult {
  bool exists = false;         // a bijection requires equal cardinalities
  Rational factor;             // least max-ratio distortion over bijections
  std::vector<int> bijection;  // image of each A index
};

LipschitzResult lipschitz_bruteforce(const FiniteMetricSpace& a,
                                     const FiniteMetricSpace& b);

// Two-sided set distance inside one space.
Rational hausdorff_distance(const FiniteMetricSpace& m, const std::vector<int>& s1,
                            const std::vector<int>& s2);

struct GlueResult {
  FiniteMetricSpace space;
  std::vector<int> embed_a, embed_b;  // images of the original indices
};

// Joins the carriers along the linked pairs, separating linked points by eps;
// needs 2 eps at least the distortion. Zero gaps collapse to one point.
GlueResult glue_spaces(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                       const std::vector<std::pair<int, int>>& pairs, const Rational& eps);

struct GameDistance {
  bool bounded = true;  // multiplicative distances need a bijection
  Rational lo, hi;      // encloses the exact threshold; width <= resolution
  bool snapped = false;  // lo == hi == the exact winner-flip threshold
  Precision::Kind kind = Precision::Kind::Additive;
};

// Additive: least slack at which II wins the relation game at every clock.
// Multiplicative: least factor at which II wins the saturated function game
// under the sharpest dominated menu. Both bisect the precision parameter,
// narrow the bracket to the resolution, and snap to the winner-flip threshold
// once it is the only candidate left inside.
GameDistance game_distance(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                           Precision::Kind kind, const Rational& resolution);

// All correspondences whose distortion is at most the cap, in DFS order.
std::vector<std::vector<std::pair<int, int>>> correspondences_within(
    const FiniteMetricSpace& a, const FiniteMetricSpace& b, const Rational& cap);

}  // namespace efg
