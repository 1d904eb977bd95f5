#pragma once

#include <string>
#include <vector>

#include "efg/corpus.hpp"
#include "efg/distances.hpp"

namespace efg {

// One property battery: pass/fail plus enough data to reproduce a failure.
struct SuiteCheck {
  std::string name;
  bool passed = true;
  long long cases = 0;  // individual instances examined
  std::vector<Json> counterexamples;  // capped at kMaxCounterexamples
  Json details = Json::object();

  static constexpr std::size_t kMaxCounterexamples = 5;

  void record(Json ce);  // marks failed, keeps the first few witnesses
  Json to_json() const;
};

struct SuiteReport {
  std::string selector;
  std::vector<SuiteCheck> checks;

  bool all_passed() const;
  Json to_json() const;
};

// Winner curves of the empty-start relation game for every ordered corpus
// pair and every slack in the list; built once and shared between the law
// batteries that read them.
struct RelationCurveSet {
  std::vector<Rational> eps;  // sorted, deduplicated
  int n = 0;
  // curve[(i * n + j) * eps.size() + e]: entry c = II survives c rounds.
  std::vector<std::vector<bool>> curves;

  bool wins(int i, int j, std::size_t e, std::uint64_t clock) const {
    const auto& c = curves[(static_cast<std::size_t>(i) * n + j) * eps.size() + e];
    return c[std::min<std::uint64_t>(clock, c.size() - 1)];
  }
  bool wins_all(int i, int j, std::size_t e) const {
    const auto& c = curves[(static_cast<std::size_t>(i) * n + j) * eps.size() + e];
    return c.back();
  }
  std::uint64_t stabilization(int i, int j, std::size_t e) const {
    return curves[(static_cast<std::size_t>(i) * n + j) * eps.size() + e].size() - 1;
  }
};

RelationCurveSet build_relation_curves(const std::vector<FiniteMetricSpace>& corpus,
                                       std::vector<Rational> eps);

// ── Property batteries ──────────────────────────────────────────────────────
// Tolerances and sample counts are fixed inside each battery; every battery
// is deterministic (fixed seeds, fixed grids).

// Additive game distance brackets the exhaustive correspondence search on
// every unordered corpus pair at resolution 1/16.
SuiteCheck additive_distance_oracle(const std::vector<FiniteMetricSpace>& corpus);

// Multiplicative game distance brackets the exhaustive bijection search on
// every equinumerous corpus pair at resolution 1/16.
SuiteCheck multiplicative_distance_oracle(const std::vector<FiniteMetricSpace>& corpus);

// Pinned watershed values for the 2-point d=1 vs d=2 pair.
SuiteCheck watershed_pins();

// Level formulas agree with game winners: for all ordered corpus pairs,
// tuples of length <= 2, slack in {0, 1/4, 1/2, 1} and clocks 0..3, the
// tuple description of depth alpha holds at (B, b) iff II survives alpha
// rounds from the matched start.
SuiteCheck level_formulas_match_games(const std::vector<FiniteMetricSpace>& corpus);

// Relation games: symmetry and additive-slack transitivity, exhaustive over
// the corpus. Function games: factor-inflated mirror menus and composed
// menus, sampled.
SuiteCheck game_symmetry_transitivity(const std::vector<FiniteMetricSpace>& corpus,
                                      const RelationCurveSet* curves = nullptr);

// Clock and slack monotonicity of relation games, exhaustive; clock
// monotonicity of sampled function games.
SuiteCheck game_monotonicity(const std::vector<FiniteMetricSpace>& corpus,
                             const RelationCurveSet* curves = nullptr);

// Approximation algebra on sampled atoms and structures: additivity of the
// slack, involution of the dual swap, the dual-witness law, approximation of
// the dual, and sharpness-bound closure.
SuiteCheck approximation_algebra(const std::vector<FiniteMetricSpace>& corpus);

// Every minimal-distortion correspondence glues: validated quotient space,
// isometric embeddings, linked pairs within the gap, Hausdorff distance of
// the images at most the gap.
SuiteCheck gluing_construction(const std::vector<FiniteMetricSpace>& corpus);

// Perturbing a tuple by less than the sharpness-scaled margin keeps every
// sharp formula satisfied up to one approximation step, on metric and normed
// samples.
SuiteCheck perturbation_robustness();

// Diagonal linear maps on the rational plane preserve norm atoms up to their
// expansion factor, over the full integer coefficient menu.
SuiteCheck normed_map_preservation();

// Selectors: appr-laws, game-laws, oracle-equivalence, scott-equivalence,
// all. Unknown selectors throw DomainError("UnknownSuite").
SuiteReport run_suite(const std::string& selector);

}  // namespace efg
