// Acceptance gate: ten behavior checks, one line each, exit code = number of
// failures. An optional list of ids (c1..c10) restricts the run.
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "efg/suites.hpp"

using namespace efg;

namespace {

struct Criterion {
  std::string id;
  std::string behavior;
  std::function<SuiteCheck()> run;
  // extra floors on top of the battery verdict; empty string means satisfied
  std::function<std::string(const SuiteCheck&)> floor;
};

long long as_int(const Json& j) { return j.get<long long>(); }

}  // namespace

int main(int argc, char** argv) {
  auto corpus = std::make_shared<std::vector<FiniteMetricSpace>>();
  auto curves = std::make_shared<RelationCurveSet>();
  auto need_corpus = [corpus]() -> const std::vector<FiniteMetricSpace>& {
    if (corpus->empty()) *corpus = metric_corpus();
    return *corpus;
  };
  auto need_curves = [corpus, curves, need_corpus]() -> const RelationCurveSet* {
    if (curves->curves.empty()) {
      // base slack grid plus every pairwise sum, as the transitivity battery
      // reads both factors and their composition from the same curve set
      const std::vector<Rational> base = {Rational(0), Rational(1, 4), Rational(1, 2),
                                          Rational(1)};
      std::vector<Rational> all = base;
      for (const Rational& x : base)
        for (const Rational& y : base) all.push_back(x + y);
      *curves = build_relation_curves(need_corpus(), all);
    }
    return curves.get();
  };

  auto exact_oracle = [](const SuiteCheck& c) -> std::string {
    if (as_int(c.details.at("corpus_size")) != 61) return "corpus size drifted";
    if (c.details.at("max_deviation").get<std::string>() != "0")
      return "bracket misses the oracle value";
    if (c.cases < 1000) return "fewer than 1000 pairs";
    return "";
  };

  std::vector<Criterion> all = {
      {"c1", "additive game distances bracket the exhaustive correspondence search",
       [&] { return additive_distance_oracle(need_corpus()); }, exact_oracle},
      {"c2", "multiplicative game distances bracket the exhaustive bijection search",
       [&] { return multiplicative_distance_oracle(need_corpus()); }, exact_oracle},
      {"c3", "watershed values hit their pinned thresholds",
       [&] { return watershed_pins(); },
       [](const SuiteCheck& c) -> std::string {
         return c.cases == 2 ? "" : "expected exactly 2 pinned cases";
       }},
      {"c4", "level formulas evaluate to game winners across the corpus",
       [&] { return level_formulas_match_games(need_corpus()); },
       [](const SuiteCheck& c) -> std::string {
         return c.cases >= 1000000 ? "" : "fewer than 10^6 comparisons";
       }},
      {"c5", "games are symmetric and compose transitively",
       [&] { return game_symmetry_transitivity(need_corpus(), need_curves()); },
       [](const SuiteCheck& c) -> std::string {
         if (as_int(c.details.at("function_samples")) < 10000)
           return "fewer than 10^4 function samples";
         if (as_int(c.details.at("relation_symmetry_cases")) < 10000)
           return "fewer than 10^4 symmetry cases";
         return "";
       }},
      {"c6", "winners are monotone in clock and slack",
       [&] { return game_monotonicity(need_corpus(), need_curves()); },
       [](const SuiteCheck& c) -> std::string {
         if (as_int(c.details.at("relation_clock_cases")) < 10000)
           return "fewer than 10^4 clock cases";
         if (as_int(c.details.at("function_samples")) < 1000)
           return "fewer than 10^3 function samples";
         return "";
       }},
      {"c7", "approximation operators satisfy their algebraic laws",
       [&] { return approximation_algebra(need_corpus()); },
       [](const SuiteCheck& c) -> std::string {
         return c.cases >= 1000 ? "" : "fewer than 10^3 sampled instances";
       }},
      {"c8", "minimal-distortion correspondences always glue",
       [&] { return gluing_construction(need_corpus()); },
       [](const SuiteCheck& c) -> std::string {
         return as_int(c.details.at("minimal_correspondences")) >= 100000
                    ? ""
                    : "fewer than 10^5 correspondences";
       }},
      {"c9", "small perturbations preserve sharp formulas",
       [&] { return perturbation_robustness(); },
       [](const SuiteCheck& c) -> std::string {
         return c.cases >= 1000 ? "" : "fewer than 10^3 sampled instances";
       }},
      {"c10", "diagonal maps preserve norm atoms up to their expansion",
       [&] { return normed_map_preservation(); },
       [](const SuiteCheck& c) -> std::string {
         if (c.cases < 10000) return "fewer than 10^4 cases";
         if (as_int(c.details.at("premise_held")) < 10000)
           return "fewer than 10^4 non-vacuous cases";
         return "";
       }},
  };

  std::vector<const Criterion*> selected;
  for (int i = 1; i < argc; ++i) {
    std::string want = argv[i];
    const Criterion* hit = nullptr;
    for (const auto& c : all)
      if (c.id == want) hit = &c;
    if (!hit) {
      std::fprintf(stderr, "unknown criterion id %s (expected c1..c10)\n", want.c_str());
      return 2;
    }
    selected.push_back(hit);
  }
  if (selected.empty())
    for (const auto& c : all) selected.push_back(&c);

  int failures = 0;
  for (const Criterion* c : selected) {
    SuiteCheck check;
    std::string verdict;
    try {
      check = c->run();
      verdict = check.passed ? c->floor(check) : "battery reported failures";
    } catch (const std::exception& e) {
      verdict = std::string("exception: ") + e.what();
    }
    bool ok = verdict.empty();
    std::printf("%s %s: %s (%lld cases)\n", c->id.c_str(), c->behavior.c_str(),
                ok ? "PASS" : "FAIL", check.cases);
    if (!ok) {
      ++failures;
      std::fprintf(stderr, "%s: %s\n", c->id.c_str(), verdict.c_str());
      for (const Json& ce : check.counterexamples)
        std::fprintf(stderr, "  counterexample: %s\n", ce.dump().c_str());
    }
    std::fflush(stdout);
  }
  return failures;
}
