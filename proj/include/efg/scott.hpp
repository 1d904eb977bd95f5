#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "efg/games.hpp"

namespace efg {

// ── Watersheds ──────────────────────────────────────────────────────────────

// Least clock at which player I wins from a start position; II keeps winning
// below it. When II wins every clock the value is absent.
struct Watershed {
  bool ii_wins_all = false;
  std::uint64_t value = 0;  // meaningful iff !ii_wins_all
};

Watershed watershed_relation(const Structure& a, const Structure& b, const Rational& eps,
                             const std::vector<std::pair<int, int>>& start = {});

// Saturated function-game watershed; requires a uniform dominated menu. The
// clock field of the config is ignored.
Watershed watershed_function(const FunctionGameConfig& cfg);

// ── Level formula builders ──────────────────────────────────────────────────

// Depth-alpha descriptions of a tuple inside `a`, with slack eps baked into
// the thresholds. Level 0 bounds every pairwise distance from both sides;
// level beta+1 says every extension of the tuple is matched and every fresh
// variable value falls under some extension. Shared subformulas are cached,
// so formulas for overlapping tuples form one DAG.
class ScottRelationBuilder {
public:
  ScottRelationBuilder(const Structure& a, Rational eps);

  FormulaPtr formula(const std::vector<int>& tuple, std::uint64_t alpha);

private:
  const Structure* a_;
  Rational eps_;
  std::map<std::pair<std::vector<int>, std::uint64_t>, FormulaPtr> cache_;
  std::map<std::tuple<int, Rational, std::string, std::string>, FormulaPtr> atoms_;

  FormulaPtr atom(AtomicFormula::Kind kind, const Rational& r, unsigned i, unsigned j);
  FormulaPtr base(const std::vector<int>& tuple);
};

FormulaPtr scott_formula_relation(const Structure& a, const std::vector<int>& tuple,
                                  const Rational& eps, std::uint64_t alpha);

// Function-game analogue: tuple positions carry the (factor, k) level under
// which they were played; deeper rounds draw from the per-round menus (the
// last row repeats).
class ScottFunctionBuilder {
public:
  ScottFunctionBuilder(const Structure& a, std::vector<std::vector<MenuEntry>> menus);

  FormulaPtr formula(const std::vector<int>& tuple, const std::vector<MenuEntry>& levels,
                     std::uint64_t alpha);

private:
  const Structure* a_;
  std::vector<std::vector<MenuEntry>> menus_;
  std::map<std::string, FormulaPtr> cache_;
  std::map<std::tuple<int, Rational, std::string, std::string>, FormulaPtr> atoms_;

  FormulaPtr atom(AtomicFormula::Kind kind, const Rational& r, unsigned i, unsigned j);
  const std::vector<MenuEntry>& row(std::size_t round) const;
  FormulaPtr base(const std::vector<int>& tuple, const std::vector<MenuEntry>& levels);
};

FormulaPtr scott_formula_function(const Structure& a, const std::vector<int>& tuple,
                                  const std::vector<MenuEntry>& levels,
                                  const std::vector<std::vector<MenuEntry>>& menus,
                                  std::uint64_t alpha);

// ── Characterizing sentences ────────────────────────────────────────────────

// Rank-level description of the empty tuple together with, for every tuple up
// to the cap (the empty tuple included), the statement that its rank-level
// description already implies the next level. Implications are kept as
// (pre, post) pairs; they can be evaluated directly or materialized
// negation-free against a concrete target.
struct ScottSentence {
  std::uint64_t rank = 0;
  Rational eps;
  FormulaPtr lead;
  struct Implication {
    std::vector<int> tuple;
    FormulaPtr pre;
    FormulaPtr post;
  };
  std::vector<Implication> implications;
};

ScottSentence scott_sentence_relation(const Structure& a, const Rational& eps,
                                      std::uint64_t rank, unsigned tuple_cap);

bool eval_scott_sentence(const ScottSentence& s, const Structure& b);

// Single negation-free formula with the same truth value as the sentence on
// the target `b` (implications become strong-negation disjunctions, which are
// exact relative to the distances realized in `a` and `b`).
FormulaPtr materialize_scott_sentence(const ScottSentence& s, const Structure& a,
                                      const Structure& b);

Json scott_sentence_to_json(const ScottSentence& s, const Structure& a);

// Largest finite watershed over games against corpus members, from tuple
// starts up to the given length; all-clock II wins contribute zero.
std::uint64_t corpus_rank(const Structure& a, const std::vector<Structure>& corpus,
                          const Rational& eps, unsigned tuple_bound);

// ── Fast evaluation over variable prefixes ──────────────────────────────────

// Memoized evaluator for formula DAGs whose variables are v0, v1, ... with
// each subformula only mentioning a prefix. Stores one truth table per DAG
// node over assignments into `b`, so shared nodes are evaluated once. Purely
// structural recursion over the formula; no game machinery involved.
class TupleTableEvaluator {
public:
  explicit TupleTableEvaluator(const Structure& b);

  bool eval(const FormulaPtr& f, const std::vector<int>& prefix);
  // Truth table over |b|^arity prefix assignments, little-endian packed.
  const std::vector<char>& table(const FormulaPtr& f);
  unsigned arity(const FormulaPtr& f);

private:
  const Structure* b_;
  std::unordered_map<const Formula*, std::pair<unsigned, std::vector<char>>> memo_;

  const std::pair<unsigned, std::vector<char>>& entry(const Formula* f);
};

}  // namespace efg
