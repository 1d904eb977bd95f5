#pragma once

#include <memory>
#include <string>
#include <vector>

#include "efg/structures.hpp"

namespace efg {

// ── Formula trees ───────────────────────────────────────────────────────────
//
// Negation-free first-order formulas over atomic constraints. And/Or carry
// finite lists (And of nothing is true, Or of nothing is false). Nodes are
// immutable and shared; builders keep conjunct lists in a canonical order so
// equality can be structural.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Op : std::uint8_t { Atom, And, Or, Exists, Forall };

  Op op = Op::And;
  AtomicFormula atom;            // Op::Atom
  std::vector<FormulaPtr> kids;  // And/Or: members; Exists/Forall: single body
  std::string var;               // Exists/Forall binder
};

FormulaPtr make_atom(AtomicFormula a);
FormulaPtr make_and(std::vector<FormulaPtr> kids);  // sorts + dedups members
FormulaPtr make_or(std::vector<FormulaPtr> kids);   // sorts + dedups members
FormulaPtr make_exists(std::string var, FormulaPtr body);
FormulaPtr make_forall(std::string var, FormulaPtr body);
FormulaPtr make_true();   // And([])
FormulaPtr make_false();  // Or([])

// Total structural order; 0 means structurally equal.
int compare_formulas(const Formula& x, const Formula& y);
bool equal_formulas(const FormulaPtr& x, const FormulaPtr& y);

std::string formula_to_string(const FormulaPtr& f);

// ── Approximation and negation ──────────────────────────────────────────────

// Weakens an atom by the given budget. The semantics is picked by the atom
// family and the precision kind:
//   metric + multiplicative s: DistLeq r -> s*r, DistGeq r -> r/s
//   metric + additive eps:     DistLeq r -> r + 2*eps, DistGeq r -> r - 2*eps (floor 0)
//   norm w/o threshold + multiplicative s: coefficients scaled by 1/s (Leq), s (Geq)
//   norm with threshold + additive eps:    threshold r + eps capped at 1 (Leq),
//                                          r - eps floored at 0 (Geq)
// Mismatched combinations throw SemanticsMismatch.
AtomicFormula appr(const AtomicFormula& a, const Precision& p);

// Structural extension: commutes with And/Or/Exists/Forall.
FormulaPtr appr_formula(const FormulaPtr& f, const Precision& p);

// Dual swap: DistLeq <-> DistGeq, NormLeq <-> NormGeq, same parameters.
AtomicFormula weak_neg(const AtomicFormula& a);
// De Morgan on connectives, Exists <-> Forall, atoms swapped. Involution.
FormulaPtr weak_neg(const FormulaPtr& f);

// Membership in the k-bounded fragment. Multiplicative vocabularies only:
// metric atoms need threshold >= 1/k; norm atoms (no threshold) need at most
// k distinct variables and all |coefficients| <= k. Throws
// UnsupportedVocabulary for the additive vocabularies, BadArgument for k = 0.
bool is_good(const AtomicFormula& a, unsigned k, Vocabulary v);

// ── Evaluation ──────────────────────────────────────────────────────────────

// Tarskian truth over the finite carrier; quantifiers range over all points.
bool eval_formula(const Structure& s, const FormulaPtr& f, const Assignment& asg);

// ── Strong negation ─────────────────────────────────────────────────────────

// Negation-free formula whose truth value is the complement of f's on both
// given structures (exactness relative to this pair; other structures may
// disagree). Atoms are flipped across the realized-distance grid of the pair:
// the replacement threshold is the midpoint between the atom's threshold and
// the nearest realized value on the far side. Metric vocabularies only.
FormulaPtr strong_negation(const FormulaPtr& f, const Structure& a, const Structure& b);

// ── JSON ────────────────────────────────────────────────────────────────────

// Plain form: {"op":"and|or","args":[...]}, {"op":"exists|forall","var":v,
// "body":...}, {"op":"atom","atom":"dleq|dgeq|p|q","r":"p/q","vars":[...],
// "coeffs":[...]}. Shared form (shared = true): {"nodes":[...],"root":id}
// with child references as integer node ids; parsing accepts both.
Json formula_to_json(const FormulaPtr& f, bool shared = false);
FormulaPtr formula_from_json(const Json& j);

}  // namespace efg
