#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "efg/rational.hpp"

namespace efg {

using Json = nlohmann::ordered_json;

// ── Vocabularies ────────────────────────────────────────────────────────────
//
// Two carrier families, each usable under two approximation semantics:
//   MetricIso   metric space, multiplicative factor s >= 1 (bi-Lipschitz view)
//   MetricCorr  metric space, additive slack eps >= 0 (correspondence view)
//   Banach      normed point configuration, multiplicative (P/Q atoms, term scaling)
//   BanachBall  normed point configuration inside the unit ball, additive
//               (thresholded P_r/Q_r atoms, truncated threshold shifts)

enum class Vocabulary : std::uint8_t { MetricIso, MetricCorr, Banach, BanachBall };

constexpr bool is_metric_vocab(Vocabulary v) {
  return v == Vocabulary::MetricIso || v == Vocabulary::MetricCorr;
}
constexpr bool is_banach_vocab(Vocabulary v) { return !is_metric_vocab(v); }
constexpr bool is_multiplicative_vocab(Vocabulary v) {
  return v == Vocabulary::MetricIso || v == Vocabulary::Banach;
}

std::string vocab_name(Vocabulary v);

// ── Precision ───────────────────────────────────────────────────────────────

// Approximation budget. Additive holds eps >= 0; Multiplicative holds the
// factor s >= 1 directly (the exponential of the additive budget, kept
// rational so no transcendental value is ever materialized).
struct Precision {
  enum class Kind : std::uint8_t { Additive, Multiplicative };

  Kind kind;
  Rational value;

  static Precision additive(Rational eps);
  static Precision multiplicative(Rational factor);

  bool is_additive() const { return kind == Kind::Additive; }
  // Identity element: eps == 0 resp. factor == 1.
  bool is_identity() const;
  bool matches(Vocabulary v) const {
    return is_additive() != is_multiplicative_vocab(v);
  }

  // Sequential composition: eps + eps', resp. s * s'. Kinds must agree.
  Precision compose(const Precision& o) const;

  std::string str() const;
};

// ── Carriers ────────────────────────────────────────────────────────────────

struct FiniteMetricSpace {
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> dist;

  int size() const { return static_cast<int>(labels.size()); }
  const Rational& d(int i, int j) const { return dist[i][j]; }

  // Zero when fewer than two points.
  Rational max_distance() const;
  std::optional<Rational> min_positive_distance() const;
};

enum class NormKind : std::uint8_t { L1, Linf, L2, WeightedL1, WeightedLinf };

std::string norm_name(NormKind k);

struct NormedPointConfig {
  int dim = 0;
  NormKind norm = NormKind::L1;
  std::vector<Rational> weights;  // dim entries for weighted norms, else empty
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> points;  // one coordinate row per label
  bool unit_ball_only = false;

  int size() const { return static_cast<int>(labels.size()); }

  bool is_l2() const { return norm == NormKind::L2; }

  // Exact norm value; only for the polyhedral kinds (everything except L2).
  Rational norm_linear(const std::vector<Rational>& vec) const;
  // Sum of squares (unweighted); exact stand-in for the L2 norm.
  Rational norm_l2_squared(const std::vector<Rational>& vec) const;

  // Sign of ||vec|| - r for r >= 0, exact for every norm kind (L2 compares
  // squares).
  int compare_norm(const std::vector<Rational>& vec, const Rational& r) const;
};

// Decides sqrt(x_sq) <= sqrt(y_sq) + slack for nonnegative rationals without
// materializing square roots. Used by unit-ball win checks under L2.
bool sqrt_leq_sqrt_plus(const Rational& x_sq, const Rational& y_sq, const Rational& slack);

struct Structure {
  Vocabulary vocab = Vocabulary::MetricCorr;
  std::variant<FiniteMetricSpace, NormedPointConfig> carrier;

  bool is_metric() const { return std::holds_alternative<FiniteMetricSpace>(carrier); }
  const FiniteMetricSpace& metric() const { return std::get<FiniteMetricSpace>(carrier); }
  const NormedPointConfig& normed() const { return std::get<NormedPointConfig>(carrier); }

  int size() const;
  const std::string& label(int i) const;
  int index_of(const std::string& label) const;  // -1 when absent

  Structure with_vocab(Vocabulary v) const;
};

// Validates and wraps a carrier. Throws DomainError naming the witnessing
// indices: TriangleViolation, AsymmetricMatrix, NonzeroDiagonal,
// NonpositiveDistance, NormOverflow, BadShape, BadLabel, NonpositiveWeight.
Structure make_metric_structure(FiniteMetricSpace m, Vocabulary v = Vocabulary::MetricCorr);
Structure make_normed_structure(NormedPointConfig c, Vocabulary v);

void validate_metric(const FiniteMetricSpace& m);
void validate_normed(const NormedPointConfig& c);

// ── Atomic formulas ─────────────────────────────────────────────────────────

// DistLeq/DistGeq: d(u, v) <= r resp. >= r over metric carriers.
// NormLeq/NormGeq: ||sum coeff_i * point(var_i)|| <= r resp. >= r over normed
// carriers. A missing threshold means r = 1 with approximation acting on the
// term coefficients (scaled by 1/s resp. s); a present threshold means
// unit-ball semantics with truncated additive shifts.
struct AtomicFormula {
  enum class Kind : std::uint8_t { DistLeq, DistGeq, NormLeq, NormGeq };

  Kind kind = Kind::DistLeq;
  std::optional<Rational> threshold;
  std::string u, v;                                    // metric variable names
  std::vector<std::pair<std::string, Rational>> term;  // banach: (var, coeff)

  bool is_metric_atom() const { return kind == Kind::DistLeq || kind == Kind::DistGeq; }
  bool is_upper_bound() const { return kind == Kind::DistLeq || kind == Kind::NormLeq; }

  static AtomicFormula dist_leq(Rational r, std::string u, std::string v);
  static AtomicFormula dist_geq(Rational r, std::string u, std::string v);
  static AtomicFormula norm_leq(std::vector<std::pair<std::string, Rational>> term,
                                std::optional<Rational> r = std::nullopt);
  static AtomicFormula norm_geq(std::vector<std::pair<std::string, Rational>> term,
                                std::optional<Rational> r = std::nullopt);

  friend bool operator==(const AtomicFormula&, const AtomicFormula&) = default;
};

using Assignment = std::map<std::string, int>;  // variable -> point index

// Exact truth value. Throws VocabularyMismatch when the atom kind does not
// fit the carrier, UnboundVariable when the assignment misses a variable.
bool eval_atomic(const Structure& s, const AtomicFormula& atom, const Assignment& asg);

// ── Menus and saturation ────────────────────────────────────────────────────

// Additive: 0 together with every |d_A - d_B| / 2 over pairs from A and B.
// Multiplicative: 1 together with every ratio d_A/d_B and d_B/d_A over
// positive distances. Sorted, deduplicated. Metric carriers only.
std::vector<Rational> distance_breakpoints(const Structure& a, const Structure& b,
                                           Precision::Kind kind);

// Least k* with 1/k* below every positive distance of both carriers (1 when
// no positive distances exist). Metric carriers only.
unsigned good_saturation_bound(const Structure& a, const Structure& b);

// ── JSON ────────────────────────────────────────────────────────────────────

// Structure files: {"kind":"metric_space","points":[...],"d":[[...]]} or
// {"kind":"normed","dim":n,"norm":"l1|linf|l2|wl1|wlinf","weights":[...],
//  "points":{name:[...]},"unit_ball":bool}. Rationals are canonical strings.
// The vocabulary is the carrier family plus the caller's semantics.
Structure parse_structure(const Json& j, Precision::Kind semantics);
Json structure_to_json(const Structure& s);

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

}  // namespace efg
