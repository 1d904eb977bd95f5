#include "efg/structures.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "efg/errors.hpp"

namespace efg {

std::string vocab_name(Vocabulary v) {
  switch (v) {
    case Vocabulary::MetricIso: return "metric-iso";
    case Vocabulary::MetricCorr: return "metric-corr";
    case Vocabulary::Banach: return "banach";
    case Vocabulary::BanachBall: return "banach-ball";
  }
  return "?";
}

std::string norm_name(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::Linf: return "linf";
    case NormKind::L2: return "l2";
    case NormKind::WeightedL1: return "wl1";
    case NormKind::WeightedLinf: return "wlinf";
  }
  return "?";
}

// ── Precision ───────────────────────────────────────────────────────────────

Precision Precision::additive(Rational eps) {
  if (eps.is_negative()) fail("BadPrecision", "additive slack must be >= 0, got " + eps.str());
  return {Kind::Additive, std::move(eps)};
}

Precision Precision::multiplicative(Rational factor) {
  if (factor < Rational(1))
    fail("BadPrecision", "multiplicative factor must be >= 1, got " + factor.str());
  return {Kind::Multiplicative, std::move(factor)};
}

bool Precision::is_identity() const {
  return is_additive() ? value.is_zero() : value == Rational(1);
}

Precision Precision::compose(const Precision& o) const {
  if (kind != o.kind) fail("SemanticsMismatch", "cannot compose additive with multiplicative");
  return {kind, is_additive() ? value + o.value : value * o.value};
}

std::string Precision::str() const {
  return (is_additive() ? "eps=" : "factor=") + value.str();
}

// ── FiniteMetricSpace ───────────────────────────────────────────────────────

Rational FiniteMetricSpace::max_distance() const {
  Rational m(0);
  for (const auto& row : dist)
    for (const auto& x : row) m = efg::max(m, x);
  return m;
}

std::optional<Rational> FiniteMetricSpace::min_positive_distance() const {
  std::optional<Rational> m;
  for (const auto& row : dist)
    for (const auto& x : row)
      if (x.is_positive() && (!m || x < *m)) m = x;
  return m;
}

// ── NormedPointConfig ───────────────────────────────────────────────────────

Rational NormedPointConfig::norm_linear(const std::vector<Rational>& vec) const {
  Rational acc(0);
  const bool weighted = norm == NormKind::WeightedL1 || norm == NormKind::WeightedLinf;
  const bool is_max = norm == NormKind::Linf || norm == NormKind::WeightedLinf;
  for (int i = 0; i < dim; ++i) {
    Rational t = abs(vec[i]);
    if (weighted) t *= weights[i];
    if (is_max)
      acc = efg::max(acc, t);
    else
      acc += t;
  }
  return acc;
}

Rational NormedPointConfig::norm_l2_squared(const std::vector<Rational>& vec) const {
  Rational acc(0);
  for (int i = 0; i < dim; ++i) acc += vec[i] * vec[i];
  return acc;
}

int NormedPointConfig::compare_norm(const std::vector<Rational>& vec, const Rational& r) const {
  if (r.is_negative()) return 1;  // norms are nonnegative
  if (is_l2()) {
    Rational sq = norm_l2_squared(vec);
    Rational rr = r * r;
    return sq < rr ? -1 : (sq == rr ? 0 : 1);
  }
  Rational n = norm_linear(vec);
  return n < r ? -1 : (n == r ? 0 : 1);
}

bool sqrt_leq_sqrt_plus(const Rational& x_sq, const Rational& y_sq, const Rational& slack) {
  // sqrt(x) <= sqrt(y) + e  <=>  x - y - e^2 <= 2 e sqrt(y); square once more
  // when the left side is positive.
  Rational u = x_sq - y_sq - slack * slack;
  if (!u.is_positive()) return true;
  return u * u <= Rational(4) * slack * slack * y_sq;
}

// ── Structure ───────────────────────────────────────────────────────────────

int Structure::size() const {
  return is_metric() ? metric().size() : normed().size();
}

const std::string& Structure::label(int i) const {
  return is_metric() ? metric().labels[i] : normed().labels[i];
}

int Structure::index_of(const std::string& label) const {
  const auto& ls = is_metric() ? metric().labels : normed().labels;
  for (int i = 0; i < static_cast<int>(ls.size()); ++i)
    if (ls[i] == label) return i;
  return -1;
}

Structure Structure::with_vocab(Vocabulary v) const {
  if (is_metric() != is_metric_vocab(v))
    fail("VocabularyMismatch", "carrier family does not fit " + vocab_name(v));
  Structure s = *this;
  s.vocab = v;
  return s;
}

// ── Validation ──────────────────────────────────────────────────────────────

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) fail("BadShape", "carrier must contain at least one point");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) fail("BadLabel", "empty point label");
    if (!seen.insert(l).second) fail("BadLabel", "duplicate point label '" + l + "'");
  }
}

}  // namespace

void validate_metric(const FiniteMetricSpace& m) {
  check_labels(m.labels);
  const int n = m.size();
  if (static_cast<int>(m.dist.size()) != n)
    fail("BadShape", "distance matrix must have " + std::to_string(n) + " rows");
  for (const auto& row : m.dist)
    if (static_cast<int>(row.size()) != n)
      fail("BadShape", "distance matrix must be square of size " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (!m.d(i, i).is_zero())
      fail("NonzeroDiagonal", "d(" + m.labels[i] + ", " + m.labels[i] + ") = " + m.d(i, i).str());
    for (int j = 0; j < n; ++j) {
      if (m.d(i, j) != m.d(j, i))
        fail("AsymmetricMatrix", "d(" + m.labels[i] + ", " + m.labels[j] + ") = " +
                                     m.d(i, j).str() + " but d(" + m.labels[j] + ", " +
                                     m.labels[i] + ") = " + m.d(j, i).str());
      if (i != j && !m.d(i, j).is_positive())
        fail("NonpositiveDistance",
             "d(" + m.labels[i] + ", " + m.labels[j] + ") = " + m.d(i, j).str());
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (m.d(i, k) > m.d(i, j) + m.d(j, k))
          fail("TriangleViolation", "(" + m.labels[i] + ", " + m.labels[j] + ", " + m.labels[k] +
                                        "): " + m.d(i, k).str() + " > " + m.d(i, j).str() + " + " +
                                        m.d(j, k).str());
}

void validate_normed(const NormedPointConfig& c) {
  if (c.dim < 1) fail("BadShape", "dimension must be >= 1");
  check_labels(c.labels);
  const bool weighted = c.norm == NormKind::WeightedL1 || c.norm == NormKind::WeightedLinf;
  if (weighted) {
    if (static_cast<int>(c.weights.size()) != c.dim)
      fail("BadShape", "weighted norm needs exactly dim weights");
    for (int i = 0; i < c.dim; ++i)
      if (!c.weights[i].is_positive())
        fail("NonpositiveWeight", "weight " + std::to_string(i) + " = " + c.weights[i].str());
  } else if (!c.weights.empty()) {
    fail("BadShape", "weights are only meaningful for weighted norms");
  }
  if (c.points.size() != c.labels.size()) fail("BadShape", "one coordinate row per label");
  for (std::size_t p = 0; p < c.points.size(); ++p)
    if (static_cast<int>(c.points[p].size()) != c.dim)
      fail("BadShape", "point '" + c.labels[p] + "' must have " + std::to_string(c.dim) +
                           " coordinates");
  if (c.unit_ball_only) {
    for (std::size_t p = 0; p < c.points.size(); ++p)
      if (c.compare_norm(c.points[p], Rational(1)) > 0)
        fail("NormOverflow", "point '" + c.labels[p] + "' lies outside the unit ball");
  }
}

Structure make_metric_structure(FiniteMetricSpace m, Vocabulary v) {
  if (!is_metric_vocab(v)) fail("VocabularyMismatch", "metric carrier under " + vocab_name(v));
  validate_metric(m);
  Structure s;
  s.vocab = v;
  s.carrier = std::move(m);
  return s;
}

Structure make_normed_structure(NormedPointConfig c, Vocabulary v) {
  if (!is_banach_vocab(v)) fail("VocabularyMismatch", "normed carrier under " + vocab_name(v));
  if (v == Vocabulary::BanachBall && !c.unit_ball_only)
    fail("VocabularyMismatch", "unit-ball vocabulary requires unit_ball points");
  validate_normed(c);
  Structure s;
  s.vocab = v;
  s.carrier = std::move(c);
  return s;
}

// ── Atomic formulas ─────────────────────────────────────────────────────────

AtomicFormula AtomicFormula::dist_leq(Rational r, std::string u, std::string v) {
  AtomicFormula a;
  a.kind = Kind::DistLeq;
  a.threshold = std::move(r);
  a.u = std::move(u);
  a.v = std::move(v);
  return a;
}

AtomicFormula AtomicFormula::dist_geq(Rational r, std::string u, std::string v) {
  AtomicFormula a = dist_leq(std::move(r), std::move(u), std::move(v));
  a.kind = Kind::DistGeq;
  return a;
}

AtomicFormula AtomicFormula::norm_leq(std::vector<std::pair<std::string, Rational>> term,
                                      std::optional<Rational> r) {
  AtomicFormula a;
  a.kind = Kind::NormLeq;
  a.term = std::move(term);
  a.threshold = std::move(r);
  return a;
}

AtomicFormula AtomicFormula::norm_geq(std::vector<std::pair<std::string, Rational>> term,
                                      std::optional<Rational> r) {
  AtomicFormula a = norm_leq(std::move(term), std::move(r));
  a.kind = Kind::NormGeq;
  return a;
}

namespace {

int lookup(const Assignment& asg, const std::string& var) {
  auto it = asg.find(var);
  if (it == asg.end()) fail("UnboundVariable", "'" + var + "'");
  return it->second;
}

}  // namespace

bool eval_atomic(const Structure& s, const AtomicFormula& atom, const Assignment& asg) {
  if (atom.is_metric_atom()) {
    if (!s.is_metric()) fail("VocabularyMismatch", "metric atom over normed carrier");
    if (!atom.threshold) fail("BadFormula", "metric atom needs a threshold");
    const auto& m = s.metric();
    const Rational& d = m.d(lookup(asg, atom.u), lookup(asg, atom.v));
    return atom.kind == AtomicFormula::Kind::DistLeq ? d <= *atom.threshold
                                                     : d >= *atom.threshold;
  }
  if (s.is_metric()) fail("VocabularyMismatch", "norm atom over metric carrier");
  const auto& c = s.normed();
  std::vector<Rational> vec(c.dim, Rational(0));
  for (const auto& [var, coeff] : atom.term) {
    const auto& p = c.points[lookup(asg, var)];
    for (int i = 0; i < c.dim; ++i) vec[i] += coeff * p[i];
  }
  const Rational r = atom.threshold.value_or(Rational(1));
  const int cmp = c.compare_norm(vec, r);
  return atom.kind == AtomicFormula::Kind::NormLeq ? cmp <= 0 : cmp >= 0;
}

// ── Menus and saturation ────────────────────────────────────────────────────

namespace {

const FiniteMetricSpace& require_metric(const Structure& s, const char* who) {
  if (!s.is_metric()) fail("UnsupportedVocabulary", std::string(who) + " needs metric carriers");
  return s.metric();
}

}  // namespace

std::vector<Rational> distance_breakpoints(const Structure& a, const Structure& b,
                                           Precision::Kind kind) {
  const auto& ma = require_metric(a, "distance_breakpoints");
  const auto& mb = require_metric(b, "distance_breakpoints");
  std::set<Rational> out;
  if (kind == Precision::Kind::Additive) {
    out.insert(Rational(0));
    for (const auto& ra : ma.dist)
      for (const auto& da : ra)
        for (const auto& rb : mb.dist)
          for (const auto& db : rb) out.insert(abs(da - db) * Rational(1, 2));
  } else {
    out.insert(Rational(1));
    for (const auto& ra : ma.dist)
      for (const auto& da : ra) {
        if (!da.is_positive()) continue;
        for (const auto& rb : mb.dist)
          for (const auto& db : rb) {
            if (!db.is_positive()) continue;
            out.insert(da / db);
            out.insert(db / da);
          }
      }
  }
  return {out.begin(), out.end()};
}

unsigned good_saturation_bound(const Structure& a, const Structure& b) {
  const auto& ma = require_metric(a, "good_saturation_bound");
  const auto& mb = require_metric(b, "good_saturation_bound");
  std::optional<Rational> m = ma.min_positive_distance();
  if (auto mbp = mb.min_positive_distance(); mbp && (!m || *mbp < *m)) m = mbp;
  if (!m) return 1;
  mpz_class k = m->reciprocal().ceil();
  if (k < 1) k = 1;
  if (!k.fits_uint_p()) fail("StateSpaceTooLarge", "saturation bound exceeds unsigned range");
  return static_cast<unsigned>(k.get_ui());
}

// ── JSON ────────────────────────────────────────────────────────────────────

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) fail("BadFormat", "rationals must be strings, got " + j.dump());
  auto r = Rational::parse(j.get<std::string>());
  if (!r) fail("BadFormat", "cannot parse rational '" + j.get<std::string>() + "'");
  return *r;
}

Json rational_to_json(const Rational& r) { return Json(r.str()); }

namespace {

NormKind norm_from_string(const std::string& s) {
  if (s == "l1") return NormKind::L1;
  if (s == "linf") return NormKind::Linf;
  if (s == "l2") return NormKind::L2;
  if (s == "wl1") return NormKind::WeightedL1;
  if (s == "wlinf") return NormKind::WeightedLinf;
  fail("BadFormat", "unknown norm '" + s + "'");
}

}  // namespace

Structure parse_structure(const Json& j, Precision::Kind semantics) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail("BadFormat", "structure file needs a \"kind\" field");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "metric_space") {
    FiniteMetricSpace m;
    if (!j.contains("points") || !j["points"].is_array())
      fail("BadFormat", "metric_space needs a \"points\" array");
    for (const auto& p : j["points"]) {
      if (!p.is_string()) fail("BadFormat", "point labels must be strings");
      m.labels.push_back(p.get<std::string>());
    }
    if (!j.contains("d") || !j["d"].is_array()) fail("BadFormat", "metric_space needs \"d\"");
    for (const auto& row : j["d"]) {
      if (!row.is_array()) fail("BadFormat", "\"d\" must be an array of arrays");
      std::vector<Rational> r;
      for (const auto& x : row) r.push_back(rational_from_json(x));
      m.dist.push_back(std::move(r));
    }
    return make_metric_structure(std::move(m), semantics == Precision::Kind::Additive
                                                   ? Vocabulary::MetricCorr
                                                   : Vocabulary::MetricIso);
  }
  if (kind == "normed") {
    NormedPointConfig c;
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      fail("BadFormat", "normed needs an integer \"dim\"");
    c.dim = j["dim"].get<int>();
    if (!j.contains("norm") || !j["norm"].is_string())
      fail("BadFormat", "normed needs a \"norm\" string");
    c.norm = norm_from_string(j["norm"].get<std::string>());
    if (j.contains("weights"))
      for (const auto& w : j["weights"]) c.weights.push_back(rational_from_json(w));
    if (!j.contains("points") || !j["points"].is_object())
      fail("BadFormat", "normed needs a \"points\" object");
    for (const auto& [name, coords] : j["points"].items()) {
      if (!coords.is_array()) fail("BadFormat", "coordinates must be arrays");
      c.labels.push_back(name);
      std::vector<Rational> row;
      for (const auto& x : coords) row.push_back(rational_from_json(x));
      c.points.push_back(std::move(row));
    }
    c.unit_ball_only = j.value("unit_ball", false);
    const Vocabulary v = c.unit_ball_only ? Vocabulary::BanachBall : Vocabulary::Banach;
    if ((semantics == Precision::Kind::Additive) != (v == Vocabulary::BanachBall))
      fail("SemanticsMismatch", vocab_name(v) + " carriers use " +
                                    (v == Vocabulary::BanachBall ? "additive" : "multiplicative") +
                                    " precision");
    return make_normed_structure(std::move(c), v);
  }
  fail("BadFormat", "unknown structure kind '" + kind + "'");
}

Json structure_to_json(const Structure& s) {
  Json j;
  if (s.is_metric()) {
    const auto& m = s.metric();
    j["kind"] = "metric_space";
    j["points"] = m.labels;
    Json rows = Json::array();
    for (const auto& row : m.dist) {
      Json r = Json::array();
      for (const auto& x : row) r.push_back(rational_to_json(x));
      rows.push_back(std::move(r));
    }
    j["d"] = std::move(rows);
    return j;
  }
  const auto& c = s.normed();
  j["kind"] = "normed";
  j["dim"] = c.dim;
  j["norm"] = norm_name(c.norm);
  if (!c.weights.empty()) {
    Json w = Json::array();
    for (const auto& x : c.weights) w.push_back(rational_to_json(x));
    j["weights"] = std::move(w);
  }
  Json pts = Json::object();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    Json coords = Json::array();
    for (const auto& x : c.points[i]) coords.push_back(rational_to_json(x));
    pts[c.labels[i]] = std::move(coords);
  }
  j["points"] = std::move(pts);
  if (c.unit_ball_only) j["unit_ball"] = true;
  return j;
}

}  // namespace efg
