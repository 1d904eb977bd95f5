#include "efg/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "efg/errors.hpp"

namespace efg {

namespace {

FormulaPtr raw(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

int cmp_rational(const Rational& a, const Rational& b) {
  return a < b ? -1 : (a == b ? 0 : 1);
}

int cmp_atoms(const AtomicFormula& a, const AtomicFormula& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.threshold.has_value() != b.threshold.has_value())
    return a.threshold.has_value() ? 1 : -1;
  if (a.threshold)
    if (int c = cmp_rational(*a.threshold, *b.threshold)) return c;
  if (int c = a.u.compare(b.u)) return c < 0 ? -1 : 1;
  if (int c = a.v.compare(b.v)) return c < 0 ? -1 : 1;
  for (std::size_t i = 0; i < std::min(a.term.size(), b.term.size()); ++i) {
    if (int c = a.term[i].first.compare(b.term[i].first)) return c < 0 ? -1 : 1;
    if (int c = cmp_rational(a.term[i].second, b.term[i].second)) return c;
  }
  if (a.term.size() != b.term.size()) return a.term.size() < b.term.size() ? -1 : 1;
  return 0;
}

}  // namespace

int compare_formulas(const Formula& x, const Formula& y) {
  if (x.op != y.op) return x.op < y.op ? -1 : 1;
  if (x.op == Formula::Op::Atom) return cmp_atoms(x.atom, y.atom);
  if (int c = x.var.compare(y.var)) return c < 0 ? -1 : 1;
  for (std::size_t i = 0; i < std::min(x.kids.size(), y.kids.size()); ++i)
    if (int c = compare_formulas(*x.kids[i], *y.kids[i])) return c;
  if (x.kids.size() != y.kids.size()) return x.kids.size() < y.kids.size() ? -1 : 1;
  return 0;
}

bool equal_formulas(const FormulaPtr& x, const FormulaPtr& y) {
  return x == y || compare_formulas(*x, *y) == 0;
}

FormulaPtr make_atom(AtomicFormula a) {
  Formula f;
  f.op = Formula::Op::Atom;
  f.atom = std::move(a);
  return raw(std::move(f));
}

namespace {

FormulaPtr make_list(Formula::Op op, std::vector<FormulaPtr> kids) {
  std::sort(kids.begin(), kids.end(),
            [](const FormulaPtr& a, const FormulaPtr& b) { return compare_formulas(*a, *b) < 0; });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const FormulaPtr& a, const FormulaPtr& b) {
                           return compare_formulas(*a, *b) == 0;
                         }),
             kids.end());
  Formula f;
  f.op = op;
  f.kids = std::move(kids);
  return raw(std::move(f));
}

}  // namespace

FormulaPtr make_and(std::vector<FormulaPtr> kids) {
  return make_list(Formula::Op::And, std::move(kids));
}

FormulaPtr make_or(std::vector<FormulaPtr> kids) {
  return make_list(Formula::Op::Or, std::move(kids));
}

FormulaPtr make_exists(std::string var, FormulaPtr body) {
  Formula f;
  f.op = Formula::Op::Exists;
  f.var = std::move(var);
  f.kids.push_back(std::move(body));
  return raw(std::move(f));
}

FormulaPtr make_forall(std::string var, FormulaPtr body) {
  Formula f;
  f.op = Formula::Op::Forall;
  f.var = std::move(var);
  f.kids.push_back(std::move(body));
  return raw(std::move(f));
}

FormulaPtr make_true() { return make_and({}); }
FormulaPtr make_false() { return make_or({}); }

std::string formula_to_string(const FormulaPtr& f) {
  switch (f->op) {
    case Formula::Op::Atom: {
      const auto& a = f->atom;
      std::string s = "(";
      switch (a.kind) {
        case AtomicFormula::Kind::DistLeq: s += "dleq"; break;
        case AtomicFormula::Kind::DistGeq: s += "dgeq"; break;
        case AtomicFormula::Kind::NormLeq: s += "p"; break;
        case AtomicFormula::Kind::NormGeq: s += "q"; break;
      }
      if (a.threshold) s += " " + a.threshold->str();
      if (a.is_metric_atom()) {
        s += " " + a.u + " " + a.v;
      } else {
        for (const auto& [var, c] : a.term) s += " [" + c.str() + " " + var + "]";
      }
      return s + ")";
    }
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::string s = f->op == Formula::Op::And ? "(and" : "(or";
      for (const auto& k : f->kids) s += " " + formula_to_string(k);
      return s + ")";
    }
    case Formula::Op::Exists:
    case Formula::Op::Forall: {
      std::string s = f->op == Formula::Op::Exists ? "(exists " : "(forall ";
      return s + f->var + " " + formula_to_string(f->kids[0]) + ")";
    }
  }
  return "?";
}

// ── Approximation ───────────────────────────────────────────────────────────

AtomicFormula appr(const AtomicFormula& a, const Precision& p) {
  AtomicFormula out = a;
  if (a.is_metric_atom()) {
    if (!a.threshold) fail("BadFormula", "metric atom needs a threshold");
    if (p.is_additive()) {
      const Rational shift = Rational(2) * p.value;
      out.threshold = a.kind == AtomicFormula::Kind::DistLeq ? *a.threshold + shift
                                                             : monus(*a.threshold, shift);
    } else {
      out.threshold = a.kind == AtomicFormula::Kind::DistLeq ? *a.threshold * p.value
                                                             : *a.threshold / p.value;
    }
    return out;
  }
  if (a.threshold) {
    // Unit-ball atoms weaken by shifting the threshold, truncated into [0, 1].
    if (!p.is_additive())
      fail("SemanticsMismatch", "thresholded norm atoms take additive precision");
    out.threshold = a.kind == AtomicFormula::Kind::NormLeq
                        ? add_capped(*a.threshold, p.value, Rational(1))
                        : monus(*a.threshold, p.value);
    return out;
  }
  if (p.is_additive())
    fail("SemanticsMismatch", "threshold-free norm atoms take multiplicative precision");
  // Scale the term: the implicit threshold 1 stays put.
  const Rational scale =
      a.kind == AtomicFormula::Kind::NormLeq ? p.value.reciprocal() : p.value;
  for (auto& [var, c] : out.term) c *= scale;
  return out;
}

FormulaPtr appr_formula(const FormulaPtr& f, const Precision& p) {
  switch (f->op) {
    case Formula::Op::Atom:
      return make_atom(appr(f->atom, p));
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(appr_formula(k, p));
      return f->op == Formula::Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    case Formula::Op::Exists:
      return make_exists(f->var, appr_formula(f->kids[0], p));
    case Formula::Op::Forall:
      return make_forall(f->var, appr_formula(f->kids[0], p));
  }
  fail("BadFormula", "unknown op");
}

// ── Weak negation ───────────────────────────────────────────────────────────

AtomicFormula weak_neg(const AtomicFormula& a) {
  AtomicFormula out = a;
  switch (a.kind) {
    case AtomicFormula::Kind::DistLeq: out.kind = AtomicFormula::Kind::DistGeq; break;
    case AtomicFormula::Kind::DistGeq: out.kind = AtomicFormula::Kind::DistLeq; break;
    case AtomicFormula::Kind::NormLeq: out.kind = AtomicFormula::Kind::NormGeq; break;
    case AtomicFormula::Kind::NormGeq: out.kind = AtomicFormula::Kind::NormLeq; break;
  }
  return out;
}

FormulaPtr weak_neg(const FormulaPtr& f) {
  switch (f->op) {
    case Formula::Op::Atom:
      return make_atom(weak_neg(f->atom));
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(weak_neg(k));
      return f->op == Formula::Op::And ? make_or(std::move(kids)) : make_and(std::move(kids));
    }
    case Formula::Op::Exists:
      return make_forall(f->var, weak_neg(f->kids[0]));
    case Formula::Op::Forall:
      return make_exists(f->var, weak_neg(f->kids[0]));
  }
  fail("BadFormula", "unknown op");
}

// ── Good fragment ───────────────────────────────────────────────────────────

bool is_good(const AtomicFormula& a, unsigned k, Vocabulary v) {
  if (k == 0) fail("BadArgument", "k must be >= 1");
  if (v == Vocabulary::MetricCorr || v == Vocabulary::BanachBall)
    fail("UnsupportedVocabulary", "the k-bounded fragment is multiplicative-only");
  if (v == Vocabulary::MetricIso) {
    if (!a.is_metric_atom()) fail("VocabularyMismatch", "norm atom under metric vocabulary");
    if (!a.threshold) fail("BadFormula", "metric atom needs a threshold");
    return *a.threshold * Rational(static_cast<long>(k)) >= Rational(1);
  }
  if (a.is_metric_atom()) fail("VocabularyMismatch", "metric atom under normed vocabulary");
  if (a.threshold) fail("VocabularyMismatch", "thresholded norm atom is not multiplicative");
  std::set<std::string> vars;
  const Rational bound(static_cast<long>(k));
  for (const auto& [var, c] : a.term) {
    vars.insert(var);
    if (abs(c) > bound) return false;
  }
  return vars.size() <= k;
}

// ── Evaluation ──────────────────────────────────────────────────────────────

bool eval_formula(const Structure& s, const FormulaPtr& f, const Assignment& asg) {
  switch (f->op) {
    case Formula::Op::Atom:
      return eval_atomic(s, f->atom, asg);
    case Formula::Op::And:
      for (const auto& k : f->kids)
        if (!eval_formula(s, k, asg)) return false;
      return true;
    case Formula::Op::Or:
      for (const auto& k : f->kids)
        if (eval_formula(s, k, asg)) return true;
      return false;
    case Formula::Op::Exists:
    case Formula::Op::Forall: {
      Assignment inner = asg;
      for (int i = 0; i < s.size(); ++i) {
        inner[f->var] = i;
        const bool v = eval_formula(s, f->kids[0], inner);
        if (f->op == Formula::Op::Exists && v) return true;
        if (f->op == Formula::Op::Forall && !v) return false;
      }
      return f->op == Formula::Op::Forall;
    }
  }
  fail("BadFormula", "unknown op");
}

// ── Strong negation ─────────────────────────────────────────────────────────

namespace {

FormulaPtr negate_metric_atom(const AtomicFormula& a, const std::set<Rational>& realized) {
  if (!a.threshold) fail("BadFormula", "metric atom needs a threshold");
  const Rational& r = *a.threshold;
  if (a.kind == AtomicFormula::Kind::DistLeq) {
    // "d > r" is "d >= t" for any t between r and the next realized value.
    auto it = realized.upper_bound(r);
    if (it == realized.end()) return make_false();
    return make_atom(AtomicFormula::dist_geq(midpoint(r, *it), a.u, a.v));
  }
  // "d < r" likewise via the previous realized value.
  auto it = realized.lower_bound(r);
  if (it == realized.begin()) return make_false();
  return make_atom(AtomicFormula::dist_leq(midpoint(*std::prev(it), r), a.u, a.v));
}

FormulaPtr strong_neg_rec(const FormulaPtr& f, const std::set<Rational>& realized) {
  switch (f->op) {
    case Formula::Op::Atom:
      return negate_metric_atom(f->atom, realized);
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(strong_neg_rec(k, realized));
      return f->op == Formula::Op::And ? make_or(std::move(kids)) : make_and(std::move(kids));
    }
    case Formula::Op::Exists:
      return make_forall(f->var, strong_neg_rec(f->kids[0], realized));
    case Formula::Op::Forall:
      return make_exists(f->var, strong_neg_rec(f->kids[0], realized));
  }
  fail("BadFormula", "unknown op");
}

}  // namespace

FormulaPtr strong_negation(const FormulaPtr& f, const Structure& a, const Structure& b) {
  if (!a.is_metric() || !b.is_metric())
    fail("UnsupportedVocabulary", "strong_negation needs metric carriers");
  std::set<Rational> realized;
  realized.insert(Rational(0));
  for (const auto& row : a.metric().dist)
    for (const auto& x : row) realized.insert(x);
  for (const auto& row : b.metric().dist)
    for (const auto& x : row) realized.insert(x);
  return strong_neg_rec(f, realized);
}

// ── JSON ────────────────────────────────────────────────────────────────────

namespace {

std::string atom_tag(const AtomicFormula& a) {
  switch (a.kind) {
    case AtomicFormula::Kind::DistLeq: return "dleq";
    case AtomicFormula::Kind::DistGeq: return "dgeq";
    case AtomicFormula::Kind::NormLeq: return "p";
    case AtomicFormula::Kind::NormGeq: return "q";
  }
  return "?";
}

Json atom_to_json(const AtomicFormula& a) {
  Json j;
  j["op"] = "atom";
  j["atom"] = atom_tag(a);
  if (a.threshold) j["r"] = rational_to_json(*a.threshold);
  if (a.is_metric_atom()) {
    j["vars"] = Json::array({a.u, a.v});
  } else {
    Json vars = Json::array(), coeffs = Json::array();
    for (const auto& [var, c] : a.term) {
      vars.push_back(var);
      coeffs.push_back(rational_to_json(c));
    }
    j["vars"] = std::move(vars);
    j["coeffs"] = std::move(coeffs);
  }
  return j;
}

AtomicFormula atom_from_json(const Json& j) {
  if (!j.contains("atom") || !j["atom"].is_string()) fail("BadFormat", "atom needs \"atom\" tag");
  const std::string tag = j["atom"].get<std::string>();
  AtomicFormula a;
  if (tag == "dleq" || tag == "dgeq") {
    a.kind = tag == "dleq" ? AtomicFormula::Kind::DistLeq : AtomicFormula::Kind::DistGeq;
    if (!j.contains("r")) fail("BadFormat", "metric atom needs \"r\"");
    a.threshold = rational_from_json(j["r"]);
    if (!j.contains("vars") || !j["vars"].is_array() || j["vars"].size() != 2)
      fail("BadFormat", "metric atom needs two vars");
    a.u = j["vars"][0].get<std::string>();
    a.v = j["vars"][1].get<std::string>();
    return a;
  }
  if (tag == "p" || tag == "q") {
    a.kind = tag == "p" ? AtomicFormula::Kind::NormLeq : AtomicFormula::Kind::NormGeq;
    if (j.contains("r")) a.threshold = rational_from_json(j["r"]);
    if (!j.contains("vars") || !j.contains("coeffs") || !j["vars"].is_array() ||
        !j["coeffs"].is_array() || j["vars"].size() != j["coeffs"].size())
      fail("BadFormat", "norm atom needs matching vars/coeffs");
    for (std::size_t i = 0; i < j["vars"].size(); ++i)
      a.term.emplace_back(j["vars"][i].get<std::string>(), rational_from_json(j["coeffs"][i]));
    return a;
  }
  fail("BadFormat", "unknown atom tag '" + tag + "'");
}

Json node_to_json_plain(const FormulaPtr& f);

Json list_to_json_plain(const FormulaPtr& f, const char* tag) {
  Json j;
  j["op"] = tag;
  Json kids = Json::array();
  for (const auto& k : f->kids) kids.push_back(node_to_json_plain(k));
  j["args"] = std::move(kids);
  return j;
}

Json node_to_json_plain(const FormulaPtr& f) {
  switch (f->op) {
    case Formula::Op::Atom: return atom_to_json(f->atom);
    case Formula::Op::And: return list_to_json_plain(f, "and");
    case Formula::Op::Or: return list_to_json_plain(f, "or");
    case Formula::Op::Exists:
    case Formula::Op::Forall: {
      Json j;
      j["op"] = f->op == Formula::Op::Exists ? "exists" : "forall";
      j["var"] = f->var;
      j["body"] = node_to_json_plain(f->kids[0]);
      return j;
    }
  }
  fail("BadFormula", "unknown op");
}

int collect_shared(const FormulaPtr& f, std::unordered_map<const Formula*, int>& ids,
                   Json& nodes) {
  if (auto it = ids.find(f.get()); it != ids.end()) return it->second;
  Json j;
  switch (f->op) {
    case Formula::Op::Atom:
      j = atom_to_json(f->atom);
      break;
    case Formula::Op::And:
    case Formula::Op::Or: {
      j["op"] = f->op == Formula::Op::And ? "and" : "or";
      Json kids = Json::array();
      for (const auto& k : f->kids) kids.push_back(collect_shared(k, ids, nodes));
      j["args"] = std::move(kids);
      break;
    }
    case Formula::Op::Exists:
    case Formula::Op::Forall:
      j["op"] = f->op == Formula::Op::Exists ? "exists" : "forall";
      j["var"] = f->var;
      j["body"] = collect_shared(f->kids[0], ids, nodes);
      break;
  }
  nodes.push_back(std::move(j));
  const int id = static_cast<int>(nodes.size()) - 1;
  ids.emplace(f.get(), id);
  return id;
}

FormulaPtr node_from_json(const Json& j, const std::vector<FormulaPtr>* table) {
  if (!j.is_object() && table) {
    // In shared form child positions hold integer node ids.
    if (!j.is_number_integer()) fail("BadFormat", "expected node id");
    const int id = j.get<int>();
    if (id < 0 || id >= static_cast<int>(table->size()))
      fail("BadFormat", "node id out of range");
    return (*table)[static_cast<std::size_t>(id)];
  }
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    fail("BadFormat", "formula node needs \"op\"");
  const std::string op = j["op"].get<std::string>();
  if (op == "atom") return make_atom(atom_from_json(j));
  if (op == "and" || op == "or") {
    if (!j.contains("args") || !j["args"].is_array()) fail("BadFormat", op + " needs \"args\"");
    Formula f;
    f.op = op == "and" ? Formula::Op::And : Formula::Op::Or;
    for (const auto& k : j["args"]) f.kids.push_back(node_from_json(k, table));
    return raw(std::move(f));
  }
  if (op == "exists" || op == "forall") {
    if (!j.contains("var") || !j.contains("body")) fail("BadFormat", op + " needs var and body");
    Formula f;
    f.op = op == "exists" ? Formula::Op::Exists : Formula::Op::Forall;
    f.var = j["var"].get<std::string>();
    f.kids.push_back(node_from_json(j["body"], table));
    return raw(std::move(f));
  }
  fail("BadFormat", "unknown op '" + op + "'");
}

}  // namespace

Json formula_to_json(const FormulaPtr& f, bool shared) {
  if (!shared) return node_to_json_plain(f);
  Json out;
  Json nodes = Json::array();
  std::unordered_map<const Formula*, int> ids;
  const int root = collect_shared(f, ids, nodes);
  out["nodes"] = std::move(nodes);
  out["root"] = root;
  return out;
}

FormulaPtr formula_from_json(const Json& j) {
  if (j.is_object() && j.contains("nodes")) {
    if (!j["nodes"].is_array() || !j.contains("root"))
      fail("BadFormat", "shared form needs nodes + root");
    std::vector<FormulaPtr> table;
    for (const auto& n : j["nodes"]) table.push_back(node_from_json(n, &table));
    const int root = j["root"].get<int>();
    if (root < 0 || root >= static_cast<int>(table.size()))
      fail("BadFormat", "root id out of range");
    return table[static_cast<std::size_t>(root)];
  }
  return node_from_json(j, nullptr);
}

}  // namespace efg
