#include "efg/scott.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "efg/errors.hpp"

namespace efg {
namespace {

std::string var_name(unsigned i) { return "v" + std::to_string(i); }

unsigned var_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'v') fail("BadFormula", "variable \"" + name + "\"");
  unsigned idx = 0;
  for (std::size_t p = 1; p < name.size(); ++p) {
    if (name[p] < '0' || name[p] > '9')
      fail("BadFormula", "variable \"" + name + "\"");
    idx = idx * 10 + static_cast<unsigned>(name[p] - '0');
  }
  return idx;
}

void require_tuple(const Structure& a, const std::vector<int>& tuple) {
  for (int i : tuple) {
    if (i < 0 || i >= static_cast<int>(a.size()))
      fail("BadIndex", "tuple entry " + std::to_string(i));
  }
}

void guard_formula_size(std::size_t carrier, std::size_t tuple_len, std::uint64_t alpha) {
  const std::uint64_t depth = tuple_len + alpha;
  if (depth > 10) fail("StateSpaceTooLarge", "formula depth " + std::to_string(depth));
  double tables = std::pow(static_cast<double>(carrier), static_cast<double>(depth));
  if (tables > double(1 << 21))
    fail("StateSpaceTooLarge", "level formula would need " + std::to_string(tables) +
                                   " assignments");
}

}  // namespace

// ── Watersheds ──────────────────────────────────────────────────────────────

Watershed watershed_relation(const Structure& a, const Structure& b, const Rational& eps,
                             const std::vector<std::pair<int, int>>& start) {
  RelationGameTable t = RelationGameTable::build(a, b, eps, start);
  auto curve = t.winner_curve();
  for (std::size_t c = 0; c < curve.size(); ++c) {
    if (!curve[c]) return {false, c};
  }
  return {true, 0};
}

Watershed watershed_function(const FunctionGameConfig& cfg) {
  FunctionGameTable t = FunctionGameTable::build(cfg);
  auto curve = t.winner_curve();
  for (std::size_t c = 0; c < curve.size(); ++c) {
    if (!curve[c]) return {false, c};
  }
  return {true, 0};
}

// ── Relation-game level formulas ────────────────────────────────────────────

ScottRelationBuilder::ScottRelationBuilder(const Structure& a, Rational eps)
    : a_(&a), eps_(std::move(eps)) {
  if (!a.is_metric())
    fail("UnsupportedVocabulary", "level formulas need a metric carrier");
  if (eps_.is_negative()) fail("BadPrecision", "negative slack " + eps_.str());
}

FormulaPtr ScottRelationBuilder::atom(AtomicFormula::Kind kind, const Rational& r,
                                      unsigned i, unsigned j) {
  auto key = std::make_tuple(static_cast<int>(kind), r, var_name(i), var_name(j));
  auto it = atoms_.find(key);
  if (it != atoms_.end()) return it->second;
  AtomicFormula af = kind == AtomicFormula::Kind::DistLeq
                         ? AtomicFormula::dist_leq(r, var_name(i), var_name(j))
                         : AtomicFormula::dist_geq(r, var_name(i), var_name(j));
  FormulaPtr f = make_atom(af);
  atoms_[key] = f;
  return f;
}

FormulaPtr ScottRelationBuilder::base(const std::vector<int>& tuple) {
  std::vector<FormulaPtr> parts;
  const Rational two_eps = Rational(2) * eps_;
  for (unsigned i = 0; i < tuple.size(); ++i) {
    for (unsigned j = i + 1; j < tuple.size(); ++j) {
      Rational d = a_->metric().d(tuple[i], tuple[j]);
      parts.push_back(atom(AtomicFormula::Kind::DistLeq, d + two_eps, i, j));
      parts.push_back(atom(AtomicFormula::Kind::DistGeq, monus(d, two_eps), i, j));
    }
  }
  return make_and(parts);
}

FormulaPtr ScottRelationBuilder::formula(const std::vector<int>& tuple,
                                          std::uint64_t alpha) {
  require_tuple(*a_, tuple);
  guard_formula_size(a_->size(), tuple.size(), alpha);
  auto key = std::make_pair(tuple, alpha);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  FormulaPtr result;
  if (alpha == 0) {
    result = base(tuple);
  } else {
    const unsigned n = static_cast<unsigned>(tuple.size());
    std::vector<FormulaPtr> parts;
    std::vector<FormulaPtr> branches;
    std::vector<int> ext = tuple;
    ext.push_back(0);
    for (std::size_t x = 0; x < a_->size(); ++x) {
      ext.back() = static_cast<int>(x);
      FormulaPtr sub = formula(ext, alpha - 1);
      parts.push_back(make_exists(var_name(n), sub));
      branches.push_back(sub);
    }
    parts.push_back(make_forall(var_name(n), make_or(branches)));
    result = make_and(parts);
  }
  cache_[key] = result;
  return result;
}

FormulaPtr scott_formula_relation(const Structure& a, const std::vector<int>& tuple,
                                  const Rational& eps, std::uint64_t alpha) {
  ScottRelationBuilder b(a, eps);
  return b.formula(tuple, alpha);
}

// ── Function-game level formulas ────────────────────────────────────────────

ScottFunctionBuilder::ScottFunctionBuilder(const Structure& a,
                                           std::vector<std::vector<MenuEntry>> menus)
    : a_(&a), menus_(std::move(menus)) {
  if (!a.is_metric())
    fail("UnsupportedVocabulary", "level formulas need a metric carrier");
  if (menus_.empty()) fail("BadMenu", "no menu rows");
  for (const auto& row : menus_) {
    if (row.empty()) fail("BadMenu", "empty menu row");
    for (const auto& e : row) {
      if (e.k == 0) fail("BadMenu", "menu entry with k = 0");
      if (e.factor < Rational(1)) fail("BadPrecision", "menu factor below 1");
    }
  }
}

const std::vector<MenuEntry>& ScottFunctionBuilder::row(std::size_t round) const {
  return menus_[std::min(round, menus_.size() - 1)];
}

FormulaPtr ScottFunctionBuilder::atom(AtomicFormula::Kind kind, const Rational& r,
                                      unsigned i, unsigned j) {
  auto key = std::make_tuple(static_cast<int>(kind), r, var_name(i), var_name(j));
  auto it = atoms_.find(key);
  if (it != atoms_.end()) return it->second;
  AtomicFormula af = kind == AtomicFormula::Kind::DistLeq
                         ? AtomicFormula::dist_leq(r, var_name(i), var_name(j))
                         : AtomicFormula::dist_geq(r, var_name(i), var_name(j));
  FormulaPtr f = make_atom(af);
  atoms_[key] = f;
  return f;
}

FormulaPtr ScottFunctionBuilder::base(const std::vector<int>& tuple,
                                      const std::vector<MenuEntry>& levels) {
  if (levels.size() != tuple.size())
    fail("BadShape", "one (factor, k) level per tuple position required");
  std::vector<FormulaPtr> parts;
  for (unsigned i = 0; i < tuple.size(); ++i) {
    const Rational& s = levels[i].factor;
    const Rational inv_k(1, static_cast<long>(levels[i].k));
    for (unsigned j = i; j < tuple.size(); ++j) {
      for (unsigned j2 = j + 1; j2 < tuple.size(); ++j2) {
        Rational d = a_->metric().d(tuple[j], tuple[j2]);
        parts.push_back(atom(AtomicFormula::Kind::DistLeq, s * max(inv_k, d), j, j2));
        if (d >= inv_k)
          parts.push_back(atom(AtomicFormula::Kind::DistGeq, d / s, j, j2));
      }
    }
  }
  return make_and(parts);
}

FormulaPtr ScottFunctionBuilder::formula(const std::vector<int>& tuple,
                                         const std::vector<MenuEntry>& levels,
                                         std::uint64_t alpha) {
  require_tuple(*a_, tuple);
  guard_formula_size(a_->size(), tuple.size(), alpha);
  std::ostringstream key;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    key << tuple[i] << "*" << levels[i].factor.str() << "*" << levels[i].k << ",";
  key << "@" << alpha;
  auto it = cache_.find(key.str());
  if (it != cache_.end()) return it->second;

  FormulaPtr result;
  if (alpha == 0) {
    result = base(tuple, levels);
  } else {
    const unsigned n = static_cast<unsigned>(tuple.size());
    std::vector<FormulaPtr> parts;
    std::vector<int> ext = tuple;
    ext.push_back(0);
    std::vector<MenuEntry> lv = levels;
    lv.push_back(row(n)[0]);
    for (const auto& e : row(n)) {
      lv.back() = e;
      std::vector<FormulaPtr> branches;
      for (std::size_t x = 0; x < a_->size(); ++x) {
        ext.back() = static_cast<int>(x);
        FormulaPtr sub = formula(ext, lv, alpha - 1);
        parts.push_back(make_exists(var_name(n), sub));
        branches.push_back(sub);
      }
      parts.push_back(make_forall(var_name(n), make_or(branches)));
    }
    result = make_and(parts);
  }
  cache_[key.str()] = result;
  return result;
}

FormulaPtr scott_formula_function(const Structure& a, const std::vector<int>& tuple,
                                  const std::vector<MenuEntry>& levels,
                                  const std::vector<std::vector<MenuEntry>>& menus,
                                  std::uint64_t alpha) {
  ScottFunctionBuilder b(a, menus);
  return b.formula(tuple, levels, alpha);
}

// ── Characterizing sentences ────────────────────────────────────────────────

ScottSentence scott_sentence_relation(const Structure& a, const Rational& eps,
                                      std::uint64_t rank, unsigned tuple_cap) {
  ScottRelationBuilder builder(a, eps);
  ScottSentence s;
  s.rank = rank;
  s.eps = eps;
  s.lead = builder.formula({}, rank);
  std::vector<std::vector<int>> tuples = {{}};
  for (unsigned n = 0; n <= tuple_cap; ++n) {
    if (n > 0) {
      std::vector<std::vector<int>> next;
      for (const auto& t : tuples) {
        if (t.size() + 1 != n) continue;
        for (std::size_t x = 0; x < a.size(); ++x) {
          auto e = t;
          e.push_back(static_cast<int>(x));
          next.push_back(std::move(e));
        }
      }
      tuples.insert(tuples.end(), next.begin(), next.end());
    }
  }
  for (const auto& t : tuples) {
    ScottSentence::Implication imp;
    imp.tuple = t;
    imp.pre = builder.formula(t, rank);
    imp.post = builder.formula(t, rank + 1);
    s.implications.push_back(std::move(imp));
  }
  return s;
}

bool eval_scott_sentence(const ScottSentence& s, const Structure& b) {
  TupleTableEvaluator ev(b);
  if (!ev.eval(s.lead, {})) return false;
  const std::size_t nb = b.size();
  for (const auto& imp : s.implications) {
    unsigned m = std::max(ev.arity(imp.pre), ev.arity(imp.post));
    const auto& pre = ev.table(imp.pre);
    const auto& post = ev.table(imp.post);
    std::size_t total = 1;
    for (unsigned i = 0; i < m; ++i) total *= nb;
    for (std::size_t p = 0; p < total; ++p) {
      if (pre[p % pre.size()] && !post[p % post.size()]) return false;
    }
  }
  return true;
}

FormulaPtr materialize_scott_sentence(const ScottSentence& s, const Structure& a,
                                      const Structure& b) {
  std::vector<FormulaPtr> parts;
  parts.push_back(s.lead);
  for (const auto& imp : s.implications) {
    FormulaPtr body = make_or({strong_negation(imp.pre, a, b), imp.post});
    for (std::size_t i = imp.tuple.size(); i > 0; --i)
      body = make_forall(var_name(static_cast<unsigned>(i - 1)), body);
    parts.push_back(body);
  }
  return make_and(parts);
}

Json scott_sentence_to_json(const ScottSentence& s, const Structure& a) {
  Json j;
  j["rank"] = s.rank;
  j["slack"] = s.eps.str();
  j["lead"] = formula_to_json(s.lead, true);
  Json imps = Json::array();
  for (const auto& imp : s.implications) {
    Json e;
    Json tuple = Json::array();
    for (int i : imp.tuple) tuple.push_back(a.label(i));
    e["tuple"] = tuple;
    e["pre"] = formula_to_json(imp.pre, true);
    e["post"] = formula_to_json(imp.post, true);
    imps.push_back(std::move(e));
  }
  j["implications"] = std::move(imps);
  return j;
}

std::uint64_t corpus_rank(const Structure& a, const std::vector<Structure>& corpus,
                          const Rational& eps, unsigned tuple_bound) {
  if (tuple_bound > 4) fail("BadArgument", "tuple bound " + std::to_string(tuple_bound));
  std::uint64_t best = 0;
  for (const auto& b : corpus) {
    RelationGameTable t = RelationGameTable::build(a, b, eps, {});
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    // Tuple pairs of length n become pair sets; enumerate them as sequences
    // of (A index, B index) choices.
    std::function<void(unsigned, PairMask)> rec = [&](unsigned left, PairMask mask) {
      auto dc = t.drop_clock(mask);
      if (dc && *dc > best) best = *dc;
      if (left == 0) return;
      for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j)
          rec(left - 1, mask | (PairMask(1) << t.bit(i, j)));
      }
    };
    rec(tuple_bound, 0);
  }
  return best;
}

// ── Prefix truth tables ─────────────────────────────────────────────────────

TupleTableEvaluator::TupleTableEvaluator(const Structure& b) : b_(&b) {}

const std::pair<unsigned, std::vector<char>>& TupleTableEvaluator::entry(const Formula* f) {
  auto it = memo_.find(f);
  if (it != memo_.end()) return it->second;

  const std::size_t nb = b_->size();
  auto pow_nb = [&](unsigned m) {
    std::size_t t = 1;
    for (unsigned i = 0; i < m; ++i) {
      t *= nb;
      if (t > (std::size_t(1) << 22)) fail("StateSpaceTooLarge", "assignment table");
    }
    return t;
  };

  unsigned ar = 0;
  std::vector<char> table;
  switch (f->op) {
    case Formula::Op::Atom: {
      const AtomicFormula& at = f->atom;
      if (at.is_metric_atom()) {
        ar = std::max(var_index(at.u), var_index(at.v)) + 1;
      } else {
        for (const auto& [name, c] : at.term) ar = std::max(ar, var_index(name) + 1);
      }
      std::size_t total = pow_nb(ar);
      table.resize(total);
      if (at.is_metric_atom()) {
        // distance atoms dominate large sweeps; fill via an n*n pair table so
        // each rational comparison happens once, not once per assignment
        unsigned u = var_index(at.u), v = var_index(at.v);
        std::vector<char> pair_truth(nb * nb);
        for (std::size_t x = 0; x < nb; ++x)
          for (std::size_t y = 0; y < nb; ++y) {
            const Rational& d = b_->metric().d(static_cast<int>(x), static_cast<int>(y));
            bool val = at.kind == AtomicFormula::Kind::DistLeq ? d <= *at.threshold
                                                              : d >= *at.threshold;
            pair_truth[x * nb + y] = val ? 1 : 0;
          }
        std::size_t pu = pow_nb(u), pv = pow_nb(v);
        for (std::size_t p = 0; p < total; ++p) {
          std::size_t x = (p / pu) % nb, y = (p / pv) % nb;
          table[p] = pair_truth[x * nb + y];
        }
      } else {
        for (std::size_t p = 0; p < total; ++p) {
          std::size_t q = p;
          Assignment named;
          for (unsigned i = 0; i < ar; ++i) {
            named[var_name(i)] = static_cast<int>(q % nb);
            q /= nb;
          }
          table[p] = eval_atomic(*b_, at, named) ? 1 : 0;
        }
      }
      break;
    }
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::vector<const std::pair<unsigned, std::vector<char>>*> kids;
      for (const auto& k : f->kids) {
        kids.push_back(&entry(k.get()));
        ar = std::max(ar, kids.back()->first);
      }
      std::size_t total = pow_nb(ar);
      bool conj = f->op == Formula::Op::And;
      table.assign(total, conj ? 1 : 0);
      for (std::size_t p = 0; p < total; ++p) {
        bool val = conj;
        for (const auto* k : kids) {
          bool kv = k->second[p % k->second.size()];
          if (conj) {
            val = val && kv;
            if (!val) break;
          } else {
            val = val || kv;
            if (val) break;
          }
        }
        table[p] = val ? 1 : 0;
      }
      break;
    }
    case Formula::Op::Exists:
    case Formula::Op::Forall: {
      unsigned vi = var_index(f->var);
      const auto& kid = entry(f->kids[0].get());
      if (kid.first > vi + 1)
        fail("BadFormula", "quantified variable is not the deepest in its scope");
      ar = vi;
      std::size_t total = pow_nb(ar);
      std::size_t stride = pow_nb(std::min(kid.first, vi));
      table.resize(total);
      bool ex = f->op == Formula::Op::Exists;
      for (std::size_t p = 0; p < total; ++p) {
        bool val = !ex;
        for (std::size_t y = 0; y < nb; ++y) {
          std::size_t idx = kid.first > vi ? (p % stride) + y * stride : p % kid.second.size();
          bool kv = kid.second[idx];
          if (ex) {
            val = val || kv;
            if (val) break;
          } else {
            val = val && kv;
            if (!val) break;
          }
        }
        table[p] = val ? 1 : 0;
      }
      break;
    }
  }
  auto [pos, inserted] = memo_.emplace(f, std::make_pair(ar, std::move(table)));
  return pos->second;
}

bool TupleTableEvaluator::eval(const FormulaPtr& f, const std::vector<int>& prefix) {
  if (!f) fail("BadFormula", "null formula");
  const auto& e = entry(f.get());
  if (prefix.size() < e.first)
    fail("BadArgument", "prefix shorter than the formula's variable span");
  std::size_t p = 0, mul = 1;
  const std::size_t nb = b_->size();
  for (unsigned i = 0; i < e.first; ++i) {
    int v = prefix[i];
    if (v < 0 || v >= static_cast<int>(nb)) fail("BadIndex", "prefix entry");
    p += static_cast<std::size_t>(v) * mul;
    mul *= nb;
  }
  return e.second[p] != 0;
}

const std::vector<char>& TupleTableEvaluator::table(const FormulaPtr& f) {
  return entry(f.get()).second;
}

unsigned TupleTableEvaluator::arity(const FormulaPtr& f) { return entry(f.get()).first; }

}  // namespace efg
