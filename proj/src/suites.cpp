#include "efg/suites.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "efg/errors.hpp"

namespace efg {
namespace {

// ── Reporting helpers ───────────────────────────────────────────────────────

Json space_brief(const FiniteMetricSpace& m) {
  Json d = Json::array();
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j) d.push_back(m.d(i, j).str());
  return Json{{"points", m.size()}, {"upper", d}};
}

Json pair_brief(int i, const FiniteMetricSpace& a, int j, const FiniteMetricSpace& b) {
  return Json{{"a_index", i}, {"a", space_brief(a)}, {"b_index", j}, {"b", space_brief(b)}};
}

std::string atom_str(const AtomicFormula& at) {
  return formula_to_string(make_atom(at));
}

// Deterministic draw without the implementation-defined distribution adaptors.
std::size_t draw(std::mt19937_64& g, std::size_t n) { return g() % n; }

template <typename T>
const T& pick(std::mt19937_64& g, const std::vector<T>& xs) {
  return xs[draw(g, xs.size())];
}

unsigned to_uint(const mpz_class& z) { return static_cast<unsigned>(z.get_ui()); }

// ── Shared structure caches ─────────────────────────────────────────────────

std::vector<Structure> wrap_corpus(const std::vector<FiniteMetricSpace>& corpus,
                                   Vocabulary v) {
  std::vector<Structure> out;
  out.reserve(corpus.size());
  for (const auto& m : corpus) out.push_back(make_metric_structure(m, v));
  return out;
}

std::vector<std::vector<int>> size_groups(const std::vector<FiniteMetricSpace>& corpus) {
  std::vector<std::vector<int>> groups(8);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::size_t n = static_cast<std::size_t>(corpus[i].size());
    if (n >= groups.size()) groups.resize(n + 1);
    groups[n].push_back(static_cast<int>(i));
  }
  return groups;
}

// Effective curve lookup: past the stabilization clock the last entry repeats.
bool curve_wins(const std::vector<bool>& c, std::uint64_t clock) {
  return c[std::min<std::uint64_t>(clock, c.size() - 1)];
}

// ── Random metric spaces for the perturbation battery ───────────────────────

// Random symmetric positive matrix pushed down to a metric by shortest paths.
FiniteMetricSpace random_metric_space(std::mt19937_64& g, int n) {
  std::vector<Rational> grid;
  for (int q = 2; q <= 12; ++q) grid.push_back(Rational(q, 4));  // 1/2 .. 3
  FiniteMetricSpace m;
  m.labels.resize(n);
  for (int i = 0; i < n; ++i) m.labels[i] = "p" + std::to_string(i + 1);
  m.dist.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.dist[i][j] = m.dist[j][i] = pick(g, grid);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational via = m.dist[i][k] + m.dist[k][j];
        if (via < m.dist[i][j]) m.dist[i][j] = via;
      }
  return m;
}

// Attaches hanging points at small offsets, so that some carrier points have
// neighbours closer than typical perturbation margins.
FiniteMetricSpace attach_satellites(const FiniteMetricSpace& base, std::mt19937_64& g,
                                    int count, std::vector<int>* host_out) {
  std::vector<Rational> etas = {Rational(1, 64), Rational(1, 32), Rational(3, 64),
                                Rational(1, 16), Rational(1, 8),  Rational(1, 4)};
  int n = base.size();
  FiniteMetricSpace m = base;
  std::vector<int> hosts;
  std::vector<Rational> offs;
  for (int s = 0; s < count; ++s) {
    hosts.push_back(static_cast<int>(draw(g, static_cast<std::size_t>(n))));
    offs.push_back(pick(g, etas));
    m.labels.push_back("s" + std::to_string(s + 1));
  }
  int total = n + count;
  m.dist.assign(total, std::vector<Rational>(total, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.dist[i][j] = base.d(i, j);
  for (int s = 0; s < count; ++s) {
    int si = n + s;
    for (int j = 0; j < n; ++j)
      m.dist[si][j] = m.dist[j][si] = offs[s] + base.d(hosts[s], j);
    for (int t = 0; t < s; ++t) {
      int ti = n + t;
      m.dist[si][ti] = m.dist[ti][si] = offs[s] + base.d(hosts[s], hosts[t]) + offs[t];
    }
  }
  if (host_out) *host_out = hosts;
  return m;
}

}  // namespace

// ── Reporting types ─────────────────────────────────────────────────────────

void SuiteCheck::record(Json ce) {
  passed = false;
  if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(std::move(ce));
}

Json SuiteCheck::to_json() const {
  return Json{{"name", name},
              {"passed", passed},
              {"cases", cases},
              {"counterexamples", counterexamples},
              {"details", details}};
}

bool SuiteReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

Json SuiteReport::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  return Json{{"selector", selector}, {"passed", all_passed()}, {"checks", cs}};
}

// ── Relation winner curves ──────────────────────────────────────────────────

RelationCurveSet build_relation_curves(const std::vector<FiniteMetricSpace>& corpus,
                                       std::vector<Rational> eps) {
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  RelationCurveSet set;
  set.eps = eps;
  set.n = static_cast<int>(corpus.size());
  auto structs = wrap_corpus(corpus, Vocabulary::MetricCorr);
  set.curves.resize(static_cast<std::size_t>(set.n) * set.n * eps.size());
  for (int i = 0; i < set.n; ++i)
    for (int j = 0; j < set.n; ++j)
      for (std::size_t e = 0; e < eps.size(); ++e) {
        auto table = RelationGameTable::build(structs[i], structs[j], eps[e], {}, {});
        set.curves[(static_cast<std::size_t>(i) * set.n + j) * eps.size() + e] =
            table.winner_curve();
      }
  return set;
}

// ── 1. Additive oracle equivalence ──────────────────────────────────────────

SuiteCheck additive_distance_oracle(const std::vector<FiniteMetricSpace>& corpus) {
  SuiteCheck check;
  check.name = "additive-distance-oracle";
  const Rational res(1, 16);
  Rational max_width(0), max_deviation(0);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i; j < corpus.size(); ++j) {
      ++check.cases;
      try {
        GameDistance gd =
            game_distance(corpus[i], corpus[j], Precision::Kind::Additive, res);
        GhResult gh = gh_bruteforce(corpus[i], corpus[j]);
        Rational width = gd.hi - gd.lo;
        Rational deviation = efg::max(monus(gd.lo, gh.distance), monus(gh.distance, gd.hi));
        max_width = efg::max(max_width, width);
        max_deviation = efg::max(max_deviation, deviation);
        if (!gd.bounded || width > res || !deviation.is_zero()) {
          Json ce = pair_brief(static_cast<int>(i), corpus[i], static_cast<int>(j), corpus[j]);
          ce["interval"] = Json::array({gd.lo.str(), gd.hi.str()});
          ce["oracle"] = gh.distance.str();
          check.record(std::move(ce));
        }
      } catch (const DomainError& e) {
        Json ce = pair_brief(static_cast<int>(i), corpus[i], static_cast<int>(j), corpus[j]);
        ce["error"] = e.what();
        check.record(std::move(ce));
      }
    }
  check.details["corpus_size"] = corpus.size();
  check.details["resolution"] = res.str();
  check.details["max_width"] = max_width.str();
  check.details["max_deviation"] = max_deviation.str();
  return check;
}

// ── 2. Multiplicative oracle equivalence ────────────────────────────────────

SuiteCheck multiplicative_distance_oracle(const std::vector<FiniteMetricSpace>& corpus) {
  SuiteCheck check;
  check.name = "multiplicative-distance-oracle";
  const Rational res(1, 16);
  Rational max_width(0), max_deviation(0);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i; j < corpus.size(); ++j) {
      if (corpus[i].size() != corpus[j].size()) continue;
      ++check.cases;
      try {
        GameDistance gd =
            game_distance(corpus[i], corpus[j], Precision::Kind::Multiplicative, res);
        LipschitzResult lip = lipschitz_bruteforce(corpus[i], corpus[j]);
        Rational width = gd.hi - gd.lo;
        Rational deviation = efg::max(monus(gd.lo, lip.factor), monus(lip.factor, gd.hi));
        max_width = efg::max(max_width, width);
        max_deviation = efg::max(max_deviation, deviation);
        if (!gd.bounded || !lip.exists || width > res || !deviation.is_zero()) {
          Json ce = pair_brief(static_cast<int>(i), corpus[i], static_cast<int>(j), corpus[j]);
          ce["interval"] = Json::array({gd.lo.str(), gd.hi.str()});
          ce["oracle"] = lip.factor.str();
          check.record(std::move(ce));
        }
      } catch (const DomainError& e) {
        Json ce = pair_brief(static_cast<int>(i), corpus[i], static_cast<int>(j), corpus[j]);
        ce["error"] = e.what();
        check.record(std::move(ce));
      }
    }
  check.details["corpus_size"] = corpus.size();
  check.details["resolution"] = res.str();
  check.details["max_width"] = max_width.str();
  check.details["max_deviation"] = max_deviation.str();
  return check;
}

// ── 3. Watershed pin ────────────────────────────────────────────────────────

SuiteCheck watershed_pins() {
  SuiteCheck check;
  check.name = "watershed-pins";
  auto two_pt = [](long d) {
    FiniteMetricSpace m;
    m.labels = {"x", "y"};
    m.dist = {{Rational(0), Rational(d)}, {Rational(d), Rational(0)}};
    return m;
  };
  Structure a = make_metric_structure(two_pt(1), Vocabulary::MetricCorr);
  Structure b = make_metric_structure(two_pt(2), Vocabulary::MetricCorr);

  ++check.cases;
  Watershed w1 = watershed_relation(a, b, Rational(2, 5));
  if (w1.ii_wins_all || w1.value != 2)
    check.record(Json{{"eps", "2/5"},
                      {"expected", 2},
                      {"ii_wins_all", w1.ii_wins_all},
                      {"value", w1.value}});

  ++check.cases;
  Watershed w2 = watershed_relation(a, b, Rational(1, 2));
  if (!w2.ii_wins_all)
    check.record(Json{{"eps", "1/2"}, {"expected", "ii-wins-all"}, {"value", w2.value}});
  return check;
}

// ── 4. Level formulas vs game winners ───────────────────────────────────────

SuiteCheck level_formulas_match_games(const std::vector<FiniteMetricSpace>& corpus) {
  SuiteCheck check;
  check.name = "level-formulas-vs-games";
  const std::vector<Rational> eps = {Rational(0), Rational(1, 4), Rational(1, 2),
                                     Rational(1)};
  const std::uint64_t max_alpha = 3;
  auto structs = wrap_corpus(corpus, Vocabulary::MetricCorr);

  for (std::size_t ia = 0; ia < structs.size(); ++ia) {
    const Structure& sa = structs[ia];
    int na = sa.size();
    std::vector<std::vector<int>> tuples = {{}};
    for (int x = 0; x < na; ++x) tuples.push_back({x});
    for (int x = 0; x < na; ++x)
      for (int y = 0; y < na; ++y) tuples.push_back({x, y});

    for (const Rational& e : eps) {
      ScottRelationBuilder builder(sa, e);
      std::vector<std::vector<FormulaPtr>> formulas(tuples.size());
      for (std::size_t t = 0; t < tuples.size(); ++t)
        for (std::uint64_t al = 0; al <= max_alpha; ++al)
          formulas[t].push_back(builder.formula(tuples[t], al));

      for (std::size_t ib = 0; ib < structs.size(); ++ib) {
        const Structure& sb = structs[ib];
        std::size_t nb = static_cast<std::size_t>(sb.size());
        try {
          auto table = RelationGameTable::build(sa, sb, e, {}, {});
          TupleTableEvaluator ev(sb);
          for (std::size_t t = 0; t < tuples.size(); ++t) {
            const auto& tup = tuples[t];
            std::size_t total = 1;
            for (std::size_t l = 0; l < tup.size(); ++l) total *= nb;
            for (std::uint64_t al = 0; al <= max_alpha; ++al) {
              const auto& tab = ev.table(formulas[t][al]);
              for (std::size_t p = 0; p < total; ++p) {
                PairMask mask = 0;
                std::size_t q = p;
                for (std::size_t l = 0; l < tup.size(); ++l) {
                  mask |= PairMask(1) << table.bit(tup[l], static_cast<int>(q % nb));
                  q /= nb;
                }
                bool from_formula = tab[p % tab.size()] != 0;
                bool from_game = table.ii_wins(mask, al);
                ++check.cases;
                if (from_formula != from_game) {
                  Json ce = pair_brief(static_cast<int>(ia), corpus[ia],
                                       static_cast<int>(ib), corpus[ib]);
                  ce["eps"] = e.str();
                  ce["alpha"] = al;
                  ce["tuple"] = tup;
                  ce["target_assignment"] = p;
                  ce["formula"] = from_formula;
                  ce["game"] = from_game;
                  check.record(std::move(ce));
                }
              }
            }
          }
        } catch (const DomainError& err) {
          Json ce = pair_brief(static_cast<int>(ia), corpus[ia], static_cast<int>(ib),
                               corpus[ib]);
          ce["eps"] = e.str();
          ce["error"] = err.what();
          check.record(std::move(ce));
        }
      }
    }
  }
  check.details["corpus_size"] = corpus.size();
  check.details["slacks"] = Json::array({"0", "1/4", "1/2", "1"});
  check.details["max_clock"] = max_alpha;
  check.details["max_tuple_length"] = 2;
  return check;
}

// ── 5. Symmetry and weak transitivity ───────────────────────────────────────

namespace {

struct FnGame {
  int a = 0, b = 0;
  Rational base;
  Rational factor;
  unsigned k = 1;
};

std::vector<bool> fn_curve(const std::vector<Structure>& iso, const FnGame& g) {
  FunctionGameConfig cfg;
  cfg.a = iso[g.a];
  cfg.b = iso[g.b];
  cfg.base_factor = g.base;
  cfg.menus = {{MenuEntry{g.factor, g.k}}};
  return FunctionGameTable::build(cfg).winner_curve();
}

Json fn_brief(const FnGame& g, const std::vector<FiniteMetricSpace>& corpus) {
  return Json{{"a_index", g.a},          {"b_index", g.b},
              {"a", space_brief(corpus[g.a])}, {"b", space_brief(corpus[g.b])},
              {"base", g.base.str()},    {"factor", g.factor.str()},
              {"k", g.k}};
}

// II winning the first game must imply II winning the second at every clock.
bool curve_implies(const std::vector<bool>& c1, const std::vector<bool>& c2,
                   std::uint64_t* bad_clock) {
  std::uint64_t top = std::max(c1.size(), c2.size());
  for (std::uint64_t c = 0; c < top; ++c)
    if (curve_wins(c1, c) && !curve_wins(c2, c)) {
      if (bad_clock) *bad_clock = c;
      return false;
    }
  return true;
}

}  // namespace

SuiteCheck game_symmetry_transitivity(const std::vector<FiniteMetricSpace>& corpus,
                                      const RelationCurveSet* curves) {
  SuiteCheck check;
  check.name = "game-symmetry-transitivity";
  const std::vector<Rational> base_grid = {Rational(0), Rational(1, 4), Rational(1, 2),
                                           Rational(1)};
  std::vector<Rational> all_eps = base_grid;
  for (const Rational& x : base_grid)
    for (const Rational& y : base_grid) all_eps.push_back(x + y);

  RelationCurveSet own;
  if (!curves) {
    own = build_relation_curves(corpus, all_eps);
    curves = &own;
  }
  const RelationCurveSet& cs = *curves;
  auto eps_index = [&](const Rational& e) {
    return static_cast<std::size_t>(
        std::lower_bound(cs.eps.begin(), cs.eps.end(), e) - cs.eps.begin());
  };

  int n = static_cast<int>(corpus.size());

  // Relation-game symmetry, exhaustive: identical winner curves both ways.
  long long sym_cases = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (std::size_t e = 0; e < cs.eps.size(); ++e) {
        ++sym_cases;
        std::uint64_t top = std::max(cs.stabilization(i, j, e), cs.stabilization(j, i, e)) + 1;
        for (std::uint64_t c = 0; c <= top; ++c)
          if (cs.wins(i, j, e, c) != cs.wins(j, i, e, c)) {
            Json ce = pair_brief(i, corpus[i], j, corpus[j]);
            ce["eps"] = cs.eps[e].str();
            ce["clock"] = c;
            ce["forward"] = cs.wins(i, j, e, c);
            ce["backward"] = cs.wins(j, i, e, c);
            check.record(std::move(ce));
            break;
          }
      }

  // Relation-game weak transitivity, exhaustive over slack sums.
  long long tr_cases = 0;
  for (int i = 0; i < n && check.counterexamples.size() < SuiteCheck::kMaxCounterexamples;
       ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (const Rational& e1 : base_grid)
          for (const Rational& e2 : base_grid) {
            std::size_t a = eps_index(e1), b = eps_index(e2), c = eps_index(e1 + e2);
            ++tr_cases;
            std::uint64_t top = std::max({cs.stabilization(i, j, a),
                                          cs.stabilization(j, k, b),
                                          cs.stabilization(i, k, c)}) +
                                1;
            for (std::uint64_t t = 0; t <= top; ++t)
              if (cs.wins(i, j, a, t) && cs.wins(j, k, b, t) && !cs.wins(i, k, c, t)) {
                Json ce{{"i", i},       {"j", j},          {"k", k},
                        {"eps1", e1.str()}, {"eps2", e2.str()}, {"clock", t}};
                check.record(std::move(ce));
                break;
              }
          }

  // Function games, sampled: mirrored games with inflated factors and
  // correspondingly blunted sharpness, and composed games whose middle
  // sharpness covers the first factor.
  auto iso = wrap_corpus(corpus, Vocabulary::MetricIso);
  auto groups = size_groups(corpus);
  std::vector<int> sizes_pool;
  for (std::size_t s = 1; s < groups.size(); ++s) {
    if (groups[s].empty()) continue;
    int weight = (s == 2 || s == 3) ? 3 : 1;
    for (int w = 0; w < weight; ++w) sizes_pool.push_back(static_cast<int>(s));
  }
  const std::vector<Rational> bases = {Rational(1), Rational(17, 16), Rational(9, 8),
                                       Rational(5, 4)};
  const std::vector<Rational> bumps = {Rational(9, 8), Rational(5, 4), Rational(3, 2),
                                       Rational(2)};
  const Rational mirror_bump(9, 8);
  std::mt19937_64 rng(0x5eed5u);

  long long fn_samples = 0;
  const int n_sym = 5500, n_comp = 5500, n_deep = 1000;

  for (int it = 0; it < n_sym; ++it) {
    int sz = pick(rng, sizes_pool);
    FnGame fwd;
    fwd.a = pick(rng, groups[sz]);
    fwd.b = pick(rng, groups[sz]);
    fwd.base = pick(rng, bases);
    fwd.factor = fwd.base * pick(rng, bumps);
    Rational mirrored_factor = fwd.factor * mirror_bump;
    fwd.k = 1 + static_cast<unsigned>(draw(rng, 6));
    while (Rational(static_cast<long>(fwd.k)) < mirrored_factor) ++fwd.k;
    FnGame back = fwd;
    std::swap(back.a, back.b);
    back.factor = mirrored_factor;
    back.k = to_uint((Rational(static_cast<long>(fwd.k)) / mirrored_factor).floor());
    ++fn_samples;
    ++check.cases;
    std::uint64_t bad = 0;
    if (!curve_implies(fn_curve(iso, fwd), fn_curve(iso, back), &bad)) {
      Json ce = fn_brief(fwd, corpus);
      ce["mirror_factor"] = back.factor.str();
      ce["mirror_k"] = back.k;
      ce["clock"] = bad;
      check.record(std::move(ce));
    }
  }

  for (int it = 0; it < n_comp; ++it) {
    int sz = pick(rng, sizes_pool);
    FnGame g1, g2, comp;
    g1.a = pick(rng, groups[sz]);
    g1.b = pick(rng, groups[sz]);
    g2.a = g1.b;
    g2.b = pick(rng, groups[sz]);
    g1.base = pick(rng, bases);
    g2.base = pick(rng, bases);
    g1.factor = g1.base * pick(rng, bumps);
    g2.factor = g2.base * pick(rng, bumps);
    g1.k = 1 + static_cast<unsigned>(draw(rng, 4));
    g2.k = to_uint((g1.factor * Rational(static_cast<long>(g1.k))).ceil());
    comp.a = g1.a;
    comp.b = g2.b;
    comp.base = g1.base * g2.base;
    comp.factor = g1.factor * g2.factor;
    comp.k = g1.k;
    ++fn_samples;
    ++check.cases;
    auto c1 = fn_curve(iso, g1);
    auto c2 = fn_curve(iso, g2);
    auto cc = fn_curve(iso, comp);
    std::uint64_t top = std::max({c1.size(), c2.size(), cc.size()});
    for (std::uint64_t c = 0; c <= top; ++c)
      if (curve_wins(c1, c) && curve_wins(c2, c) && !curve_wins(cc, c)) {
        Json ce{{"first", fn_brief(g1, corpus)},
                {"second", fn_brief(g2, corpus)},
                {"composed", fn_brief(comp, corpus)},
                {"clock", c}};
        check.record(std::move(ce));
        break;
      }
  }

  // Two-entry menus through the full solver: mirror each entry.
  for (int it = 0; it < n_deep; ++it) {
    int sz = 1 + static_cast<int>(draw(rng, 3));  // 1..3 points
    if (groups[sz].empty()) sz = 2;
    FunctionGameConfig fwd;
    fwd.a = iso[pick(rng, groups[sz])];
    fwd.b = iso[pick(rng, groups[sz])];
    fwd.base_factor = pick(rng, bases);
    fwd.clock = 1 + draw(rng, 2);
    std::vector<MenuEntry> row, mirrored;
    for (int m = 0; m < 2; ++m) {
      MenuEntry entry;
      entry.factor = fwd.base_factor * pick(rng, bumps);
      Rational mf = entry.factor * mirror_bump;
      entry.k = 1 + static_cast<unsigned>(draw(rng, 6));
      while (Rational(static_cast<long>(entry.k)) < mf) ++entry.k;
      row.push_back(entry);
      mirrored.push_back(
          MenuEntry{mf, to_uint((Rational(static_cast<long>(entry.k)) / mf).floor())});
    }
    fwd.menus = {row};
    FunctionGameConfig back = fwd;
    std::swap(back.a, back.b);
    back.menus = {mirrored};
    ++fn_samples;
    ++check.cases;
    bool fwd_ii = solve_function_game(fwd).winner == Player::II;
    if (fwd_ii && solve_function_game(back).winner != Player::II) {
      Json ce{{"clock", fwd.clock}, {"base", fwd.base_factor.str()}};
      Json rows = Json::array();
      for (const auto& entry : row)
        rows.push_back(Json{{"factor", entry.factor.str()}, {"k", entry.k}});
      ce["menu"] = rows;
      check.record(std::move(ce));
    }
  }

  check.details["relation_symmetry_cases"] = sym_cases;
  check.details["relation_transitivity_cases"] = tr_cases;
  check.details["function_samples"] = fn_samples;
  return check;
}

// ── 6. Monotonicity ─────────────────────────────────────────────────────────

SuiteCheck game_monotonicity(const std::vector<FiniteMetricSpace>& corpus,
                             const RelationCurveSet* curves) {
  SuiteCheck check;
  check.name = "game-monotonicity";
  const std::vector<Rational> base_grid = {Rational(0), Rational(1, 4), Rational(1, 2),
                                           Rational(1)};
  std::vector<Rational> all_eps = base_grid;
  for (const Rational& x : base_grid)
    for (const Rational& y : base_grid) all_eps.push_back(x + y);

  RelationCurveSet own;
  if (!curves) {
    own = build_relation_curves(corpus, all_eps);
    curves = &own;
  }
  const RelationCurveSet& cs = *curves;
  int n = static_cast<int>(corpus.size());

  // Clock monotonicity: each winner curve never recovers after a loss.
  long long clock_cases = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t e = 0; e < cs.eps.size(); ++e) {
        ++clock_cases;
        std::uint64_t stab = cs.stabilization(i, j, e);
        for (std::uint64_t c = 0; c < stab; ++c)
          if (!cs.wins(i, j, e, c) && cs.wins(i, j, e, c + 1)) {
            Json ce = pair_brief(i, corpus[i], j, corpus[j]);
            ce["eps"] = cs.eps[e].str();
            ce["clock"] = c;
            check.record(std::move(ce));
            break;
          }
      }

  // Slack monotonicity: more slack never hurts II at any clock.
  long long slack_cases = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t e1 = 0; e1 < cs.eps.size(); ++e1)
        for (std::size_t e2 = e1 + 1; e2 < cs.eps.size(); ++e2) {
          ++slack_cases;
          std::uint64_t top =
              std::max(cs.stabilization(i, j, e1), cs.stabilization(i, j, e2)) + 1;
          for (std::uint64_t c = 0; c <= top; ++c)
            if (cs.wins(i, j, e1, c) && !cs.wins(i, j, e2, c)) {
              Json ce = pair_brief(i, corpus[i], j, corpus[j]);
              ce["eps_small"] = cs.eps[e1].str();
              ce["eps_large"] = cs.eps[e2].str();
              ce["clock"] = c;
              check.record(std::move(ce));
              break;
            }
        }

  // Function games, sampled: winner curves are monotone in the clock, and
  // relaxing the menu (larger factor, smaller sharpness) only helps II.
  auto iso = wrap_corpus(corpus, Vocabulary::MetricIso);
  auto groups = size_groups(corpus);
  std::vector<int> sizes_pool;
  for (std::size_t s = 1; s < groups.size(); ++s)
    if (!groups[s].empty()) sizes_pool.push_back(static_cast<int>(s));
  const std::vector<Rational> bases = {Rational(1), Rational(9, 8)};
  const std::vector<Rational> bumps = {Rational(9, 8), Rational(5, 4), Rational(3, 2),
                                       Rational(2)};
  const std::vector<Rational> relaxes = {Rational(1), Rational(9, 8), Rational(3, 2)};
  std::mt19937_64 rng(0xc10c5u);
  long long fn_cases = 0;
  for (int it = 0; it < 1500; ++it) {
    int sz = pick(rng, sizes_pool);
    FnGame g;
    g.a = pick(rng, groups[sz]);
    g.b = pick(rng, groups[sz]);
    g.base = pick(rng, bases);
    g.factor = g.base * pick(rng, bumps);
    g.k = 1 + static_cast<unsigned>(draw(rng, 6));
    FnGame relaxed = g;
    relaxed.factor = g.factor * pick(rng, relaxes);
    relaxed.k = 1 + static_cast<unsigned>(draw(rng, g.k));  // 1..k
    ++fn_cases;
    ++check.cases;
    auto c1 = fn_curve(iso, g);
    bool ok = true;
    for (std::size_t c = 0; c + 1 < c1.size(); ++c)
      if (!c1[c] && c1[c + 1]) ok = false;
    std::uint64_t bad = 0;
    if (!curve_implies(c1, fn_curve(iso, relaxed), &bad)) ok = false;
    if (!ok) {
      Json ce = fn_brief(g, corpus);
      ce["relaxed_factor"] = relaxed.factor.str();
      ce["relaxed_k"] = relaxed.k;
      check.record(std::move(ce));
    }
  }

  check.cases += clock_cases + slack_cases;
  check.details["relation_clock_cases"] = clock_cases;
  check.details["relation_slack_cases"] = slack_cases;
  check.details["function_samples"] = fn_cases;
  return check;
}

// ── 7. Approximation algebra ────────────────────────────────────────────────

namespace {

// Satisfaction of a metric atom on every pair of points, as a bit string.
std::vector<bool> atom_truth(const Structure& s, const AtomicFormula& at) {
  int n = s.size();
  std::vector<bool> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  Assignment asg;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      asg[at.u] = x;
      asg[at.v] = y;
      out.push_back(eval_atomic(s, at, asg));
    }
  return out;
}

// Satisfaction of a norm atom over all assignments of its term variables.
std::vector<bool> norm_atom_truth(const Structure& s, const AtomicFormula& at) {
  int n = s.size();
  std::vector<std::string> vars;
  for (const auto& [name, c] : at.term) vars.push_back(name);
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= static_cast<std::size_t>(n);
  std::vector<bool> out;
  out.reserve(total);
  Assignment asg;
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t q = p;
    for (const auto& v : vars) {
      asg[v] = static_cast<int>(q % n);
      q /= n;
    }
    out.push_back(eval_atomic(s, at, asg));
  }
  return out;
}

std::vector<bool> truth_table(const Structure& s, const AtomicFormula& at) {
  return at.is_metric_atom() ? atom_truth(s, at) : norm_atom_truth(s, at);
}

// Small random compound formula over the given atoms.
FormulaPtr random_compound(std::mt19937_64& g, const std::vector<AtomicFormula>& atoms,
                           int depth) {
  if (depth == 0 || draw(g, 4) == 0) return make_atom(atoms[draw(g, atoms.size())]);
  switch (draw(g, 4)) {
    case 0: {
      std::vector<FormulaPtr> kids;
      for (std::size_t i = 0, n = 1 + draw(g, 3); i < n; ++i)
        kids.push_back(random_compound(g, atoms, depth - 1));
      return make_and(std::move(kids));
    }
    case 1: {
      std::vector<FormulaPtr> kids;
      for (std::size_t i = 0, n = 1 + draw(g, 3); i < n; ++i)
        kids.push_back(random_compound(g, atoms, depth - 1));
      return make_or(std::move(kids));
    }
    case 2:
      return make_exists("w" + std::to_string(depth), random_compound(g, atoms, depth - 1));
    default:
      return make_forall("w" + std::to_string(depth), random_compound(g, atoms, depth - 1));
  }
}

}  // namespace

SuiteCheck approximation_algebra(const std::vector<FiniteMetricSpace>& corpus) {
  SuiteCheck check;
  check.name = "approximation-algebra";
  std::mt19937_64 rng(0xa1b2c3u);
  long long nontrivial_witness = 0;

  const std::vector<Rational> add_eps = {Rational(1, 8), Rational(1, 4), Rational(1, 2),
                                         Rational(3, 4), Rational(1),   Rational(3, 2)};
  const std::vector<Rational> mult_s = {Rational(17, 16), Rational(9, 8), Rational(5, 4),
                                        Rational(3, 2),   Rational(2)};

  auto corr = wrap_corpus(corpus, Vocabulary::MetricCorr);
  auto iso = wrap_corpus(corpus, Vocabulary::MetricIso);

  auto check_semantic_equal = [&](const Structure& s, const AtomicFormula& x,
                                  const AtomicFormula& y, const char* law,
                                  const Json& inst) {
    if (truth_table(s, x) != truth_table(s, y)) {
      Json ce = inst;
      ce["law"] = law;
      ce["lhs"] = atom_str(x);
      ce["rhs"] = atom_str(y);
      check.record(ce);
    }
  };

  // Metric instances, additive and multiplicative.
  for (int it = 0; it < 900; ++it) {
    bool additive = it < 500;
    const auto& pool = additive ? corr : iso;
    const Structure& s = pool[draw(rng, pool.size())];
    unsigned k = 1 + static_cast<unsigned>(draw(rng, 5));
    // threshold grid: quarters up to a bit past the diameter, >= 1/k when
    // sharpness matters, > 0 under multiplicative semantics
    Rational r(static_cast<long>(draw(rng, 13)), 4);
    bool upper = draw(rng, 2) == 0;
    if (!additive && r.is_zero()) r = Rational(1, 4);
    AtomicFormula at = upper ? AtomicFormula::dist_leq(r, "u", "v")
                             : AtomicFormula::dist_geq(r, "u", "v");
    Precision p1 = additive ? Precision::additive(pick(rng, add_eps))
                            : Precision::multiplicative(pick(rng, mult_s));
    Precision p2 = additive ? Precision::additive(pick(rng, add_eps))
                            : Precision::multiplicative(pick(rng, mult_s));
    Json inst{{"semantics", additive ? "additive" : "multiplicative"},
              {"atom", atom_str(at)},
              {"p1", p1.value.str()},
              {"p2", p2.value.str()}};
    ++check.cases;

    // (1) slack composition
    check_semantic_equal(s, appr(appr(at, p1), p2), appr(at, p1.compose(p2)),
                         "slack-composition", inst);

    // (2) dual swap involution on a compound formula
    std::vector<AtomicFormula> atoms = {at, appr(at, p1)};
    FormulaPtr f = random_compound(rng, atoms, 2);
    if (!equal_formulas(weak_neg(weak_neg(f)), f)) {
      Json ce = inst;
      ce["law"] = "dual-involution";
      ce["formula"] = formula_to_string(f);
      check.record(ce);
    }

    // (3) dual witness: an atom fails at an assignment iff some positive
    // slack makes the dual of its approximation true there
    {
      int x = static_cast<int>(draw(rng, s.size()));
      int y = static_cast<int>(draw(rng, s.size()));
      // the D-side needs a positive threshold for the witness law
      AtomicFormula watom = at;
      if (!upper && r.is_zero()) watom = AtomicFormula::dist_geq(Rational(1, 4), "u", "v");
      Assignment asg{{"u", x}, {"v", y}};
      bool holds = eval_atomic(s, watom, asg);
      const Rational& d = s.metric().d(x, y);
      const Rational& rr = *watom.threshold;
      std::vector<Rational> grid;
      for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b) {
          const Rational& dd = s.metric().d(a, b);
          if (additive) {
            if (watom.kind == AtomicFormula::Kind::DistLeq && dd > rr)
              grid.push_back((dd - rr) / Rational(2));
            if (watom.kind == AtomicFormula::Kind::DistGeq && dd < rr)
              grid.push_back((rr - dd) / Rational(2));
          } else {
            if (watom.kind == AtomicFormula::Kind::DistLeq && dd > rr && rr.is_positive())
              grid.push_back(dd / rr);
            if (watom.kind == AtomicFormula::Kind::DistGeq && dd < rr && dd.is_positive())
              grid.push_back(rr / dd);
          }
        }
      // at distance zero a lower-bound atom is refuted by every factor, so a
      // constant candidate keeps the search complete there
      if (!additive) grid.push_back(Rational(2));
      bool witnessed = false;
      for (const Rational& e : grid) {
        Precision pe = additive ? Precision::additive(e) : Precision::multiplicative(e);
        if (eval_atomic(s, weak_neg(appr(watom, pe)), asg)) {
          witnessed = true;
          break;
        }
      }
      if (witnessed) ++nontrivial_witness;
      if (holds == witnessed) {  // must be exact complements
        Json ce = inst;
        ce["law"] = "dual-witness";
        ce["atom"] = atom_str(watom);
        ce["distance"] = d.str();
        ce["holds"] = holds;
        ce["witnessed"] = witnessed;
        check.record(ce);
      }
    }

    // (4) approximating the dual peels one slack layer; valid away from the
    // threshold truncation, so the D-side draw keeps r >= 2 eps
    {
      Rational e = additive ? pick(rng, add_eps) : pick(rng, mult_s);
      Rational dl = additive ? pick(rng, add_eps) : pick(rng, mult_s);
      if (additive && dl > e) std::swap(e, dl);
      if (!additive && dl > e) std::swap(e, dl);
      AtomicFormula source = at;
      if (additive && source.kind == AtomicFormula::Kind::DistGeq &&
          *source.threshold < Rational(2) * e)
        source = AtomicFormula::dist_geq(Rational(2) * e + Rational(1, 4), "u", "v");
      Precision pe = additive ? Precision::additive(e) : Precision::multiplicative(e);
      Precision pd = additive ? Precision::additive(dl) : Precision::multiplicative(dl);
      Precision rest = additive ? Precision::additive(e - dl)
                                : Precision::multiplicative(e / dl);
      check_semantic_equal(s, appr(weak_neg(appr(source, pe)), pd),
                           weak_neg(appr(source, rest)), "dual-approximation", inst);
    }

    // (5) sharpness closure under approximation (multiplicative semantics)
    if (!additive) {
      Rational rr = r;
      if (rr < Rational(1, static_cast<long>(k))) rr = Rational(1, static_cast<long>(k));
      AtomicFormula good = upper ? AtomicFormula::dist_leq(rr, "u", "v")
                                 : AtomicFormula::dist_geq(rr, "u", "v");
      if (is_good(good, k, Vocabulary::MetricIso)) {
        Rational s_factor = pick(rng, mult_s);
        unsigned k2 = to_uint((Rational(static_cast<long>(k)) * s_factor).ceil());
        if (!is_good(appr(good, Precision::multiplicative(s_factor)), k2,
                     Vocabulary::MetricIso)) {
          Json ce = inst;
          ce["law"] = "sharpness-closure";
          ce["k"] = k;
          ce["factor"] = s_factor.str();
          check.record(ce);
        }
      }
    }
  }

  // Normed instances: whole-space atoms under coefficient scaling, and
  // unit-ball atoms under capped additive shifts.
  std::vector<NormKind> kinds = {NormKind::Linf, NormKind::L1, NormKind::L2};
  for (int it = 0; it < 200; ++it) {
    bool ball = it >= 100;
    NormKind nk = kinds[draw(rng, ball ? 2 : kinds.size())];  // ball laws: linear norms
    NormedPointConfig cfg;
    cfg.dim = 2;
    cfg.norm = nk;
    cfg.unit_ball_only = ball;
    for (int p = 0; p < 3; ++p) {
      cfg.labels.push_back("b" + std::to_string(p + 1));
      std::vector<Rational> pt;
      for (int c = 0; c < 2; ++c)
        pt.push_back(Rational(static_cast<long>(draw(rng, 9)) - 4,
                              ball ? 8 : 4));  // ball points stay small
      cfg.points.push_back(pt);
    }
    Structure s = make_normed_structure(cfg, ball ? Vocabulary::BanachBall
                                                  : Vocabulary::Banach);
    std::vector<std::pair<std::string, Rational>> term;
    int vars = 1 + static_cast<int>(draw(rng, 2));
    Rational abs_sum(0);
    for (int v = 0; v < vars; ++v) {
      Rational c(static_cast<long>(draw(rng, 7)) - 3);
      if (c.is_zero()) c = Rational(1);
      term.emplace_back("t" + std::to_string(v), c);
      abs_sum += efg::abs(c);
    }
    if (ball)  // unit-ball terms carry convex coefficients
      for (auto& [name, c] : term) c /= abs_sum;
    bool upper = draw(rng, 2) == 0;
    AtomicFormula at;
    Rational r;
    if (ball) {
      r = Rational(static_cast<long>(draw(rng, 15)), 16);  // 0 .. 7/8
      at = upper ? AtomicFormula::norm_leq(term, r) : AtomicFormula::norm_geq(term, r);
    } else {
      at = upper ? AtomicFormula::norm_leq(term) : AtomicFormula::norm_geq(term);
    }
    Precision p1 = ball ? Precision::additive(pick(rng, add_eps))
                        : Precision::multiplicative(pick(rng, mult_s));
    Precision p2 = ball ? Precision::additive(pick(rng, add_eps))
                        : Precision::multiplicative(pick(rng, mult_s));
    Json inst{{"semantics", ball ? "ball" : "normed"},
              {"atom", atom_str(at)},
              {"p1", p1.value.str()},
              {"p2", p2.value.str()}};
    ++check.cases;

    check_semantic_equal(s, appr(appr(at, p1), p2), appr(at, p1.compose(p2)),
                         "slack-composition", inst);

    std::vector<AtomicFormula> atoms = {at};
    FormulaPtr f = random_compound(rng, atoms, 2);
    if (!equal_formulas(weak_neg(weak_neg(f)), f)) {
      Json ce = inst;
      ce["law"] = "dual-involution";
      check.record(ce);
    }

    // dual approximation away from the truncation cap
    {
      Rational e = ball ? Rational(1, 8) : pick(rng, mult_s);
      Rational dl = ball ? Rational(1, 16) : pick(rng, mult_s);
      if (!ball && dl > e) std::swap(e, dl);
      AtomicFormula source = at;
      if (ball) {
        // keep both shift directions inside [0, 1]
        Rational rr = *source.threshold;
        if (upper && rr + e > Rational(1)) rr = Rational(1) - e;
        if (!upper && rr < e) rr = e;
        source = upper ? AtomicFormula::norm_leq(term, rr)
                       : AtomicFormula::norm_geq(term, rr);
      }
      Precision pe = ball ? Precision::additive(e) : Precision::multiplicative(e);
      Precision pd = ball ? Precision::additive(dl) : Precision::multiplicative(dl);
      Precision rest =
          ball ? Precision::additive(e - dl) : Precision::multiplicative(e / dl);
      check_semantic_equal(s, appr(weak_neg(appr(source, pe)), pd),
                           weak_neg(appr(source, rest)), "dual-approximation", inst);
    }

    // dual witness for exactly-valued norms
    if (nk != NormKind::L2) {
      Assignment asg;
      std::vector<Rational> vec(2, Rational(0));
      for (const auto& [name, c] : term) {
        int idx = static_cast<int>(draw(rng, 3));
        asg[name] = idx;
        for (int d = 0; d < 2; ++d) vec[d] += c * cfg.points[idx][d];
      }
      Rational v = cfg.norm_linear(vec);
      bool holds = eval_atomic(s, at, asg);
      bool witnessed = false;
      if (ball) {
        const Rational& rr = *at.threshold;
        if (upper ? v > rr : v < rr) {
          Rational e = upper ? efg::min(v, Rational(1)) - rr : rr - v;
          if (e.is_positive() &&
              eval_atomic(s, weak_neg(appr(at, Precision::additive(e))), asg))
            witnessed = true;
        }
      } else {
        if (upper && v > Rational(1)) {
          witnessed = eval_atomic(s, weak_neg(appr(at, Precision::multiplicative(v))), asg);
        } else if (!upper && v < Rational(1) && v.is_positive()) {
          witnessed = eval_atomic(
              s, weak_neg(appr(at, Precision::multiplicative(v.reciprocal()))), asg);
        } else if (!upper && v.is_zero()) {
          witnessed = eval_atomic(
              s, weak_neg(appr(at, Precision::multiplicative(Rational(2)))), asg);
        }
      }
      if (witnessed) ++nontrivial_witness;
      if (holds == witnessed) {
        Json ce = inst;
        ce["law"] = "dual-witness";
        ce["norm_value"] = v.str();
        check.record(ce);
      }
    }
  }

  check.details["witnessed_failures"] = nontrivial_witness;
  return check;
}

// ── 8. Gluing construction ──────────────────────────────────────────────────

SuiteCheck gluing_construction(const std::vector<FiniteMetricSpace>& corpus) {
  SuiteCheck check;
  check.name = "gluing-construction";
  long long correspondences = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i; j < corpus.size(); ++j) {
      const FiniteMetricSpace& a = corpus[i];
      const FiniteMetricSpace& b = corpus[j];
      try {
        GhResult gh = gh_bruteforce(a, b);
        Rational cap = Rational(2) * gh.distance;
        auto minimal = correspondences_within(a, b, cap);
        for (const auto& r : minimal) {
          ++correspondences;
          ++check.cases;
          Json base = pair_brief(static_cast<int>(i), a, static_cast<int>(j), b);
          base["gap"] = gh.distance.str();
          try {
            GlueResult glue = glue_spaces(a, b, r, gh.distance);
            bool ok = true;
            std::string why;
            for (int x = 0; x < a.size() && ok; ++x)
              for (int y = 0; y < a.size() && ok; ++y)
                if (glue.space.d(glue.embed_a[x], glue.embed_a[y]) != a.d(x, y)) {
                  ok = false;
                  why = "left embedding distorts";
                }
            for (int x = 0; x < b.size() && ok; ++x)
              for (int y = 0; y < b.size() && ok; ++y)
                if (glue.space.d(glue.embed_b[x], glue.embed_b[y]) != b.d(x, y)) {
                  ok = false;
                  why = "right embedding distorts";
                }
            for (const auto& [p, q] : r) {
              if (!ok) break;
              if (glue.space.d(glue.embed_a[p], glue.embed_b[q]) > gh.distance) {
                ok = false;
                why = "linked pair separated beyond the gap";
              }
            }
            if (ok) {
              Rational h = hausdorff_distance(glue.space, glue.embed_a, glue.embed_b);
              if (h > gh.distance) {
                ok = false;
                why = "image Hausdorff distance exceeds the gap";
              }
            }
            if (!ok) {
              base["violation"] = why;
              check.record(std::move(base));
            }
          } catch (const DomainError& e) {
            base["error"] = e.what();
            check.record(std::move(base));
          }
        }
      } catch (const DomainError& e) {
        Json ce = pair_brief(static_cast<int>(i), a, static_cast<int>(j), b);
        ce["error"] = e.what();
        check.record(std::move(ce));
      }
    }
  check.details["corpus_size"] = corpus.size();
  check.details["minimal_correspondences"] = correspondences;
  return check;
}

// ── 9. Perturbation margins ─────────────────────────────────────────────────

SuiteCheck perturbation_robustness() {
  SuiteCheck check;
  check.name = "perturbation-robustness";
  std::mt19937_64 rng(0x9e27bu);
  const std::vector<Rational> factors = {Rational(17, 16), Rational(9, 8), Rational(5, 4),
                                         Rational(3, 2), Rational(2)};
  long long moved = 0;

  // Metric side: margins (s-1)/2k for upper atoms, (1-1/s)/2k for lower
  // atoms, the minimum for compounds of both.
  for (int it = 0; it < 700; ++it) {
    int n = 3 + static_cast<int>(draw(rng, 3));
    FiniteMetricSpace base = random_metric_space(rng, n);
    FiniteMetricSpace m = attach_satellites(base, rng, 1 + static_cast<int>(draw(rng, 2)),
                                            nullptr);
    validate_metric(m);
    Structure s = make_metric_structure(m, Vocabulary::MetricIso);
    Rational factor = pick(rng, factors);
    unsigned k = 1 + static_cast<unsigned>(draw(rng, 5));
    Rational delta_up = (factor - Rational(1)) / Rational(2 * static_cast<long>(k));
    Rational delta_down =
        (Rational(1) - factor.reciprocal()) / Rational(2 * static_cast<long>(k));

    int mode = static_cast<int>(draw(rng, 3));  // 0 upper, 1 lower, 2 compound
    Rational delta = mode == 0 ? delta_up : mode == 1 ? delta_down
                                                      : efg::min(delta_up, delta_down);
    // threshold >= 1/k keeps the atom k-sharp
    Rational r(static_cast<long>(1 + draw(rng, 12)), 4);
    if (r < Rational(1, static_cast<long>(k))) r = Rational(1, static_cast<long>(k));

    auto near = [&](int x) {
      std::vector<int> cands;
      for (int y = 0; y < m.size(); ++y)
        if (m.d(x, y) < delta) cands.push_back(y);
      return cands[draw(rng, cands.size())];
    };
    int a0 = static_cast<int>(draw(rng, m.size()));
    int a1 = static_cast<int>(draw(rng, m.size()));
    int b0 = near(a0), b1 = near(a1);
    if (b0 != a0 || b1 != a1) ++moved;

    Assignment at_a{{"u", a0}, {"v", a1}};
    Assignment at_b{{"u", b0}, {"v", b1}};
    Precision ps = Precision::multiplicative(factor);
    bool ok = true;
    std::string lhs;
    if (mode == 2) {
      AtomicFormula up = AtomicFormula::dist_leq(r, "u", "v");
      AtomicFormula down = AtomicFormula::dist_geq(r, "u", "v");
      FormulaPtr f = make_or({make_atom(up), make_and({make_atom(down), make_atom(up)})});
      if (eval_formula(s, f, at_a) && !eval_formula(s, appr_formula(f, ps), at_b)) {
        ok = false;
        lhs = formula_to_string(f);
      }
    } else {
      AtomicFormula at = mode == 0 ? AtomicFormula::dist_leq(r, "u", "v")
                                   : AtomicFormula::dist_geq(r, "u", "v");
      if (eval_atomic(s, at, at_a) && !eval_atomic(s, appr(at, ps), at_b)) {
        ok = false;
        lhs = atom_str(at);
      }
    }
    ++check.cases;
    if (!ok) {
      check.record(Json{{"space", space_brief(m)},
                        {"factor", factor.str()},
                        {"k", k},
                        {"delta", delta.str()},
                        {"formula", lhs},
                        {"a", Json::array({a0, a1})},
                        {"b", Json::array({b0, b1})}});
    }
  }

  // Normed side: margins (s-1)/k^2 and (1-1/s)/k^2 with coefficient bound k.
  std::vector<NormKind> kinds = {NormKind::Linf, NormKind::L1, NormKind::L2};
  for (int it = 0; it < 400; ++it) {
    NormKind nk = kinds[draw(rng, kinds.size())];
    Rational factor = pick(rng, factors);
    unsigned k = 1 + static_cast<unsigned>(draw(rng, 5));
    long kk = static_cast<long>(k) * static_cast<long>(k);
    bool upper = draw(rng, 2) == 0;
    Rational delta = upper ? (factor - Rational(1)) / Rational(kk)
                           : (Rational(1) - factor.reciprocal()) / Rational(kk);

    NormedPointConfig cfg;
    cfg.dim = 2;
    cfg.norm = nk;
    std::vector<std::pair<std::string, Rational>> term;
    Assignment at_a, at_b;
    for (unsigned v = 0; v < k; ++v) {
      std::vector<Rational> pt, off;
      for (int c = 0; c < 2; ++c) {
        pt.push_back(Rational(static_cast<long>(draw(rng, 17)) - 8, 4));
        off.push_back(delta * Rational(static_cast<long>(draw(rng, 7)) - 3, 8));
      }
      std::vector<Rational> moved_pt = pt;
      for (int c = 0; c < 2; ++c) moved_pt[c] += off[c];
      std::string la = "x" + std::to_string(v + 1), lb = "y" + std::to_string(v + 1);
      cfg.labels.push_back(la);
      cfg.points.push_back(pt);
      cfg.labels.push_back(lb);
      cfg.points.push_back(moved_pt);
      at_a["t" + std::to_string(v)] = static_cast<int>(2 * v);
      at_b["t" + std::to_string(v)] = static_cast<int>(2 * v + 1);
      Rational c(static_cast<long>(draw(rng, 2 * k + 1)) - static_cast<long>(k));
      term.emplace_back("t" + std::to_string(v), c);
      bool different = false;
      for (int c2 = 0; c2 < 2; ++c2)
        if (!off[c2].is_zero()) different = true;
      if (different) ++moved;
    }
    Structure s = make_normed_structure(cfg, Vocabulary::Banach);
    AtomicFormula at = upper ? AtomicFormula::norm_leq(term) : AtomicFormula::norm_geq(term);
    Precision ps = Precision::multiplicative(factor);
    ++check.cases;
    if (eval_atomic(s, at, at_a) && !eval_atomic(s, appr(at, ps), at_b)) {
      check.record(Json{{"norm", norm_name(nk)},
                        {"factor", factor.str()},
                        {"k", k},
                        {"delta", delta.str()},
                        {"atom", atom_str(at)}});
    }
  }

  check.details["displaced_tuples"] = moved;
  return check;
}

// ── 10. Diagonal map preservation ───────────────────────────────────────────

SuiteCheck normed_map_preservation() {
  SuiteCheck check;
  check.name = "normed-map-preservation";
  using Pt = std::vector<Rational>;
  auto pt = [](long ax, long bx, long ay, long by) {
    return Pt{Rational(ax, bx), Rational(ay, by)};
  };
  std::vector<std::vector<Pt>> families = {
      {pt(1, 1, 0, 1), pt(0, 1, 1, 1), pt(1, 1, 1, 1), pt(1, 2, -1, 2)},
      {pt(1, 2, 1, 4), pt(-1, 4, 3, 4), pt(1, 1, 3, 4), pt(-1, 2, -1, 1)},
      {pt(1, 1, 1, 1), pt(1, 1, -1, 1), pt(3, 4, 0, 1), pt(0, 1, 2, 1)}};
  std::vector<std::pair<Rational, Rational>> maps = {
      {Rational(1), Rational(1)},      {Rational(3, 2), Rational(1)},
      {Rational(1), Rational(2, 3)},   {Rational(2), Rational(1, 2)},
      {Rational(4, 3), Rational(5, 4)}, {Rational(1, 2), Rational(1, 2)}};
  std::vector<NormKind> norms = {NormKind::Linf, NormKind::L1};

  long long premise_held = 0;
  const int kk = 3;
  for (const auto& fam : families) {
    int m = static_cast<int>(fam.size());
    // all coefficient vectors with entries in [-3, 3] and at most 3 nonzero
    std::vector<std::vector<int>> coeffs;
    std::vector<int> cur(m, -kk);
    while (true) {
      int nonzero = 0;
      for (int c : cur)
        if (c != 0) ++nonzero;
      if (nonzero >= 1 && nonzero <= kk) coeffs.push_back(cur);
      int pos = 0;
      while (pos < m && cur[pos] == kk) cur[pos++] = -kk;
      if (pos == m) break;
      ++cur[pos];
    }

    for (const auto& [l1, l2] : maps) {
      Rational s = efg::max(efg::max(l1, l1.reciprocal()), efg::max(l2, l2.reciprocal()));
      for (NormKind nk : norms) {
        NormedPointConfig ca, cb;
        ca.dim = cb.dim = 2;
        ca.norm = cb.norm = nk;
        for (int p = 0; p < m; ++p) {
          std::string label = "b" + std::to_string(p + 1);
          ca.labels.push_back(label);
          cb.labels.push_back(label);
          ca.points.push_back(fam[p]);
          cb.points.push_back({fam[p][0] * l1, fam[p][1] * l2});
        }
        Structure sa = make_normed_structure(ca, Vocabulary::Banach);
        Structure sb = make_normed_structure(cb, Vocabulary::Banach);
        Assignment asg;
        for (int p = 0; p < m; ++p) asg["t" + std::to_string(p)] = p;

        for (const auto& cvec : coeffs)
          for (int side = 0; side < 2; ++side) {
            std::vector<std::pair<std::string, Rational>> term;
            for (int p = 0; p < m; ++p)
              if (cvec[p] != 0)
                term.emplace_back("t" + std::to_string(p), Rational(cvec[p]));
            AtomicFormula at =
                side == 0 ? AtomicFormula::norm_leq(term) : AtomicFormula::norm_geq(term);
            ++check.cases;
            if (!eval_atomic(sa, at, asg)) continue;
            ++premise_held;
            if (!eval_atomic(sb, appr(at, Precision::multiplicative(s)), asg)) {
              Json coeff_json = Json::array();
              for (int c : cvec) coeff_json.push_back(c);
              check.record(Json{{"norm", norm_name(nk)},
                                {"map", Json::array({l1.str(), l2.str()})},
                                {"factor", s.str()},
                                {"coeffs", coeff_json},
                                {"atom", atom_str(at)}});
            }
          }
      }
    }
  }
  check.details["premise_held"] = premise_held;
  check.details["coefficient_bound"] = kk;
  return check;
}

// ── Dispatcher ──────────────────────────────────────────────────────────────

SuiteReport run_suite(const std::string& selector) {
  SuiteReport report;
  report.selector = selector;

  using Entry = std::pair<std::string, std::function<SuiteCheck()>>;
  std::vector<Entry> plan;
  auto corpus = std::make_shared<std::vector<FiniteMetricSpace>>();
  auto curves = std::make_shared<RelationCurveSet>();
  auto need_corpus = [corpus]() -> const std::vector<FiniteMetricSpace>& {
    if (corpus->empty()) *corpus = metric_corpus();
    return *corpus;
  };
  auto need_curves = [corpus, curves, need_corpus]() -> const RelationCurveSet* {
    if (curves->curves.empty()) {
      const std::vector<Rational> base = {Rational(0), Rational(1, 4), Rational(1, 2),
                                          Rational(1)};
      std::vector<Rational> all = base;
      for (const Rational& x : base)
        for (const Rational& y : base) all.push_back(x + y);
      *curves = build_relation_curves(need_corpus(), all);
    }
    return curves.get();
  };

  auto add = [&](const std::string& name, std::function<SuiteCheck()> fn) {
    plan.emplace_back(name, std::move(fn));
  };

  bool all = selector == "all";
  if (all || selector == "oracle-equivalence") {
    add("additive-distance-oracle",
        [&]() { return additive_distance_oracle(need_corpus()); });
    add("multiplicative-distance-oracle",
        [&]() { return multiplicative_distance_oracle(need_corpus()); });
  }
  if (all || selector == "game-laws") {
    add("watershed-pins", []() { return watershed_pins(); });
    add("game-symmetry-transitivity",
        [&]() { return game_symmetry_transitivity(need_corpus(), need_curves()); });
    add("game-monotonicity",
        [&]() { return game_monotonicity(need_corpus(), need_curves()); });
  }
  if (all || selector == "scott-equivalence") {
    add("level-formulas-vs-games",
        [&]() { return level_formulas_match_games(need_corpus()); });
  }
  if (all || selector == "appr-laws") {
    add("approximation-algebra", [&]() { return approximation_algebra(need_corpus()); });
    add("perturbation-robustness", []() { return perturbation_robustness(); });
    add("normed-map-preservation", []() { return normed_map_preservation(); });
  }
  if (all || selector == "oracle-equivalence") {
    add("gluing-construction", [&]() { return gluing_construction(need_corpus()); });
  }
  if (plan.empty()) fail("UnknownSuite", selector);

  for (auto& [name, fn] : plan) {
    try {
      report.checks.push_back(fn());
    } catch (const std::exception& e) {
      SuiteCheck broken;
      broken.name = name;
      broken.passed = false;
      broken.details["error"] = e.what();
      report.checks.push_back(std::move(broken));
    }
  }
  return report;
}

}  // namespace efg
