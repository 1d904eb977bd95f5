#include "efg/games.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "efg/errors.hpp"

namespace efg {
namespace {

constexpr std::size_t kStrategyBudget = 20000;
constexpr std::uint64_t kSearchBudget = 1ull << 22;

// ── Norm values with exact comparisons ──────────────────────────────────────
// Linear norms carry the value itself, the euclidean norm carries its square.

struct NormVal {
  bool squared = false;
  Rational v;
};

NormVal norm_of(const NormedPointConfig& c, const std::vector<Rational>& vec) {
  if (c.is_l2()) return {true, c.norm_l2_squared(vec)};
  return {false, c.norm_linear(vec)};
}

// a <= b + slack, slack >= 0.
bool nv_leq_plus(const NormVal& a, const NormVal& b, const Rational& slack) {
  if (!a.squared && !b.squared) return a.v <= b.v + slack;
  if (a.squared && b.squared) return sqrt_leq_sqrt_plus(a.v, b.v, slack);
  if (a.squared) {
    Rational rhs = b.v + slack;
    if (rhs.is_negative()) return false;
    return a.v <= rhs * rhs;
  }
  Rational lhs = a.v - slack;
  if (!lhs.is_positive()) return true;
  return lhs * lhs <= b.v;
}

// a <= r for a rational bound r.
bool nv_leq(const NormVal& a, const Rational& r) {
  if (r.is_negative()) return false;
  if (a.squared) return a.v <= r * r;
  return a.v <= r;
}

bool nv_geq(const NormVal& a, const Rational& r) {
  if (!r.is_positive()) return true;
  if (a.squared) return a.v >= r * r;
  return a.v >= r;
}

// ── Coefficient menus for unit-ball relation games ──────────────────────────

std::vector<std::vector<Rational>> ball_menu_rows(const BallMenuOptions& opt,
                                                 std::size_t arity) {
  std::vector<std::vector<Rational>> rows;
  if (arity == 0 || arity > opt.max_support) return rows;
  // Positive weight splits n_1 + .. + n_arity = D, then sign patterns with
  // the first coefficient positive (negating a whole vector preserves norms).
  std::vector<unsigned> parts(arity);
  std::function<void(std::size_t, unsigned, unsigned)> split = [&](std::size_t pos,
                                                                   unsigned left,
                                                                   unsigned denom) {
    if (pos + 1 == arity) {
      if (left == 0) return;
      parts[pos] = left;
      for (unsigned signs = 0; signs < (1u << (arity - 1)); ++signs) {
        std::vector<Rational> row(arity);
        for (std::size_t l = 0; l < arity; ++l) {
          Rational w(static_cast<long>(parts[l]), static_cast<long>(denom));
          if (l > 0 && ((signs >> (l - 1)) & 1u)) w = -w;
          row[l] = w;
        }
        rows.push_back(std::move(row));
      }
      return;
    }
    for (unsigned take = 1; take + (arity - pos - 1) <= left; ++take) {
      parts[pos] = take;
      split(pos + 1, left - take, denom);
    }
  };
  for (unsigned denom = static_cast<unsigned>(arity); denom <= opt.denominator_bound;
       ++denom)
    split(0, denom, denom);
  std::sort(rows.begin(), rows.end(),
            [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
              for (std::size_t l = 0; l < x.size(); ++l) {
                if (x[l] != y[l]) return x[l] < y[l];
              }
              return false;
            });
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

std::vector<Rational> combine_points(const NormedPointConfig& c,
                                     const std::vector<int>& idx,
                                     const std::vector<Rational>& coeffs) {
  std::vector<Rational> acc(c.dim, Rational(0));
  for (std::size_t l = 0; l < idx.size(); ++l) {
    for (unsigned d = 0; d < c.dim; ++d) acc[d] += coeffs[l] * c.points[idx[l]][d];
  }
  return acc;
}

bool ball_pairs_ok(const NormedPointConfig& ca, const NormedPointConfig& cb,
                   const std::vector<std::pair<int, int>>& pairs, const Rational& eps,
                   const BallMenuOptions& menu) {
  const Rational one(1);
  for (std::size_t arity = 1; arity <= std::min<std::size_t>(pairs.size(), menu.max_support);
       ++arity) {
    auto rows = ball_menu_rows(menu, arity);
    if (rows.empty()) continue;
    std::vector<std::size_t> tuple(arity, 0);
    while (true) {
      std::vector<int> ia(arity), ib(arity);
      for (std::size_t l = 0; l < arity; ++l) {
        ia[l] = pairs[tuple[l]].first;
        ib[l] = pairs[tuple[l]].second;
      }
      for (const auto& row : rows) {
        NormVal na = norm_of(ca, combine_points(ca, ia, row));
        NormVal nb = norm_of(cb, combine_points(cb, ib, row));
        // Upper-bound facts transfer with slack eps capped at 1, lower-bound
        // facts with slack eps floored at 0, in both directions.
        bool p_ab = nv_geq(na, one - eps) || nv_leq_plus(nb, na, eps);
        bool p_ba = nv_geq(nb, one - eps) || nv_leq_plus(na, nb, eps);
        bool q_ab = nv_leq(na, eps) || nv_leq_plus(na, nb, eps);
        bool q_ba = nv_leq(nb, eps) || nv_leq_plus(nb, na, eps);
        if (!(p_ab && p_ba && q_ab && q_ba)) return false;
      }
      std::size_t l = 0;
      for (; l < arity; ++l) {
        if (++tuple[l] < pairs.size()) break;
        tuple[l] = 0;
      }
      if (l == arity) break;
    }
  }
  return true;
}

// ── Function-game constraints ───────────────────────────────────────────────

bool metric_round_pair_ok(const Rational& da, const Rational& db, const Rational& s,
                          unsigned k) {
  Rational inv_k(1, static_cast<long>(k));
  if (db > s * max(inv_k, da)) return false;
  if (da >= inv_k && db < da / s) return false;
  return true;
}

// All constraints a round with parameters (s, k) imposes on one later pair of
// positions, in both directions.
bool metric_round_pair_ok_sym(const Rational& da, const Rational& db, const Rational& s,
                              unsigned k) {
  return metric_round_pair_ok(da, db, s, k) && metric_round_pair_ok(db, da, s, k);
}

// ── Polyhedral exact mode ───────────────────────────────────────────────────

// Supporting functionals whose maximum realizes the norm; only for the
// piecewise-linear norms.
std::vector<std::vector<Rational>> norm_functionals(const NormedPointConfig& c) {
  std::vector<std::vector<Rational>> fs;
  auto weight = [&](unsigned d) {
    return c.weights.empty() ? Rational(1) : c.weights[d];
  };
  if (c.norm == NormKind::Linf || c.norm == NormKind::WeightedLinf) {
    for (unsigned d = 0; d < c.dim; ++d) {
      std::vector<Rational> f(c.dim, Rational(0));
      f[d] = weight(d);
      fs.push_back(f);
      f[d] = -weight(d);
      fs.push_back(f);
    }
    return fs;
  }
  if (c.norm == NormKind::L1 || c.norm == NormKind::WeightedL1) {
    if (c.dim > 12) fail("StateSpaceTooLarge", "sign patterns 2^" + std::to_string(c.dim));
    for (std::uint32_t signs = 0; signs < (1u << c.dim); ++signs) {
      std::vector<Rational> f(c.dim);
      for (unsigned d = 0; d < c.dim; ++d)
        f[d] = ((signs >> d) & 1u) ? -weight(d) : weight(d);
      fs.push_back(std::move(f));
    }
    return fs;
  }
  fail("UnsupportedNorm", "exact polyhedral mode requires a piecewise-linear norm");
}

// Solve M x = rhs exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m,
                                                  std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c2 = col; c2 < n; ++c2) m[r][c2] -= f * m[col][c2];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

struct LinearSystem {
  // rows g with g . x <= h
  std::vector<std::vector<Rational>> g;
  std::vector<Rational> h;

  void add(std::vector<Rational> row, Rational bound) {
    g.push_back(std::move(row));
    h.push_back(std::move(bound));
  }

  bool feasible(const std::vector<Rational>& x) const {
    for (std::size_t r = 0; r < g.size(); ++r) {
      Rational acc(0);
      for (std::size_t c = 0; c < x.size(); ++c) acc += g[r][c] * x[c];
      if (acc > h[r]) return false;
    }
    return true;
  }

  // All vertices of the (assumed bounded) solution polytope.
  std::vector<std::vector<Rational>> vertices(std::size_t dim) const {
    std::vector<std::vector<Rational>> out;
    std::vector<std::size_t> pick(dim);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                            std::size_t from) {
      if (pos == dim) {
        std::vector<std::vector<Rational>> m(dim);
        std::vector<Rational> rhs(dim);
        for (std::size_t i = 0; i < dim; ++i) {
          m[i] = g[pick[i]];
          rhs[i] = h[pick[i]];
        }
        auto sol = solve_square(std::move(m), std::move(rhs));
        if (sol && feasible(*sol)) out.push_back(std::move(*sol));
        return;
      }
      for (std::size_t r = from; r < g.size(); ++r) {
        pick[pos] = r;
        rec(pos + 1, r + 1);
      }
    };
    if (g.size() >= dim) rec(0, 0);
    return out;
  }
};

// lhs applied to coefficient vector c where the combined point is
// sum_l c_l p_{idx_l}: the functional on points becomes a functional on c.
std::vector<Rational> lift_functional(const NormedPointConfig& c,
                                      const std::vector<int>& idx,
                                      const std::vector<Rational>& f) {
  std::vector<Rational> row(idx.size(), Rational(0));
  for (std::size_t l = 0; l < idx.size(); ++l) {
    for (unsigned d = 0; d < c.dim; ++d) row[l] += f[d] * c.points[idx[l]][d];
  }
  return row;
}

// max over { |c_l| <= k, norm_from(sum c p) <= 1 } of norm_to(sum c q) and the
// complementary minimum condition. Returns true when every coefficient vector
// bounded by k transfers: norm_from <= 1 implies norm_to <= s, and
// norm_from >= 1 implies norm_to >= 1/s.
bool exact_direction_ok(const NormedPointConfig& from, const NormedPointConfig& to,
                        const std::vector<int>& idx_from, const std::vector<int>& idx_to,
                        unsigned k, const Rational& s) {
  const std::size_t m = idx_from.size();
  if (m > 5) fail("StateSpaceTooLarge", "exact mode coefficient dimension " + std::to_string(m));
  auto ffs = norm_functionals(from);
  auto tfs = norm_functionals(to);
  std::vector<std::vector<Rational>> ff(ffs.size()), tf(tfs.size());
  for (std::size_t j = 0; j < ffs.size(); ++j) ff[j] = lift_functional(from, idx_from, ffs[j]);
  for (std::size_t j = 0; j < tfs.size(); ++j) tf[j] = lift_functional(to, idx_to, tfs[j]);
  auto box_rows = [&](LinearSystem& sys, std::size_t dim) {
    for (std::size_t l = 0; l < m; ++l) {
      std::vector<Rational> r1(dim, Rational(0)), r2(dim, Rational(0));
      r1[l] = Rational(1);
      r2[l] = Rational(-1);
      sys.add(r1, Rational(static_cast<long>(k)));
      sys.add(r2, Rational(static_cast<long>(k)));
    }
  };

  // Upper transfer: the maximum of norm_to over the polytope
  // {|c| <= k, norm_from(c) <= 1} sits at a vertex.
  {
    LinearSystem sys;
    box_rows(sys, m);
    for (const auto& row : ff) sys.add(row, Rational(1));
    for (const auto& v : sys.vertices(m)) {
      Rational nt = to.norm_linear(combine_points(to, idx_to, v));
      if (nt > s) return false;
    }
  }

  // Lower transfer: for each supporting functional of the source norm,
  // minimize norm_to over {|c| <= k, functional(c) >= 1} via the lifted
  // epigraph polytope; the minimum sits at a vertex.
  Rational cap(1);
  for (std::size_t l = 0; l < m; ++l)
    cap += Rational(static_cast<long>(k)) * to.norm_linear(to.points[idx_to[l]]);
  for (const auto& active : ff) {
    LinearSystem sys;
    box_rows(sys, m + 1);
    {
      std::vector<Rational> row(m + 1, Rational(0));
      for (std::size_t l = 0; l < m; ++l) row[l] = -active[l];
      sys.add(row, Rational(-1));
    }
    for (const auto& trow : tf) {
      std::vector<Rational> row(m + 1, Rational(0));
      for (std::size_t l = 0; l < m; ++l) row[l] = trow[l];
      row[m] = Rational(-1);
      sys.add(row, Rational(0));
    }
    {
      std::vector<Rational> row(m + 1, Rational(0));
      row[m] = Rational(1);
      sys.add(row, cap);
    }
    // Box rows above constrained the slack column too; re-add them over the
    // lifted dimension with the slack column zeroed.
    LinearSystem lifted;
    for (std::size_t l = 0; l < m; ++l) {
      std::vector<Rational> r1(m + 1, Rational(0)), r2(m + 1, Rational(0));
      r1[l] = Rational(1);
      r2[l] = Rational(-1);
      lifted.add(r1, Rational(static_cast<long>(k)));
      lifted.add(r2, Rational(static_cast<long>(k)));
    }
    for (std::size_t r = 2 * m; r < sys.g.size(); ++r) lifted.add(sys.g[r], sys.h[r]);
    std::optional<Rational> best;
    for (const auto& v : lifted.vertices(m + 1)) {
      Rational t = v[m];
      if (!best || t < *best) best = t;
    }
    if (best && *best * s < Rational(1)) return false;
  }
  return true;
}

bool banach_round_ok(const NormedPointConfig& ca, const NormedPointConfig& cb,
                     const std::vector<int>& ia, const std::vector<int>& ib, unsigned k,
                     const Rational& s, const BanachGameOptions& opts) {
  if (opts.exact_polyhedral)
    return exact_direction_ok(ca, cb, ia, ib, k, s) &&
           exact_direction_ok(cb, ca, ib, ia, k, s);
  // Integer coefficient lattice |c_l| <= k with at most k nonzero entries.
  const std::size_t m = ia.size();
  double combos = 1;
  for (std::size_t l = 0; l < m; ++l) combos *= 2.0 * k + 1.0;
  if (m > 8 || combos > 250000.0)
    fail("StateSpaceTooLarge", "coefficient lattice too large; use exact mode");
  std::vector<long> c(m, -static_cast<long>(k));
  const Rational one(1), inv_s = s.reciprocal();
  while (true) {
    unsigned support = 0;
    for (std::size_t l = 0; l < m; ++l)
      if (c[l] != 0) ++support;
    if (support >= 1 && support <= k) {
      std::vector<Rational> coeffs(m);
      for (std::size_t l = 0; l < m; ++l) coeffs[l] = Rational(c[l]);
      NormVal na = norm_of(ca, combine_points(ca, ia, coeffs));
      NormVal nb = norm_of(cb, combine_points(cb, ib, coeffs));
      if (nv_leq(na, one) && !nv_leq(nb, s)) return false;
      if (nv_geq(na, one) && !nv_geq(nb, inv_s)) return false;
      if (nv_leq(nb, one) && !nv_leq(na, s)) return false;
      if (nv_geq(nb, one) && !nv_geq(na, inv_s)) return false;
    }
    std::size_t l = 0;
    for (; l < m; ++l) {
      if (++c[l] <= static_cast<long>(k)) break;
      c[l] = -static_cast<long>(k);
    }
    if (l == m) break;
  }
  return true;
}

// ── Validation helpers ──────────────────────────────────────────────────────

void require_additive_pair(const Structure& a, const Structure& b) {
  if (is_multiplicative_vocab(a.vocab) || is_multiplicative_vocab(b.vocab))
    fail("VocabularyMismatch", "relation games need additive-slack vocabularies");
  if (a.is_metric() != b.is_metric())
    fail("VocabularyMismatch", "carriers of mixed families");
}

void require_multiplicative_pair(const Structure& a, const Structure& b) {
  if (!is_multiplicative_vocab(a.vocab) || !is_multiplicative_vocab(b.vocab))
    fail("VocabularyMismatch", "function games need multiplicative-factor vocabularies");
  if (a.is_metric() != b.is_metric())
    fail("VocabularyMismatch", "carriers of mixed families");
}

void require_pair_indices(const Structure& a, const Structure& b,
                          const std::vector<std::pair<int, int>>& pairs) {
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= static_cast<int>(a.size()) || j < 0 || j >= static_cast<int>(b.size()))
      fail("BadIndex", "start pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
}

}  // namespace

// ── Win checks ──────────────────────────────────────────────────────────────

bool relation_win_check(const Structure& a, const Structure& b,
                        const std::vector<std::pair<int, int>>& pairs, const Rational& eps,
                        const BallMenuOptions& menu) {
  require_additive_pair(a, b);
  if (eps.is_negative()) fail("BadPrecision", "negative slack " + eps.str());
  require_pair_indices(a, b, pairs);
  if (a.is_metric()) {
    const Rational bound = Rational(2) * eps;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t q = p + 1; q < pairs.size(); ++q) {
        Rational da = a.metric().d(pairs[p].first, pairs[q].first);
        Rational db = b.metric().d(pairs[p].second, pairs[q].second);
        if (abs(da - db) > bound) return false;
      }
    }
    return true;
  }
  return ball_pairs_ok(a.normed(), b.normed(), pairs, eps, menu);
}

bool function_win_check(const Structure& a, const Structure& b,
                        const std::vector<PlayedRound>& rounds,
                        const BanachGameOptions& opts) {
  require_multiplicative_pair(a, b);
  for (const auto& r : rounds) {
    if (r.k == 0) fail("BadArgument", "round sharpness k = 0");
    if (r.factor < Rational(1)) fail("BadPrecision", "round factor below 1");
  }
  {
    std::vector<std::pair<int, int>> idx;
    for (const auto& r : rounds) idx.push_back({r.a_idx, r.b_idx});
    require_pair_indices(a, b, idx);
  }
  if (a.is_metric()) {
    for (std::size_t i = 0; i < rounds.size(); ++i) {
      for (std::size_t j = i; j < rounds.size(); ++j) {
        for (std::size_t j2 = j; j2 < rounds.size(); ++j2) {
          Rational da = a.metric().d(rounds[j].a_idx, rounds[j2].a_idx);
          Rational db = b.metric().d(rounds[j].b_idx, rounds[j2].b_idx);
          if (!metric_round_pair_ok_sym(da, db, rounds[i].factor, rounds[i].k))
            return false;
        }
      }
    }
    return true;
  }
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    std::vector<int> ia, ib;
    for (std::size_t j = i; j < rounds.size(); ++j) {
      ia.push_back(rounds[j].a_idx);
      ib.push_back(rounds[j].b_idx);
    }
    if (!banach_round_ok(a.normed(), b.normed(), ia, ib, rounds[i].k, rounds[i].factor,
                         opts))
      return false;
  }
  return true;
}

// ── Relation game table ─────────────────────────────────────────────────────

namespace {

inline bool get_bit(const std::vector<std::uint64_t>& w, PairMask s) {
  return (w[s >> 6] >> (s & 63)) & 1u;
}

inline void set_bit(std::vector<std::uint64_t>& w, PairMask s) {
  w[s >> 6] |= std::uint64_t(1) << (s & 63);
}

std::uint64_t popcount_words(const std::vector<std::uint64_t>& w) {
  std::uint64_t n = 0;
  for (auto x : w) n += static_cast<std::uint64_t>(__builtin_popcountll(x));
  return n;
}

}  // namespace

RelationGameTable RelationGameTable::build_from_sets(int na, int nb, bool start_ok,
                                                     const std::vector<std::uint64_t>& passing,
                                                     Options opt) {
  RelationGameTable t;
  t.na_ = na;
  t.nb_ = nb;
  t.start_ok_ = start_ok;
  const unsigned bits = static_cast<unsigned>(na * nb);
  const std::size_t count = std::size_t(1) << bits;

  std::vector<std::vector<int>> move_bits;
  for (int i = 0; i < na; ++i) {
    std::vector<int> mb;
    for (int j = 0; j < nb; ++j) mb.push_back(i * nb + j);
    move_bits.push_back(std::move(mb));
  }
  for (int j = 0; j < nb; ++j) {
    std::vector<int> mb;
    for (int i = 0; i < na; ++i) mb.push_back(i * nb + j);
    move_bits.push_back(std::move(mb));
  }

  std::vector<std::uint64_t> cur = passing;
  std::vector<bool> curve;
  bool overflow = false;
  t.levels_.push_back(cur);
  curve.push_back(get_bit(cur, 0));
  t.explored_ = popcount_words(cur);
  std::vector<std::uint64_t> next(cur.size());
  while (true) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t s = 0; s < count; ++s) {
      if (!get_bit(cur, static_cast<PairMask>(s))) continue;
      bool keep = true;
      for (const auto& mb : move_bits) {
        bool found = false;
        for (int bpos : mb) {
          if (get_bit(cur, static_cast<PairMask>(s | (std::size_t(1) << bpos)))) {
            found = true;
            break;
          }
        }
        if (!found) {
          keep = false;
          break;
        }
      }
      if (keep) set_bit(next, static_cast<PairMask>(s));
    }
    if (next == cur) {
      t.stabilized_at_ = curve.size() - 1;
      break;
    }
    cur.swap(next);
    t.explored_ += popcount_words(cur);
    curve.push_back(get_bit(cur, 0));
    if (!overflow && t.levels_.size() < opt.stored_levels) {
      t.levels_.push_back(cur);
    } else {
      overflow = true;
    }
  }
  if (overflow) t.levels_.push_back(cur);  // stabilized level
  t.curve0_ = std::move(curve);
  return t;
}

bool RelationGameTable::level_bit(std::size_t lvl, PairMask s) const {
  return get_bit(levels_[lvl], s);
}

bool RelationGameTable::ii_wins(PairMask s, std::uint64_t clock) const {
  std::uint64_t idx = std::min<std::uint64_t>(clock, stabilized_at_);
  std::size_t plain = levels_.size();
  bool overflow = stabilized_at_ + 1 > levels_.size();
  if (overflow) plain = levels_.size() - 1;
  if (idx < plain) return level_bit(static_cast<std::size_t>(idx), s);
  if (idx >= stabilized_at_) return get_bit(levels_.back(), s);
  if (s == 0) return curve0_[static_cast<std::size_t>(idx)];
  fail("StateSpaceTooLarge", "level chain too deep for arbitrary-set queries");
}

bool RelationGameTable::ii_wins_all(PairMask s) const { return get_bit(levels_.back(), s); }

Player RelationGameTable::winner_at(std::uint64_t clock) const {
  return ii_wins(0, clock) ? Player::II : Player::I;
}

std::vector<bool> RelationGameTable::winner_curve() const { return curve0_; }

std::optional<std::uint64_t> RelationGameTable::drop_clock(PairMask s) const {
  if (ii_wins_all(s)) return std::nullopt;
  for (std::uint64_t c = 0;; ++c) {
    if (!ii_wins(s, c)) return c;
  }
}

std::optional<int> RelationGameTable::best_reply(PairMask s, std::uint64_t clock_after,
                                                 bool x_in_a, int x) const {
  int n_other = x_in_a ? nb_ : na_;
  for (int y = 0; y < n_other; ++y) {
    PairMask child = s | (PairMask(1) << (x_in_a ? bit(x, y) : bit(y, x)));
    if (ii_wins(child, clock_after)) return y;
  }
  return std::nullopt;
}

std::optional<std::pair<bool, int>> RelationGameTable::winning_i_move(
    PairMask s, std::uint64_t clock) const {
  if (clock == 0 || ii_wins(s, clock)) return std::nullopt;
  if (!ii_wins(s, 0)) return std::nullopt;  // already lost for II, any move does
  for (int side = 0; side < 2; ++side) {
    bool x_in_a = side == 0;
    int n = x_in_a ? na_ : nb_;
    for (int x = 0; x < n; ++x) {
      if (!best_reply(s, clock - 1, x_in_a, x)) return std::make_pair(x_in_a, x);
    }
  }
  return std::nullopt;
}

RelationGameTable RelationGameTable::build(const Structure& a, const Structure& b,
                                           const Rational& eps,
                                           const std::vector<std::pair<int, int>>& start,
                                           Options opt) {
  require_additive_pair(a, b);
  if (eps.is_negative()) fail("BadPrecision", "negative slack " + eps.str());
  require_pair_indices(a, b, start);
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  const unsigned bits = static_cast<unsigned>(na * nb);
  if (bits > opt.max_bits)
    fail("StateSpaceTooLarge",
         "pair space 2^" + std::to_string(bits) + " exceeds the configured budget");
  const std::size_t count = std::size_t(1) << bits;
  std::vector<std::uint64_t> passing((count + 63) / 64, 0);

  if (a.is_metric()) {
    // pass[S] via: S is compatible iff S minus its lowest vertex is and that
    // vertex is adjacent to everything in S and to every start pair.
    std::vector<std::uint32_t> adj(bits, 0);
    std::vector<char> base_ok(bits, 1);
    const Rational bound = Rational(2) * eps;
    auto compat = [&](int v, int u) {
      int vi = v / nb, vj = v % nb, ui = u / nb, uj = u % nb;
      return abs(a.metric().d(vi, ui) - b.metric().d(vj, uj)) <= bound;
    };
    for (unsigned v = 0; v < bits; ++v) {
      for (unsigned u = 0; u < bits; ++u)
        if (compat(static_cast<int>(v), static_cast<int>(u)))
          adj[v] |= std::uint32_t(1) << u;
      for (auto [i, j] : start)
        if (!compat(static_cast<int>(v), i * nb + j)) base_ok[v] = 0;
    }
    bool start_ok = relation_win_check(a, b, start, eps);
    std::vector<char> pass(count, 0);
    pass[0] = start_ok ? 1 : 0;
    for (std::size_t s = 1; s < count; ++s) {
      unsigned v = static_cast<unsigned>(__builtin_ctzll(s));
      std::size_t rest = s & (s - 1);
      pass[s] = pass[rest] && base_ok[v] &&
                ((s & ~(std::uint64_t(adj[v]) | (std::uint64_t(1) << v))) == 0);
    }
    for (std::size_t s = 0; s < count; ++s)
      if (pass[s]) set_bit(passing, static_cast<PairMask>(s));
    return build_from_sets(na, nb, start_ok, passing, opt);
  }

  if (bits > 16)
    fail("StateSpaceTooLarge", "unit-ball pair space 2^" + std::to_string(bits));
  bool start_ok = relation_win_check(a, b, start, eps, opt.ball);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<std::pair<int, int>> pairs = start;
    for (unsigned v = 0; v < bits; ++v)
      if ((s >> v) & 1u) pairs.push_back({static_cast<int>(v) / nb, static_cast<int>(v) % nb});
    if (relation_win_check(a, b, pairs, eps, opt.ball))
      set_bit(passing, static_cast<PairMask>(s));
  }
  return build_from_sets(na, nb, start_ok, passing, opt);
}

std::uint64_t relation_saturation_clock(const Structure& a, const Structure& b) {
  require_additive_pair(a, b);
  const std::uint64_t bits = static_cast<std::uint64_t>(a.size()) * b.size();
  if (bits >= 63) fail("StateSpaceTooLarge", "pair space 2^" + std::to_string(bits));
  return std::uint64_t(1) << bits;
}

// ── Relation game solving with strategies ───────────────────────────────────

namespace {

std::string pair_set_str(const Structure& a, const Structure& b, PairMask s, int nb,
                         const std::vector<std::pair<int, int>>& start) {
  std::vector<std::pair<int, int>> pairs = start;
  for (unsigned v = 0; s >> v; ++v)
    if ((s >> v) & 1u) pairs.push_back({static_cast<int>(v) / nb, static_cast<int>(v) % nb});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::string out = "[";
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (p) out += ",";
    out += a.label(pairs[p].first) + ":" + b.label(pairs[p].second);
  }
  return out + "]";
}

std::string clock_key(std::uint64_t clock, std::uint64_t stab) {
  if (clock > stab) return "sat";
  return std::to_string(clock);
}

}  // namespace

GameResult solve_relation_game(const RelationGameConfig& cfg) {
  RelationGameTable::Options opt;
  opt.ball = cfg.ball_menu;
  RelationGameTable table = RelationGameTable::build(cfg.a, cfg.b, cfg.eps, cfg.start, opt);
  GameResult res;
  res.winner = table.winner_at(cfg.clock);
  res.explored = table.explored();
  res.stabilized_at = table.stabilization();
  res.saturated = cfg.clock >= table.stabilization();
  const std::uint64_t stab = table.stabilization();
  const int na = table.na(), nb = table.nb();

  // Positions at clocks past the fixpoint coincide; key them as "sat".
  std::set<std::pair<PairMask, std::uint64_t>> seen;
  std::vector<std::pair<PairMask, std::uint64_t>> queue;
  auto canon_clock = [&](std::uint64_t c) { return std::min<std::uint64_t>(c, stab + 1); };
  queue.push_back({0, canon_clock(cfg.clock)});
  seen.insert(queue[0]);
  bool complete = true;
  std::map<std::string, std::string> strat;
  while (!queue.empty()) {
    auto [s, c] = queue.back();
    queue.pop_back();
    if (c == 0) continue;
    std::string pos = "clock=" + clock_key(c, stab) + ";pairs=" +
                      pair_set_str(cfg.a, cfg.b, s, nb, cfg.start);
    if (res.winner == Player::II) {
      if (!table.ii_wins(s, c)) continue;
      for (int side = 0; side < 2; ++side) {
        bool x_in_a = side == 0;
        int n = x_in_a ? na : nb;
        for (int x = 0; x < n; ++x) {
          auto y = table.best_reply(s, c - 1, x_in_a, x);
          if (!y) continue;  // unreachable when the table is II-winning
          std::string move = x_in_a ? ("A:" + cfg.a.label(x)) : ("B:" + cfg.b.label(x));
          std::string reply = x_in_a ? ("B:" + cfg.b.label(*y)) : ("A:" + cfg.a.label(*y));
          if (strat.size() >= kStrategyBudget) {
            complete = false;
            break;
          }
          strat[pos + ";I=" + move] = reply;
          PairMask child = s | (PairMask(1) << (x_in_a ? table.bit(x, *y) : table.bit(*y, x)));
          auto key = std::make_pair(child, canon_clock(c - 1));
          if (c - 1 > 0 && seen.insert(key).second) queue.push_back(key);
        }
        if (!complete) break;
      }
    } else {
      if (table.ii_wins(s, c) || !table.ii_wins(s, 0)) continue;
      auto mv = table.winning_i_move(s, c);
      if (!mv) continue;
      auto [x_in_a, x] = *mv;
      std::string move = x_in_a ? ("A:" + cfg.a.label(x)) : ("B:" + cfg.b.label(x));
      if (strat.size() >= kStrategyBudget) {
        complete = false;
      } else {
        strat[pos] = move;
        int n_other = x_in_a ? nb : na;
        for (int y = 0; y < n_other; ++y) {
          PairMask child = s | (PairMask(1) << (x_in_a ? table.bit(x, y) : table.bit(y, x)));
          auto key = std::make_pair(child, canon_clock(c - 1));
          if (c - 1 > 0 && seen.insert(key).second) queue.push_back(key);
        }
      }
    }
    if (!complete) break;
  }
  if (complete) {
    res.strategy = std::move(strat);
    res.strategy_complete = true;
  }
  return res;
}

// ── Function game ───────────────────────────────────────────────────────────

namespace {

struct FunctionSolver {
  const FunctionGameConfig& cfg;
  std::map<std::string, bool> memo;
  std::uint64_t explored = 0;

  const std::vector<MenuEntry>& menu_row(std::size_t round) const {
    if (cfg.menus.empty()) fail("BadMenu", "empty menu");
    return cfg.menus[std::min(round, cfg.menus.size() - 1)];
  }

  std::string round_str(const PlayedRound& r) const {
    return cfg.a.label(r.a_idx) + ":" + cfg.b.label(r.b_idx) + "*" + r.factor.str() + "*" +
           std::to_string(r.k);
  }

  std::string pos_key(const std::vector<PlayedRound>& rounds, std::uint64_t clock) const {
    std::string out = "clock=" + std::to_string(clock) + ";rounds=[";
    for (std::size_t i = 0; i < rounds.size(); ++i) {
      if (i) out += ",";
      out += round_str(rounds[i]);
    }
    return out + "]";
  }

  bool check(const std::vector<PlayedRound>& rounds) const {
    return function_win_check(cfg.a, cfg.b, rounds, cfg.banach);
  }

  // Assumes the win check holds on `rounds`.
  bool ii_wins(std::vector<PlayedRound>& rounds, std::uint64_t clock) {
    if (clock == 0) return true;
    std::string key = pos_key(rounds, clock);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++explored > kSearchBudget) fail("StateSpaceTooLarge", "function game search budget");
    const auto& row = menu_row(rounds.size());
    bool result = true;
    for (const auto& entry : row) {
      for (int side = 0; side < 2 && result; ++side) {
        bool x_in_a = side == 0;
        int n = x_in_a ? static_cast<int>(cfg.a.size()) : static_cast<int>(cfg.b.size());
        int n_other = x_in_a ? static_cast<int>(cfg.b.size()) : static_cast<int>(cfg.a.size());
        for (int x = 0; x < n && result; ++x) {
          bool found = false;
          for (int y = 0; y < n_other; ++y) {
            PlayedRound r{x_in_a ? x : y, x_in_a ? y : x, entry.factor, entry.k};
            rounds.push_back(r);
            bool ok = check(rounds) && ii_wins(rounds, clock - 1);
            rounds.pop_back();
            if (ok) {
              found = true;
              break;
            }
          }
          if (!found) result = false;
        }
      }
      if (!result) break;
    }
    memo[key] = result;
    return result;
  }
};

void validate_function_config(const FunctionGameConfig& cfg) {
  require_multiplicative_pair(cfg.a, cfg.b);
  if (cfg.base_factor < Rational(1))
    fail("BadPrecision", "base factor " + cfg.base_factor.str() + " below 1");
  if (cfg.menus.empty()) fail("BadMenu", "no menu rows");
  for (const auto& row : cfg.menus) {
    if (row.empty()) fail("BadMenu", "empty menu row");
    for (const auto& e : row) {
      if (e.k == 0) fail("BadMenu", "menu entry with k = 0");
      if (e.factor <= cfg.base_factor)
        fail("BadMenu", "menu factor " + e.factor.str() + " not above the base " +
                            cfg.base_factor.str());
    }
  }
  for (const auto& r : cfg.start) {
    if (r.k == 0) fail("BadMenu", "start round with k = 0");
    if (r.factor <= cfg.base_factor)
      fail("BadMenu", "start factor " + r.factor.str() + " not above the base");
  }
  std::vector<std::pair<int, int>> idx;
  for (const auto& r : cfg.start) idx.push_back({r.a_idx, r.b_idx});
  require_pair_indices(cfg.a, cfg.b, idx);
}

}  // namespace

GameResult solve_function_game(const FunctionGameConfig& cfg) {
  validate_function_config(cfg);
  FunctionSolver solver{cfg};
  GameResult res;
  std::vector<PlayedRound> pos = [&] {
    std::vector<PlayedRound> rounds;
    for (const auto& r : cfg.start) rounds.push_back({r.a_idx, r.b_idx, r.factor, r.k});
    return rounds;
  }();
  if (!solver.check(pos)) {
    res.winner = Player::I;
    res.explored = 1;
    res.strategy_complete = true;
    return res;
  }
  res.winner = solver.ii_wins(pos, cfg.clock) ? Player::II : Player::I;
  res.explored = solver.explored;

  // Materialize the winning side's moves over positions reachable under the
  // strategy itself.
  bool complete = true;
  std::map<std::string, std::string> strat;
  std::function<void(std::vector<PlayedRound>&, std::uint64_t)> walk =
      [&](std::vector<PlayedRound>& rounds, std::uint64_t clock) {
        if (!complete || clock == 0) return;
        std::string pos_s = solver.pos_key(rounds, clock);
        const auto& row = solver.menu_row(rounds.size());
        if (res.winner == Player::II) {
          for (const auto& entry : row) {
            for (int side = 0; side < 2; ++side) {
              bool x_in_a = side == 0;
              int n = x_in_a ? static_cast<int>(cfg.a.size())
                             : static_cast<int>(cfg.b.size());
              int n_other = x_in_a ? static_cast<int>(cfg.b.size())
                                   : static_cast<int>(cfg.a.size());
              for (int x = 0; x < n; ++x) {
                std::string move = (x_in_a ? "A:" + cfg.a.label(x) : "B:" + cfg.b.label(x)) +
                                   "*" + entry.factor.str() + "*" + std::to_string(entry.k);
                for (int y = 0; y < n_other; ++y) {
                  PlayedRound r{x_in_a ? x : y, x_in_a ? y : x, entry.factor, entry.k};
                  rounds.push_back(r);
                  bool ok = solver.check(rounds) && solver.ii_wins(rounds, clock - 1);
                  if (ok) {
                    std::string key = pos_s + ";I=" + move;
                    if (strat.size() >= kStrategyBudget) {
                      complete = false;
                    } else if (!strat.count(key)) {
                      strat[key] = x_in_a ? "B:" + cfg.b.label(y) : "A:" + cfg.a.label(y);
                      walk(rounds, clock - 1);
                    }
                    rounds.pop_back();
                    break;
                  }
                  rounds.pop_back();
                }
                if (!complete) return;
              }
            }
          }
        } else {
          if (solver.ii_wins(rounds, clock)) return;
          for (const auto& entry : row) {
            for (int side = 0; side < 2; ++side) {
              bool x_in_a = side == 0;
              int n = x_in_a ? static_cast<int>(cfg.a.size())
                             : static_cast<int>(cfg.b.size());
              int n_other = x_in_a ? static_cast<int>(cfg.b.size())
                                   : static_cast<int>(cfg.a.size());
              for (int x = 0; x < n; ++x) {
                bool all_lose = true;
                for (int y = 0; y < n_other && all_lose; ++y) {
                  PlayedRound r{x_in_a ? x : y, x_in_a ? y : x, entry.factor, entry.k};
                  rounds.push_back(r);
                  if (solver.check(rounds) && solver.ii_wins(rounds, clock - 1))
                    all_lose = false;
                  rounds.pop_back();
                }
                if (!all_lose) continue;
                std::string move = (x_in_a ? "A:" + cfg.a.label(x) : "B:" + cfg.b.label(x)) +
                                   "*" + entry.factor.str() + "*" + std::to_string(entry.k);
                if (strat.size() >= kStrategyBudget) {
                  complete = false;
                  return;
                }
                strat[pos_s] = move;
                for (int y = 0; y < n_other; ++y) {
                  PlayedRound r{x_in_a ? x : y, x_in_a ? y : x, entry.factor, entry.k};
                  rounds.push_back(r);
                  if (solver.check(rounds)) walk(rounds, clock - 1);
                  rounds.pop_back();
                  if (!complete) return;
                }
                return;
              }
            }
          }
        }
      };
  walk(pos, cfg.clock);
  if (complete) {
    res.strategy = std::move(strat);
    res.strategy_complete = true;
  }
  return res;
}

// ── Saturated function games via the dominated-menu reduction ───────────────

FunctionGameTable FunctionGameTable::build(const FunctionGameConfig& cfg,
                                           RelationGameTable::Options opt) {
  validate_function_config(cfg);
  if (!cfg.a.is_metric())
    fail("UnsupportedVocabulary", "saturated function analysis needs metric carriers");

  // The rows every dynamic round can draw from must agree and contain the
  // entry combining the least factor with the largest k; playing it dominates
  // every other I choice, which collapses positions to pair sets.
  std::size_t first_dynamic = std::min(cfg.start.size(), cfg.menus.size() - 1);
  for (std::size_t i = first_dynamic + 1; i < cfg.menus.size(); ++i) {
    if (cfg.menus[i] != cfg.menus[first_dynamic]) {
      bool same = cfg.menus[i].size() == cfg.menus[first_dynamic].size();
      for (std::size_t e = 0; same && e < cfg.menus[i].size(); ++e)
        same = cfg.menus[i][e].factor == cfg.menus[first_dynamic][e].factor &&
               cfg.menus[i][e].k == cfg.menus[first_dynamic][e].k;
      if (!same) fail("MenuNotUniform", "saturated analysis needs one menu row");
    }
  }
  const auto& row = cfg.menus[first_dynamic];
  Rational s_min = row[0].factor;
  unsigned k_max = row[0].k;
  for (const auto& e : row) {
    s_min = min(s_min, e.factor);
    k_max = std::max(k_max, e.k);
  }
  bool dominated = false;
  for (const auto& e : row)
    if (e.factor == s_min && e.k == k_max) dominated = true;
  if (!dominated)
    fail("MenuNotDominated",
         "menu lacks the entry pairing factor " + s_min.str() + " with k " +
             std::to_string(k_max));

  const auto& ma = cfg.a.metric();
  const auto& mb = cfg.b.metric();
  const int na = static_cast<int>(ma.size()), nb = static_cast<int>(mb.size());
  const unsigned bits = static_cast<unsigned>(na * nb);
  if (bits > opt.max_bits)
    fail("StateSpaceTooLarge", "pair space 2^" + std::to_string(bits));

  std::vector<PlayedRound> starts;
  for (const auto& r : cfg.start) starts.push_back({r.a_idx, r.b_idx, r.factor, r.k});
  bool start_ok = function_win_check(cfg.a, cfg.b, starts);

  // Pair-versus-start constraints come from rounds up to the start's own
  // index; pair-versus-pair constraints additionally see the dominating entry.
  auto edge_under_prefix = [&](const Rational& da, const Rational& db,
                               std::size_t prefix_len, bool with_dom) {
    for (std::size_t i = 0; i < prefix_len; ++i) {
      if (!metric_round_pair_ok_sym(da, db, starts[i].factor, starts[i].k)) return false;
    }
    if (with_dom && !metric_round_pair_ok_sym(da, db, s_min, k_max)) return false;
    return true;
  };

  std::vector<char> base_ok(bits, 1);
  std::vector<std::uint32_t> adj(bits, 0);
  for (unsigned v = 0; v < bits; ++v) {
    int vi = static_cast<int>(v) / nb, vj = static_cast<int>(v) % nb;
    for (std::size_t sidx = 0; sidx < starts.size(); ++sidx) {
      Rational da = ma.d(vi, starts[sidx].a_idx);
      Rational db = mb.d(vj, starts[sidx].b_idx);
      if (!edge_under_prefix(da, db, sidx + 1, false)) base_ok[v] = 0;
    }
    for (unsigned u = 0; u < bits; ++u) {
      int ui = static_cast<int>(u) / nb, uj = static_cast<int>(u) % nb;
      if (edge_under_prefix(ma.d(vi, ui), mb.d(vj, uj), starts.size(), true))
        adj[v] |= std::uint32_t(1) << u;
    }
  }

  const std::size_t count = std::size_t(1) << bits;
  std::vector<char> pass(count, 0);
  pass[0] = start_ok ? 1 : 0;
  for (std::size_t s = 1; s < count; ++s) {
    unsigned v = static_cast<unsigned>(__builtin_ctzll(s));
    std::size_t rest = s & (s - 1);
    pass[s] = pass[rest] && base_ok[v] &&
              ((s & ~(std::uint64_t(adj[v]) | (std::uint64_t(1) << v))) == 0);
  }
  std::vector<std::uint64_t> passing((count + 63) / 64, 0);
  for (std::size_t s = 0; s < count; ++s)
    if (pass[s]) set_bit(passing, static_cast<PairMask>(s));

  FunctionGameTable t;
  t.table_ = RelationGameTable::build_from_sets(na, nb, start_ok, passing, opt);
  return t;
}

// ── Interactive play ────────────────────────────────────────────────────────

namespace {

std::string next_token_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r\n");
    return line.substr(b, e - b + 1);
  }
  fail("Abort", "move input exhausted before the game ended");
}

struct ParsedMove {
  bool in_a = true;
  int idx = 0;
  Rational factor;
  unsigned k = 0;
  bool has_params = false;
};

ParsedMove parse_move(const std::string& text, const Structure& a, const Structure& b) {
  std::istringstream ss(text);
  std::string head;
  ss >> head;
  if (head.size() < 3 || (head[0] != 'A' && head[0] != 'B') || head[1] != ':')
    fail("IllegalMove", "expected A:<label> or B:<label>, got \"" + text + "\"");
  ParsedMove m;
  m.in_a = head[0] == 'A';
  std::string label = head.substr(2);
  int idx = m.in_a ? a.index_of(label) : b.index_of(label);
  if (idx < 0)
    fail("IllegalMove", "no point labelled \"" + label + "\" on side " +
                            std::string(1, head[0]));
  m.idx = idx;
  std::string fs, ks;
  if (ss >> fs) {
    if (!(ss >> ks)) fail("IllegalMove", "factor given without sharpness k");
    auto f = Rational::parse(fs);
    if (!f) fail("IllegalMove", "unreadable factor \"" + fs + "\"");
    m.factor = *f;
    char* end = nullptr;
    long kv = std::strtol(ks.c_str(), &end, 10);
    if (!end || *end != '\0' || kv <= 0) fail("IllegalMove", "unreadable k \"" + ks + "\"");
    m.k = static_cast<unsigned>(kv);
    m.has_params = true;
  }
  return m;
}

void say(std::ostream* echo, const std::string& line) {
  if (echo) (*echo) << line << "\n";
}

}  // namespace

Json Transcript::to_json() const {
  Json j;
  j["winner"] = player_name(winner);
  j["events"] = events;
  return j;
}

Transcript play_interactive(const PlayConfig& cfg, std::istream& moves, std::ostream* echo) {
  Transcript out;
  if (std::holds_alternative<RelationGameConfig>(cfg.game)) {
    const auto& g = std::get<RelationGameConfig>(cfg.game);
    RelationGameTable::Options opt;
    opt.ball = g.ball_menu;
    RelationGameTable table = RelationGameTable::build(g.a, g.b, g.eps, g.start, opt);
    PairMask mask = 0;
    std::uint64_t clock = g.clock;
    say(echo, "relation game, clock " + std::to_string(clock) + ", slack " + g.eps.str());
    while (clock > 0) {
      Json ev;
      ev["round"] = static_cast<std::uint64_t>(g.clock - clock + 1);
      bool x_in_a;
      int x;
      if (cfg.human == Player::I) {
        ParsedMove m = parse_move(next_token_line(moves), g.a, g.b);
        if (m.has_params) fail("IllegalMove", "relation moves carry no parameters");
        x_in_a = m.in_a;
        x = m.idx;
      } else {
        auto mv = table.winning_i_move(mask, clock);
        if (!mv) mv = std::make_pair(true, 0);  // II wins regardless; keep playing
        x_in_a = mv->first;
        x = mv->second;
      }
      std::string xs = (x_in_a ? "A:" + g.a.label(x) : "B:" + g.b.label(x));
      ev["I"] = xs;
      say(echo, "I plays " + xs);

      int y;
      if (cfg.human == Player::II) {
        ParsedMove m = parse_move(next_token_line(moves), g.a, g.b);
        if (m.has_params) fail("IllegalMove", "relation moves carry no parameters");
        if (m.in_a == x_in_a)
          fail("IllegalMove", "reply must come from the other structure");
        y = m.idx;
      } else {
        auto reply = table.best_reply(mask, clock - 1, x_in_a, x);
        y = reply ? *reply : 0;
      }
      std::string ys = (x_in_a ? "B:" + g.b.label(y) : "A:" + g.a.label(y));
      ev["II"] = ys;
      say(echo, "II plays " + ys);
      mask |= PairMask(1) << (x_in_a ? table.bit(x, y) : table.bit(y, x));
      out.events.push_back(ev);
      --clock;
    }
    bool ok = table.ii_wins(mask, 0);
    out.winner = ok ? Player::II : Player::I;
    say(echo, "winner: " + player_name(out.winner));
    return out;
  }

  const auto& g = std::get<FunctionGameConfig>(cfg.game);
  validate_function_config(g);
  std::vector<PlayedRound> rounds;
  for (const auto& r : g.start) rounds.push_back({r.a_idx, r.b_idx, r.factor, r.k});
  std::uint64_t clock = g.clock;
  say(echo, "function game, clock " + std::to_string(clock) + ", base factor " +
                g.base_factor.str());
  auto solve_from = [&](std::uint64_t c) {
    FunctionGameConfig sub = g;
    sub.clock = c;
    sub.start.clear();
    for (const auto& r : rounds)
      sub.start.push_back({r.a_idx, r.b_idx, r.factor, r.k});
    return solve_function_game(sub);
  };
  while (clock > 0) {
    Json ev;
    ev["round"] = static_cast<std::uint64_t>(g.clock - clock + 1);
    const auto& row = g.menus[std::min(rounds.size(), g.menus.size() - 1)];
    bool x_in_a;
    int x;
    Rational factor;
    unsigned k;
    if (cfg.human == Player::I) {
      ParsedMove m = parse_move(next_token_line(moves), g.a, g.b);
      if (!m.has_params) fail("IllegalMove", "player I moves need a factor and k");
      bool in_menu = false;
      for (const auto& e : row)
        if (e.factor == m.factor && e.k == m.k) in_menu = true;
      if (!in_menu)
        fail("IllegalMove", "(" + m.factor.str() + ", " + std::to_string(m.k) +
                                ") is not on this round's menu");
      x_in_a = m.in_a;
      x = m.idx;
      factor = m.factor;
      k = m.k;
    } else {
      // Search the menu for a winning move; otherwise play the first entry.
      x_in_a = true;
      x = 0;
      factor = row[0].factor;
      k = row[0].k;
      bool found = false;
      for (const auto& e : row) {
        for (int side = 0; side < 2 && !found; ++side) {
          bool ia = side == 0;
          int n = ia ? static_cast<int>(g.a.size()) : static_cast<int>(g.b.size());
          int n_other = ia ? static_cast<int>(g.b.size()) : static_cast<int>(g.a.size());
          for (int cand = 0; cand < n && !found; ++cand) {
            bool all_lose = true;
            for (int y2 = 0; y2 < n_other && all_lose; ++y2) {
              rounds.push_back({ia ? cand : y2, ia ? y2 : cand, e.factor, e.k});
              bool ok = function_win_check(g.a, g.b, rounds, g.banach);
              if (ok) {
                auto sub = solve_from(clock - 1);
                ok = sub.winner == Player::II;
              }
              rounds.pop_back();
              if (ok) all_lose = false;
            }
            if (all_lose) {
              x_in_a = ia;
              x = cand;
              factor = e.factor;
              k = e.k;
              found = true;
            }
          }
        }
        if (found) break;
      }
    }
    std::string xs = (x_in_a ? "A:" + g.a.label(x) : "B:" + g.b.label(x)) + " (" +
                     factor.str() + ", " + std::to_string(k) + ")";
    ev["I"] = xs;
    say(echo, "I plays " + xs);

    int y;
    if (cfg.human == Player::II) {
      ParsedMove m = parse_move(next_token_line(moves), g.a, g.b);
      if (m.has_params) fail("IllegalMove", "player II moves carry no parameters");
      if (m.in_a == x_in_a) fail("IllegalMove", "reply must come from the other structure");
      y = m.idx;
    } else {
      y = 0;
      bool found = false;
      int n_other = x_in_a ? static_cast<int>(g.b.size()) : static_cast<int>(g.a.size());
      for (int cand = 0; cand < n_other && !found; ++cand) {
        rounds.push_back({x_in_a ? x : cand, x_in_a ? cand : x, factor, k});
        bool ok = function_win_check(g.a, g.b, rounds, g.banach);
        if (ok) {
          auto sub = solve_from(clock - 1);
          ok = sub.winner == Player::II;
        }
        rounds.pop_back();
        if (ok) {
          y = cand;
          found = true;
        }
      }
    }
    std::string ys = (x_in_a ? "B:" + g.b.label(y) : "A:" + g.a.label(y));
    ev["II"] = ys;
    say(echo, "II plays " + ys);
    rounds.push_back({x_in_a ? x : y, x_in_a ? y : x, factor, k});
    out.events.push_back(ev);
    --clock;
  }
  out.winner = function_win_check(g.a, g.b, rounds, g.banach) ? Player::II : Player::I;
  say(echo, "winner: " + player_name(out.winner));
  return out;
}

}  // namespace efg
