#include "efg/distances.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "efg/errors.hpp"

namespace efg {
namespace {

void require_indices(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                     const std::vector<std::pair<int, int>>& pairs) {
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= static_cast<int>(a.size()) || j < 0 || j >= static_cast<int>(b.size()))
      fail("BadIndex", "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
}

void require_coverage(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                      const std::vector<std::pair<int, int>>& pairs) {
  std::vector<char> ca(a.size(), 0), cb(b.size(), 0);
  for (auto [i, j] : pairs) {
    ca[i] = 1;
    cb[j] = 1;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ca[i]) fail("BadCorrespondence", "left point " + a.labels[i] + " uncovered");
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!cb[j]) fail("BadCorrespondence", "right point " + b.labels[j] + " uncovered");
}

Rational pairs_distortion(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                          const std::vector<std::pair<int, int>>& pairs) {
  Rational dis(0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < pairs.size(); ++q) {
      Rational gap = abs(a.d(pairs[p].first, pairs[q].first) -
                         b.d(pairs[p].second, pairs[q].second));
      dis = max(dis, gap);
    }
  }
  return dis;
}

}  // namespace

Rational correspondence_distortion(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                   const std::vector<std::pair<int, int>>& pairs) {
  if (pairs.empty()) fail("BadCorrespondence", "empty pair list");
  require_indices(a, b, pairs);
  require_coverage(a, b, pairs);
  return pairs_distortion(a, b, pairs);
}

GhResult gh_bruteforce(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  if (na > 10 || nb > 10) fail("StateSpaceTooLarge", "carriers beyond the exhaustive range");

  // Every correspondence assigns each left point a nonempty right subset; the
  // subsets must cover the right side. Distortion grows monotonically with
  // the partial choice, so a partial value at or past the best prunes.
  std::optional<Rational> best;
  std::vector<std::uint32_t> best_rows(na, 0);
  std::vector<std::uint32_t> rows(na, 0);

  auto partial_dis = [&](int upto) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= upto; ++i) {
      for (int j = 0; j < nb; ++j)
        if ((rows[i] >> j) & 1u) pairs.push_back({i, j});
    }
    return pairs_distortion(a, b, pairs);
  };

  std::function<void(int, std::uint32_t)> rec = [&](int i, std::uint32_t covered) {
    if (best && partial_dis(i - 1) >= *best) return;
    if (i == na) {
      if (covered != (std::uint32_t(1) << nb) - 1) return;
      Rational dis = partial_dis(na - 1);
      if (!best || dis < *best) {
        best = dis;
        best_rows = rows;
      }
      return;
    }
    for (std::uint32_t s = 1; s < (std::uint32_t(1) << nb); ++s) {
      rows[i] = s;
      rec(i + 1, covered | s);
    }
    rows[i] = 0;
  };
  rec(0, 0);

  GhResult res;
  res.distance = *best / Rational(2);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j)
      if ((best_rows[i] >> j) & 1u) res.witness.push_back({i, j});
  }
  return res;
}

LipschitzResult lipschitz_bruteforce(const FiniteMetricSpace& a,
                                     const FiniteMetricSpace& b) {
  LipschitzResult res;
  if (a.size() != b.size()) return res;
  const int n = static_cast<int>(a.size());
  if (n > 10) fail("StateSpaceTooLarge", "carriers beyond the exhaustive range");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Rational> best;
  do {
    Rational worst(1);
    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Rational da = a.d(i, j), db = b.d(perm[i], perm[j]);
        if (da.is_zero() || db.is_zero()) {
          if (da != db) {
            feasible = false;
            break;
          }
          continue;
        }
        worst = max(worst, max(da / db, db / da));
      }
    }
    if (feasible && (!best || worst < *best)) {
      best = worst;
      res.bijection = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best) {
    res.exists = true;
    res.factor = *best;
  }
  return res;
}

Rational hausdorff_distance(const FiniteMetricSpace& m, const std::vector<int>& s1,
                            const std::vector<int>& s2) {
  if (s1.empty() || s2.empty()) fail("EmptySet", "set distance needs nonempty sets");
  for (int i : s1)
    if (i < 0 || i >= static_cast<int>(m.size())) fail("BadIndex", "set entry");
  for (int i : s2)
    if (i < 0 || i >= static_cast<int>(m.size())) fail("BadIndex", "set entry");
  Rational worst(0);
  auto one_sided = [&](const std::vector<int>& from, const std::vector<int>& to) {
    for (int x : from) {
      std::optional<Rational> nearest;
      for (int y : to) {
        Rational d = m.d(x, y);
        if (!nearest || d < *nearest) nearest = d;
      }
      worst = max(worst, *nearest);
    }
  };
  one_sided(s1, s2);
  one_sided(s2, s1);
  return worst;
}

GlueResult glue_spaces(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                       const std::vector<std::pair<int, int>>& pairs, const Rational& eps) {
  if (eps.is_negative()) fail("BadPrecision", "negative separation " + eps.str());
  if (pairs.empty()) fail("BadCorrespondence", "empty pair list");
  require_indices(a, b, pairs);
  require_coverage(a, b, pairs);
  const Rational two_eps = Rational(2) * eps;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < pairs.size(); ++q) {
      Rational da = a.d(pairs[p].first, pairs[q].first);
      Rational db = b.d(pairs[p].second, pairs[q].second);
      if (abs(da - db) > two_eps)
        fail("DistortionTooLarge",
             "(" + a.labels[pairs[p].first] + ", " + a.labels[pairs[q].first] + ", " +
                 b.labels[pairs[p].second] + ", " + b.labels[pairs[q].second] + "): |" +
                 da.str() + " - " + db.str() + "| > 2 * " + eps.str());
    }
  }

  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  const int n = na + nb;
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) d[i][j] = a.d(i, j);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) d[na + i][na + j] = b.d(i, j);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      std::optional<Rational> cross;
      for (auto [p, q] : pairs) {
        Rational via = a.d(i, p) + eps + b.d(q, j);
        if (!cross || via < *cross) cross = via;
      }
      d[i][na + j] = *cross;
      d[na + j][i] = *cross;
    }
  }

  // Collapse zero gaps (possible only at eps = 0), keeping the first
  // representative of each class.
  std::vector<int> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (d[i][j].is_zero()) {
        rep[i] = rep[j];
        break;
      }
    }
  }
  std::vector<int> keep;
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    if (rep[i] == i) {
      pos[i] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  }

  GlueResult res;
  std::set<std::string> used;
  for (int idx : keep) {
    std::string label = idx < na ? a.labels[idx] : b.labels[idx - na];
    while (used.count(label)) label += "'";
    used.insert(label);
    res.space.labels.push_back(label);
  }
  res.space.dist.assign(keep.size(), std::vector<Rational>(keep.size(), Rational(0)));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) res.space.dist[i][j] = d[keep[i]][keep[j]];
  for (int i = 0; i < na; ++i) res.embed_a.push_back(pos[rep[i]]);
  for (int j = 0; j < nb; ++j) res.embed_b.push_back(pos[rep[na + j]]);
  validate_metric(res.space);
  return res;
}

namespace {

// Shared bracketing loop: f is monotone, f(lo) false, f(hi) true, and f can
// only flip at a breakpoint. Narrows to the resolution, then keeps halving
// until one breakpoint remains and snaps to it.
GameDistance bracket_and_snap(const std::function<bool(const Rational&)>& ii_wins_at,
                              const std::vector<Rational>& bps, Rational lo, Rational hi,
                              const Rational& resolution) {
  auto inside = [&](const Rational& l, const Rational& h) {
    std::vector<Rational> out;
    for (const auto& x : bps)
      if (x > l && x <= h) out.push_back(x);
    return out;
  };
  while (hi - lo > resolution || inside(lo, hi).size() > 1) {
    Rational mid = midpoint(lo, hi);
    if (ii_wins_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  GameDistance res;
  auto last = inside(lo, hi);
  if (last.size() == 1) {
    res.lo = last[0];
    res.hi = last[0];
    res.snapped = true;
  } else {
    res.lo = lo;
    res.hi = hi;
  }
  return res;
}

}  // namespace

GameDistance game_distance(const FiniteMetricSpace& ma, const FiniteMetricSpace& mb,
                           Precision::Kind kind, const Rational& resolution) {
  if (!resolution.is_positive())
    fail("BadPrecision", "resolution " + resolution.str() + " must be positive");

  if (kind == Precision::Kind::Additive) {
    Structure a = make_metric_structure(ma, Vocabulary::MetricCorr);
    Structure b = make_metric_structure(mb, Vocabulary::MetricCorr);
    auto ii_wins_all_at = [&](const Rational& e) {
      return RelationGameTable::build(a, b, e, {}).ii_wins_all(0);
    };
    if (ii_wins_all_at(Rational(0))) {
      GameDistance res;
      res.lo = Rational(0);
      res.hi = Rational(0);
      res.snapped = true;
      return res;
    }
    std::vector<Rational> bps = distance_breakpoints(a, b, Precision::Kind::Additive);
    GameDistance res =
        bracket_and_snap(ii_wins_all_at, bps, Rational(0), bps.back(), resolution);
    res.kind = kind;
    return res;
  }

  GameDistance res;
  res.kind = kind;
  if (ma.size() != mb.size()) {
    res.bounded = false;
    return res;
  }
  Structure a = make_metric_structure(ma, Vocabulary::MetricIso);
  Structure b = make_metric_structure(mb, Vocabulary::MetricIso);
  std::vector<Rational> grid = distance_breakpoints(a, b, Precision::Kind::Multiplicative);
  const unsigned kstar = good_saturation_bound(a, b);
  auto ii_wins_all_at = [&](const Rational& s) {
    // Menu factor strictly above the base but below the next ratio the
    // carriers can realize, so the winner matches the closed threshold at s.
    Rational rep;
    bool have = false;
    for (const auto& g : grid) {
      if (g > s) {
        rep = midpoint(s, g);
        have = true;
        break;
      }
    }
    if (!have) rep = s + Rational(1);
    FunctionGameConfig cfg;
    cfg.a = a;
    cfg.b = b;
    cfg.base_factor = s;
    cfg.menus = {{MenuEntry{rep, kstar}}};
    return FunctionGameTable::build(cfg).ii_wins_all();
  };
  if (ii_wins_all_at(Rational(1))) {
    res.lo = Rational(1);
    res.hi = Rational(1);
    res.snapped = true;
    return res;
  }
  Rational top = grid.back();
  if (!ii_wins_all_at(top)) fail("Internal", "no winning factor on the ratio grid");
  GameDistance out = bracket_and_snap(ii_wins_all_at, grid, Rational(1), top, resolution);
  out.kind = kind;
  out.bounded = true;
  return out;
}

std::vector<std::vector<std::pair<int, int>>> correspondences_within(
    const FiniteMetricSpace& a, const FiniteMetricSpace& b, const Rational& cap) {
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  if (na > 6 || nb > 6) fail("StateSpaceTooLarge", "carriers beyond the exhaustive range");
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::uint32_t> rows(na, 0);
  std::vector<std::pair<int, int>> pairs;

  std::function<bool(int)> row_ok = [&](int i) {
    // New pairs from row i against everything chosen so far.
    std::size_t first_new = pairs.size();
    for (int j = 0; j < nb; ++j)
      if ((rows[i] >> j) & 1u) pairs.push_back({i, j});
    for (std::size_t p = first_new; p < pairs.size(); ++p) {
      for (std::size_t q = 0; q < p; ++q) {
        if (abs(a.d(pairs[p].first, pairs[q].first) -
                b.d(pairs[p].second, pairs[q].second)) > cap) {
          pairs.resize(first_new);
          return false;
        }
      }
    }
    return true;
  };

  std::function<void(int, std::uint32_t)> rec = [&](int i, std::uint32_t covered) {
    if (i == na) {
      if (covered == (std::uint32_t(1) << nb) - 1) out.push_back(pairs);
      return;
    }
    for (std::uint32_t s = 1; s < (std::uint32_t(1) << nb); ++s) {
      rows[i] = s;
      std::size_t mark = pairs.size();
      if (row_ok(i)) {
        rec(i + 1, covered | s);
        pairs.resize(mark);
      }
    }
    rows[i] = 0;
  };
  rec(0, 0);
  return out;
}

}  // namespace efg
