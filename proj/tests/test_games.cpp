#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "efg/errors.hpp"
#include "efg/scott.hpp"

using namespace efg;

namespace {

FiniteMetricSpace space_from(std::vector<std::vector<long>> upper) {
  int n = static_cast<int>(upper.size()) + 1;
  FiniteMetricSpace m;
  for (int i = 0; i < n; ++i) m.labels.push_back(std::string(1, static_cast<char>('a' + i)));
  m.dist.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.dist[i][j] = m.dist[j][i] = Rational(upper[i][j - i - 1]);
  return m;
}

Structure metric(std::vector<std::vector<long>> upper,
                 Vocabulary v = Vocabulary::MetricCorr) {
  return make_metric_structure(space_from(std::move(upper)), v);
}

const Structure kOnePt = metric({});
const Structure kTwo1 = metric({{1}});
const Structure kTwo2 = metric({{2}});
const Structure kLine = metric({{1, 2}, {1}});      // a-b-c path
const Structure kTriangle = metric({{1, 1}, {1}});  // equilateral

// Transfer reading of the relation survival condition: every distance atom
// with a realized threshold moves between the structures with doubled slack.
bool transfer_oracle(const Structure& a, const Structure& b,
                     const std::vector<std::pair<int, int>>& pairs, const Rational& eps) {
  std::vector<Rational> grid;
  for (const Structure* s : {&a, &b})
    for (int i = 0; i < s->size(); ++i)
      for (int j = 0; j < s->size(); ++j) grid.push_back(s->metric().d(i, j));
  Precision p = Precision::additive(eps);
  for (std::size_t x = 0; x < pairs.size(); ++x)
    for (std::size_t y = 0; y < pairs.size(); ++y) {
      Assignment in_a{{"u", pairs[x].first}, {"v", pairs[y].first}};
      Assignment in_b{{"u", pairs[x].second}, {"v", pairs[y].second}};
      for (const Rational& r : grid)
        for (bool upper : {true, false}) {
          AtomicFormula at = upper ? AtomicFormula::dist_leq(r, "u", "v")
                                   : AtomicFormula::dist_geq(r, "u", "v");
          AtomicFormula widened = appr(at, p);
          if (eval_atomic(a, at, in_a) && !eval_atomic(b, widened, in_b)) return false;
          if (eval_atomic(b, at, in_b) && !eval_atomic(a, widened, in_a)) return false;
        }
    }
  return true;
}

// Plain minimax over explicit pair lists; the survival condition is only
// consulted on the final position.
bool ref_relation(const Structure& a, const Structure& b,
                  std::vector<std::pair<int, int>>& pairs, const Rational& eps, int clock) {
  if (clock == 0) return relation_win_check(a, b, pairs, eps);
  for (int side = 0; side < 2; ++side) {
    int n = side == 0 ? a.size() : b.size();
    int n_other = side == 0 ? b.size() : a.size();
    for (int x = 0; x < n; ++x) {
      bool found = false;
      for (int y = 0; y < n_other && !found; ++y) {
        pairs.push_back(side == 0 ? std::make_pair(x, y) : std::make_pair(y, x));
        found = ref_relation(a, b, pairs, eps, clock - 1);
        pairs.pop_back();
      }
      if (!found) return false;
    }
  }
  return true;
}

bool ref_function(const FunctionGameConfig& cfg, std::vector<PlayedRound>& rounds,
                  int clock) {
  if (clock == 0) return function_win_check(cfg.a, cfg.b, rounds, cfg.banach);
  const auto& row = cfg.menus[std::min(rounds.size(), cfg.menus.size() - 1)];
  for (const auto& entry : row)
    for (int side = 0; side < 2; ++side) {
      int n = side == 0 ? cfg.a.size() : cfg.b.size();
      int n_other = side == 0 ? cfg.b.size() : cfg.a.size();
      for (int x = 0; x < n; ++x) {
        bool found = false;
        for (int y = 0; y < n_other && !found; ++y) {
          rounds.push_back(side == 0 ? PlayedRound{x, y, entry.factor, entry.k}
                                     : PlayedRound{y, x, entry.factor, entry.k});
          found = ref_function(cfg, rounds, clock - 1);
          rounds.pop_back();
        }
        if (!found) return false;
      }
    }
  return true;
}

}  // namespace

TEST_CASE("relation survival equals atomic transfer with doubled slack") {
  std::vector<const Structure*> pool = {&kOnePt, &kTwo1, &kTwo2, &kLine, &kTriangle};
  std::vector<Rational> slacks = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  int agreements = 0;
  for (const Structure* pa : pool)
    for (const Structure* pb : pool)
      for (const Rational& eps : slacks) {
        // every pair list of length <= 2 over the carriers
        std::vector<std::vector<std::pair<int, int>>> lists = {{}};
        for (int i = 0; i < pa->size(); ++i)
          for (int j = 0; j < pb->size(); ++j) {
            lists.push_back({{i, j}});
            for (int i2 = 0; i2 < pa->size(); ++i2)
              for (int j2 = 0; j2 < pb->size(); ++j2)
                lists.push_back({{i, j}, {i2, j2}});
          }
        for (const auto& pairs : lists) {
          bool lhs = relation_win_check(*pa, *pb, pairs, eps);
          bool rhs = transfer_oracle(*pa, *pb, pairs, eps);
          CHECK(lhs == rhs);
          agreements += lhs == rhs;
        }
      }
  CHECK(agreements > 1000);
}

TEST_CASE("relation solver matches plain minimax") {
  std::vector<const Structure*> pool = {&kOnePt, &kTwo1, &kTwo2, &kLine, &kTriangle};
  std::vector<Rational> slacks = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  for (const Structure* pa : pool)
    for (const Structure* pb : pool)
      for (const Rational& eps : slacks) {
        std::vector<std::vector<std::pair<int, int>>> starts = {{}, {{0, 0}}};
        if (pa->size() > 1) starts.push_back({{1, 0}});
        for (const auto& start : starts)
          for (int clock = 0; clock <= 3; ++clock) {
            RelationGameConfig cfg;
            cfg.a = *pa;
            cfg.b = *pb;
            cfg.eps = eps;
            cfg.clock = static_cast<std::uint64_t>(clock);
            cfg.start = start;
            GameResult got = solve_relation_game(cfg);
            std::vector<std::pair<int, int>> pairs = start;
            bool ii = ref_relation(*pa, *pb, pairs, eps, clock);
            CHECK(got.winner == (ii ? Player::II : Player::I));
          }
      }
}

TEST_CASE("winners freeze at the saturation clock") {
  std::vector<const Structure*> pool = {&kTwo1, &kTwo2, &kLine, &kTriangle};
  for (const Structure* pa : pool)
    for (const Structure* pb : pool)
      for (const Rational& eps : {Rational(0), Rational(1, 2)}) {
        auto table = RelationGameTable::build(*pa, *pb, eps, {}, {});
        std::uint64_t sat = relation_saturation_clock(*pa, *pb);
        CHECK(table.stabilization() <= sat);
        CHECK((table.winner_at(sat) == Player::II) == table.ii_wins_all(0));
        CHECK(table.winner_at(sat) == table.winner_at(sat + 17));
      }
}

TEST_CASE("watershed of the two-point stretch") {
  Watershed tight = watershed_relation(kTwo1, kTwo2, Rational(2, 5));
  CHECK(!tight.ii_wins_all);
  CHECK(tight.value == 2);
  Watershed loose = watershed_relation(kTwo1, kTwo2, Rational(1, 2));
  CHECK(loose.ii_wins_all);
}

TEST_CASE("watershed from a pinned start on the four-point path") {
  // p-q-r-s consecutive at distance 1; d(p,s) = 3
  Structure path = metric({{1, 2, 3}, {1, 2}, {1}});
  // starting from (q, p): player I wins in one round by playing s in the
  // right-hand copy, since no point sits at distance 3 from q
  Watershed w = watershed_relation(path, path, Rational(0), {{1, 0}});
  CHECK(!w.ii_wins_all);
  CHECK(w.value == 1);
  // the aligned start survives every clock
  Watershed aligned = watershed_relation(path, path, Rational(0), {{1, 1}});
  CHECK(aligned.ii_wins_all);
}

TEST_CASE("function survival equals bounded-fact transfer") {
  std::vector<const Structure*> pool = {&kTwo1, &kTwo2, &kLine};
  std::vector<Rational> factors = {Rational(1), Rational(9, 8), Rational(3, 2), Rational(2)};
  int cases = 0;
  for (const Structure* pa : pool)
    for (const Structure* pb : pool) {
      Structure a = pa->with_vocab(Vocabulary::MetricIso);
      Structure b = pb->with_vocab(Vocabulary::MetricIso);
      for (const Rational& f1 : factors)
        for (unsigned k1 : {1u, 2u, 3u})
          for (const Rational& f2 : factors)
            for (unsigned k2 : {1u, 3u}) {
              std::vector<PlayedRound> rounds = {{0, 0, f1, k1},
                                                 {a.size() - 1, b.size() - 1, f2, k2}};
              bool lhs = function_win_check(a, b, rounds);

              // oracle: for each round, every sharp-enough distance atom over
              // later pairs transfers in both directions
              bool rhs = true;
              for (std::size_t i = 0; i < rounds.size() && rhs; ++i) {
                Precision p = Precision::multiplicative(rounds[i].factor);
                Rational floor(1, static_cast<long>(rounds[i].k));
                for (std::size_t j = i; j < rounds.size() && rhs; ++j)
                  for (std::size_t j2 = i; j2 < rounds.size() && rhs; ++j2) {
                    Assignment in_a{{"u", rounds[j].a_idx}, {"v", rounds[j2].a_idx}};
                    Assignment in_b{{"u", rounds[j].b_idx}, {"v", rounds[j2].b_idx}};
                    std::vector<Rational> grid = {floor,
                                                  a.metric().d(rounds[j].a_idx, rounds[j2].a_idx),
                                                  b.metric().d(rounds[j].b_idx, rounds[j2].b_idx)};
                    for (const Rational& r : grid) {
                      if (r < floor) continue;
                      for (bool upper : {true, false}) {
                        AtomicFormula at = upper ? AtomicFormula::dist_leq(r, "u", "v")
                                                 : AtomicFormula::dist_geq(r, "u", "v");
                        AtomicFormula widened = appr(at, p);
                        if (eval_atomic(a, at, in_a) && !eval_atomic(b, widened, in_b))
                          rhs = false;
                        if (eval_atomic(b, at, in_b) && !eval_atomic(a, widened, in_a))
                          rhs = false;
                      }
                    }
                  }
              }
              CHECK(lhs == rhs);
              ++cases;
            }
    }
  CHECK(cases == 9 * 4 * 3 * 4 * 2);
}

TEST_CASE("function solver matches plain minimax") {
  std::vector<const Structure*> pool = {&kOnePt, &kTwo1, &kTwo2, &kLine};
  for (const Structure* pa : pool)
    for (const Structure* pb : pool) {
      FunctionGameConfig cfg;
      cfg.a = pa->with_vocab(Vocabulary::MetricIso);
      cfg.b = pb->with_vocab(Vocabulary::MetricIso);
      cfg.base_factor = Rational(5, 4);
      cfg.menus = {{MenuEntry{Rational(3, 2), 2}, MenuEntry{Rational(2), 1}},
                   {MenuEntry{Rational(11, 8), 3}}};
      for (int clock = 0; clock <= 2; ++clock) {
        cfg.clock = static_cast<std::uint64_t>(clock);
        GameResult got = solve_function_game(cfg);
        std::vector<PlayedRound> rounds;
        bool ii = function_win_check(cfg.a, cfg.b, rounds) && ref_function(cfg, rounds, clock);
        CHECK(got.winner == (ii ? Player::II : Player::I));
      }
    }
}

TEST_CASE("start rounds shift the menu rows") {
  // a round's factor constrains only pairs played at its index or later, so
  // the first live round's row is observable through the pair it forms with
  // the second live round
  FunctionGameConfig cfg;
  cfg.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  cfg.b = kTwo2.with_vocab(Vocabulary::MetricIso);
  cfg.base_factor = Rational(1);
  cfg.menus = {{MenuEntry{Rational(9, 8), 1}}, {MenuEntry{Rational(3), 1}}};
  cfg.clock = 2;

  // no start: the first live round draws the tight first row, and factor 9/8
  // cannot carry the 2x stretch between the live rounds
  GameResult unshifted = solve_function_game(cfg);
  CHECK(unshifted.winner == Player::I);

  // one start round: the first live round already draws the loose second row
  cfg.start = {{0, 0, Rational(3), 1}};
  GameResult shifted = solve_function_game(cfg);
  CHECK(shifted.winner == Player::II);
}

TEST_CASE("saturated uniform-menu analysis agrees with the search") {
  std::vector<const Structure*> pool = {&kTwo1, &kTwo2, &kLine, &kTriangle};
  for (const Structure* pa : pool)
    for (const Structure* pb : pool)
      for (const Rational& f : {Rational(3, 2), Rational(2), Rational(9, 4)}) {
        FunctionGameConfig cfg;
        cfg.a = pa->with_vocab(Vocabulary::MetricIso);
        cfg.b = pb->with_vocab(Vocabulary::MetricIso);
        cfg.base_factor = Rational(1);
        cfg.menus = {{MenuEntry{f, 2}}};
        auto table = FunctionGameTable::build(cfg);
        for (std::uint64_t clock : {0ull, 1ull, 2ull}) {
          cfg.clock = clock;
          CHECK(solve_function_game(cfg).winner == table.winner_at(clock));
        }
      }
}

TEST_CASE("unequal carriers lose the function game at every factor") {
  FunctionGameConfig cfg;
  cfg.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  cfg.b = kOnePt.with_vocab(Vocabulary::MetricIso);
  cfg.base_factor = Rational(100);
  cfg.menus = {{MenuEntry{Rational(101), 1}}};
  cfg.clock = 2;
  CHECK(solve_function_game(cfg).winner == Player::I);
  cfg.clock = 1;
  CHECK(solve_function_game(cfg).winner == Player::II);
}

TEST_CASE("function watershed for the two-point stretch") {
  FunctionGameConfig cfg;
  cfg.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  cfg.b = kTwo2.with_vocab(Vocabulary::MetricIso);
  cfg.base_factor = Rational(15, 8);
  cfg.menus = {{MenuEntry{Rational(31, 16), 1}}};
  Watershed w = watershed_function(cfg);
  CHECK(!w.ii_wins_all);
  CHECK(w.value == 2);

  cfg.base_factor = Rational(2);
  cfg.menus = {{MenuEntry{Rational(33, 16), 1}}};
  Watershed all = watershed_function(cfg);
  CHECK(all.ii_wins_all);
}

TEST_CASE("config validation rejects malformed games") {
  RelationGameConfig rel;
  rel.a = kTwo1;
  rel.b = kTwo2;
  rel.eps = Rational(-1, 2);
  CHECK_THROWS_WITH_AS(solve_relation_game(rel), doctest::Contains("BadPrecision"),
                       DomainError);
  rel.eps = Rational(0);
  rel.start = {{5, 0}};
  CHECK_THROWS_WITH_AS(solve_relation_game(rel), doctest::Contains("BadIndex"), DomainError);
  rel.start.clear();
  rel.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  CHECK_THROWS_WITH_AS(solve_relation_game(rel), doctest::Contains("VocabularyMismatch"),
                       DomainError);

  FunctionGameConfig fn;
  fn.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  fn.b = kTwo2.with_vocab(Vocabulary::MetricIso);
  fn.base_factor = Rational(2);
  fn.menus = {{MenuEntry{Rational(3, 2), 1}}};  // below the base
  CHECK_THROWS_WITH_AS(solve_function_game(fn), doctest::Contains("BadMenu"), DomainError);
  fn.menus = {{MenuEntry{Rational(3), 0}}};
  CHECK_THROWS_WITH_AS(solve_function_game(fn), doctest::Contains("BadMenu"), DomainError);
  fn.menus.clear();
  CHECK_THROWS_WITH_AS(solve_function_game(fn), doctest::Contains("BadMenu"), DomainError);
}

TEST_CASE("winning strategies cover their reachable positions") {
  RelationGameConfig cfg;
  cfg.a = kTwo1;
  cfg.b = kTwo2;
  cfg.eps = Rational(2, 5);
  cfg.clock = 2;
  GameResult res = solve_relation_game(cfg);
  CHECK(res.winner == Player::I);
  CHECK(res.strategy_complete);
  CHECK(!res.strategy.empty());
  cfg.eps = Rational(1, 2);
  GameResult res2 = solve_relation_game(cfg);
  CHECK(res2.winner == Player::II);
  CHECK(res2.strategy_complete);
}

TEST_CASE("scripted relation play with an optimal engine") {
  RelationGameConfig base;
  base.a = kTwo1;
  base.b = kTwo2;
  base.eps = Rational(2, 5);

  SUBCASE("engine beats a scripted second player at the watershed clock") {
    base.clock = 2;
    PlayConfig cfg{base, Player::II};
    std::istringstream moves("B:a\nB:a\n");
    Transcript t = play_interactive(cfg, moves);
    CHECK(t.winner == Player::I);
    CHECK(t.events.size() == 2);
  }
  SUBCASE("engine survives below the watershed") {
    base.clock = 1;
    PlayConfig cfg{base, Player::I};
    std::istringstream moves("A:b\n");
    Transcript t = play_interactive(cfg, moves);
    CHECK(t.winner == Player::II);
  }
  SUBCASE("engine second player punishes wasted moves") {
    base.clock = 2;
    PlayConfig cfg{base, Player::I};
    // repeating the same element wastes the budget; the position stays safe
    std::istringstream moves("A:a\nA:a\n");
    Transcript t = play_interactive(cfg, moves);
    CHECK(t.winner == Player::II);
  }
  SUBCASE("unknown labels are illegal") {
    base.clock = 1;
    PlayConfig cfg{base, Player::I};
    std::istringstream moves("A:z\n");
    CHECK_THROWS_WITH_AS(play_interactive(cfg, moves), doctest::Contains("IllegalMove"),
                         DomainError);
  }
  SUBCASE("exhausted input aborts") {
    base.clock = 2;
    PlayConfig cfg{base, Player::I};
    std::istringstream moves("A:a\n");
    CHECK_THROWS_WITH_AS(play_interactive(cfg, moves), doctest::Contains("Abort"),
                         DomainError);
  }
}

TEST_CASE("scripted function play enforces the menu") {
  FunctionGameConfig fn;
  fn.a = kTwo1.with_vocab(Vocabulary::MetricIso);
  fn.b = kTwo2.with_vocab(Vocabulary::MetricIso);
  fn.base_factor = Rational(15, 8);
  fn.menus = {{MenuEntry{Rational(31, 16), 1}}};
  fn.clock = 2;

  SUBCASE("a winning first player run") {
    PlayConfig cfg{fn, Player::I};
    std::istringstream moves("A:a 31/16 1\nA:b 31/16 1\n");
    Transcript t = play_interactive(cfg, moves);
    CHECK(t.winner == Player::I);
    Json j = t.to_json();
    CHECK(j["winner"] == "I");
    CHECK(j["events"].size() == 2);
  }
  SUBCASE("off-menu entries are illegal") {
    PlayConfig cfg{fn, Player::I};
    std::istringstream moves("A:a 2 1\n");
    CHECK_THROWS_WITH_AS(play_interactive(cfg, moves), doctest::Contains("IllegalMove"),
                         DomainError);
  }
  SUBCASE("the engine first player wins within the watershed") {
    PlayConfig cfg{fn, Player::II};
    std::istringstream moves("B:a\nB:a\n");
    Transcript t = play_interactive(cfg, moves);
    CHECK(t.winner == Player::I);
  }
}

TEST_CASE("transcripts serialize their rounds") {
  RelationGameConfig base;
  base.a = kTwo1;
  base.b = kTwo2;
  base.eps = Rational(1, 2);
  base.clock = 2;
  PlayConfig cfg{base, Player::I};
  std::istringstream moves("A:a\nB:b\n");
  Transcript t = play_interactive(cfg, moves);
  CHECK(t.winner == Player::II);
  Json j = t.to_json();
  CHECK(j["winner"] == "II");
  REQUIRE(j["events"].size() == 2);
  CHECK(j["events"][0].contains("I"));
  CHECK(j["events"][0].contains("II"));
}
