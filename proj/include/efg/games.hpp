#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "efg/logic.hpp"

namespace efg {

enum class Player : std::uint8_t { I, II };

inline std::string player_name(Player p) { return p == Player::I ? "I" : "II"; }

// Pair sets are bitmasks over A x B; bit(i, j) = i * |B| + j.
using PairMask = std::uint32_t;

// ── Configuration ───────────────────────────────────────────────────────────

// Finite coefficient menus standing in for the dense coefficient spaces of
// the normed vocabularies. Results of Banach-side games are exact relative to
// the configured menu.
struct BallMenuOptions {
  unsigned max_support = 2;        // nonzero positions per coefficient vector
  unsigned denominator_bound = 4;  // weights are a/D, sum |.| = 1, D <= bound
};

struct BanachGameOptions {
  // Integer coefficient lattice c in [-k, k]^vars by default; exact mode
  // decides the polyhedral-norm conditions by vertex enumeration instead.
  bool exact_polyhedral = false;
};

struct RelationGameConfig {
  Structure a, b;  // additive vocabularies (MetricCorr or BanachBall)
  Rational eps;
  std::uint64_t clock = 0;
  std::vector<std::pair<int, int>> start;  // (A index, B index)
  BallMenuOptions ball_menu{};
};

struct MenuEntry {
  Rational factor;  // strictly above the base factor
  unsigned k = 1;

  bool operator==(const MenuEntry& o) const { return factor == o.factor && k == o.k; }
};

struct FunctionGameConfig {
  Structure a, b;  // multiplicative vocabularies (MetricIso or Banach)
  Rational base_factor;
  std::uint64_t clock = 0;

  struct StartRound {
    int a_idx = 0, b_idx = 0;
    Rational factor;  // strictly above the base factor
    unsigned k = 1;
  };
  std::vector<StartRound> start;

  // menus[r] lists player I's (factor, k) choices for round r; the last row
  // repeats for deeper rounds. Must be nonempty with nonempty rows.
  std::vector<std::vector<MenuEntry>> menus;

  BanachGameOptions banach{};
};

// ── Win checks ──────────────────────────────────────────────────────────────

// Survival condition on a finished relation play: every atomic fact over the
// played pairs transfers from A to B with slack eps. Metric carriers reduce
// to the closed form |d_A - d_B| <= 2 eps over all pairs of pairs; unit-ball
// carriers are checked over the coefficient menu.
bool relation_win_check(const Structure& a, const Structure& b,
                        const std::vector<std::pair<int, int>>& pairs, const Rational& eps,
                        const BallMenuOptions& menu = {});

struct PlayedRound {
  int a_idx = 0, b_idx = 0;
  Rational factor;
  unsigned k = 1;
};

// Survival condition on a finished function play: for every round i and all
// later positions, the k_i-bounded facts transfer with factor s_i. Metric
// closed form: d_B <= s_i * max(1/k_i, d_A), and d_A >= 1/k_i implies
// d_B >= d_A / s_i. Normed carriers check the coefficient lattice (or the
// exact polyhedral conditions).
bool function_win_check(const Structure& a, const Structure& b,
                        const std::vector<PlayedRound>& rounds,
                        const BanachGameOptions& opts = {});

// ── Results ─────────────────────────────────────────────────────────────────

struct GameResult {
  Player winner = Player::II;
  std::uint64_t explored = 0;  // states examined by the solver
  // Canonical position -> chosen move, total on positions reachable under the
  // strategy itself when strategy_complete; omitted when the reachable
  // closure exceeds the materialization budget.
  std::map<std::string, std::string> strategy;
  bool strategy_complete = false;
  std::uint64_t stabilized_at = 0;  // relation games: fixpoint clock of the level chain
  bool saturated = false;           // winner is stable under every larger clock
};

// ── Relation game analysis ──────────────────────────────────────────────────

// Per-clock winning families of the relation game, computed as a decreasing
// chain over pair sets: level 0 holds the sets passing the win check, level
// t+1 keeps sets whose every I move admits a II reply staying in level t.
// II's winning is downward closed in the pair set, which makes the chain
// equivalent to backward induction; the chain stabilizes, and the stabilized
// level answers every larger clock.
struct GameTableOptions {
  unsigned max_bits = 24;       // refuse |A|*|B| beyond this
  unsigned stored_levels = 96;  // levels kept for arbitrary-set queries
  BallMenuOptions ball{};
};

class RelationGameTable {
public:
  using Options = GameTableOptions;

  static RelationGameTable build(const Structure& a, const Structure& b, const Rational& eps,
                                 const std::vector<std::pair<int, int>>& start,
                                 Options opt = {});

  int bit(int i, int j) const { return i * nb_ + j; }
  bool start_ok() const { return start_ok_; }
  std::uint64_t stabilization() const { return stabilized_at_; }
  std::uint64_t explored() const { return explored_; }

  // II survives `clock` further rounds from the start position extended by
  // the dynamic pair set `s`.
  bool ii_wins(PairMask s, std::uint64_t clock) const;
  bool ii_wins_all(PairMask s) const;

  Player winner_at(std::uint64_t clock) const;  // from the bare start position
  // Entry c = II survives clock c from the start; length stabilization()+1.
  std::vector<bool> winner_curve() const;
  // Least clock at which II loses from the start extended by s; nullopt when
  // II wins every clock.
  std::optional<std::uint64_t> drop_clock(PairMask s) const;

  // Least reply j for I's element x keeping the position winning at the given
  // remaining clock; nullopt when every reply loses.
  std::optional<int> best_reply(PairMask s, std::uint64_t clock_after, bool x_in_a,
                                int x) const;
  // A winning I move at the given clock (element side + index), nullopt if II
  // wins. The new clock is clock - 1 (larger burns never help I).
  std::optional<std::pair<bool, int>> winning_i_move(PairMask s, std::uint64_t clock) const;

  int na() const { return na_; }
  int nb() const { return nb_; }

private:
  int na_ = 0, nb_ = 0;
  bool start_ok_ = true;
  std::uint64_t stabilized_at_ = 0;
  std::uint64_t explored_ = 0;
  std::vector<std::vector<std::uint64_t>> levels_;  // bit-packed per pair set
  std::vector<bool> curve0_;                        // start-position winner per clock
  friend class FunctionGameTable;
  RelationGameTable() = default;

  static RelationGameTable build_from_sets(int na, int nb, bool start_ok,
                                           const std::vector<std::uint64_t>& passing,
                                           Options opt);
  bool level_bit(std::size_t lvl, PairMask s) const;
};

// Exact winner of the clocked relation game; saturated behaviour for clocks
// past the chain fixpoint comes for free.
GameResult solve_relation_game(const RelationGameConfig& cfg);

// Clock bound past which relation-game winners cannot change: 2^(|A|*|B|).
std::uint64_t relation_saturation_clock(const Structure& a, const Structure& b);

// ── Function game ───────────────────────────────────────────────────────────

// Exact winner relative to the declared menus; memoized over ordered
// positions.
GameResult solve_function_game(const FunctionGameConfig& cfg);

// Saturated analysis of the function game for uniform menus containing a
// dominating entry (minimal factor together with maximal k): player I playing
// the dominating entry is optimal, which collapses positions to pair sets and
// reuses the relation chain machinery. Metric carriers only.
class FunctionGameTable {
public:
  static FunctionGameTable build(const FunctionGameConfig& cfg,
                                 RelationGameTable::Options opt = {});

  bool start_ok() const { return table_.start_ok(); }
  std::uint64_t stabilization() const { return table_.stabilization(); }
  Player winner_at(std::uint64_t clock) const { return table_.winner_at(clock); }
  std::vector<bool> winner_curve() const { return table_.winner_curve(); }
  bool ii_wins_all() const { return table_.ii_wins_all(0); }

private:
  RelationGameTable table_;
};

// ── Interactive play ────────────────────────────────────────────────────────

struct PlayConfig {
  std::variant<RelationGameConfig, FunctionGameConfig> game;
  Player human = Player::II;
};

struct Transcript {
  Player winner = Player::II;
  std::vector<Json> events;
  Json to_json() const;
};

// Runs one play with the engine taking the non-human side and moving
// optimally. Human moves come one per line: relation games "A:label" or
// "B:label"; function-game I moves "A:label <factor> <k>". Violations throw
// IllegalMove naming the broken rule; exhausted input throws Abort.
Transcript play_interactive(const PlayConfig& cfg, std::istream& moves,
                            std::ostream* echo = nullptr);

}  // namespace efg
