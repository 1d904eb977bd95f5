// Command-line surface: validation, distances, game solving, watersheds,
// Scott-sentence emission, interactive play, and the property-suite runner.
// Exit codes: 0 success, 1 domain error, 2 usage error. All output is
// deterministic given identical inputs and flags; rationals travel as
// canonical strings.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efg/distances.hpp"
#include "efg/errors.hpp"
#include "efg/suites.hpp"

namespace {

using namespace efg;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileNotFound", path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    fail("BadJson", path + ": " + e.what());
  }
}

Structure load_structure(const std::string& path, Precision::Kind semantics) {
  return parse_structure(load_json(path), semantics);
}

Rational parse_rational(const std::string& s, const char* flag) {
  auto r = Rational::parse(s);
  if (!r) fail("BadRational", std::string(flag) + ": " + s);
  return *r;
}

const FiniteMetricSpace& metric_carrier(const Structure& s, const char* which) {
  if (!s.is_metric()) fail("VocabularyMismatch", std::string(which) + ": metric carrier required");
  return s.metric();
}

std::vector<std::vector<MenuEntry>> parse_menus(const Json& j) {
  const Json& rows = j.is_object() && j.contains("rounds") ? j.at("rounds") : j;
  if (!rows.is_array() || rows.empty()) fail("BadMenus", "expected a nonempty array of rounds");
  std::vector<std::vector<MenuEntry>> menus;
  for (const auto& row : rows) {
    if (!row.is_array() || row.empty()) fail("BadMenus", "each round needs at least one entry");
    std::vector<MenuEntry> entries;
    for (const auto& e : row) {
      MenuEntry entry;
      entry.factor = rational_from_json(e.at("factor"));
      entry.k = e.at("k").get<unsigned>();
      entries.push_back(entry);
    }
    menus.push_back(std::move(entries));
  }
  return menus;
}

// Uniform single-entry menu above the base factor: the entry factor sits
// below the next distance ratio the carriers can realize, and the sharpness
// resolves every positive distance. Matches the menu the distance bisection
// plays against.
std::vector<std::vector<MenuEntry>> default_menu(const Structure& a, const Structure& b,
                                                 const Rational& base) {
  std::vector<Rational> grid = distance_breakpoints(a, b, Precision::Kind::Multiplicative);
  Rational rep;
  bool have = false;
  for (const auto& g : grid)
    if (g > base) {
      rep = midpoint(base, g);
      have = true;
      break;
    }
  if (!have) rep = base + Rational(1);
  return {{MenuEntry{rep, good_saturation_bound(a, b)}}};
}

void emit(const Json& j, const std::optional<std::string>& out_path) {
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) fail("FileNotFound", *out_path);
    out << j.dump(2) << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

struct Options {
  std::string a_path, b_path, in_path;
  std::string eps_str, factor_str, resolution_str = "1/16";
  std::string method, role, selector, menus_path, out_path;
  std::uint64_t clock = 0;
  std::uint64_t rank = 1;
  unsigned tuple_cap = 2;
  bool json = false;
};

int cmd_validate(const Options& opt) {
  Structure s = load_structure(opt.in_path, Precision::Kind::Additive);
  if (opt.json) {
    Json j{{"status", "ok"}, {"structure", structure_to_json(s)}};
    emit(j, opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  } else {
    std::cout << "ok\n";
  }
  return 0;
}

int cmd_distance(const Options& opt) {
  Structure sa = load_structure(opt.a_path, Precision::Kind::Additive);
  Structure sb = load_structure(opt.b_path, Precision::Kind::Additive);
  const FiniteMetricSpace& ma = metric_carrier(sa, "--a");
  const FiniteMetricSpace& mb = metric_carrier(sb, "--b");
  Json j;
  std::string plain;
  if (opt.method == "gh-brute") {
    GhResult r = gh_bruteforce(ma, mb);
    plain = r.distance.str();
    Json witness = Json::array();
    for (const auto& [x, y] : r.witness) witness.push_back(Json::array({x, y}));
    j = Json{{"method", "gh-brute"}, {"value", r.distance.str()}, {"witness", witness}};
  } else if (opt.method == "lipschitz") {
    LipschitzResult r = lipschitz_bruteforce(ma, mb);
    if (r.exists) {
      plain = r.factor.str();
      j = Json{{"method", "lipschitz"}, {"value", r.factor.str()}, {"witness", r.bijection}};
    } else {
      plain = "unbounded";
      j = Json{{"method", "lipschitz"}, {"bounded", false}};
    }
  } else if (opt.method == "game") {
    Precision::Kind kind = opt.factor_str.empty() && opt.eps_str.empty()
                               ? Precision::Kind::Additive
                               : (opt.factor_str.empty() ? Precision::Kind::Additive
                                                         : Precision::Kind::Multiplicative);
    GameDistance r =
        game_distance(ma, mb, kind, parse_rational(opt.resolution_str, "--resolution"));
    const char* kind_name = kind == Precision::Kind::Additive ? "additive" : "multiplicative";
    if (!r.bounded) {
      plain = "unbounded";
      j = Json{{"method", "game"}, {"kind", kind_name}, {"bounded", false}};
    } else {
      plain = r.snapped ? r.lo.str() : "[" + r.lo.str() + ", " + r.hi.str() + "]";
      j = Json{{"method", "game"},
               {"kind", kind_name},
               {"bounded", true},
               {"interval", Json::array({r.lo.str(), r.hi.str()})},
               {"snapped", r.snapped}};
      if (r.snapped) j["value"] = r.lo.str();
    }
  } else {
    fail("UnknownMethod", opt.method);
  }
  if (opt.json)
    emit(j, opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  else
    std::cout << plain << "\n";
  return 0;
}

int cmd_solve(const Options& opt) {
  GameResult r;
  std::string flavour;
  if (!opt.eps_str.empty()) {
    flavour = "relation";
    RelationGameConfig cfg;
    cfg.a = load_structure(opt.a_path, Precision::Kind::Additive);
    cfg.b = load_structure(opt.b_path, Precision::Kind::Additive);
    cfg.eps = parse_rational(opt.eps_str, "--eps");
    cfg.clock = opt.clock;
    r = solve_relation_game(cfg);
  } else {
    flavour = "function";
    FunctionGameConfig cfg;
    cfg.a = load_structure(opt.a_path, Precision::Kind::Multiplicative);
    cfg.b = load_structure(opt.b_path, Precision::Kind::Multiplicative);
    cfg.base_factor = parse_rational(opt.factor_str, "--factor");
    cfg.clock = opt.clock;
    cfg.menus = opt.menus_path.empty() ? default_menu(cfg.a, cfg.b, cfg.base_factor)
                                       : parse_menus(load_json(opt.menus_path));
    r = solve_function_game(cfg);
  }
  if (opt.json) {
    Json j{{"game", flavour},
           {"winner", player_name(r.winner)},
           {"clock", opt.clock},
           {"explored", r.explored},
           {"saturated", r.saturated}};
    emit(j, opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  } else {
    std::cout << player_name(r.winner) << "\n";
  }
  return 0;
}

int cmd_watershed(const Options& opt) {
  Watershed w;
  if (!opt.eps_str.empty()) {
    Structure a = load_structure(opt.a_path, Precision::Kind::Additive);
    Structure b = load_structure(opt.b_path, Precision::Kind::Additive);
    w = watershed_relation(a, b, parse_rational(opt.eps_str, "--eps"));
  } else {
    FunctionGameConfig cfg;
    cfg.a = load_structure(opt.a_path, Precision::Kind::Multiplicative);
    cfg.b = load_structure(opt.b_path, Precision::Kind::Multiplicative);
    cfg.base_factor = parse_rational(opt.factor_str, "--factor");
    cfg.menus = opt.menus_path.empty() ? default_menu(cfg.a, cfg.b, cfg.base_factor)
                                       : parse_menus(load_json(opt.menus_path));
    w = watershed_function(cfg);
  }
  if (opt.json) {
    Json j{{"ii_wins_all", w.ii_wins_all}};
    if (!w.ii_wins_all) j["value"] = w.value;
    emit(j, opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  } else {
    if (w.ii_wins_all)
      std::cout << "ii-wins-all\n";
    else
      std::cout << w.value << "\n";
  }
  return 0;
}

int cmd_scott(const Options& opt) {
  Structure a = load_structure(opt.in_path, Precision::Kind::Additive);
  ScottSentence s = scott_sentence_relation(a, parse_rational(opt.eps_str, "--eps"),
                                            opt.rank, opt.tuple_cap);
  emit(scott_sentence_to_json(s, a),
       opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  return 0;
}

int cmd_play(const Options& opt) {
  PlayConfig cfg;
  if (!opt.eps_str.empty()) {
    RelationGameConfig rel;
    rel.a = load_structure(opt.a_path, Precision::Kind::Additive);
    rel.b = load_structure(opt.b_path, Precision::Kind::Additive);
    rel.eps = parse_rational(opt.eps_str, "--eps");
    rel.clock = opt.clock;
    cfg.game = rel;
  } else {
    FunctionGameConfig fn;
    fn.a = load_structure(opt.a_path, Precision::Kind::Multiplicative);
    fn.b = load_structure(opt.b_path, Precision::Kind::Multiplicative);
    fn.base_factor = parse_rational(opt.factor_str, "--factor");
    fn.clock = opt.clock;
    fn.menus = opt.menus_path.empty() ? default_menu(fn.a, fn.b, fn.base_factor)
                                      : parse_menus(load_json(opt.menus_path));
    cfg.game = fn;
  }
  cfg.human = opt.role == "I" ? Player::I : Player::II;
  // the echo stream narrates the rounds and the final winner itself
  Transcript t = play_interactive(cfg, std::cin, opt.json ? nullptr : &std::cout);
  if (opt.json)
    emit(t.to_json(), opt.out_path.empty() ? std::nullopt : std::optional(opt.out_path));
  return 0;
}

int cmd_suite(const Options& opt) {
  SuiteReport report = run_suite(opt.selector);
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) fail("FileNotFound", opt.out_path);
    out << report.to_json().dump(2) << "\n";
  }
  if (opt.json) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    for (const auto& c : report.checks) {
      std::cout << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (cases=" << c.cases
                << ")";
      if (!c.details.empty()) std::cout << " " << c.details.dump();
      std::cout << "\n";
      for (const auto& ce : c.counterexamples)
        std::cout << "  counterexample: " << ce.dump() << "\n";
    }
    int failed = 0;
    for (const auto& c : report.checks)
      if (!c.passed) ++failed;
    if (failed == 0)
      std::cout << "all checks passed\n";
    else
      std::cout << failed << " check(s) failed\n";
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact approximate-equivalence games on finite metric structures"};
  app.require_subcommand(1);
  Options opt;

  auto* validate = app.add_subcommand("validate", "check a structure file");
  validate->add_option("--in", opt.in_path, "structure JSON path")->required();
  validate->add_flag("--json", opt.json, "JSON output");
  validate->add_option("--out", opt.out_path, "write output to a file");

  auto* distance = app.add_subcommand("distance", "distance between two spaces");
  distance->add_option("--a", opt.a_path, "left structure JSON path")->required();
  distance->add_option("--b", opt.b_path, "right structure JSON path")->required();
  distance->add_option("--method", opt.method, "gh-brute | lipschitz | game")->required();
  distance->add_option("--eps", opt.eps_str, "select the additive game distance");
  distance->add_option("--factor", opt.factor_str, "select the multiplicative game distance");
  distance->add_option("--resolution", opt.resolution_str, "bracket width bound (default 1/16)");
  distance->add_flag("--json", opt.json, "JSON output");
  distance->add_option("--out", opt.out_path, "write output to a file");

  auto* solve = app.add_subcommand("solve", "winner of a clocked game");
  solve->add_option("--a", opt.a_path, "left structure JSON path")->required();
  solve->add_option("--b", opt.b_path, "right structure JSON path")->required();
  solve->add_option("--eps", opt.eps_str, "additive slack (relation game)");
  solve->add_option("--factor", opt.factor_str, "base factor (function game)");
  solve->add_option("--clock", opt.clock, "round budget (default 0)");
  solve->add_option("--menus", opt.menus_path, "function-game menu JSON path");
  solve->add_flag("--json", opt.json, "JSON output");
  solve->add_option("--out", opt.out_path, "write output to a file");

  auto* watershed = app.add_subcommand("watershed", "least clock at which player I wins");
  watershed->add_option("--a", opt.a_path, "left structure JSON path")->required();
  watershed->add_option("--b", opt.b_path, "right structure JSON path")->required();
  watershed->add_option("--eps", opt.eps_str, "additive slack (relation game)");
  watershed->add_option("--factor", opt.factor_str, "base factor (function game)");
  watershed->add_option("--menus", opt.menus_path, "function-game menu JSON path");
  watershed->add_flag("--json", opt.json, "JSON output");
  watershed->add_option("--out", opt.out_path, "write output to a file");

  auto* scott = app.add_subcommand("scott", "characterizing sentence of a space");
  scott->add_option("--in", opt.in_path, "structure JSON path")->required();
  scott->add_option("--eps", opt.eps_str, "additive slack")->required();
  scott->add_option("--clock", opt.rank, "sentence rank (default 1)");
  scott->add_option("--tuples", opt.tuple_cap, "tuple length cap (default 2)");
  scott->add_option("--out", opt.out_path, "write the sentence to a file");

  auto* play = app.add_subcommand("play", "play one game against the engine");
  play->add_option("--a", opt.a_path, "left structure JSON path")->required();
  play->add_option("--b", opt.b_path, "right structure JSON path")->required();
  play->add_option("--eps", opt.eps_str, "additive slack (relation game)");
  play->add_option("--factor", opt.factor_str, "base factor (function game)");
  play->add_option("--clock", opt.clock, "round budget")->required();
  play->add_option("--role", opt.role, "your side: I or II")->required()
      ->check(CLI::IsMember({"I", "II"}));
  play->add_option("--menus", opt.menus_path, "function-game menu JSON path");
  play->add_flag("--json", opt.json, "emit the transcript as JSON");
  play->add_option("--out", opt.out_path, "write output to a file");

  auto* suite = app.add_subcommand("suite", "run a property suite");
  suite->add_option("selector", opt.selector,
                    "appr-laws | game-laws | oracle-equivalence | scott-equivalence | all")
      ->required();
  suite->add_flag("--json", opt.json, "JSON report");
  suite->add_option("--out", opt.out_path, "write the JSON report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    bool has_eps = !opt.eps_str.empty(), has_factor = !opt.factor_str.empty();
    if (sub == solve || sub == watershed || sub == play) {
      if (has_eps == has_factor) {
        std::cerr << "exactly one of --eps and --factor is required\n";
        return 2;
      }
    }
    if (sub == validate) return cmd_validate(opt);
    if (sub == distance) return cmd_distance(opt);
    if (sub == solve) return cmd_solve(opt);
    if (sub == watershed) return cmd_watershed(opt);
    if (sub == scott) return cmd_scott(opt);
    if (sub == play) return cmd_play(opt);
    if (sub == suite) return cmd_suite(opt);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const efg::DomainError& e) {
    std::cerr << e.what() << "\n";
    return e.code() == "UnknownSuite" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
