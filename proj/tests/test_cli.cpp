#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

const std::string kCli = EFG_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path fixture_dir() {
  auto dir = std::filesystem::temp_directory_path() / "efg_cli_fixtures";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string fixture(const std::string& name, const std::string& body) {
  auto path = fixture_dir() / name;
  std::ofstream(path) << body;
  return path.string();
}

const std::string kX1 = fixture("x1.json",
    R"({"kind":"metric_space","points":["a","b"],"d":[["0","1"],["1","0"]]})");
const std::string kX2 = fixture("x2.json",
    R"({"kind":"metric_space","points":["a","b"],"d":[["0","2"],["2","0"]]})");
const std::string kBadJson = fixture("bad.json", "{ not json");
const std::string kBadMetric = fixture("badmetric.json",
    R"({"kind":"metric_space","points":["a","b"],"d":[["0","1"],["2","0"]]})");
const std::string kMenus = fixture("menus.json",
    R"([[{"factor":"31/16","k":1}]])");

}  // namespace

TEST_CASE("validate prints ok for a sound structure") {
  RunResult r = run(kCli + " validate --in " + kX1);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "ok\n");
}

TEST_CASE("validate reports the broken invariant") {
  RunResult r = run(kCli + " validate --in " + kBadMetric, true);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("AsymmetricMatrix") != std::string::npos);
}

TEST_CASE("missing and malformed inputs map to the exit contract") {
  CHECK(run(kCli + " validate --in /nonexistent.json").exit_code == 1);
  CHECK(run(kCli + " validate --in " + kBadJson).exit_code == 1);
  CHECK(run(kCli).exit_code == 2);                       // no subcommand
  CHECK(run(kCli + " validate").exit_code == 2);         // missing --in
  CHECK(run(kCli + " distance --a " + kX1 + " --b " + kX2 +
            " --method no-such-method").exit_code == 1);
  // games need exactly one of --eps and --factor
  CHECK(run(kCli + " solve --a " + kX1 + " --b " + kX2).exit_code == 2);
  CHECK(run(kCli + " solve --a " + kX1 + " --b " + kX2 +
            " --eps 0 --factor 2").exit_code == 2);
}

TEST_CASE("brute-force distance output") {
  RunResult r = run(kCli + " distance --a " + kX1 + " --b " + kX2 + " --method gh-brute");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1/2\n");

  RunResult j = run(kCli + " distance --a " + kX1 + " --b " + kX2 +
                    " --method gh-brute --json");
  CHECK(j.exit_code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["method"] == "gh-brute");
  CHECK(parsed["value"] == "1/2");
  CHECK(parsed["witness"].is_array());
}

TEST_CASE("lipschitz and game distances") {
  RunResult lip = run(kCli + " distance --a " + kX1 + " --b " + kX2 + " --method lipschitz");
  CHECK(lip.exit_code == 0);
  CHECK(lip.out == "2\n");

  RunResult add = run(kCli + " distance --a " + kX1 + " --b " + kX2 +
                      " --method game --eps 1");
  CHECK(add.exit_code == 0);
  CHECK(add.out == "1/2\n");

  RunResult mul = run(kCli + " distance --a " + kX1 + " --b " + kX2 +
                      " --method game --factor 1 --json");
  CHECK(mul.exit_code == 0);
  auto parsed = nlohmann::json::parse(mul.out);
  CHECK(parsed["kind"] == "multiplicative");
  CHECK(parsed["snapped"] == true);
  CHECK(parsed["value"] == "2");
}

TEST_CASE("solve and watershed") {
  RunResult w = run(kCli + " watershed --a " + kX1 + " --b " + kX2 + " --eps 2/5");
  CHECK(w.exit_code == 0);
  CHECK(w.out == "2\n");

  RunResult all = run(kCli + " watershed --a " + kX1 + " --b " + kX2 + " --eps 1/2");
  CHECK(all.exit_code == 0);
  CHECK(all.out == "ii-wins-all\n");

  RunResult s = run(kCli + " solve --a " + kX1 + " --b " + kX2 + " --eps 2/5 --clock 2 --json");
  CHECK(s.exit_code == 0);
  auto parsed = nlohmann::json::parse(s.out);
  CHECK(parsed["winner"] == "I");
  CHECK(parsed["game"] == "relation");

  RunResult fn = run(kCli + " solve --a " + kX1 + " --b " + kX2 +
                     " --factor 15/8 --clock 2 --menus " + kMenus);
  CHECK(fn.exit_code == 0);
  CHECK(fn.out == "I\n");

  RunResult fw = run(kCli + " watershed --a " + kX1 + " --b " + kX2 +
                     " --factor 15/8 --menus " + kMenus);
  CHECK(fw.exit_code == 0);
  CHECK(fw.out == "2\n");
}

TEST_CASE("sentence emission is byte deterministic") {
  std::string cmd = kCli + " scott --in " + kX1 + " --eps 1/4 --clock 2 --tuples 2";
  RunResult a = run(cmd), b = run(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto parsed = nlohmann::json::parse(a.out);
  CHECK(parsed["rank"] == 2);
  CHECK(parsed["slack"] == "1/4");
  CHECK(parsed["implications"].is_array());
}

TEST_CASE("scripted play round trips") {
  std::string base = kCli + " play --a " + kX1 + " --b " + kX2 + " --eps 2/5 --clock 2";
  RunResult lose = run("printf 'A:a\\nA:a\\n' | " + base + " --role I");
  CHECK(lose.exit_code == 0);
  CHECK(lose.out.find("winner: II") != std::string::npos);

  RunResult engine = run("printf 'B:a\\nB:b\\n' | " + base + " --role II");
  CHECK(engine.exit_code == 0);
  CHECK(engine.out.find("winner: I") != std::string::npos);

  RunResult bad = run("printf 'A:z\\n' | " + base + " --role I", true);
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("IllegalMove") != std::string::npos);

  RunResult json = run("printf 'A:a\\nA:a\\n' | " + base + " --role I --json");
  CHECK(json.exit_code == 0);
  auto parsed = nlohmann::json::parse(json.out);
  CHECK(parsed["winner"] == "II");
  CHECK(parsed["events"].size() == 2);
}

TEST_CASE("suite selector contract") {
  CHECK(run(kCli + " suite bogus").exit_code == 2);

  RunResult r = run(kCli + " suite appr-laws");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  CHECK(r.out.find("approximation-algebra") != std::string::npos);

  RunResult j = run(kCli + " suite appr-laws --json");
  CHECK(j.exit_code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["selector"] == "appr-laws");
  bool saw = false;
  for (const auto& c : parsed["checks"]) {
    CHECK(c["passed"] == true);
    saw = saw || c["name"] == "perturbation-robustness";
  }
  CHECK(saw);
}
