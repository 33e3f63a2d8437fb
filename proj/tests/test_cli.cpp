#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("BANGLAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "BANGLAB_BIN is not set");
  std::string cmd = env + " " + quote(bin) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args, int expect = 0) {
  Run r = run("--json " + args);
  CHECK(r.code == expect);
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("parse " + quote("\\x.")).code == 2);
  CHECK(run("inhabit --system Q --type a").code == 2);
  CHECK(run("prop-test --suite nope").code == 2);
  CHECK(run("--fuel notanumber parse x").code == 2);
}

TEST_CASE("parse and reduce") {
  Run p = run("parse " + quote("(\\y.y)  x[x<-z]"));
  CHECK(p.code == 0);
  CHECK(p.out == "(\\y.y) x[x<-z]\n");

  auto j = run_json("reduce --strategy surface --fuel 10 " + quote("(\\x.!der !x) !y"));
  CHECK(j["status"] == "normalized");
  CHECK(j["steps"] == 2);
  CHECK(j["term"] == "!der !y");
  REQUIRE(j["trace"].size() == 2);
  CHECK(j["trace"][0]["rule"] == "dB");
  // The last step happens under the bang.
  auto f = run_json("reduce --strategy full " + quote("(\\x.!der !x) !y"));
  CHECK(f["steps"] == 3);
  CHECK(f["term"] == "!y");
  CHECK(f["trace"][2]["rule"] == "d!");

  // JSON lines, one per step.
  Run t = run("reduce --trace " + quote("(\\x.x x) !y"));
  CHECK(t.code == 0);
  std::size_t lines = 0;
  std::size_t pos = 0, nl;
  while ((nl = t.out.find('\n', pos)) != std::string::npos) {
    auto line = nlohmann::json::parse(t.out.substr(pos, nl - pos));
    CHECK(line.contains("step"));
    CHECK(line.contains("rule"));
    CHECK(line.contains("position"));
    CHECK(line.contains("term"));
    ++lines;
    pos = nl + 1;
  }
  CHECK(lines == 2);
}

TEST_CASE("verdict commands") {
  CHECK(run_json("classify " + quote("!x y"))["class"] == "clash-nf");
  auto m = run_json("meaningful " + quote("\\z.z"));
  CHECK(m["verdict"] == "meaningful");
  CHECK(m.contains("context"));
  CHECK(run_json("meaningful " + quote("x x"))["verdict"] == "unknown");
  CHECK(run_json("meaningful --shape-check " + quote("x x"))["verdict"] == "meaningless");
  auto i = run_json("inhabit --system B --type " + quote("[a]->[a]"));
  CHECK(i["status"] == "inhabited");
  CHECK(i["witness"] == "\\x.!x");
  auto ty = run_json("typings x");
  CHECK(ty["typings"].size() == 167);
  CHECK(run_json("typings --system V x")["typings"].size() == 81);
  CHECK(run_json("embed --from cbv x")["image"] == "!x");
}

TEST_CASE("derivations round-trip through check-derivation") {
  auto i = run_json("inhabit --system B --type " + quote("[a]->[a]"));
  REQUIRE(i["derivations"].size() == 1);
  std::string file = "cli_derivation.json";
  {
    FILE* f = std::fopen(file.c_str(), "w");
    REQUIRE(f);
    std::string s = i["derivations"][0].dump();
    std::fwrite(s.data(), 1, s.size(), f);
    std::fclose(f);
  }
  CHECK(run_json("check-derivation " + file)["ok"] == true);
  auto bad = i["derivations"][0];
  bad["type"] = "[b] -> [b]";
  {
    FILE* f = std::fopen(file.c_str(), "w");
    std::string s = bad.dump();
    std::fwrite(s.data(), 1, s.size(), f);
    std::fclose(f);
  }
  CHECK(run("check-derivation " + file).code == 1);
  std::remove(file.c_str());
}

TEST_CASE("suites are deterministic and seeded from the environment") {
  Run a = run("--json prop-test --suite measure --count 40");
  Run b = run("--json prop-test --suite measure --count 40");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["schema"] == "banglab.report/1");
  CHECK(j["counts"]["fail"] == 0);
  Run c = run("--json prop-test --suite measure --count 40", "BANGLAB_SEED=9");
  Run d = run("--json --seed 9 prop-test --suite measure --count 40");
  CHECK(c.out == d.out);
  CHECK(c.out != a.out);
}

TEST_CASE("corpus") {
  Run r = run("--json corpus --check");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["entries"].size() >= 20);
  for (const auto& e : j["entries"]) {
    CAPTURE(e["name"].get<std::string>());
    CHECK(e["ok"] == true);
  }
}
