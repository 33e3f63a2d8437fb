#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/reduction.hpp"
#include "banglab/syntax.hpp"

using namespace banglab;

namespace {
Term P(const char* s) { return parse_term(s); }

std::vector<std::string> chain(const Term& t, Closure c, std::uint64_t fuel) {
  std::vector<std::string> out;
  for (const auto& e : normalize(t, c, fuel).trace) out.push_back(std::string(rule_name(e.rule)) + " " + print_term(e.term));
  return out;
}
}  // namespace

TEST_CASE("rules act at a distance") {
  auto root = [](const char* s) { return contract_root(P(s)); };
  auto r = root("(\\x.x)[y<-z] !w");
  REQUIRE(r);
  CHECK(r->first == Rule::DB);
  CHECK(r->second == P("x[x<-!w][y<-z]"));

  r = root("x[x<-(!y)[y<-z]]");
  REQUIRE(r);
  CHECK(r->first == Rule::SBang);
  CHECK(r->second == P("y[y<-z]"));

  r = root("der ((!x)[x<-y])");
  REQUIRE(r);
  CHECK(r->first == Rule::DBang);
  CHECK(r->second == P("x[x<-y]"));

  // Substituting under a binder must not capture.
  r = root("(\\y.x)[x<-!y]");
  REQUIRE(r);
  CHECK(r->second == P("\\z.y"));

  CHECK_FALSE(root("x[x<-y]"));
  CHECK_FALSE(root("(!x) y"));
  CHECK_FALSE(contract_root(P("(\\x.x) y"), kRuleSBang | kRuleDBang));
}

TEST_CASE("surface closure stays outside bangs") {
  Term t = P("!((\\x.x) y)");
  CHECK(redexes(t, Closure::Surface).empty());
  auto full = redexes(t, Closure::Full);
  REQUIRE(full.size() == 1);
  CHECK(full[0].position == Path{0});
  CHECK(full[0].reduct == P("!x[x<-y]"));
  CHECK(under_bang(t, Path{0}));
}

TEST_CASE("redexes are listed leftmost-outermost") {
  Term t = P("(\\x.der !x) ((\\y.y) z)");
  auto rs = redexes(t, Closure::Surface);
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].position == Path{});
  CHECK(rs[1].position == Path{0, 0});
  CHECK(rs[2].position == Path{1});
  CHECK(*step(t, Closure::Surface) == rs[0].reduct);
  CHECK(*step_at(t, Closure::Surface, 2) == rs[2].reduct);
}

TEST_CASE("golden reduction chains") {
  CHECK(chain(P("(\\x.x x) !y"), Closure::Surface, 10) ==
        std::vector<std::string>{"dB (x x)[x<-!y]", "s! y y"});
  CHECK(chain(P("der ((\\x.!(x x)) !y)"), Closure::Surface, 10) ==
        std::vector<std::string>{"dB der (!(x x))[x<-!y]", "d! (x x)[x<-!y]", "s! y y"});
  CHECK(chain(P("(\\x.!x) !((\\y.y) !z)"), Closure::Surface, 10) ==
        std::vector<std::string>{"dB (!x)[x<-!((\\y.y) !z)]", "s! !((\\y.y) !z)"});
  CHECK(chain(P("(\\x.!x) !((\\y.y) !z)"), Closure::Full, 10) ==
        std::vector<std::string>{"dB (!x)[x<-!((\\y.y) !z)]", "s! !((\\y.y) !z)", "dB !y[y<-!z]", "s! !z"});
}

TEST_CASE("normalize respects fuel and the size cap") {
  Term omega = omega_term();
  auto o = normalize(omega, Closure::Surface, 25);
  CHECK_FALSE(o.normalized);
  CHECK(o.steps == 25);
  // (\x.x x x) !(\x.x x x) grows without bound.
  auto g = normalize(P("(\\x.x !x !x) !(\\x.x !x !x)"), Closure::Surface, 100000, false, kAllRules, 300);
  CHECK_FALSE(g.normalized);
  CHECK(g.size_capped);
}

TEST_CASE("clashes") {
  for (const char* s : {"!x y", "der (\\x.x)", "x[x<-\\y.y]", "x (\\y.y)", "(!x)[y<-z] w"}) {
    CAPTURE(s);
    CHECK(static_clashes(P(s), Closure::Surface).size() == 1);
    CHECK(classify(P(s)) == NfClass::ClashNF);
  }
  // Under a bang the clash is not at surface.
  CHECK(static_clashes(P("!(!x y)"), Closure::Surface).empty());
  CHECK(static_clashes(P("!(!x y)"), Closure::Full).size() == 1);
}

TEST_CASE("classification of normal forms") {
  CHECK(classify(P("x")) == NfClass::NoS);
  CHECK(grammar_class(P("x !y")) == NfClass::NeS);
  CHECK(grammar_class(P("der x")) == NfClass::NeS);
  CHECK(grammar_class(P("x[y<-z w]")) == NfClass::NeS);
  CHECK(grammar_class(P("!((\\x.x) y)")) == NfClass::NaS);
  CHECK(grammar_class(P("\\x.der x")) == NfClass::NbS);
  CHECK(classify(P("(\\x.x) !y")) == NfClass::NotNormal);
  CHECK(in_no_grammar(P("\\x.x !((\\y.y) y)")));
}

TEST_CASE("clash-free verdicts") {
  CHECK(clash_free(P("(\\x.x x) !y"), Closure::Surface, 10).verdict == Tri::Yes);
  auto r = clash_free(P("(\\x.x !y) !(!z)"), Closure::Surface, 10);
  CHECK(r.verdict == Tri::No);
  REQUIRE(r.clash);
  CHECK(clash_free(omega_term(), Closure::Surface, 10).verdict == Tri::Unknown);
}

TEST_CASE("restricted fragments and joinability") {
  Term t = P("der ((\\x.!x) !y)");
  auto db = restricted_step(t, Fragment::DBDer);
  REQUIRE(db.size() == 1);
  CHECK(restricted_step(t, Fragment::SBang).empty());
  CHECK(joinable(P("(\\x.x) !y"), P("y[z<-!w]"), Closure::Surface, 4));
  CHECK_FALSE(joinable(P("x"), P("y"), Closure::Surface, 4));
}
