#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/cbnv.hpp"
#include "banglab/syntax.hpp"

using namespace banglab;

namespace {
Term P(const char* s) { return parse_term(s); }
}  // namespace

TEST_CASE("printing round-trips") {
  for (const char* s : {"x", "\\x.x", "x y z", "x (y z)", "x[x<-y] z", "!der !y", "(\\x.x x) !(\\x.x x)",
                        "der x[x<-!y]", "\\x.\\y.x[z<-y]", "(x y)[y<-!z] !w"}) {
    CAPTURE(s);
    Term t = P(s);
    CHECK(print_term(t) == s);
    CHECK(P(print_term(t).c_str()) == t);
  }
}

TEST_CASE("structural equality is alpha-equality") {
  CHECK(P("\\x.x") == P("\\y.y"));
  CHECK(P("x[x<-y]") == P("z[z<-y]"));
  CHECK(P("\\x.y") != P("\\y.y"));
  CHECK(P("\\x.\\y.x y") == P("\\a.\\b.a b"));
  CHECK(P("\\x.\\y.x y") != P("\\a.\\b.b a"));
  CHECK(free_vars(P("\\x.x y[y<-z]")) == std::set<std::string>{"z"});
}

TEST_CASE("closures scope over their body only") {
  Term t = P("x[x<-x]");
  CHECK(free_vars(t) == std::set<std::string>{"x"});
  CHECK(t.body().kind() == Kind::BVar);
  CHECK(t.arg().kind() == Kind::Var);
}

TEST_CASE("plugging captures by name") {
  Ctx c = parse_ctx("\\x.[]");
  CHECK(plug(c, P("x")) == P("\\y.y"));
  Ctx d = parse_ctx("[][x<-!y]");
  CHECK(plug(d, P("x x")) == P("(x x)[x<-!y]"));
  // Substitution, unlike plugging, avoids capture.
  CHECK(msubst(P("\\x.y"), "y", P("x")) == P("\\z.x"));
}

TEST_CASE("context kinds") {
  auto S = [](const char* s) { return parse_ctx(s).spine(); };
  CHECK(spine_fits(CtxKind::List, S("[][x<-y][z<-w]")));
  CHECK_FALSE(spine_fits(CtxKind::List, S("\\x.[]")));
  CHECK(spine_fits(CtxKind::Surface, S("\\x.[] y")));
  CHECK_FALSE(spine_fits(CtxKind::Surface, S("!([] y)")));
  CHECK(spine_fits(CtxKind::Full, S("!([] y)")));
  CHECK(tightest_kind(S("[][x<-y]")) == CtxKind::List);
}

TEST_CASE("list contexts peel and rewrap") {
  Term t = P("(!y)[y<-z][z<-w]");
  auto [core, k] = peel_list(t);
  CHECK(k == 2);
  CHECK(core.kind() == Kind::Bang);
  CHECK(rewrap_list(t, k, core) == t);
  auto m = match_list_bang(t);
  REQUIRE(m);
  CHECK(print_term(m->second) == "y");
}

TEST_CASE("parse errors carry a position") {
  try {
    P("\\x.");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(P("x )"), ParseError);
  CHECK_THROWS_AS(P("x[x<-y"), ParseError);
}

TEST_CASE("json round-trip") {
  Term t = P("(\\x.x !x)[x<-der y]");
  CHECK(term_from_json(term_to_json(t)) == t);
}

// Cumulative counts from tests/oracles/term_counts.py.
TEST_CASE("enumeration visits each alpha class once") {
  const std::vector<std::string> pool = {"x", "y"};
  const std::size_t terms[] = {2, 9, 43, 234, 1406, 9080};
  const std::size_t cterms[] = {2, 5, 19, 74, 342, 1712};
  for (unsigned b = 1; b <= 6; ++b) {
    CAPTURE(b);
    std::vector<Term> all = enum_terms(b, pool);
    CHECK(all.size() == terms[b - 1]);
    std::size_t nc = 0;
    enum_cterms(b, pool, [&](const Term&) { ++nc; return true; });
    CHECK(nc == cterms[b - 1]);
  }
  std::vector<Term> all = enum_terms(5, pool);
  std::set<Term> distinct(all.begin(), all.end());
  CHECK(distinct.size() == all.size());
  std::size_t nc = 0;
  for (const Term& t : all) nc += is_cterm(t);
  CHECK(nc == 342);
}

TEST_CASE("enumeration stops when asked") {
  std::size_t seen = 0;
  enum_terms(6, {"x"}, [&](const Term&) { return ++seen < 10; });
  CHECK(seen == 10);
}

TEST_CASE("generator is deterministic and respects profiles") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CAPTURE(seed);
    CHECK(gen_term(seed, 9, GenProfile::Raw) == gen_term(seed, 9, GenProfile::Raw));
    Term c = gen_term(seed, 9, GenProfile::CTerm);
    CHECK(is_cterm(c));
    CHECK(c.size() <= 9);
    Term n = gen_term(seed, 9, GenProfile::CbnImage);
    CHECK(n.dangling() == 0);
  }
  Rng a(7), b(7);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}
