#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/meaning.hpp"
#include "banglab/syntax.hpp"
#include "banglab/typing.hpp"

using namespace banglab;

namespace {
Term P(const char* s) { return parse_term(s); }
const char* kOmega = "(\\x.x !x) !(\\x.x !x)";

bool replays(const MeaningResult& r, const Term& t) {
  if (!r.context) return false;
  auto o = replay_to_bang(*r.context, t, 1000);
  return o && o->kind() == Kind::Bang;
}
}  // namespace

TEST_CASE("meaningful verdicts carry a replaying testing context") {
  for (const char* s : {"!x", "x", "\\z.z", "x !y", "der x", "x y", "(\\x.!x) !y", "x[x<-y]", "\\y.x !y",
                        "der !x", "(\\x.x) !(\\z.z)"}) {
    CAPTURE(s);
    Term t = P(s);
    MeaningResult r = meaningful(t);
    REQUIRE(r.verdict == Verdict::Meaningful);
    CHECK(r.context->kind() == CtxKind::Testing);
    CHECK(replays(r, t));
    REQUIRE(r.derivation);
    CHECK(check_derivation(*r.derivation).ok);
    CHECK(r.derivation->subject == r.normal_form);
  }
}

TEST_CASE("the identity is opened by a doubly banged argument") {
  MeaningResult r = meaningful(P("\\z.z"));
  REQUIRE(r.context);
  Term spine = r.context->spine();
  REQUIRE(spine.kind() == Kind::App);
  CHECK(spine.fun().kind() == Kind::Hole);
  CHECK(spine.arg().kind() == Kind::Bang);
  CHECK(spine.arg().inner().kind() == Kind::Bang);
}

TEST_CASE("observables need no context") {
  MeaningResult r = meaningful(P("!x"));
  REQUIRE(r.context);
  CHECK(r.context->spine().kind() == Kind::Hole);
  CHECK(r.replay == P("!x"));
}

TEST_CASE("clashes are meaningless, divergence stays unknown") {
  for (const char* s : {"!x y", "der (\\x.x)", "(\\x.x x) (\\x.x x)", "(\\x.x !y) !(!z)"}) {
    CAPTURE(s);
    MeaningResult r = meaningful(P(s));
    CHECK(r.verdict == Verdict::Meaningless);
    CHECK_FALSE(r.context);
  }
  for (const char* s : {kOmega, "x ((\\x.x !x) !(\\x.x !x))", "\\y.(\\x.x !x) !(\\x.x !x)"}) {
    CAPTURE(s);
    CHECK(meaningful(P(s)).verdict == Verdict::Unknown);
  }
}

TEST_CASE("self-application needs the shape check") {
  Budgets b;
  CHECK(meaningful(P("x x"), b).verdict == Verdict::Unknown);
  b.shape_check = true;
  CHECK(meaningful(P("x x"), b).verdict == Verdict::Meaningless);
  CHECK(meaningful(P("\\x.x x"), b).verdict == Verdict::Meaningless);
  CHECK(shape_conflict(P("x x")) == std::optional<std::string>("x"));
  CHECK_FALSE(shape_conflict(P("x !x")));
}

TEST_CASE("testing contexts from derivations") {
  // \x.!x : [] -> [] needs one argument, any bang.
  DerivPtr body = derive(System::B, "bang", P("!x"), "", {});
  DerivPtr d = derive(System::B, "abs", P("\\x.!x"), "x", {body});
  REQUIRE(check_derivation(*d).ok);
  Ctx c = build_testing_context(*d, Witnesses{{}, {P("!(\\z.z)")}});
  CHECK(print_ctx(c) == "[] !(\\z.z)");
  auto o = replay_to_bang(c, P("\\x.!x"), 100);
  REQUIRE(o);
  CHECK(o->kind() == Kind::Bang);
  CHECK_THROWS_AS(build_testing_context(*d, Witnesses{}), std::invalid_argument);

  DerivPtr closed = derive(System::B, "bang", P("!y"), "", {});
  CHECK(print_ctx(build_testing_context(*closed, Witnesses{})) == "[]");
}

TEST_CASE("testability everywhere") {
  DerivPtr d = derive(System::B, "bang", P("!(\\z.z)"), "", {});
  EverywhereReport r = check_testable_everywhere(*d);
  CHECK(r.all_testable);
  MeaningResult m = meaningful(P("x !y"));
  REQUIRE(m.derivation);
  EverywhereReport e = check_testable_everywhere(*m.derivation);
  CHECK(e.no == 0);
  CHECK(e.nodes.size() == derivation_size(*m.derivation));
}

TEST_CASE("context search finds observables and nothing for clashes") {
  auto c = search_testing_context(P("x !y"), 3, 100);
  REQUIRE(c);
  auto o = replay_to_bang(*c, P("x !y"), 100);
  REQUIRE(o);
  CHECK(o->kind() == Kind::Bang);
  CHECK_FALSE(search_testing_context(P("!x y"), 3, 100));
  CHECK_FALSE(search_testing_context(P(kOmega), 2, 50));
}

TEST_CASE("genericity on an erasing context") {
  Ctx f = parse_ctx("(\\x.!y) ![]");
  std::vector<Term> samples;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) samples.push_back(gen_term(seed, 8, GenProfile::Raw));
  GenericityReport r = genericity_check(f, P("!x y"), samples, Budgets{});
  CHECK(r.precondition);
  CHECK(r.applies);
  CHECK(r.meaningful == samples.size());
  CHECK(r.typed_ok);
  CHECK(r.ok());
  // With the bare hole the hypothesis fails and the check is vacuous.
  GenericityReport v = genericity_check(Ctx::hole(), P("!x y"), samples, Budgets{});
  CHECK_FALSE(v.applies);
  CHECK(v.ok());
}

TEST_CASE("cycles certify divergence") {
  CHECK(surface_cycle(P(kOmega), 10));
  CHECK_FALSE(surface_cycle(P("(\\x.x x) !y"), 10));
  CHECK_FALSE(surface_cycle(P("(\\x.x !x !x) !(\\x.x !x !x)"), 50));  // grows instead
}

TEST_CASE("discrimination") {
  Discrimination d = discriminate(P("!x"), P(kOmega), default_discriminating_contexts(), Budgets{});
  REQUIRE(d.separated);
  CHECK(print_ctx(*d.context) == "[]");
  CHECK(d.left == Verdict::Meaningful);
  CHECK(d.right == Verdict::Meaningless);
  CHECK(d.right_cycles);
  CHECK_FALSE(discriminate(P("!x"), P("!x"), default_discriminating_contexts(), Budgets{}).separated);
  CHECK_FALSE(discriminate(P(kOmega), P("x x"), default_discriminating_contexts(), Budgets{}).separated);
}
