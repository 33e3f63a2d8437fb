#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/inhabitation.hpp"
#include "banglab/syntax.hpp"
#include "banglab/typing.hpp"

using namespace banglab;

namespace {
Type T(const char* s) { return parse_type(s); }

void check_witness(System s, const Type& goal, const InhResult& r) {
  REQUIRE(r.status == InhStatus::Inhabited);
  CHECK(free_vars(r.witness).empty());
  REQUIRE_FALSE(r.derivations.empty());
  for (const auto& d : r.derivations) {
    CHECK(check_derivation(*d).ok);
    CHECK(d->env.empty());
    CHECK(d->subject == r.witness);
    CHECK(d->system == s);
  }
  if (s != System::N || !goal.is_multi()) CHECK(r.derivations.front()->type == goal);
}
}  // namespace

TEST_CASE("inhabited types come with checked closed derivations") {
  struct Case {
    System s;
    const char* goal;
    const char* witness;
  };
  for (const Case& c : {Case{System::B, "[a] -> [a]", "\\x.!x"}, Case{System::B, "[a] -> a", "\\x.x"},
                        Case{System::B, "[[a] -> a]", "!(\\x.x)"}, Case{System::N, "[a] -> a", "\\x.x"},
                        Case{System::N, "[[a] -> a]", "\\x.x"}}) {
    CAPTURE(c.goal);
    InhResult r = inhabit(c.s, T(c.goal));
    check_witness(c.s, T(c.goal), r);
    CHECK(r.witness == parse_term(c.witness));
  }
  // The empty multitype is inhabited by any bang.
  InhResult r = inhabit(System::B, T("[]"));
  check_witness(System::B, T("[]"), r);
  CHECK(r.witness.kind() == Kind::Bang);
  check_witness(System::B, T("[] -> []"), inhabit(System::B, T("[] -> []")));
}

TEST_CASE("uninhabited types") {
  CHECK(inhabit(System::B, T("a")).status == InhStatus::NotInhabited);
  // One closed witness would have to be a bang and an abstraction at once.
  CHECK(inhabit(System::B, T("[[a] -> b, [a]]")).status == InhStatus::NotInhabited);
  CHECK(inhabit(System::N, T("a")).status == InhStatus::NotInhabited);
  // Closed values are abstractions, so only multitypes of arrows are possible in V.
  CHECK(inhabit(System::V, T("a")).status == InhStatus::NotInhabited);
  CHECK(inhabit(System::V, T("[a] -> a")).status == InhStatus::NotInhabited);
  InhResult r = inhabit(System::V, T("[]"));
  CHECK(r.status == InhStatus::Inhabited);
  CHECK(r.witness.kind() == Kind::Abs);
}

TEST_CASE("the search is bounded and says so") {
  InhResult r = inhabit(System::B, T("[a, b] -> [b]"), InhBounds{5, 20000});
  CHECK(r.status == InhStatus::Unknown);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("environments are inhabited variable by variable") {
  auto m = inhabit_env(System::B, parse_env("x:[[a] -> a], y:[[]]"));
  REQUIRE(m.size() == 2);
  CHECK(m.at("x").status == InhStatus::Inhabited);
  CHECK(m.at("y").status == InhStatus::Inhabited);
  CHECK(inhabit_multi(System::B, Multitype{{T("a")}}).status == InhStatus::NotInhabited);
}

TEST_CASE("testable typings") {
  auto yes = testable(System::B, {parse_env("x:[[]]"), T("[]")});
  CHECK(yes.verdict == Tri::Yes);
  CHECK(yes.env_witnesses.count("x") == 1);
  // No arguments are needed for a multitype.
  CHECK(testable(System::B, {Env(), T("[a]")}).verdict == Tri::Yes);
  auto no = testable(System::B, {Env(), T("[a] -> a")});
  CHECK(no.verdict == Tri::No);
  CHECK_FALSE(no.reason.empty());
  auto with_args = testable(System::B, {Env(), T("[[]] -> [] -> [a]")});
  CHECK(with_args.verdict == Tri::Yes);
  CHECK(with_args.arg_witnesses.size() == 2);
  CHECK(testable(System::B, {parse_env("x:[a]"), T("[]")}).verdict == Tri::No);
  // In N the identity type is already observable.
  CHECK(banglab::args(System::N, T("[a] -> a")).empty());
  CHECK(testable(System::N, {Env(), T("[a] -> a")}).verdict == Tri::Yes);
}
