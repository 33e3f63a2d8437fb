#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/reduction.hpp"
#include "banglab/syntax.hpp"
#include "banglab/typing.hpp"

using namespace banglab;

namespace {
Term P(const char* s) { return parse_term(s); }
Type T(const char* s) { return parse_type(s); }
const Type a = Type::tvar("a");
const Type b = Type::tvar("b");

// x !y : b   with x : [[a] -> b], y : [a]
DerivPtr app_bang_derivation() {
  DerivPtr fx = derive_var(System::B, "x", T("[a] -> b"));
  DerivPtr y = derive_var(System::B, "y", a);
  DerivPtr by = derive(System::B, "bang", P("!y"), "", {y});
  return derive(System::B, "app", P("x !y"), "", {fx, by});
}
}  // namespace

TEST_CASE("types print and parse") {
  for (const char* s : {"a", "[]", "[a, b]", "[a] -> a", "[a, [a] -> b] -> [b]", "[] -> [] -> a"}) {
    CAPTURE(s);
    CHECK(print_type(T(s)) == s);
  }
  CHECK(T("[b, a]") == T("[a, b]"));
  CHECK(T("[a] -> a").depth() == 3);
  CHECK(T("[a, a, b]").max_card() == 3);
  CHECK(print_env(parse_env("y:[a], x:[b]")) == "x:[b], y:[a]");
}

// Sizes from tests/oracles/type_universe.py.
TEST_CASE("type universe") {
  CHECK(type_universe({2, 2, 3}).size() == 288);
  CHECK(type_universe({1, 1, 1}).size() == 2);
  for (const Type& t : type_universe({2, 2, 3})) CHECK(within_bounds(t, Bounds{2, 2, 3}));
}

TEST_CASE("a variable has one typing per renaming class") {
  CHECK(typings_enumerate(System::B, P("x"), {2, 2, 3}).derivations.size() == 167);
  // In V variables only carry multitypes.
  CHECK(typings_enumerate(System::V, P("x"), {2, 2, 3}).derivations.size() == 81);
}

TEST_CASE("hand-built derivations are checked") {
  DerivPtr d = app_bang_derivation();
  CHECK(check_derivation(*d).ok);
  CHECK(d->type == b);
  CHECK(d->env == parse_env("x:[[a] -> b], y:[a]"));

  // Abstraction with an empty multitype in N.
  DerivPtr v = derive_var(System::N, "y", a);
  DerivPtr k = derive(System::N, "abs", P("\\x.y"), "x", {v});
  CHECK(check_derivation(*k).ok);
  CHECK(k->type == T("[] -> a"));

  DerivPtr id = derive(System::N, "abs", P("\\x.x"), "x", {derive_var(System::N, "x", a)});
  CHECK(id->type == T("[a] -> a"));
  CHECK(id->env.empty());
}

TEST_CASE("a corrupted tree is rejected with its location") {
  nlohmann::json j = derivation_to_json(*app_bang_derivation());
  CHECK(check_derivation(*derivation_from_json(j)).ok);
  nlohmann::json bad = j;
  bad["premises"][1]["premises"][0]["type"] = type_to_json(b);
  CheckReport r = check_derivation(*derivation_from_json(bad));
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.message.empty());

  bad = j;
  bad["type"] = type_to_json(a);
  CHECK_FALSE(check_derivation(*derivation_from_json(bad)).ok);

  bad = j;
  bad["rule"] = "der";
  CHECK_FALSE(check_derivation(*derivation_from_json(bad)).ok);
}

TEST_CASE("enumerated derivations check and are within bounds") {
  Bounds bd{1, 2, 3};
  for (const char* s : {"x !y", "\\x.x", "(\\x.x) !y", "der x", "x[x<-!y]", "!(x x)"}) {
    CAPTURE(s);
    Enumeration e = typings_enumerate(System::B, P(s), bd);
    CHECK_FALSE(e.derivations.empty());
    for (const auto& d : e.derivations) {
      CHECK(check_derivation(*d).ok);
      CHECK(d->subject == P(s));
      CHECK(within_bounds(d->type, bd));
    }
  }
  // A clash has no typing at all.
  CHECK(typings_enumerate(System::B, P("!x y"), bd).derivations.empty());
  CHECK(typings_enumerate(System::B, P("der (\\x.x)"), bd).derivations.empty());
}

TEST_CASE("the empty bang types anything") {
  Enumeration e = typings_enumerate(System::B, P("!((!x) y)"), {1, 1, 2});
  bool closed_empty = false;
  for (const auto& d : e.derivations) closed_empty |= d->env.empty() && d->type == T("[]");
  CHECK(closed_empty);
}

TEST_CASE("typability is decided by clash-free normal forms") {
  CHECK(typable(P("(\\x.x x) !y"), 10).verdict == Tri::Yes);
  CHECK(typable(P("(\\x.x !y) !(!z)"), 10).verdict == Tri::No);
  CHECK(typable(omega_term(), 10).verdict == Tri::Unknown);
}

TEST_CASE("typings survive full steps both ways") {
  for (const char* s : {"(\\x.x) !y", "(\\x.!x) !(x !y)", "der ((\\x.!x) !y)", "!((\\x.x) !y)", "(x !z)[x<-!y]"}) {
    CAPTURE(s);
    Term t = P(s);
    auto r = first_redex(t, Closure::Full);
    REQUIRE(r);
    TransportReport tr = typing_transport_check(t, r->reduct, {2, 2, 3});
    CHECK(tr.is_step);
    CHECK(tr.ok);
    CHECK(tr.failures == 0);
    CHECK(tr.forward > 0);
  }
}

TEST_CASE("subject reduction and expansion on a derivation") {
  Term t = P("(\\x.x) !y");
  Enumeration e = typings_enumerate(System::B, t, {1, 1, 3});
  REQUIRE_FALSE(e.derivations.empty());
  for (const auto& d : e.derivations) {
    auto red = subject_reduce(d, t, {});
    REQUIRE(red);
    CHECK(check_derivation(**red).ok);
    CHECK((*red)->typing() == d->typing());
    auto back = subject_expand(*red, t, {});
    REQUIRE(back);
    CHECK((*back)->typing() == d->typing());
  }
}

TEST_CASE("closed normal forms have the shape their type demands") {
  CHECK(nf_shape(T("[a] -> a"), P("\\x.x")).shape == NfShape::MustAbs);
  CHECK(nf_shape(T("a"), P("x")).shape == NfShape::Violation);  // no closed derivation
  CHECK(nf_shape(T("[]"), P("!(\\x.x)")).shape == NfShape::MustBang);
  CHECK(nf_shape(T("[]"), P("(\\x.x) !(\\x.x)")).shape == NfShape::Violation);  // not normal
}
