#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "banglab/cbnv.hpp"
#include "banglab/syntax.hpp"
#include "banglab/typing.hpp"

using namespace banglab;

namespace {
Term P(const char* s) { return parse_term(s); }
const char* kT0 = "(\\x.y x x) ((\\z.z) (\\z.z))";
const char* kOmega = "(\\x.x x) (\\x.x x)";

std::vector<Term> terms_of(const COutcome& o) {
  std::vector<Term> out;
  for (const auto& e : o.trace) out.push_back(e.term);
  return out;
}
}  // namespace

TEST_CASE("CBN and CBV runs of the same term") {
  COutcome n = c_normalize(Calculus::CBN, P(kT0), 10);
  REQUIRE(n.normalized);
  CHECK(n.term == P("y ((\\z.z) (\\z.z)) ((\\z.z) (\\z.z))"));
  CHECK(terms_of(n) == std::vector<Term>{P("(y x x)[x<-(\\z.z) (\\z.z)]"), n.term});
  CHECK(n.trace[0].rule == CRule::DB);
  CHECK(n.trace[1].rule == CRule::SN);

  COutcome v = c_normalize(Calculus::CBV, P(kT0), 10);
  REQUIRE(v.normalized);
  CHECK(v.steps == 4);
  CHECK(v.term == P("y (\\z.z) (\\z.z)"));
  CHECK(terms_of(v)[1] == P("(y x x)[x<-z[z<-\\z.z]]"));
  CHECK(terms_of(v)[2] == P("(y x x)[x<-\\z.z]"));
}

TEST_CASE("surface positions differ between the calculi") {
  // CBN reduces under abstractions, CBV does not.
  Term t = P("\\w.(\\x.x) y");
  CHECK(c_step(Calculus::CBN, t));
  CHECK_FALSE(c_step(Calculus::CBV, t));
  // CBV reduces arguments, CBN does not.
  Term u = P("x ((\\y.y) z)");
  CHECK_FALSE(c_step(Calculus::CBN, u));
  CHECK(c_step(Calculus::CBV, u));
  // sv waits for a value; sn does not.
  Term s = P("y[y<-x z]");
  CHECK(c_step(Calculus::CBN, s) == P("x z"));
  CHECK_FALSE(c_step(Calculus::CBV, s));
  for (Calculus c : {Calculus::CBN, Calculus::CBV}) CHECK_FALSE(c_step(c, P("\\x.x")));
}

TEST_CASE("divergence") {
  CHECK_FALSE(c_normalize(Calculus::CBV, P("x ((\\x.x x) (\\x.x x))"), 50).normalized);
  CHECK(c_normalize(Calculus::CBN, P("x ((\\x.x x) (\\x.x x))"), 50).normalized);
  CHECK_FALSE(c_normalize(Calculus::CBN, P(kOmega), 50).normalized);
}

TEST_CASE("embeddings") {
  CHECK(embed(Calculus::CBN, P(kT0)) == P("(\\x.y !x !x) !((\\z.z) !(\\z.z))"));
  CHECK(embed(Calculus::CBV, P(kT0)) == P("(\\x.der (y !x) !x) ((\\z.!z) !(\\z.!z))"));
  CHECK(embed(Calculus::CBV, P("x")) == P("!x"));
  CHECK(embed(Calculus::CBV, P("\\x.x")) == P("!(\\x.!x)"));
  CHECK(embed(Calculus::CBN, P("x[x<-y z]")) == P("x[x<-!(y !z)]"));
  // A closure around a banged function stays outside the application.
  CHECK(embed(Calculus::CBV, P("(\\x.x)[y<-z] w")) == P("((\\x.!x) !w)[y<-!z]"));
  CHECK(embed(Calculus::CBV, P("x y")) == P("x !y"));
  CHECK(embed(Calculus::CBV, P("(x y) z")) == P("der (x !y) !z"));
}

TEST_CASE("embedded normal forms stay normal") {
  std::size_t checked = 0;
  enum_cterms(5, {"x", "y"}, [&](const Term& t) {
    for (Calculus c : {Calculus::CBN, Calculus::CBV}) {
      if (c_step(c, t)) continue;
      ++checked;
      CAPTURE(print_term(t));
      CHECK_FALSE(first_redex(embed(c, t), Closure::Surface));
    }
    return true;
  });
  CHECK(checked > 100);
}

TEST_CASE("contexts embed homomorphically") {
  for (const char* f : {"(\\x.y) []", "\\z.[] x", "y[x<-[]]", "x ([] z)"}) {
    for (const char* t : {"x", "\\w.w", "x (y z)"}) {
      CAPTURE(f);
      CAPTURE(t);
      Ctx ctx = parse_ctx(f);
      CHECK(embed(Calculus::CBN, plug(ctx, P(t))) == plug(embed_ctx(Calculus::CBN, ctx), embed(Calculus::CBN, P(t))));
    }
  }
}

TEST_CASE("simulation of source steps") {
  SimReport n = simulate_check(Calculus::CBN, P(kT0), 10);
  CHECK(n.ok());
  CHECK(n.exact == 2);
  REQUIRE(n.steps.size() == 2);
  CHECK(n.steps[0].chain.size() == 2);  // one dB step
  CHECK(n.steps[0].chain.back() == P("(y !x !x)[x<-!((\\z.z) !(\\z.z))]"));

  SimReport v = simulate_check(Calculus::CBV, P(kT0), 10);
  CHECK(v.ok());
  CHECK(v.steps.size() == 4);
  CHECK(simulate_check(Calculus::CBV, P("\\x.x"), 10).steps.empty());
}

TEST_CASE("meaningfulness of source terms") {
  CMeaning m = c_meaningful(Calculus::CBN, P("x (\\y.(\\x.x x) (\\x.x x))"), 100);
  CHECK(m.verdict == Verdict::Meaningful);
  REQUIRE(m.context);
  CHECK(m.reached == P("\\z.z"));
  CHECK(c_meaningful(Calculus::CBN, P("\\x.(\\y.y y) (\\y.y y)"), 100).verdict == Verdict::Unknown);

  CMeaning v = c_meaningful(Calculus::CBV, P("x (\\y.z)"), 100);
  CHECK(v.verdict == Verdict::Meaningful);
  REQUIRE(v.context);
  CHECK(is_value(v.reached));
  CHECK(c_meaningful(Calculus::CBV, P("x ((\\x.x x) (\\x.x x))"), 100).verdict == Verdict::Unknown);
}

TEST_CASE("meaningfulness agrees with the embedding") {
  for (Calculus c : {Calculus::CBN, Calculus::CBV}) {
    for (const char* s : {"\\z.z", kOmega, "x (\\y.z)", "x (\\y.(\\x.x x) (\\x.x x))"}) {
      CAPTURE(s);
      TransferReport r = transfer_check(c, P(s), Budgets{});
      CHECK_FALSE(r.disagreement);
    }
  }
  TransferReport i = transfer_check(Calculus::CBN, P("\\z.z"), Budgets{});
  CHECK(i.source.verdict == Verdict::Meaningful);
  CHECK(i.target.verdict == Verdict::Meaningful);
}

TEST_CASE("N and V typings") {
  // [[a] -> a] -> [a] -> a for the identity in N.
  DerivPtr x1 = derive_var(System::N, "x", parse_type("[a] -> a"));
  DerivPtr y1 = derive_var(System::N, "y", parse_type("a"));
  DerivPtr xy = derive(System::N, "app", P("x y"), "", {x1, y1});
  DerivPtr ly = derive(System::N, "abs", P("\\y.x y"), "y", {xy});
  DerivPtr d = derive(System::N, "abs", P("\\x.\\y.x y"), "x", {ly});
  REQUIRE(check_derivation(*d).ok);
  CHECK(d->type == parse_type("[[a] -> a] -> [a] -> a"));
  auto b = to_bang_derivation(Calculus::CBN, d, P("\\x.\\y.x y"));
  REQUIRE(b);
  CHECK(check_derivation(**b).ok);
  CHECK((*b)->typing() == d->typing());
  auto back = from_bang_derivation(Calculus::CBN, *b, P("\\x.\\y.x y"));
  REQUIRE(back);
  CHECK((*back)->typing() == d->typing());

  // Abstractions are values, typed [] with no premises in V.
  DerivPtr e = derive(System::V, "abs", P("\\x.(\\y.y y) (\\y.y y)"), "x", {});
  REQUIRE(check_derivation(*e).ok);
  CHECK(e->type == parse_type("[]"));
  auto eb = to_bang_derivation(Calculus::CBV, e, e->subject);
  REQUIRE(eb);
  CHECK(check_derivation(**eb).ok);
}

TEST_CASE("typability transfers both ways on small terms") {
  for (Calculus c : {Calculus::CBN, Calculus::CBV}) {
    for (const char* s : {"x", "\\x.x", "x y", "(\\x.x) y", "x[x<-y]", "\\x.x x"}) {
      CAPTURE(s);
      TypingTransfer r = typing_transfer_check(c, P(s), {2, 2, 3});
      CHECK(r.ok);
      CHECK(r.failures == 0);
      CHECK(r.carried == r.source + r.target);
    }
  }
}
