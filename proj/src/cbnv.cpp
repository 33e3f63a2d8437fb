#include "banglab/cbnv.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace banglab {

const char* calculus_name(Calculus c) { return c == Calculus::CBN ? "cbn" : "cbv"; }

Calculus parse_calculus(const std::string& s) {
  if (s == "cbn" || s == "CBN" || s == "n") return Calculus::CBN;
  if (s == "cbv" || s == "CBV" || s == "v") return Calculus::CBV;
  throw std::invalid_argument("unknown calculus '" + s + "' (expected cbn or cbv)");
}

bool is_cterm(const Term& t) { return !t.has_hole() && is_bang_free(t); }

const char* crule_name(CRule r) {
  switch (r) {
    case CRule::DB:
      return "dB";
    case CRule::SN:
      return "sn";
    case CRule::SV:
      return "sv";
  }
  return "?";
}

namespace {

// Same index discipline as the s! contraction: index 0 becomes u, which
// lives under k closures at the redex.
Term inst_under_list(const Term& body, const Term& u, std::uint32_t k) {
  std::function<Term(const Term&, std::uint32_t)> go = [&](const Term& s, std::uint32_t d) -> Term {
    if (s.dangling() <= d) return s;
    switch (s.kind()) {
      case Kind::BVar:
        if (s.index() < d) return s;
        if (s.index() == d) return shift(u, d);
        return Term::bvar(s.index() - 1 + k);
      case Kind::Var:
      case Kind::Hole:
        return s;
      default:
        break;
    }
    Term c0 = go(s.child(0), d + (s.is_binder() ? 1 : 0));
    Term c1;
    if (s.arity() == 2) c1 = go(s.child(1), d);
    return with_children(s, c0, c1);
  };
  return go(body, 0);
}

std::optional<std::pair<CRule, Term>> c_contract(Calculus c, const Term& t) {
  if (t.kind() == Kind::App) {
    if (auto r = contract_root(t, kRuleDB)) return std::make_pair(CRule::DB, r->second);
    return std::nullopt;
  }
  if (t.kind() != Kind::Sub) return std::nullopt;
  if (c == Calculus::CBN) return std::make_pair(CRule::SN, instantiate(t.body(), t.arg()));
  auto [core, k] = peel_list(t.arg());
  if (!is_value(core)) return std::nullopt;
  return std::make_pair(CRule::SV, rewrap_list(t.arg(), k, inst_under_list(t.body(), core, k)));
}

// CBN surface positions: function side, under abstractions, closure bodies.
// CBV: both sides of applications and closures, never under abstractions.
bool c_walk(Calculus c, const Term& t, Path& path, const std::function<bool(const Term&, const Path&)>& visit) {
  if (!visit(t, path)) return false;
  std::vector<int> kids;
  switch (t.kind()) {
    case Kind::Abs:
      if (c == Calculus::CBN) kids = {0};
      break;
    case Kind::App:
    case Kind::Sub:
      kids = c == Calculus::CBN ? std::vector<int>{0} : std::vector<int>{0, 1};
      break;
    default:
      break;
  }
  for (int i : kids) {
    path.push_back(i);
    bool go_on = c_walk(c, t.child(i), path, visit);
    path.pop_back();
    if (!go_on) return false;
  }
  return true;
}

std::optional<CRedex> first_c_redex(Calculus c, const Term& t) {
  std::optional<CRedex> out;
  Path path;
  c_walk(c, t, path, [&](const Term& s, const Path& p) {
    if (auto r = c_contract(c, s)) {
      out = CRedex{p, r->first, replace_at(t, p, r->second)};
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace

std::vector<CRedex> c_redexes(Calculus c, const Term& t) {
  std::vector<CRedex> out;
  Path path;
  c_walk(c, t, path, [&](const Term& s, const Path& p) {
    if (auto r = c_contract(c, s)) out.push_back({p, r->first, replace_at(t, p, r->second)});
    return true;
  });
  return out;
}

std::optional<Term> c_step(Calculus c, const Term& t) {
  if (auto r = first_c_redex(c, t)) return r->reduct;
  return std::nullopt;
}

COutcome c_normalize(Calculus c, const Term& t, std::uint64_t fuel, std::uint64_t size_cap) {
  COutcome out;
  out.term = t;
  while (true) {
    auto r = first_c_redex(c, out.term);
    if (!r) {
      out.normalized = true;
      return out;
    }
    if (out.steps >= fuel || r->reduct.size() > size_cap) return out;
    out.term = r->reduct;
    ++out.steps;
    out.trace.push_back({r->rule, r->position, out.term});
  }
}

Term embed(Calculus c, const Term& t) {
  switch (t.kind()) {
    case Kind::Hole:
      return t;
    case Kind::Var:
    case Kind::BVar:
      return c == Calculus::CBN ? t : Term::bang(t);
    case Kind::Abs: {
      Term a = Term::raw_abs(t.name(), embed(c, t.body()));
      return c == Calculus::CBN ? a : Term::bang(a);
    }
    case Kind::App: {
      Term f = embed(c, t.fun());
      Term a = embed(c, t.arg());
      if (c == Calculus::CBN) return Term::app(f, Term::bang(a));
      auto [core, k] = peel_list(f);
      if (core.kind() == Kind::Bang) return rewrap_list(f, k, Term::app(core.inner(), shift(a, k)));
      return Term::app(Term::der(f), a);
    }
    case Kind::Sub: {
      Term a = embed(c, t.arg());
      return Term::raw_sub(embed(c, t.body()), t.name(), c == Calculus::CBN ? Term::bang(a) : a);
    }
    case Kind::Bang:
    case Kind::Der:
      break;
  }
  throw std::invalid_argument("embed: not a CBN/CBV term: " + print_term(t));
}

Ctx embed_ctx(Calculus c, const Ctx& f) {
  Term spine = embed(c, f.spine());
  return Ctx(spine_fits(f.kind(), spine) ? f.kind() : tightest_kind(spine), spine);
}

Term float_closures(const Term& t) {
  if (t.arity() == 0) return t;
  Term c0 = float_closures(t.child(0));
  Term c1 = t.arity() == 2 ? float_closures(t.child(1)) : Term();
  Term r = with_children(t, c0, c1);
  if (r.kind() == Kind::App && r.fun().kind() == Kind::Sub) {
    auto [core, k] = peel_list(r.fun());
    return rewrap_list(r.fun(), k, Term::app(core, shift(r.arg(), k)));
  }
  if (r.kind() == Kind::Der && r.inner().kind() == Kind::Sub) {
    auto [core, k] = peel_list(r.inner());
    return rewrap_list(r.inner(), k, Term::der(core));
  }
  return r;
}

namespace {

SimStep project(const Term& from, const Term& to, unsigned window, std::size_t node_cap) {
  SimStep s;
  s.source = from;
  s.target = to;
  Term to_f = float_closures(to);
  std::unordered_map<Term, Term, TermHash> parent;
  parent.emplace(from, Term());
  std::deque<std::pair<Term, unsigned>> queue = {{from, 0}};
  std::optional<Term> hit;
  std::optional<unsigned> modulo_depth;
  bool capped = false;
  auto chain_to = [&](Term cur) {
    std::vector<Term> chain;
    while (cur.valid()) {
      chain.push_back(cur);
      cur = parent.at(cur);
    }
    return std::vector<Term>(chain.rbegin(), chain.rend());
  };
  if (from == to) {
    s.exact = true;
    s.chain = {from};
    return s;
  }
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    // An exact hit may still appear a little deeper than a modulo one.
    if (modulo_depth && depth > *modulo_depth + 2) break;
    if (depth >= window) continue;
    for (const Redex& r : redexes(cur, Closure::Surface)) {
      if (parent.count(r.reduct)) continue;
      if (parent.size() >= node_cap) {
        capped = true;
        break;
      }
      parent.emplace(r.reduct, cur);
      if (r.reduct == to) {
        s.exact = true;
        s.chain = chain_to(r.reduct);
        return s;
      }
      if (!hit && float_closures(r.reduct) == to_f) {
        hit = r.reduct;
        modulo_depth = depth + 1;
      }
      queue.push_back({r.reduct, depth + 1});
    }
    if (capped) break;
  }
  if (hit) {
    s.modulo = true;
    s.chain = chain_to(*hit);
    return s;
  }
  s.exhausted = !capped;
  return s;
}

}  // namespace

SimReport simulate_check(Calculus c, const Term& t, std::uint64_t fuel, unsigned window, std::size_t node_cap) {
  SimReport rep;
  Term cur = t;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    auto next = c_step(c, cur);
    if (!next) break;
    SimStep s = project(embed(c, cur), embed(c, *next), window, node_cap);
    if (s.exact)
      ++rep.exact;
    else if (s.modulo)
      ++rep.modulo;
    else if (s.exhausted)
      ++rep.failed;
    else
      ++rep.unknown;
    rep.steps.push_back(std::move(s));
    cur = *next;
  }
  return rep;
}

namespace {

Term eraser(std::size_t m) {
  Term e = identity_term();
  for (std::size_t i = 0; i < m; ++i) e = Term::abs("z", e);
  return e;
}

// A CBN surface normal form is λx1..xn. h a1..am.
std::optional<Ctx> cbn_witness(const Term& nf) {
  std::size_t n = 0;
  const Term* cur = &nf;
  while (cur->kind() == Kind::Abs) {
    ++n;
    cur = &cur->body();
  }
  std::size_t m = 0;
  while (cur->kind() == Kind::App) {
    ++m;
    cur = &cur->fun();
  }
  std::vector<Term> args(n, identity_term());
  Term spine = Term::hole();
  if (cur->kind() == Kind::BVar && cur->index() < n) {
    args[n - 1 - cur->index()] = eraser(m);
    for (const Term& a : args) spine = Term::app(spine, a);
    return Ctx(CtxKind::Testing, spine);
  }
  if (cur->kind() != Kind::Var) return std::nullopt;
  for (const Term& a : args) spine = Term::app(spine, a);
  return Ctx(CtxKind::Testing, Term::app(Term::abs(cur->name(), spine), eraser(m)));
}

std::vector<Term> cbv_value_pool() {
  static const std::vector<Term> pool = {parse_term("\\a.a"), parse_term("\\a.\\b.a"), parse_term("\\a.\\b.b")};
  return pool;
}

// Bind some free variables to pool values, then apply up to two pool values.
std::optional<std::pair<Ctx, Term>> cbv_witness(const Term& t, std::uint64_t fuel) {
  std::set<std::string> fvs = free_vars(t);
  std::vector<std::string> names(fvs.begin(), fvs.end());
  if (names.size() > 3) names.resize(3);
  const auto pool = cbv_value_pool();
  const std::size_t options = pool.size() + 1;  // last option: leave unbound
  std::size_t assignments = 1;
  for (std::size_t i = 0; i < names.size(); ++i) assignments *= options;
  for (std::size_t nargs = 0; nargs <= 2; ++nargs) {
    std::size_t arg_choices = 1;
    for (std::size_t i = 0; i < nargs; ++i) arg_choices *= pool.size();
    for (std::size_t a = 0; a < assignments; ++a) {
      for (std::size_t g = 0; g < arg_choices; ++g) {
        Term spine = Term::hole();
        std::size_t code = g;
        for (std::size_t i = 0; i < nargs; ++i) {
          spine = Term::app(spine, pool[code % pool.size()]);
          code /= pool.size();
        }
        code = a;
        for (const auto& x : names) {
          std::size_t o = code % options;
          code /= options;
          if (o < pool.size()) spine = Term::app(Term::abs(x, spine), pool[o]);
        }
        Ctx ctx(CtxKind::Testing, spine);
        COutcome o = c_normalize(Calculus::CBV, plug(ctx, t), fuel);
        if (o.normalized && is_value(o.term)) return std::make_pair(ctx, o.term);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CMeaning c_meaningful(Calculus c, const Term& t, std::uint64_t fuel, bool want_context) {
  CMeaning r;
  COutcome o = c_normalize(c, t, fuel);
  r.normal_form = o.term;
  r.steps = o.steps;
  if (!o.normalized) {
    r.reason = "no surface normal form within fuel (divergence suspected)";
    return r;
  }
  r.verdict = Verdict::Meaningful;
  r.reason = "surface-normalizing";
  if (!want_context) return r;
  std::uint64_t replay = fuel * 10 + 1000;
  if (c == Calculus::CBN) {
    if (auto ctx = cbn_witness(o.term)) {
      COutcome p = c_normalize(c, plug(*ctx, t), replay);
      if (p.normalized && p.term == identity_term()) {
        r.context = ctx;
        r.reached = p.term;
        return r;
      }
    }
    r.reason += "; witness context did not replay";
    return r;
  }
  if (auto w = cbv_witness(t, replay)) {
    r.context = w->first;
    r.reached = w->second;
  } else {
    r.reason += "; no witness context in the search space";
  }
  return r;
}

TransferReport transfer_check(Calculus c, const Term& t, const Budgets& b) {
  TransferReport r;
  r.source = c_meaningful(c, t, b.fuel);
  r.target = meaningful(embed(c, t), b);
  r.disagreement = r.source.verdict != Verdict::Unknown && r.target.verdict != Verdict::Unknown &&
                   r.source.verdict != r.target.verdict;
  return r;
}

namespace {

System source_system(Calculus c) { return c == Calculus::CBN ? System::N : System::V; }

// Rebuild an es chain over the core derivation, closing subjects by binder.
DerivPtr rechain(const DerivPtr& chain, std::uint32_t k, const std::function<DerivPtr(const DerivPtr&)>& core) {
  if (k == 0) return core(chain);
  const auto& P = chain->premises;
  DerivPtr body = rechain(P.at(0), k - 1, core);
  return derive(System::B, "es", Term::sub(body->subject, chain->binder, P.at(1)->subject), chain->binder,
                {body, P.at(1)});
}

DerivPtr to_b(Calculus c, const DerivPtr& d) {
  const auto& P = d->premises;
  const std::string& rule = d->rule;
  if (rule == "var") {
    if (c == Calculus::CBN) return derive_var(System::B, d->subject.name(), d->type);
    std::vector<DerivPtr> axioms;
    for (const Type& s : d->type.multi().elems()) axioms.push_back(derive_var(System::B, d->subject.name(), s));
    return derive(System::B, "bang", Term::bang(d->subject), "", std::move(axioms));
  }
  if (rule == "abs") {
    if (c == Calculus::CBN) {
      DerivPtr body = to_b(c, P.at(0));
      return derive(System::B, "abs", Term::abs(d->binder, body->subject), d->binder, {body});
    }
    Term lam;
    std::vector<DerivPtr> abstractions;
    for (const auto& p : P) {
      DerivPtr body = to_b(c, p);
      abstractions.push_back(derive(System::B, "abs", Term::abs(d->binder, body->subject), d->binder, {body}));
    }
    // With no premises the subject still has to be the embedded abstraction.
    lam = Term::bang(embed(c, d->subject).inner());
    return derive(System::B, "bang", lam, "", std::move(abstractions));
  }
  if (rule == "app") {
    DerivPtr f = to_b(c, P.at(0));
    if (c == Calculus::CBN) {
      std::vector<DerivPtr> as;
      for (std::size_t i = 1; i < P.size(); ++i) as.push_back(to_b(c, P[i]));
      Term arg = Term::bang(embed(c, d->subject.arg()));
      DerivPtr bang = derive(System::B, "bang", arg, "", std::move(as));
      return derive(System::B, "app", Term::app(f->subject, arg), "", {f, bang});
    }
    DerivPtr a = to_b(c, P.at(1));
    auto [core, k] = peel_list(f->subject);
    if (core.kind() == Kind::Bang) {
      return rechain(f, k, [&](const DerivPtr& bang) {
        const DerivPtr& s = bang->premises.at(0);
        return derive(System::B, "app", Term::app(s->subject, a->subject), "", {s, a});
      });
    }
    DerivPtr der = derive(System::B, "der", Term::der(f->subject), "", {f});
    return derive(System::B, "app", Term::app(der->subject, a->subject), "", {der, a});
  }
  if (rule == "es") {
    DerivPtr body = to_b(c, P.at(0));
    DerivPtr arg;
    if (c == Calculus::CBN) {
      std::vector<DerivPtr> as;
      for (std::size_t i = 1; i < P.size(); ++i) as.push_back(to_b(c, P[i]));
      arg = derive(System::B, "bang", Term::bang(embed(c, d->subject.arg())), "", std::move(as));
    } else {
      arg = to_b(c, P.at(1));
    }
    return derive(System::B, "es", Term::sub(body->subject, d->binder, arg->subject), d->binder, {body, arg});
  }
  throw std::invalid_argument("unexpected rule " + rule);
}

struct Back {
  Calculus c;
  System sys;
  std::set<std::string> taken;

  std::string fresh() {
    std::string x = fresh_name("_c", [&](const std::string& s) { return taken.count(s) > 0; });
    taken.insert(x);
    return x;
  }

  DerivPtr fail(const std::string& why) { throw std::runtime_error(why); }

  // d types embed(c, t) in B; t guides the decomposition.
  DerivPtr go(const DerivPtr& d, const Term& t) {
    const auto& P = d->premises;
    switch (t.kind()) {
      case Kind::Var: {
        if (c == Calculus::CBN) return derive_var(sys, t.name(), d->type);
        if (d->rule != "bang") fail("expected a bang over the variable");
        return derive_var(sys, t.name(), d->type);
      }
      case Kind::Abs: {
        if (c == Calculus::CBN) {
          Term body = open(t.body(), d->binder);
          DerivPtr p = go(P.at(0), body);
          return derive(sys, "abs", t, d->binder, {p});
        }
        if (d->rule != "bang") fail("expected a bang over the abstraction");
        std::string x = fresh();
        Term body = open(t.body(), x);
        std::vector<DerivPtr> ps;
        for (const auto& a : P) {
          if (a->rule != "abs") fail("expected abstractions under the bang");
          ps.push_back(go(rename_free(a->premises.at(0), a->binder, x), body));
        }
        return derive(sys, "abs", t, x, std::move(ps));
      }
      case Kind::App: {
        if (c == Calculus::CBN) {
          DerivPtr f = go(P.at(0), t.fun());
          std::vector<DerivPtr> ps = {f};
          for (const auto& a : P.at(1)->premises) ps.push_back(go(a, t.arg()));
          return derive(sys, "app", t, "", std::move(ps));
        }
        Term fv = embed(c, t.fun());
        auto [core, k] = peel_list(fv);
        if (core.kind() == Kind::Bang) {
          // d is an es chain over s u: peel it back into the chain over !s.
          DerivPtr a;
          DerivPtr chain = rechain(d, k, [&](const DerivPtr& app) {
            a = app->premises.at(1);
            const DerivPtr& s = app->premises.at(0);
            return derive(System::B, "bang", Term::bang(s->subject), "", {s});
          });
          return derive(sys, "app", t, "", {go(chain, t.fun()), go(a, t.arg())});
        }
        DerivPtr f = go(P.at(0)->premises.at(0), t.fun());
        return derive(sys, "app", t, "", {f, go(P.at(1), t.arg())});
      }
      case Kind::Sub: {
        Term body = open(t.body(), d->binder);
        DerivPtr b = go(P.at(0), body);
        std::vector<DerivPtr> ps = {b};
        if (c == Calculus::CBN) {
          for (const auto& a : P.at(1)->premises) ps.push_back(go(a, t.arg()));
        } else {
          ps.push_back(go(P.at(1), t.arg()));
        }
        return derive(sys, "es", t, d->binder, std::move(ps));
      }
      default:
        return fail("not a CBN/CBV term");
    }
  }
};

}  // namespace

std::optional<DerivPtr> to_bang_derivation(Calculus c, const DerivPtr& d, const Term& t) {
  if (!d || d->system != source_system(c) || d->subject != t) return std::nullopt;
  try {
    DerivPtr r = to_b(c, freshen_binders(d, free_vars(t)));
    if (r->subject != embed(c, t)) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<DerivPtr> from_bang_derivation(Calculus c, const DerivPtr& d, const Term& t) {
  if (!d || d->system != System::B || d->subject != embed(c, t)) return std::nullopt;
  try {
    DerivPtr fresh = freshen_binders(d, free_vars(t));
    Back back{c, source_system(c), free_vars(t)};
    std::function<void(const Derivation&)> names = [&](const Derivation& n) {
      if (!n.binder.empty()) back.taken.insert(n.binder);
      for (const auto& p : n.premises) names(*p);
    };
    names(*fresh);
    DerivPtr r = back.go(fresh, t);
    if (r->subject != t) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

TypingTransfer typing_transfer_check(Calculus c, const Term& t, const Bounds& b) {
  TypingTransfer rep;
  Term tb = embed(c, t);
  Enumeration src = typings_enumerate(source_system(c), t, b);
  Enumeration dst = typings_enumerate(System::B, tb, b);
  rep.source = src.derivations.size();
  rep.target = dst.derivations.size();
  rep.truncated = src.truncated || dst.truncated;
  auto note = [&](const std::string& s) {
    ++rep.failures;
    if (rep.detail.empty()) rep.detail = s;
  };
  for (const auto& d : src.derivations) {
    auto r = to_bang_derivation(c, d, t);
    if (r && check_derivation(**r).ok && (*r)->typing() == d->typing())
      ++rep.carried;
    else
      note("no B derivation of the embedding for " + print_typing(d->typing()));
  }
  for (const auto& d : dst.derivations) {
    auto r = from_bang_derivation(c, d, t);
    if (r && check_derivation(**r).ok && (*r)->typing() == d->typing())
      ++rep.carried;
    else
      note(std::string("no ") + system_name(source_system(c)) + " derivation for " + print_typing(d->typing()));
  }
  rep.sets_equal = typing_set(src) == typing_set(dst);
  rep.ok = rep.failures == 0;
  return rep;
}

}  // namespace banglab
