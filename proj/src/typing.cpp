#include "banglab/typing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace banglab {

DerivPtr derive_var(System s, const std::string& x, const Type& t) {
  auto d = std::make_shared<Derivation>();
  d->system = s;
  d->rule = "var";
  d->subject = Term::var(x);
  d->type = t;
  d->env = Env::single(x, s == System::V ? t.multi() : Multitype({t}));
  return d;
}

DerivPtr derive(System s, const std::string& rule, const Term& subject, const std::string& binder,
                std::vector<DerivPtr> premises) {
  auto d = std::make_shared<Derivation>();
  d->system = s;
  d->rule = rule;
  d->subject = subject;
  d->binder = binder;
  const auto& P = premises;
  auto sum_from = [&](std::size_t i) {
    Env g;
    for (; i < P.size(); ++i) g = g + P[i]->env;
    return g;
  };
  if (rule == "abs") {
    if (s == System::V) {
      std::vector<Type> arrows;
      for (const auto& p : P) {
        arrows.push_back(Type::arrow(p->env.get(binder), p->type));
        d->env = d->env + p->env.without(binder);
      }
      d->type = Type::multi(Multitype(std::move(arrows)));
    } else {
      d->type = Type::arrow(P.at(0)->env.get(binder), P.at(0)->type);
      d->env = P[0]->env.without(binder);
    }
  } else if (rule == "app") {
    const Type& ft = P.at(0)->type;
    d->type = s == System::V ? ft.multi().elems().at(0).codomain() : ft.codomain();
    d->env = sum_from(0);
  } else if (rule == "es") {
    d->type = P.at(0)->type;
    d->env = P[0]->env.without(binder) + sum_from(1);
  } else if (rule == "bang") {
    std::vector<Type> ts;
    for (const auto& p : P) ts.push_back(p->type);
    d->type = Type::multi(Multitype(std::move(ts)));
    d->env = sum_from(0);
  } else if (rule == "der") {
    d->type = P.at(0)->type.multi().elems().at(0);
    d->env = P[0]->env;
  } else {
    throw std::invalid_argument("derive: unsupported rule " + rule);
  }
  d->premises = std::move(premises);
  return d;
}

namespace {

// Premises whose subjects are opened with the node's binder.
bool binds_premise(const Derivation& d, std::size_t i) {
  if (d.rule == "abs") return true;
  return d.rule == "es" && i == 0;
}

Env rename_env(const Env& g, const std::string& from, const std::string& to) {
  Env r;
  for (const auto& [x, m] : g.entries()) r.add(x == from ? to : x, m);
  return r;
}

void collect_binders(const Derivation& d, std::set<std::string>& out) {
  if (!d.binder.empty()) out.insert(d.binder);
  for (const auto& p : d.premises) collect_binders(*p, out);
}

}  // namespace

DerivPtr rename_free(const DerivPtr& d, const std::string& from, const std::string& to) {
  if (from == to || !occurs_free(from, d->subject)) return d;
  auto n = std::make_shared<Derivation>(*d);
  n->subject = msubst(d->subject, from, Term::var(to));
  n->env = rename_env(d->env, from, to);
  for (auto& p : n->premises) p = rename_free(p, from, to);
  return n;
}

DerivPtr freshen_binders(const DerivPtr& d, std::set<std::string> taken) {
  collect_binders(*d, taken);
  for (const auto& x : free_vars(d->subject)) taken.insert(x);
  std::function<DerivPtr(const DerivPtr&)> go = [&](const DerivPtr& cur) -> DerivPtr {
    auto n = std::make_shared<Derivation>(*cur);
    if (!n->binder.empty()) {
      std::string fresh = fresh_name("_v", [&](const std::string& s) { return taken.count(s) > 0; });
      taken.insert(fresh);
      for (std::size_t i = 0; i < n->premises.size(); ++i)
        if (binds_premise(*n, i)) n->premises[i] = rename_free(n->premises[i], n->binder, fresh);
      n->binder = fresh;
    }
    for (auto& p : n->premises) p = go(p);
    return n;
  };
  return go(d);
}

std::vector<Type> type_universe(const Bounds& b) {
  // cur holds the types of depth <= d.
  std::vector<Type> cur;
  for (unsigned i = 0; i < b.pool; ++i) cur.push_back(Type::tvar(tvar_name(i)));
  cur.push_back(Type::multi(Multitype()));
  if (b.depth == 0) return {};
  for (unsigned d = 2; d <= b.depth; ++d) {
    std::vector<Type> prev = cur;
    std::sort(prev.begin(), prev.end());
    // Multitypes over prev with at most card elements.
    std::vector<Multitype> multis;
    std::vector<Type> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      multis.push_back(Multitype(pick));
      if (pick.size() == b.card) return;
      for (std::size_t i = from; i < prev.size(); ++i) {
        pick.push_back(prev[i]);
        rec(i);
        pick.pop_back();
      }
    };
    rec(0);
    std::vector<Type> next;
    for (unsigned i = 0; i < b.pool; ++i) next.push_back(Type::tvar(tvar_name(i)));
    for (const auto& m : multis) next.push_back(Type::multi(m));
    for (const auto& m : multis)
      if (Type::multi(m).depth() <= d - 1)
        for (const auto& c : prev) next.push_back(Type::arrow(m, c));
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  return cur;
}

namespace {

struct Entry {
  Env env;
  Type type;
  DerivPtr d;
};
using Entries = std::vector<Entry>;

class Enumerator {
 public:
  Enumerator(System s, const Bounds& b, const EnumLimits& lim, const Term& root) : sys_(s), b_(b), lim_(lim) {
    universe_ = type_universe(b);
    for (const auto& t : universe_)
      if (t.is_multi()) multis_.push_back(t);
    taken_ = free_vars(root);
  }

  bool truncated() const { return truncated_; }

  std::shared_ptr<const Entries> go(const Term& t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    auto out = std::make_shared<Entries>();
    Sink sink{*this, *out, {}};
    compute(t, sink);
    memo_.emplace(t, out);
    return out;
  }

 private:
  struct Sink {
    Enumerator& self;
    Entries& out;
    std::set<Typing> seen;
    bool full() const { return out.size() >= self.lim_.max_entries; }
    template <class Make>
    void add(Env env, Type type, Make make) {
      if (!within_bounds(type, self.b_)) return;
      if (out.size() >= self.lim_.max_entries) {
        self.truncated_ = true;
        return;
      }
      if (!seen.insert({env, type}).second) return;
      out.push_back({std::move(env), std::move(type), make()});
    }
  };

  std::string fresh(const std::string& hint) {
    std::string n = fresh_name(hint.empty() ? "x" : hint, [&](const std::string& s) { return taken_.count(s) > 0; });
    taken_.insert(n);
    return n;
  }

  static std::map<Type, std::vector<std::size_t>> by_type(const Entries& es) {
    std::map<Type, std::vector<std::size_t>> idx;
    for (std::size_t i = 0; i < es.size(); ++i) idx[es[i].type].push_back(i);
    return idx;
  }

  // Families of entries of `arg` matching the elements of m in order.
  void families(const Multitype& m, const Entries& arg, const std::map<Type, std::vector<std::size_t>>& idx,
                const Sink& sink, const std::function<void(const std::vector<const Entry*>&)>& f) {
    std::vector<const Entry*> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (sink.full()) return;
      if (i == m.size()) {
        f(pick);
        return;
      }
      auto it = idx.find(m.elems()[i]);
      if (it == idx.end()) return;
      for (std::size_t j : it->second) {
        pick.push_back(&arg[j]);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }

  // Multisets of at most card entries drawn from cands (indices non-decreasing).
  void msets(const std::vector<const Entry*>& cands, const Sink& sink,
             const std::function<void(const std::vector<const Entry*>&)>& f) {
    std::vector<const Entry*> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      f(pick);
      if (sink.full()) return;
      if (pick.size() == b_.card) return;
      for (std::size_t i = from; i < cands.size(); ++i) {
        pick.push_back(cands[i]);
        rec(i);
        pick.pop_back();
      }
    };
    rec(0);
  }

  void compute(const Term& t, Sink& sink) {
    switch (t.kind()) {
      case Kind::Var:
        if (sys_ == System::V) {
          for (const auto& m : multis_)
            sink.add(Env::single(t.name(), m.multi()), m, [&] { return derive_var(sys_, t.name(), m); });
        } else {
          for (const auto& s : universe_)
            sink.add(Env::single(t.name(), Multitype({s})), s, [&] { return derive_var(sys_, t.name(), s); });
        }
        return;
      case Kind::BVar:
        throw std::logic_error("enumeration reached a dangling index");
      case Kind::Hole:
        return;
      case Kind::Abs: {
        std::string z = fresh(t.name());
        auto body = go(open(t.body(), z));
        if (sys_ == System::V) {
          std::vector<const Entry*> cands;
          for (const auto& e : *body)
            if (Type::arrow(e.env.get(z), e.type).depth() < b_.depth) cands.push_back(&e);
          msets(cands, sink, [&](const std::vector<const Entry*>& pick) {
            std::vector<Type> arrows;
            Env env;
            for (const Entry* e : pick) {
              arrows.push_back(Type::arrow(e->env.get(z), e->type));
              env = env + e->env.without(z);
            }
            sink.add(env, Type::multi(Multitype(arrows)), [&] {
              std::vector<DerivPtr> ps;
              for (const Entry* e : pick) ps.push_back(e->d);
              return derive(sys_, "abs", t, z, ps);
            });
          });
        } else {
          for (const auto& e : *body)
            sink.add(e.env.without(z), Type::arrow(e.env.get(z), e.type),
                     [&] { return derive(sys_, "abs", t, z, {e.d}); });
        }
        return;
      }
      case Kind::App: {
        auto fs = go(t.fun());
        auto us = go(t.arg());
        auto idx = by_type(*us);
        for (const auto& f : *fs) {
          if (sink.full()) return;
          Type arrow;
          if (sys_ == System::V) {
            if (!f.type.is_multi() || f.type.multi().size() != 1 || !f.type.multi().elems()[0].is_arrow()) continue;
            arrow = f.type.multi().elems()[0];
          } else {
            if (!f.type.is_arrow()) continue;
            arrow = f.type;
          }
          if (sys_ == System::N) {
            families(arrow.multi(), *us, idx, sink, [&](const std::vector<const Entry*>& fam) {
              Env env = f.env;
              for (const Entry* u : fam) env = env + u->env;
              sink.add(env, arrow.codomain(), [&] {
                std::vector<DerivPtr> ps{f.d};
                for (const Entry* u : fam) ps.push_back(u->d);
                return derive(sys_, "app", t, "", ps);
              });
            });
            continue;
          }
          auto it = idx.find(Type::multi(arrow.multi()));
          if (it == idx.end()) continue;
          for (std::size_t j : it->second) {
            const Entry& u = (*us)[j];
            sink.add(f.env + u.env, arrow.codomain(), [&] { return derive(sys_, "app", t, "", {f.d, u.d}); });
          }
        }
        return;
      }
      case Kind::Sub: {
        std::string z = fresh(t.name());
        auto bs = go(open(t.body(), z));
        auto us = go(t.arg());
        auto idx = by_type(*us);
        for (const auto& bd : *bs) {
          if (sink.full()) return;
          const Multitype& m = bd.env.get(z);
          Env rest = bd.env.without(z);
          if (sys_ == System::N) {
            families(m, *us, idx, sink, [&](const std::vector<const Entry*>& fam) {
              Env env = rest;
              for (const Entry* u : fam) env = env + u->env;
              sink.add(env, bd.type, [&] {
                std::vector<DerivPtr> ps{bd.d};
                for (const Entry* u : fam) ps.push_back(u->d);
                return derive(sys_, "es", t, z, ps);
              });
            });
            continue;
          }
          auto it = idx.find(Type::multi(m));
          if (it == idx.end()) continue;
          for (std::size_t j : it->second) {
            const Entry& u = (*us)[j];
            sink.add(rest + u.env, bd.type, [&] { return derive(sys_, "es", t, z, {bd.d, u.d}); });
          }
        }
        return;
      }
      case Kind::Bang: {
        if (sys_ != System::B) return;
        auto in = go(t.inner());
        std::vector<const Entry*> cands;
        for (const auto& e : *in)
          if (e.type.depth() < b_.depth) cands.push_back(&e);
        msets(cands, sink, [&](const std::vector<const Entry*>& pick) {
          std::vector<Type> ts;
          Env env;
          for (const Entry* e : pick) {
            ts.push_back(e->type);
            env = env + e->env;
          }
          sink.add(env, Type::multi(Multitype(ts)), [&] {
            std::vector<DerivPtr> ps;
            for (const Entry* e : pick) ps.push_back(e->d);
            return derive(sys_, "bang", t, "", ps);
          });
        });
        return;
      }
      case Kind::Der: {
        if (sys_ != System::B) return;
        auto in = go(t.inner());
        for (const auto& e : *in)
          if (e.type.is_multi() && e.type.multi().size() == 1)
            sink.add(e.env, e.type.multi().elems()[0], [&] { return derive(sys_, "der", t, "", {e.d}); });
        return;
      }
    }
  }

  System sys_;
  Bounds b_;
  EnumLimits lim_;
  bool truncated_ = false;
  std::vector<Type> universe_;
  std::vector<Type> multis_;
  std::set<std::string> taken_;
  std::unordered_map<Term, std::shared_ptr<const Entries>, TermHash> memo_;
};

}  // namespace

Typing canonical_typing(const Typing& t, unsigned pool) {
  std::vector<unsigned> perm(pool);
  for (unsigned i = 0; i < pool; ++i) perm[i] = i;
  Typing best = t;
  do {
    std::vector<std::pair<std::string, std::string>> m;
    for (unsigned i = 0; i < pool; ++i) m.push_back({tvar_name(i), tvar_name(perm[i])});
    Typing r{rename_tvars(t.first, m), rename_tvars(t.second, m)};
    if (r < best) best = r;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Enumeration typings_enumerate(System s, const Term& t, const Bounds& b, const EnumLimits& lim) {
  Enumeration out;
  if (t.dangling() != 0 || t.has_hole()) return out;
  Enumerator en(s, b, lim, t);
  auto es = en.go(t);
  for (const auto& e : *es) {
    Typing ty{e.env, e.type};
    if (canonical_typing(ty, b.pool) == ty) out.derivations.push_back(e.d);
  }
  out.truncated = en.truncated();
  return out;
}

std::set<Typing> typing_set(const Enumeration& e) {
  std::set<Typing> s;
  for (const auto& d : e.derivations) s.insert(d->typing());
  return s;
}

TypableResult typable(const Term& t, std::uint64_t fuel) {
  TypableResult r;
  ReduceOutcome o = normalize(t, Closure::Surface, fuel, false);
  r.normal_form = o.term;
  r.steps = o.steps;
  if (!o.normalized) return r;
  r.verdict = classify(o.term) == NfClass::NoS ? Tri::Yes : Tri::No;
  return r;
}

namespace {

using Fail = std::runtime_error;

void expect(bool c, const char* what) {
  if (!c) throw Fail(what);
}

// Descend along pos, rebuilding every node on the way with the target
// subterm at that scope; `root` handles the node at pos.
DerivPtr along(const DerivPtr& d, const Term& target, const Path& pos, std::size_t k,
               const std::function<DerivPtr(const DerivPtr&, const Term&)>& root) {
  if (k == pos.size()) return root(d, target);
  int i = pos[k];
  std::vector<DerivPtr> ps = d->premises;
  const std::string& r = d->rule;
  if (r == "abs") {
    expect(i == 0, "bad path");
    for (auto& p : ps) p = along(p, open(target.body(), d->binder), pos, k + 1, root);
  } else if (r == "app") {
    if (i == 0)
      ps.at(0) = along(ps.at(0), target.fun(), pos, k + 1, root);
    else
      for (std::size_t j = 1; j < ps.size(); ++j) ps[j] = along(ps[j], target.arg(), pos, k + 1, root);
  } else if (r == "es") {
    if (i == 0)
      ps.at(0) = along(ps.at(0), open(target.body(), d->binder), pos, k + 1, root);
    else
      for (std::size_t j = 1; j < ps.size(); ++j) ps[j] = along(ps[j], target.arg(), pos, k + 1, root);
  } else if (r == "bang") {
    for (auto& p : ps) p = along(p, target.inner(), pos, k + 1, root);
  } else if (r == "der") {
    ps.at(0) = along(ps.at(0), target.inner(), pos, k + 1, root);
  } else {
    throw Fail("path leaves the derivation");
  }
  return derive(d->system, r, target, d->binder, std::move(ps));
}

// Replace the axioms for x by the derivations in pool (matched by type).
DerivPtr subst_deriv(const DerivPtr& d, const std::string& x, const Term& u, std::vector<DerivPtr>& pool) {
  if (d->rule == "var" && d->subject.name() == x) {
    for (auto it = pool.begin(); it != pool.end(); ++it)
      if ((*it)->type == d->type) {
        DerivPtr q = *it;
        pool.erase(it);
        return q;
      }
    throw Fail("no argument derivation for an occurrence");
  }
  if (!occurs_free(x, d->subject)) return d;
  std::vector<DerivPtr> ps;
  for (const auto& p : d->premises) ps.push_back(subst_deriv(p, x, u, pool));
  return derive(d->system, d->rule, msubst(d->subject, x, u), d->binder, std::move(ps));
}

// d types s{x:=u}; rebuild a derivation of s, collecting the derivations of
// the substituted copies of u.
DerivPtr antisubst(const DerivPtr& d, const Term& s, const std::string& x, std::vector<DerivPtr>& qs) {
  if (s.kind() == Kind::Var && s.name() == x) {
    qs.push_back(d);
    return derive_var(d->system, x, d->type);
  }
  if (!occurs_free(x, s)) {
    expect(d->subject == s, "subject mismatch");
    return d;
  }
  std::vector<DerivPtr> ps = d->premises;
  const std::string& r = d->rule;
  if (r == "abs") {
    expect(s.kind() == Kind::Abs, "shape mismatch");
    for (auto& p : ps) p = antisubst(p, open(s.body(), d->binder), x, qs);
  } else if (r == "app") {
    expect(s.kind() == Kind::App, "shape mismatch");
    ps.at(0) = antisubst(ps.at(0), s.fun(), x, qs);
    for (std::size_t j = 1; j < ps.size(); ++j) ps[j] = antisubst(ps[j], s.arg(), x, qs);
  } else if (r == "es") {
    expect(s.kind() == Kind::Sub, "shape mismatch");
    ps.at(0) = antisubst(ps.at(0), open(s.body(), d->binder), x, qs);
    for (std::size_t j = 1; j < ps.size(); ++j) ps[j] = antisubst(ps[j], s.arg(), x, qs);
  } else if (r == "bang") {
    expect(s.kind() == Kind::Bang, "shape mismatch");
    for (auto& p : ps) p = antisubst(p, s.inner(), x, qs);
  } else if (r == "der") {
    expect(s.kind() == Kind::Der, "shape mismatch");
    ps.at(0) = antisubst(ps.at(0), s.inner(), x, qs);
  } else {
    throw Fail("shape mismatch");
  }
  return derive(d->system, r, s, d->binder, std::move(ps));
}

DerivPtr reduce_root(const DerivPtr& d, const Term& reduct) {
  const Term& redex = d->subject;
  auto r = contract_root(redex);
  expect(r.has_value(), "no redex at position");
  switch (r->first) {
    case Rule::DB: {
      expect(d->rule == "app" && d->premises.size() == 2, "dB redex not typed by app");
      DerivPtr du = d->premises[1];
      // Walk L in the derivation of the function and in the reduct together.
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& f, const Term& tgt) -> DerivPtr {
        if (f->rule == "es") {
          expect(tgt.kind() == Kind::Sub, "list mismatch");
          std::vector<DerivPtr> ps = f->premises;
          ps[0] = walk(ps[0], open(tgt.body(), f->binder));
          return derive(f->system, "es", tgt, f->binder, std::move(ps));
        }
        expect(f->rule == "abs" && tgt.kind() == Kind::Sub, "abstraction expected");
        expect(du->subject == tgt.arg(), "argument moved out of scope");
        return derive(f->system, "es", tgt, f->binder, {f->premises.at(0), du});
      };
      return walk(d->premises[0], reduct);
    }
    case Rule::SBang: {
      expect(d->rule == "es" && d->premises.size() == 2, "s! redex not typed by es");
      DerivPtr body = d->premises[0];
      const std::string& x = d->binder;
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& a, const Term& tgt) -> DerivPtr {
        if (a->rule == "es") {
          expect(tgt.kind() == Kind::Sub, "list mismatch");
          std::vector<DerivPtr> ps = a->premises;
          ps[0] = walk(ps[0], open(tgt.body(), a->binder));
          return derive(a->system, "es", tgt, a->binder, std::move(ps));
        }
        expect(a->rule == "bang", "bang expected");
        std::vector<DerivPtr> pool = a->premises;
        DerivPtr core = subst_deriv(body, x, a->subject.inner(), pool);
        expect(pool.empty(), "unused argument derivations");
        expect(core->subject == tgt, "substituted subject mismatch");
        return core;
      };
      return walk(d->premises[1], reduct);
    }
    case Rule::DBang: {
      expect(d->rule == "der", "d! redex not typed by der");
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& a, const Term& tgt) -> DerivPtr {
        if (a->rule == "es") {
          expect(tgt.kind() == Kind::Sub, "list mismatch");
          std::vector<DerivPtr> ps = a->premises;
          ps[0] = walk(ps[0], open(tgt.body(), a->binder));
          return derive(a->system, "es", tgt, a->binder, std::move(ps));
        }
        expect(a->rule == "bang" && a->premises.size() == 1, "singleton bang expected");
        expect(a->premises[0]->subject == tgt, "subject mismatch");
        return a->premises[0];
      };
      return walk(d->premises.at(0), reduct);
    }
  }
  throw Fail("unreachable");
}

DerivPtr expand_root(const DerivPtr& d, const Term& redex, std::set<std::string>& taken) {
  auto r = contract_root(redex);
  expect(r.has_value(), "no redex at position");
  expect(d->subject == r->second, "derivation does not type the reduct");
  System sys = d->system;
  switch (r->first) {
    case Rule::DB: {
      DerivPtr du;
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& a, const Term& fun) -> DerivPtr {
        expect(a->rule == "es", "closure expected");
        if (fun.kind() == Kind::Sub) {
          std::vector<DerivPtr> ps = a->premises;
          ps[0] = walk(ps[0], open(fun.body(), a->binder));
          return derive(sys, "es", fun, a->binder, std::move(ps));
        }
        expect(fun.kind() == Kind::Abs, "abstraction expected");
        du = a->premises.at(1);
        return derive(sys, "abs", fun, a->binder, {a->premises.at(0)});
      };
      DerivPtr f = walk(d, redex.fun());
      expect(du->subject == redex.arg(), "argument scope mismatch");
      return derive(sys, "app", redex, "", {f, du});
    }
    case Rule::SBang: {
      std::string x = fresh_name("_s", [&](const std::string& s) { return taken.count(s) > 0; });
      taken.insert(x);
      Term sbody = open(redex.body(), x);
      DerivPtr core;
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& a, const Term& arg) -> DerivPtr {
        if (arg.kind() == Kind::Sub) {
          expect(a->rule == "es", "closure expected");
          std::vector<DerivPtr> ps = a->premises;
          ps[0] = walk(ps[0], open(arg.body(), a->binder));
          return derive(sys, "es", arg, a->binder, std::move(ps));
        }
        expect(arg.kind() == Kind::Bang, "bang expected");
        std::vector<DerivPtr> qs;
        core = antisubst(a, sbody, x, qs);
        for (const auto& q : qs) expect(q->subject == arg.inner(), "copy mismatch");
        return derive(sys, "bang", arg, "", qs);
      };
      DerivPtr arg = walk(d, redex.arg());
      return derive(sys, "es", redex, x, {core, arg});
    }
    case Rule::DBang: {
      std::function<DerivPtr(const DerivPtr&, const Term&)> walk = [&](const DerivPtr& a, const Term& in) -> DerivPtr {
        if (in.kind() == Kind::Sub) {
          expect(a->rule == "es", "closure expected");
          std::vector<DerivPtr> ps = a->premises;
          ps[0] = walk(ps[0], open(in.body(), a->binder));
          return derive(sys, "es", in, a->binder, std::move(ps));
        }
        expect(in.kind() == Kind::Bang, "bang expected");
        return derive(sys, "bang", in, "", {a});
      };
      return derive(sys, "der", redex, "", {walk(d, redex.inner())});
    }
  }
  throw Fail("unreachable");
}

std::set<std::string> names_of(const Term& a, const Term& b) {
  auto s = free_vars(a);
  for (const auto& x : free_vars(b)) s.insert(x);
  return s;
}

}  // namespace

std::optional<DerivPtr> subject_reduce(const DerivPtr& d, const Term& t, const Path& pos) {
  try {
    if (d->system != System::B || d->subject != t) return std::nullopt;
    auto r = contract_root(subterm_at(t, pos));
    if (!r) return std::nullopt;
    Term u = replace_at(t, pos, r->second);
    DerivPtr fd = freshen_binders(d, names_of(t, u));
    return along(fd, u, pos, 0, [](const DerivPtr& n, const Term& tgt) {
      DerivPtr out = reduce_root(n, tgt);
      expect(out->subject == tgt, "reduct subject mismatch");
      return out;
    });
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<DerivPtr> subject_expand(const DerivPtr& d, const Term& t, const Path& pos) {
  try {
    if (d->system != System::B) return std::nullopt;
    auto r = contract_root(subterm_at(t, pos));
    if (!r) return std::nullopt;
    Term u = replace_at(t, pos, r->second);
    if (d->subject != u) return std::nullopt;
    std::set<std::string> taken = names_of(t, u);
    DerivPtr fd = freshen_binders(d, taken);
    collect_binders(*fd, taken);
    return along(fd, t, pos, 0, [&](const DerivPtr& n, const Term& tgt) { return expand_root(n, tgt, taken); });
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<DerivPtr> replace_untyped(const DerivPtr& d, const Term& target, const Path& hole) {
  try {
    DerivPtr fd = freshen_binders(d, names_of(d->subject, target));
    return along(fd, target, hole, 0, [](const DerivPtr&, const Term&) -> DerivPtr {
      throw Fail("replaced position is typed");
    });
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

TransportReport typing_transport_check(const Term& t, const Term& u, const Bounds& b) {
  TransportReport rep;
  std::optional<Path> pos;
  if (t == u) {
    rep.is_step = false;
  } else {
    for (const Redex& r : redexes(t, Closure::Full))
      if (r.reduct == u) {
        pos = r.position;
        break;
      }
    rep.is_step = pos.has_value();
    if (!pos) {
      rep.detail = "u is not a one-step full reduct of t";
      return rep;
    }
  }
  Enumeration et = typings_enumerate(System::B, t, b);
  Enumeration eu = typings_enumerate(System::B, u, b);
  rep.truncated = et.truncated || eu.truncated;
  rep.bounded_sets_equal = typing_set(et) == typing_set(eu);
  if (!pos) {
    rep.ok = rep.bounded_sets_equal;
    return rep;
  }
  for (const auto& d : et.derivations) {
    auto nd = subject_reduce(d, t, *pos);
    if (nd && check_derivation(**nd).ok && (*nd)->subject == u && (*nd)->typing() == d->typing()) {
      ++rep.forward;
    } else {
      ++rep.failures;
      if (rep.detail.empty()) rep.detail = "forward transport failed for " + print_typing(d->typing());
    }
  }
  for (const auto& d : eu.derivations) {
    auto nd = subject_expand(d, t, *pos);
    if (nd && check_derivation(**nd).ok && (*nd)->subject == t && (*nd)->typing() == d->typing()) {
      ++rep.backward;
    } else {
      ++rep.failures;
      if (rep.detail.empty()) rep.detail = "backward transport failed for " + print_typing(d->typing());
    }
  }
  rep.ok = rep.failures == 0;
  return rep;
}

const char* nf_shape_name(NfShape s) {
  switch (s) {
    case NfShape::MustBang:
      return "must-bang";
    case NfShape::MustAbs:
      return "must-abs";
    case NfShape::Violation:
      return "violation";
  }
  return "?";
}

NfShapeResult nf_shape(const Type& sigma, const Term& t, const DerivPtr& evidence, const Bounds& b) {
  NfShapeResult r;
  if (first_redex(t, Closure::Surface)) {
    r.message = "term is not surface-normal";
    return r;
  }
  if (evidence) {
    CheckReport c = check_derivation(*evidence);
    if (!c.ok) {
      r.message = "evidence rejected: " + c.message;
      return r;
    }
    if (evidence->system != System::B || evidence->subject != t || !evidence->env.empty() || evidence->type != sigma) {
      r.message = "evidence does not conclude the closed judgment";
      return r;
    }
  } else {
    bool found = false;
    for (const auto& d : typings_enumerate(System::B, t, b).derivations) {
      if (!d->env.empty()) continue;
      Typing want = canonical_typing({Env(), sigma}, b.pool);
      if (d->typing() == want) found = true;
    }
    if (!found) {
      r.message = "no closed derivation within bounds";
      return r;
    }
  }
  if (sigma.is_arrow()) {
    if (t.kind() == Kind::Abs) r.shape = NfShape::MustAbs;
    else r.message = "arrow type on a closed normal form that is not an abstraction";
  } else {
    if (t.kind() == Kind::Bang) r.shape = NfShape::MustBang;
    else r.message = "non-arrow type on a closed normal form that is not a bang";
  }
  return r;
}

}  // namespace banglab
