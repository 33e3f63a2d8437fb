#include "banglab/inhabitation.hpp"

#include <functional>
#include <mutex>
#include <optional>
#include <set>

#include "banglab/typing.hpp"

namespace banglab {

const char* inh_status_name(InhStatus s) {
  switch (s) {
    case InhStatus::Inhabited:
      return "inhabited";
    case InhStatus::NotInhabited:
      return "not-inhabited";
    case InhStatus::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

struct Goal {
  Env env;
  Type type;
};

struct Sol {
  Term term;
  std::vector<DerivPtr> ds;  // aligned with the goals
};

// All ways to distribute the elements of g over k labelled parts.
std::vector<std::vector<Env>> splits(const Env& g, std::size_t k) {
  std::vector<std::vector<Env>> out;
  if (k == 0) {
    if (g.empty()) out.push_back({});
    return out;
  }
  std::vector<std::pair<std::string, Type>> items;
  for (const auto& [x, m] : g.entries())
    for (const Type& t : m.elems()) items.push_back({x, t});
  std::set<std::vector<Env>> seen;
  std::vector<Env> parts(k);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == items.size()) {
      if (seen.insert(parts).second) out.push_back(parts);
      return;
    }
    for (std::size_t p = 0; p < k; ++p) {
      Env saved = parts[p];
      parts[p].add(items[i].first, Multitype({items[i].second}));
      rec(i + 1);
      parts[p] = saved;
    }
  };
  rec(0);
  return out;
}

std::string goals_key(const std::vector<Goal>& gs) {
  std::string k;
  for (const auto& g : gs) k += print_env(g.env) + "|-" + print_type(g.type) + ";";
  return k;
}

class Prover {
 public:
  Prover(System s, const InhBounds& b) : sys_(s), b_(b) {}
  bool budget_hit() const { return budget_hit_; }

  std::optional<Sol> solve(const std::vector<Goal>& gs, unsigned budget) {
    if (budget == 0) return std::nullopt;
    if (++nodes_ > b_.node_budget) {
      budget_hit_ = true;
      return std::nullopt;
    }
    std::string key = std::to_string(budget) + "#" + goals_key(gs);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto r = attempt(gs, budget);
    memo_[key] = r;
    return r;
  }

 private:
  std::optional<Sol> attempt(const std::vector<Goal>& gs, unsigned budget) {
    if (gs.empty()) {
      if (budget < 2) return std::nullopt;
      return Sol{identity_term(), {}};
    }
    if (auto s = by_var(gs)) return s;
    if (auto s = by_abs(gs, budget)) return s;
    if (auto s = by_bang(gs, budget)) return s;
    return by_neutral(gs, budget);
  }

  std::optional<Sol> by_var(const std::vector<Goal>& gs) {
    const auto& e0 = gs[0].env.entries();
    if (e0.size() != 1) return std::nullopt;
    const std::string& x = e0[0].first;
    Sol s{Term::var(x), {}};
    for (const auto& g : gs) {
      Env want = sys_ == System::V ? (g.type.is_multi() ? Env::single(x, g.type.multi()) : Env())
                                   : Env::single(x, Multitype({g.type}));
      if (want.empty() || g.env != want) return std::nullopt;
      s.ds.push_back(derive_var(sys_, x, g.type));
    }
    return s;
  }

  std::string fresh(const std::vector<Goal>& gs) {
    std::set<std::string> taken;
    for (const auto& g : gs)
      for (const auto& e : g.env.entries()) taken.insert(e.first);
    return fresh_name("x", [&](const std::string& s) { return taken.count(s) > 0; });
  }

  std::optional<Sol> by_abs(const std::vector<Goal>& gs, unsigned budget) {
    if (budget < 2) return std::nullopt;
    std::string x = fresh(gs);
    if (sys_ != System::V) {
      std::vector<Goal> sub;
      for (const auto& g : gs) {
        if (!g.type.is_arrow()) return std::nullopt;
        Env e = g.env;
        e.add(x, g.type.multi());
        sub.push_back({e, g.type.codomain()});
      }
      auto body = solve(sub, budget - 1);
      if (!body) return std::nullopt;
      Sol s{Term::abs(x, body->term), {}};
      for (std::size_t i = 0; i < gs.size(); ++i) s.ds.push_back(derive(sys_, "abs", s.term, x, {body->ds[i]}));
      return s;
    }
    // V: each goal is a multitype of arrows; its env is shared among them.
    for (const auto& g : gs) {
      if (!g.type.is_multi()) return std::nullopt;
      for (const Type& a : g.type.multi().elems())
        if (!a.is_arrow()) return std::nullopt;
    }
    std::vector<std::vector<std::vector<Env>>> options;
    for (const auto& g : gs) {
      options.push_back(splits(g.env, g.type.multi().size()));
      if (options.back().empty()) return std::nullopt;
    }
    std::vector<std::size_t> choice(gs.size(), 0);
    while (true) {
      std::vector<Goal> sub;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        const auto& parts = options[i][choice[i]];
        const auto& arrows = gs[i].type.multi().elems();
        for (std::size_t j = 0; j < arrows.size(); ++j) {
          Env e = parts[j];
          e.add(x, arrows[j].multi());
          sub.push_back({e, arrows[j].codomain()});
        }
      }
      if (auto body = solve(sub, budget - 1)) {
        Sol s{Term::abs(x, body->term), {}};
        std::size_t k = 0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
          std::vector<DerivPtr> ps;
          for (std::size_t j = 0; j < gs[i].type.multi().size(); ++j) ps.push_back(body->ds[k++]);
          s.ds.push_back(derive(sys_, "abs", s.term, x, ps));
        }
        return s;
      }
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
      if (i == choice.size()) return std::nullopt;
    }
  }

  std::optional<Sol> by_bang(const std::vector<Goal>& gs, unsigned budget) {
    if (sys_ != System::B || budget < 2) return std::nullopt;
    std::vector<std::vector<std::vector<Env>>> options;
    for (const auto& g : gs) {
      if (!g.type.is_multi()) return std::nullopt;
      options.push_back(splits(g.env, g.type.multi().size()));
      if (options.back().empty()) return std::nullopt;
    }
    std::vector<std::size_t> choice(gs.size(), 0);
    while (true) {
      std::vector<Goal> sub;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        const auto& parts = options[i][choice[i]];
        const auto& elems = gs[i].type.multi().elems();
        for (std::size_t j = 0; j < elems.size(); ++j) sub.push_back({parts[j], elems[j]});
      }
      if (auto in = solve(sub, budget - 1)) {
        Sol s{Term::bang(in->term), {}};
        std::size_t k = 0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
          std::vector<DerivPtr> ps;
          for (std::size_t j = 0; j < gs[i].type.multi().size(); ++j) ps.push_back(in->ds[k++]);
          s.ds.push_back(derive(sys_, "bang", s.term, "", ps));
        }
        return s;
      }
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
      if (i == choice.size()) return std::nullopt;
    }
  }

  struct SpineState {
    Term term;
    std::vector<Type> cur;     // per goal: the type of the spine so far
    std::vector<Env> rest;     // per goal: env not yet consumed
    std::vector<DerivPtr> ds;  // per goal: derivation of the spine so far
  };

  std::optional<Sol> by_neutral(const std::vector<Goal>& gs, unsigned budget) {
    std::set<std::string> heads;
    for (const auto& e : gs[0].env.entries()) heads.insert(e.first);
    for (const std::string& x : heads) {
      bool everywhere = true;
      for (const auto& g : gs) everywhere = everywhere && g.env.contains(x);
      if (!everywhere) continue;
      // Pick, per goal, which element of the head's multitype the head uses.
      std::vector<std::vector<Type>> picks;
      for (const auto& g : gs) {
        std::vector<Type> opts = g.env.get(x).elems();
        opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
        picks.push_back(opts);
      }
      std::vector<std::size_t> choice(gs.size(), 0);
      while (true) {
        SpineState st{Term::var(x), {}, {}, {}};
        for (std::size_t i = 0; i < gs.size(); ++i) {
          const Type& a = picks[i][choice[i]];
          Env rest;
          for (const auto& [y, m] : gs[i].env.entries()) {
            Multitype mm = m;
            if (y == x) mm.remove_one(a);
            rest.add(y, mm);
          }
          Type head = sys_ == System::V ? Type::multi(Multitype({a})) : a;
          st.cur.push_back(head);
          st.rest.push_back(rest);
          st.ds.push_back(derive_var(sys_, x, head));
        }
        if (auto s = spine(gs, st, budget)) return s;
        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == picks[i].size()) choice[i++] = 0;
        if (i == choice.size()) break;
      }
    }
    return std::nullopt;
  }

  std::optional<Sol> spine(const std::vector<Goal>& gs, const SpineState& st, unsigned budget) {
    if (st.term.size() > budget) return std::nullopt;
    bool done = true;
    for (std::size_t i = 0; i < gs.size(); ++i) done = done && st.cur[i] == gs[i].type && st.rest[i].empty();
    if (done) return Sol{st.term, st.ds};
    if (++nodes_ > b_.node_budget) {
      budget_hit_ = true;
      return std::nullopt;
    }
    // der
    if (sys_ == System::B) {
      bool ok = true;
      for (const Type& c : st.cur) ok = ok && c.is_multi() && c.multi().size() == 1;
      if (ok) {
        SpineState n{Term::der(st.term), {}, st.rest, {}};
        for (std::size_t i = 0; i < gs.size(); ++i) {
          n.cur.push_back(st.cur[i].multi().elems()[0]);
          n.ds.push_back(derive(sys_, "der", n.term, "", {st.ds[i]}));
        }
        if (auto s = spine(gs, n, budget)) return s;
      }
    }
    // application
    std::vector<Type> arrows;
    for (const Type& c : st.cur) {
      if (sys_ == System::V) {
        if (!c.is_multi() || c.multi().size() != 1 || !c.multi().elems()[0].is_arrow()) return std::nullopt;
        arrows.push_back(c.multi().elems()[0]);
      } else {
        if (!c.is_arrow()) return std::nullopt;
        arrows.push_back(c);
      }
    }
    if (st.term.size() + 2 > budget) return std::nullopt;
    unsigned arg_budget = budget - static_cast<unsigned>(st.term.size()) - 1;
    // Per goal: the argument goals and how they share the remaining env.
    std::vector<std::size_t> widths;
    std::vector<std::vector<std::vector<Env>>> options;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      std::size_t w = sys_ == System::N ? arrows[i].multi().size() : 1;
      widths.push_back(w);
      options.push_back(splits(st.rest[i], w + 1));
    }
    std::vector<std::size_t> choice(gs.size(), 0);
    while (true) {
      std::vector<Goal> sub;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        const auto& parts = options[i][choice[i]];
        if (sys_ == System::N) {
          const auto& dom = arrows[i].multi().elems();
          for (std::size_t j = 0; j < dom.size(); ++j) sub.push_back({parts[j], dom[j]});
        } else {
          sub.push_back({parts[0], Type::multi(arrows[i].multi())});
        }
      }
      if (auto a = solve(sub, arg_budget)) {
        SpineState n{Term::app(st.term, a->term), {}, {}, {}};
        std::size_t k = 0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
          std::vector<DerivPtr> ps{st.ds[i]};
          for (std::size_t j = 0; j < widths[i]; ++j) ps.push_back(a->ds[k++]);
          n.ds.push_back(derive(sys_, "app", n.term, "", ps));
          n.cur.push_back(arrows[i].codomain());
          n.rest.push_back(options[i][choice[i]][widths[i]]);
        }
        if (auto s = spine(gs, n, budget)) return s;
      }
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
      if (i == choice.size()) return std::nullopt;
    }
  }

  System sys_;
  InhBounds b_;
  std::size_t nodes_ = 0;
  bool budget_hit_ = false;
  std::map<std::string, std::optional<Sol>> memo_;
};

// A closed witness of a non-arrow type must normalize to a bang (to an
// abstraction in N and V), so some goal sets are contradictory outright.
std::optional<std::string> refute(System s, const std::vector<Type>& ts) {
  if (s == System::N) {
    for (const Type& t : ts)
      if (!t.is_arrow()) return "closed witness of non-arrow type " + print_type(t);
    return std::nullopt;
  }
  if (s == System::V) {
    for (const Type& t : ts) {
      bool ok = t.is_multi();
      if (ok)
        for (const Type& a : t.multi().elems()) ok = ok && a.is_arrow();
      if (!ok) return "closed value cannot have type " + print_type(t);
    }
    return std::nullopt;
  }
  bool arrow = false, multi = false;
  for (const Type& t : ts) {
    if (t.kind() == TKind::TVar) return "closed witness of type variable " + t.name();
    (t.is_arrow() ? arrow : multi) = true;
  }
  if (arrow && multi) return "one closed witness would be both an abstraction and a bang";
  if (multi) {
    std::vector<Type> inner;
    for (const Type& t : ts)
      for (const Type& e : t.multi().elems()) inner.push_back(e);
    return refute(s, inner);
  }
  return std::nullopt;
}

std::mutex cache_mu;
std::map<std::string, InhResult>& cache() {
  static std::map<std::string, InhResult> c;
  return c;
}

InhResult run(System s, const std::vector<Type>& goals, const InhBounds& b) {
  std::string key = std::string(system_name(s)) + "/" + std::to_string(b.max_size) + "/" +
                    std::to_string(b.node_budget) + "/";
  for (const auto& t : goals) key += print_type(t) + ";";
  {
    std::lock_guard<std::mutex> lk(cache_mu);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  InhResult r;
  if (auto why = refute(s, goals)) {
    r.status = InhStatus::NotInhabited;
    r.reason = *why;
  } else {
    std::vector<Goal> gs;
    for (const auto& t : goals) gs.push_back({Env(), t});
    Prover p(s, b);
    for (unsigned size = 1; size <= b.max_size; ++size) {
      if (auto sol = p.solve(gs, size)) {
        r.status = InhStatus::Inhabited;
        r.witness = sol->term;
        r.derivations = sol->ds;
        break;
      }
      if (p.budget_hit()) break;
    }
    if (r.status == InhStatus::Unknown)
      r.reason = p.budget_hit() ? "search budget exhausted" : "no witness up to size " + std::to_string(b.max_size);
  }
  std::lock_guard<std::mutex> lk(cache_mu);
  cache()[key] = r;
  return r;
}

}  // namespace

InhResult inhabit(System s, const Type& goal, const InhBounds& b) {
  if (s == System::N && goal.is_multi()) return run(s, goal.multi().elems(), b);
  return run(s, {goal}, b);
}

InhResult inhabit_multi(System s, const Multitype& m, const InhBounds& b) { return inhabit(s, Type::multi(m), b); }

std::map<std::string, InhResult> inhabit_env(System s, const Env& g, const InhBounds& b) {
  std::map<std::string, InhResult> out;
  for (const auto& [x, m] : g.entries()) out[x] = inhabit_multi(s, m, b);
  return out;
}

TestableResult testable(System s, const Typing& typing, const InhBounds& b) {
  TestableResult r;
  bool unknown = false;
  auto note = [&](const InhResult& ir, const std::string& what) {
    if (ir.status == InhStatus::NotInhabited) {
      r.verdict = Tri::No;
      r.reason = what + " not inhabited: " + ir.reason;
      return false;
    }
    if (ir.status == InhStatus::Unknown && !unknown) {
      unknown = true;
      r.reason = what + ": " + ir.reason;
    }
    return true;
  };
  for (const auto& [x, m] : typing.first.entries()) {
    InhResult ir = inhabit_multi(s, m, b);
    if (!note(ir, "env " + x + ":" + print_multitype(m))) return r;
    if (ir.status == InhStatus::Inhabited) r.env_witnesses[x] = ir.witness;
  }
  for (const auto& m : args(s, typing.second)) {
    InhResult ir = inhabit_multi(s, m, b);
    if (!note(ir, "argument " + print_multitype(m))) return r;
    if (ir.status == InhStatus::Inhabited) r.arg_witnesses.push_back(ir.witness);
  }
  r.verdict = unknown ? Tri::Unknown : Tri::Yes;
  if (!unknown) r.reason.clear();
  return r;
}

void clear_inhabitation_cache() {
  std::lock_guard<std::mutex> lk(cache_mu);
  cache().clear();
}

}  // namespace banglab
