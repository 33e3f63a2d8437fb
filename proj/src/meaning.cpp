#include "banglab/meaning.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>
#include <stdexcept>

namespace banglab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Meaningful:
      return "meaningful";
    case Verdict::Meaningless:
      return "meaningless";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

std::uint64_t replay_fuel(std::uint64_t fuel) { return fuel * 10 + 1000; }

// Cheaper typings first: fewer env entries, then shallower types.
bool lighter(const DerivPtr& a, const DerivPtr& b) {
  auto weight = [](const DerivPtr& d) {
    std::size_t w = 0;
    for (const auto& e : d->env.entries()) w += e.second.size() + Type::multi(e.second).depth();
    return std::make_pair(w, d->type.depth());
  };
  return weight(a) < weight(b);
}

}  // namespace

std::optional<std::string> shape_conflict(const Term& nf) {
  std::set<std::string> taken = free_vars(nf);
  Term body = nf;
  while (body.kind() == Kind::Abs) {
    std::string x = fresh_name(body.name().empty() ? "x" : body.name(),
                               [&](const std::string& s) { return taken.count(s) > 0; });
    taken.insert(x);
    body = open(body.body(), x);
  }
  std::set<std::string> heads, multis;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    switch (t.kind()) {
      case Kind::Bang:
        return;
      case Kind::App:
        if (t.fun().kind() == Kind::Var) heads.insert(t.fun().name());
        if (t.arg().kind() == Kind::Var) multis.insert(t.arg().name());
        break;
      case Kind::Der:
        if (t.inner().kind() == Kind::Var) multis.insert(t.inner().name());
        break;
      case Kind::Sub:
        if (t.arg().kind() == Kind::Var) multis.insert(t.arg().name());
        break;
      default:
        break;
    }
    for (int i = 0; i < t.arity(); ++i) walk(t.child(i));
  };
  walk(body);
  for (const auto& x : heads)
    if (multis.count(x)) return x;
  return std::nullopt;
}

Ctx build_testing_context(const Derivation& d, const Witnesses& w) {
  std::map<std::string, Term> env_w(w.env.begin(), w.env.end());
  for (const auto& [x, m] : d.env.entries())
    if (!env_w.count(x)) throw std::invalid_argument("missing witness for " + x);
  auto as = args(System::B, d.type);
  if (w.args.size() != as.size()) throw std::invalid_argument("missing argument witness");
  Term spine = Term::hole();
  const auto& es = d.env.entries();
  for (auto it = es.rbegin(); it != es.rend(); ++it) spine = Term::app(Term::abs(it->first, spine), env_w.at(it->first));
  for (const Term& a : w.args) spine = Term::app(spine, a);
  return Ctx(CtxKind::Testing, spine);
}

std::optional<Term> replay_to_bang(const Ctx& c, const Term& t, std::uint64_t fuel) {
  ReduceOutcome o = normalize(plug(c, t), Closure::Surface, fuel, false);
  if (o.normalized && o.term.kind() == Kind::Bang) return o.term;
  return std::nullopt;
}

MeaningResult meaningful(const Term& t, const Budgets& b) {
  MeaningResult r;
  ReduceOutcome o = normalize(t, Closure::Surface, b.fuel, true);
  r.trace = std::move(o.trace);
  r.normal_form = o.term;
  r.normalized = o.normalized;
  if (!o.normalized) {
    r.reason = o.size_capped ? "term outgrew the size cap (divergence suspected)"
                             : "no surface normal form within fuel (divergence suspected)";
    return r;
  }
  const Term& nf = o.term;
  if (classify(nf) == NfClass::ClashNF) {
    r.verdict = Verdict::Meaningless;
    r.reason = "surface normal form contains a clash";
    return r;
  }
  if (b.shape_check) {
    if (auto x = shape_conflict(nf)) {
      r.verdict = Verdict::Meaningless;
      r.reason = "variable " + *x + " needs a witness that is both an abstraction and a bang";
      return r;
    }
  }
  Enumeration e = typings_enumerate(System::B, nf, b.bounds);
  std::vector<DerivPtr> ds = e.derivations;
  std::stable_sort(ds.begin(), ds.end(), lighter);
  for (const auto& d : ds) {
    TestableResult tr = testable(System::B, d->typing(), b.inh);
    if (tr.verdict != Tri::Yes) continue;
    Witnesses w;
    for (const auto& [x, m] : d->env.entries()) w.env.push_back({x, tr.env_witnesses.at(x)});
    w.args = tr.arg_witnesses;
    Ctx c = build_testing_context(*d, w);
    if (auto obs = replay_to_bang(c, t, replay_fuel(b.fuel))) {
      r.verdict = Verdict::Meaningful;
      r.context = c;
      r.derivation = d;
      r.replay = *obs;
      r.reason = "testable typing " + print_typing(d->typing());
      return r;
    }
  }
  r.reason = e.truncated ? "no testable typing found (typing enumeration truncated)"
                         : "no testable typing within bounds";
  return r;
}

EverywhereReport check_testable_everywhere(const Derivation& d, const InhBounds& b) {
  EverywhereReport rep;
  std::vector<int> path;
  std::function<void(const Derivation&)> walk = [&](const Derivation& n) {
    Tri v = testable(n.system, n.typing(), b).verdict;
    rep.nodes.push_back({path, v});
    (v == Tri::Yes ? rep.yes : v == Tri::No ? rep.no : rep.unknown)++;
    for (std::size_t i = 0; i < n.premises.size(); ++i) {
      path.push_back(static_cast<int>(i));
      walk(*n.premises[i]);
      path.pop_back();
    }
  };
  walk(d);
  rep.all_testable = rep.no == 0 && rep.unknown == 0;
  return rep;
}

std::vector<Term> canonical_argument_pool() {
  static const std::vector<Term> pool = [] {
    std::vector<Term> p;
    for (const char* s : {"!!y", "!(\\z.z)", "!(\\z.!z)", "!(\\z.!(\\w.w))", "\\z.!z", "\\z.!(\\w.w)"})
      p.push_back(parse_term(s));
    return p;
  }();
  return pool;
}

std::optional<Ctx> search_testing_context(const Term& t, unsigned depth, std::uint64_t fuel) {
  auto pool = canonical_argument_pool();
  std::set<std::string> fv = free_vars(t);
  std::vector<std::string> names(fv.begin(), fv.end());
  std::vector<Term> level = {Term::hole()};
  auto hits = [&](const Term& spine) { return replay_to_bang(Ctx(CtxKind::Testing, spine), t, fuel).has_value(); };
  if (hits(Term::hole())) return Ctx(CtxKind::Testing, Term::hole());
  for (unsigned d = 1; d <= depth; ++d) {
    std::vector<Term> next;
    for (const Term& c : level) {
      std::vector<Term> cands;
      for (const Term& s : pool) {
        cands.push_back(Term::app(c, s));
        for (const auto& x : names) cands.push_back(Term::app(Term::abs(x, c), s));
      }
      for (const Term& n : cands) {
        if (hits(n)) return Ctx(CtxKind::Testing, n);
        next.push_back(n);
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

std::optional<DerivPtr> expand_along(const DerivPtr& nf_derivation, const Term& t,
                                     const std::vector<TraceEntry>& trace) {
  DerivPtr d = nf_derivation;
  for (std::size_t i = trace.size(); i-- > 0;) {
    const Term& src = i == 0 ? t : trace[i - 1].term;
    auto e = subject_expand(d, src, trace[i].position);
    if (!e) return std::nullopt;
    d = *e;
  }
  if (d->subject != t) return std::nullopt;
  return d;
}

GenericityReport genericity_check(const Ctx& f, const Term& t, const std::vector<Term>& samples, const Budgets& b) {
  GenericityReport rep;
  rep.precondition = meaningful(t, b).verdict == Verdict::Meaningless;
  if (!rep.precondition) {
    rep.detail = "the plugged term is not decided meaningless";
    return rep;
  }
  Term ft = plug(f, t);
  MeaningResult mf = meaningful(ft, b);
  rep.applies = mf.verdict == Verdict::Meaningful;
  if (!rep.applies) {
    rep.detail = "F<t> is not decided meaningful";
    return rep;
  }
  auto base = expand_along(mf.derivation, ft, mf.trace);
  if (!base) rep.detail = "could not carry the testable typing back to F<t>";
  Path hole = f.hole_path();
  bool typed_ok = base.has_value();
  for (const Term& u : samples) {
    Term fu = plug(f, u);
    Verdict v = meaningful(fu, b).verdict;
    (v == Verdict::Meaningful ? rep.meaningful : v == Verdict::Unknown ? rep.unknown : rep.meaningless)++;
    if (v != Verdict::Meaningful && rep.detail.empty()) rep.detail = "F<u> " + std::string(verdict_name(v)) + " for u = " + print_term(u);
    if (!base) continue;
    auto moved = replace_untyped(*base, fu, hole);
    if (moved && check_derivation(**moved).ok && (*moved)->typing() == (*base)->typing()) {
      ++rep.typed_transported;
    } else {
      typed_ok = false;
      if (rep.detail.empty()) rep.detail = "typing not transported for u = " + print_term(u);
    }
  }
  rep.typed_ok = typed_ok;
  return rep;
}

std::vector<Ctx> default_discriminating_contexts() {
  std::vector<Ctx> out;
  for (const char* s : {"[]", "[] !!y", "(\\x.[]) !y", "[] !(\\z.z)", "(\\x.!x) ![]", "der []", "\\x.[]"})
    out.push_back(parse_ctx(s, CtxKind::Full));
  return out;
}

bool surface_cycle(const Term& t, std::uint64_t fuel) {
  std::unordered_set<Term, TermHash> seen{t};
  Term cur = t;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    auto next = step(cur, Closure::Surface);
    if (!next) return false;
    cur = std::move(*next);
    if (!seen.insert(cur).second) return true;
  }
  return false;
}

Discrimination discriminate(const Term& t, const Term& u, const std::vector<Ctx>& ctxs, const Budgets& b) {
  Discrimination out;
  auto decide = [&](const Term& s, bool& cycles) {
    Verdict v = meaningful(s, b).verdict;
    cycles = v == Verdict::Unknown && surface_cycle(s, b.fuel);
    return cycles ? Verdict::Meaningless : v;
  };
  for (const Ctx& c : ctxs) {
    bool lc = false, rc = false;
    Verdict vt = decide(plug(c, t), lc);
    Verdict vu = decide(plug(c, u), rc);
    if (vt != Verdict::Unknown && vu != Verdict::Unknown && vt != vu) {
      out.separated = true;
      out.context = c;
      out.left = vt;
      out.right = vu;
      out.left_cycles = lc;
      out.right_cycles = rc;
      return out;
    }
  }
  return out;
}

}  // namespace banglab
