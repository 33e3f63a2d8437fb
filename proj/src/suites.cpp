#include "banglab/suites.hpp"

#include <functional>
#include <stdexcept>

#include "banglab/measures.hpp"

namespace banglab {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxRecordedCases = 200;

struct Tally {
  Report& rep;
  std::size_t index = 0;

  void record(const char* verdict, const json& what, const std::string& detail) {
    if (rep.cases.size() >= kMaxRecordedCases) {
      rep.info["cases_truncated"] = true;
      return;
    }
    rep.cases.push_back({{"index", index}, {"verdict", verdict}, {"case", what}, {"detail", detail}});
  }
  void pass() {
    ++rep.pass;
    ++index;
  }
  void fail(const json& what, const std::string& detail) {
    ++rep.fail;
    record("fail", what, detail);
    ++index;
  }
  void unknown(const json& what, const std::string& detail) {
    ++rep.unknown;
    record("unknown", what, detail);
    ++index;
  }
};

std::vector<std::string> name_pool(unsigned n) {
  static const std::vector<std::string> all = {"x", "y", "z", "w"};
  return {all.begin(), all.begin() + std::min<std::size_t>(n, all.size())};
}

// Exhaustive stream when no count is given, seeded samples otherwise.
void for_terms(const SuiteConfig& cfg, unsigned size, GenProfile profile, Report& rep,
               const std::function<void(const Term&)>& f) {
  if (!cfg.count) {
    rep.regime = "all terms up to size " + std::to_string(size) + " over " + std::to_string(cfg.names) +
                 " free names, each alpha class once";
    auto each = [&](const Term& t) {
      f(t);
      return true;
    };
    if (profile == GenProfile::CTerm)
      enum_cterms(size, name_pool(cfg.names), each);
    else
      enum_terms(size, name_pool(cfg.names), each);
    return;
  }
  rep.regime = std::to_string(*cfg.count) + " seeded terms (seed " + std::to_string(cfg.seed) + ") of size 1.." +
               std::to_string(size);
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < *cfg.count; ++i) f(gen_term(rng, 1 + static_cast<unsigned>(rng.below(size)), profile));
}

std::vector<Redex> rule_steps(const Term& t, unsigned rules) { return redexes(t, Closure::Full, rules); }

unsigned rule_bit(Rule r) {
  switch (r) {
    case Rule::DB:
      return kRuleDB;
    case Rule::SBang:
      return kRuleSBang;
    case Rule::DBang:
      return kRuleDBang;
  }
  return 0;
}

void run_diamond(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Two different one-step dB/d! reducts of a term (full closure) meet again after exactly one step each, "
      "each side firing the rule the other side used.";
  Tally tally{rep};
  for_terms(cfg, cfg.size.value_or(8), GenProfile::Raw, rep, [&](const Term& t) {
    auto rs = rule_steps(t, kRuleDB | kRuleDBang);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        if (rs[i].reduct == rs[j].reduct) continue;
        std::set<Term> left;
        for (const Redex& r : rule_steps(rs[i].reduct, rule_bit(rs[j].rule))) left.insert(r.reduct);
        bool closed = false;
        for (const Redex& r : rule_steps(rs[j].reduct, rule_bit(rs[i].rule)))
          if (left.count(r.reduct)) closed = true;
        if (closed)
          tally.pass();
        else
          tally.fail({{"term", print_term(t)}, {"left", print_term(rs[i].reduct)}, {"right", print_term(rs[j].reduct)}},
                     "peak does not close in one step on each side");
      }
  });
}

void run_confluence(const SuiteConfig& cfg, Report& rep) {
  rep.statement = "Two different s! steps from the same term (full closure) can be joined by further s! steps.";
  Tally tally{rep};
  for_terms(cfg, cfg.size.value_or(8), GenProfile::Raw, rep, [&](const Term& t) {
    auto rs = rule_steps(t, kRuleSBang);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        const Term& u1 = rs[i].reduct;
        const Term& u2 = rs[j].reduct;
        if (u1 == u2) {
          tally.pass();
          continue;
        }
        json what = {{"term", print_term(t)}, {"left", print_term(u1)}, {"right", print_term(u2)}};
        ReduceOutcome n1 = normalize(u1, Closure::Full, cfg.fuel, false, kRuleSBang);
        ReduceOutcome n2 = normalize(u2, Closure::Full, cfg.fuel, false, kRuleSBang);
        if (n1.normalized && n2.normalized && n1.term == n2.term) {
          tally.pass();
        } else if (joinable(u1, u2, Closure::Full, cfg.fuel, kRuleSBang)) {
          tally.pass();
        } else if (n1.normalized && n2.normalized) {
          tally.fail(what, "distinct s! normal forms and no common reduct found");
        } else {
          tally.unknown(what, "s! normalization did not finish within fuel");
        }
      }
  });
}

void run_commutation(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "A dB/d! step and an s! step from the same term close: one s! step after the first, "
      "and some number of dB/d! steps after the second.";
  Tally tally{rep};
  const unsigned lin = kRuleDB | kRuleDBang;
  const std::size_t cap = 4000;
  for_terms(cfg, cfg.size.value_or(8), GenProfile::Raw, rep, [&](const Term& t) {
    auto rs = rule_steps(t, lin);
    if (rs.empty()) return;
    auto ss = rule_steps(t, kRuleSBang);
    for (const Redex& r : rs)
      for (const Redex& s : ss) {
        std::set<Term> goal;
        for (const Redex& q : rule_steps(r.reduct, kRuleSBang)) goal.insert(q.reduct);
        // dB/d! terminates, so this search is finite; the cap only guards size.
        std::set<Term> seen = {s.reduct};
        std::vector<Term> frontier = {s.reduct};
        bool found = goal.count(s.reduct) > 0, capped = false;
        while (!found && !frontier.empty() && !capped) {
          std::vector<Term> next;
          for (const Term& u : frontier)
            for (const Redex& q : rule_steps(u, lin)) {
              if (goal.count(q.reduct)) found = true;
              if (seen.insert(q.reduct).second) next.push_back(q.reduct);
              if (seen.size() > cap) capped = true;
            }
          frontier = std::move(next);
        }
        json what = {{"term", print_term(t)}, {"linear", print_term(r.reduct)}, {"s!", print_term(s.reduct)}};
        if (found)
          tally.pass();
        else if (capped)
          tally.unknown(what, "search cap reached");
        else
          tally.fail(what, "no common reduct of the required shape");
      }
  });
}

void run_measure(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Every s! step strictly decreases the multiset size measure in the multiset order and does not increase the "
      "potential multiplicity of any variable.";
  Tally tally{rep};
  std::size_t n = cfg.count.value_or(1000);
  unsigned size = cfg.size.value_or(12);
  rep.regime = std::to_string(n) + " seeded bang-rich terms (seed " + std::to_string(cfg.seed) + ") of size 2.." +
               std::to_string(size) + ", every full s! step along the first 12 steps of full reduction";
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < n; ++i) {
    Term cur = gen_term(rng, 2 + static_cast<unsigned>(rng.below(size - 1)), GenProfile::Bang);
    // Follow full reduction so dB steps keep creating fresh closures.
    for (unsigned depth = 0; depth < 12; ++depth) {
      auto ss = rule_steps(cur, kRuleSBang);
      NatMultiset before = multi_size(cur);
      for (const Redex& s : ss) {
        std::string why;
        if (!ms_gt(before, multi_size(s.reduct))) why = "measure does not decrease";
        std::set<std::string> xs = free_vars(cur);
        for (const auto& x : free_vars(s.reduct)) xs.insert(x);
        for (const auto& x : xs)
          if (why.empty() && pot_mult(x, cur) < pot_mult(x, s.reduct)) why = "multiplicity of " + x + " grows";
        if (why.empty())
          tally.pass();
        else
          tally.fail({{"term", print_term(cur)}, {"reduct", print_term(s.reduct)}}, why);
      }
      auto next = first_redex(cur, Closure::Full);
      if (!next || next->reduct.size() > 400) break;
      cur = next->reduct;
    }
  }
}

void run_grammar(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "The normal-form grammar accepts a term exactly when it has neither a surface redex nor a surface clash.";
  Tally tally{rep};
  for_terms(cfg, cfg.size.value_or(7), GenProfile::Raw, rep, [&](const Term& t) {
    bool grammar = classify(t) == NfClass::NoS;
    bool direct = redexes(t, Closure::Surface).empty() && static_clashes(t, Closure::Surface).empty();
    if (grammar == direct)
      tally.pass();
    else
      tally.fail({{"term", print_term(t)}, {"grammar", grammar}, {"no_redex_no_clash", direct}}, "mismatch");
  });
}

void run_typability(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "A term has a B typing exactly when surface reduction takes it to a clash-free normal form.";
  Tally tally{rep};
  std::size_t bounded = 0, diverging = 0;
  for_terms(cfg, cfg.size.value_or(6), GenProfile::Raw, rep, [&](const Term& t) {
    Tri typed = typable_by_enumeration(t, cfg.bounds);
    TypableResult op = typable(t, cfg.fuel);
    json what = {{"term", print_term(t)}, {"typings", tri_name(typed)}, {"clash_free_nf", tri_name(op.verdict)}};
    if (op.verdict == Tri::Unknown) {
      ++diverging;
      tally.unknown(what, "no surface normal form within fuel");
    } else if (typed == op.verdict) {
      tally.pass();
    } else if (typed == Tri::No) {
      ++bounded;
      tally.unknown(what, "clash-free normal form but no typing within the type bounds");
    } else {
      tally.fail(what, "typed, yet the normal form has a clash");
    }
  });
  rep.info["undecided_by_bounds"] = bounded;
  rep.info["undecided_by_fuel"] = diverging;
}

void run_transport(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Across one full reduction step, every typing of the term is a typing of the reduct and vice versa, "
      "witnessed by derivations built step by step.";
  Tally tally{rep};
  std::size_t n = cfg.count.value_or(500);
  unsigned size = cfg.size.value_or(7);
  rep.regime = std::to_string(n) + " seeded typable terms with a full redex (seed " + std::to_string(cfg.seed) +
               ") of size 2.." + std::to_string(size) + ", every full step";
  Rng rng(cfg.seed);
  std::size_t found = 0, attempts = 0, equal_sets = 0;
  while (found < n && attempts < n * 200) {
    ++attempts;
    Term t = gen_term(rng, 2 + static_cast<unsigned>(rng.below(size - 1)), GenProfile::Bang);
    auto rs = redexes(t, Closure::Full);
    if (rs.empty() || typings_enumerate(System::B, t, cfg.bounds).derivations.empty()) continue;
    ++found;
    for (const Redex& r : rs) {
      TransportReport tr = typing_transport_check(t, r.reduct, cfg.bounds);
      equal_sets += tr.bounded_sets_equal;
      json what = {{"term", print_term(t)}, {"reduct", print_term(r.reduct)}, {"forward", tr.forward},
                   {"backward", tr.backward}};
      if (tr.ok)
        tally.pass();
      else if (tr.truncated)
        tally.unknown(what, "typing enumeration truncated: " + tr.detail);
      else
        tally.fail(what, tr.detail);
    }
  }
  rep.info["typed_terms"] = found;
  rep.info["bounded_sets_equal"] = equal_sets;
  if (found < n) tally.unknown({{"sampled", found}}, "fewer typable terms than requested");
}

void run_simulation(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Each CBN (resp. CBV) surface step between two terms is matched by a sequence of surface steps between "
      "their embeddings.";
  Tally tally{rep};
  std::size_t n = cfg.count.value_or(500);
  unsigned size = cfg.size.value_or(10);
  std::uint64_t fuel = std::min<std::uint64_t>(cfg.fuel, 30);
  rep.regime = std::to_string(n) + " seeded terms per calculus (seed " + std::to_string(cfg.seed) + ") of size 1.." +
               std::to_string(size) + ", the first " + std::to_string(fuel) +
               " steps of each reduction, search window 8 steps";
  for (Calculus c : {Calculus::CBN, Calculus::CBV}) {
    Rng rng(cfg.seed);
    std::size_t exact = 0, modulo = 0;
    json examples = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      Term t = gen_term(rng, 1 + static_cast<unsigned>(rng.below(size)), GenProfile::CTerm);
      SimReport s = simulate_check(c, t, fuel);
      exact += s.exact;
      modulo += s.modulo;
      for (const SimStep& st : s.steps) {
        json what = {{"calculus", calculus_name(c)}, {"term", print_term(t)}, {"from", print_term(st.source)},
                     {"to", print_term(st.target)}};
        if (st.exact || st.modulo) {
          tally.pass();
          if (st.modulo && examples.size() < 5) examples.push_back(what);
        } else if (st.exhausted) {
          tally.fail(what, "target embedding unreachable within the window");
        } else {
          tally.unknown(what, "search node cap reached");
        }
      }
    }
    rep.info[calculus_name(c)] = {{"exact", exact}, {"up_to_closure_placement", modulo}, {"examples", examples}};
  }
}

void run_transfer(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "A term has an N (resp. V) typing exactly when its embedding has the same B typing, and a CBN (resp. CBV) "
      "term is meaningful exactly when its embedding is.";
  Tally tally{rep};
  unsigned size = cfg.size.value_or(6);
  std::size_t equal_sets = 0;
  for (Calculus c : {Calculus::CBN, Calculus::CBV}) {
    for_terms(cfg, size, GenProfile::CTerm, rep, [&](const Term& t) {
      TypingTransfer tt = typing_transfer_check(c, t, cfg.bounds);
      equal_sets += tt.sets_equal;
      json what = {{"calculus", calculus_name(c)}, {"term", print_term(t)}, {"typings", tt.source},
                   {"embedded_typings", tt.target}};
      if (tt.ok)
        tally.pass();
      else if (tt.truncated)
        tally.unknown(what, tt.detail);
      else
        tally.fail(what, tt.detail);
    });
  }
  rep.regime += "; meaningfulness on the transfer corpus";
  rep.info["typing_sets_equal"] = equal_sets;
  Budgets b;
  b.fuel = cfg.fuel;
  b.bounds = cfg.bounds;
  json table = json::array();
  for (Calculus c : {Calculus::CBN, Calculus::CBV})
    for (const Term& t : transfer_corpus()) {
      TransferReport tr = transfer_check(c, t, b);
      json what = {{"calculus", calculus_name(c)}, {"term", print_term(t)},
                   {"source", verdict_name(tr.source.verdict)}, {"embedding", verdict_name(tr.target.verdict)}};
      table.push_back(what);
      if (tr.disagreement)
        tally.fail(what, "decided verdicts differ");
      else if (tr.source.verdict == Verdict::Unknown || tr.target.verdict == Verdict::Unknown)
        tally.unknown(what, "at least one side undecided");
      else
        tally.pass();
    }
  rep.info["meaningfulness"] = table;
}

struct GenericityPair {
  const char* ctx;
  const char* term;
};

void run_genericity(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Plugging any term in place of a meaningless subterm keeps a meaningful term meaningful, and the same testable "
      "typing still types it.";
  Tally tally{rep};
  std::size_t samples = cfg.count.value_or(50);
  rep.regime = "20 curated (context, meaningless term) pairs, " + std::to_string(samples) +
               " seeded replacements each (seed " + std::to_string(cfg.seed) + "); CBN/CBV contexts around a divergent term";
  static const char* contexts[] = {"(\\x.!y) ![]", "(\\x.!x) !(\\z.[])", "![]", "\\y.(\\x.!y) ![]",
                                   "(\\w.!y) !(z [])"};
  static const char* meaningless[] = {"!x y", "der (\\x.x)", "(\\x.x) (\\y.y)", "x (\\y.y)"};
  Budgets b;
  b.fuel = cfg.fuel;
  b.bounds = cfg.bounds;
  Rng rng(cfg.seed);
  for (const char* f : contexts)
    for (const char* m : meaningless) {
      std::vector<Term> us;
      for (std::size_t i = 0; i < samples; ++i) us.push_back(gen_term(rng, 1 + static_cast<unsigned>(rng.below(8)), GenProfile::Raw));
      Ctx ctx = parse_ctx(f, CtxKind::Full);
      GenericityReport g = genericity_check(ctx, parse_term(m), us, b);
      json what = {{"context", f}, {"term", m}, {"meaningful", g.meaningful}, {"unknown", g.unknown},
                   {"meaningless", g.meaningless}, {"typed_transported", g.typed_transported}};
      if (!g.precondition || !g.applies)
        tally.fail(what, "curated pair does not meet its premise: " + g.detail);
      else if (g.ok())
        tally.pass();
      else
        tally.fail(what, g.detail);
    }
  // The source calculi decide meaningfulness operationally; Ω has no normal form.
  struct CPair {
    Calculus c;
    const char* ctx;
  };
  static const CPair cpairs[] = {{Calculus::CBN, "(\\x.y) []"}, {Calculus::CBN, "\\z.(\\x.z) []"},
                                 {Calculus::CBN, "y[x<-[]]"},   {Calculus::CBV, "(\\x.y) (\\z.[])"},
                                 {Calculus::CBV, "\\z.[]"},     {Calculus::CBV, "x (\\z.[])"}};
  Term omega = parse_term("(\\x.x x) (\\x.x x)");
  for (const CPair& p : cpairs) {
    Ctx ctx = parse_ctx(p.ctx, CtxKind::Full);
    json what = {{"calculus", calculus_name(p.c)}, {"context", p.ctx}, {"term", "Ω"}};
    if (c_meaningful(p.c, omega, cfg.fuel, false).verdict != Verdict::Unknown ||
        c_meaningful(p.c, plug(ctx, omega), cfg.fuel, false).verdict != Verdict::Meaningful) {
      tally.fail(what, "curated pair does not meet its premise");
      continue;
    }
    std::size_t bad = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      Term u = gen_term(rng, 1 + static_cast<unsigned>(rng.below(8)), GenProfile::CTerm);
      if (c_meaningful(p.c, plug(ctx, u), cfg.fuel, false).verdict != Verdict::Meaningful) ++bad;
    }
    if (bad == 0)
      tally.pass();
    else
      tally.fail(what, std::to_string(bad) + " replacements not meaningful");
  }
}

void run_corpus(const SuiteConfig&, Report& rep) {
  rep.statement = "Worked examples reproduce exactly: reductions, derivations, inhabitants, embeddings and verdicts.";
  rep.regime = std::to_string(corpus().size()) + " curated entries";
  Tally tally{rep};
  for (const auto& e : corpus()) {
    std::string err = check_corpus_entry(e);
    if (err.empty())
      tally.pass();
    else
      tally.fail({{"name", e.name}}, err);
  }
}

void run_soundness(const SuiteConfig& cfg, Report& rep) {
  rep.statement =
      "Every meaningful verdict carries a testing context that sends the term to a bang, and no term judged "
      "meaningless is sent to a bang by any small testing context.";
  Tally tally{rep};
  Budgets b;
  b.fuel = cfg.fuel;
  b.bounds = cfg.bounds;
  std::size_t n = cfg.count.value_or(500);
  unsigned size = cfg.size.value_or(8);
  rep.regime = "meaning corpus plus " + std::to_string(n) + " seeded terms (seed " + std::to_string(cfg.seed) +
               ") of size 1.." + std::to_string(size) + "; context search depth " + std::to_string(b.ctx_depth);
  std::vector<Term> terms;
  for (const auto& e : corpus())
    if (e.kind == "meaning") terms.push_back(parse_term(e.data.at("term").get<std::string>()));
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < n; ++i) terms.push_back(gen_term(rng, 1 + static_cast<unsigned>(rng.below(size)), GenProfile::Raw));
  std::size_t mful = 0, mless = 0;
  for (const Term& t : terms) {
    MeaningResult m = meaningful(t, b);
    json what = {{"term", print_term(t)}, {"verdict", verdict_name(m.verdict)}};
    if (m.verdict == Verdict::Meaningful) {
      ++mful;
      if (m.context && replay_to_bang(*m.context, t, b.fuel * 10 + 1000))
        tally.pass();
      else
        tally.fail(what, "testing context does not replay to a bang");
    } else if (m.verdict == Verdict::Meaningless) {
      ++mless;
      if (auto c = search_testing_context(t, b.ctx_depth, b.fuel)) {
        what["context"] = print_ctx(*c);
        tally.fail(what, "a testing context reaches a bang");
      } else {
        tally.pass();
      }
    } else {
      tally.unknown(what, m.reason);
    }
  }
  rep.info["meaningful"] = mful;
  rep.info["meaningless"] = mless;
}

}  // namespace

json Report::to_json() const {
  return {{"schema", "banglab.report/1"},
          {"suite", suite},
          {"statement", statement},
          {"regime", regime},
          {"counts", {{"pass", pass}, {"fail", fail}, {"unknown", unknown}}},
          {"ok", ok()},
          {"info", info},
          {"cases", cases}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"confluence", "diamond",    "commutation", "measure",
                                                 "grammar",    "typability", "transport",   "simulation",
                                                 "transfer",   "genericity", "corpus",      "soundness"};
  return names;
}

Report run_suite(const SuiteConfig& cfg) {
  static const std::map<std::string, void (*)(const SuiteConfig&, Report&)> table = {
      {"confluence", run_confluence}, {"diamond", run_diamond},       {"commutation", run_commutation},
      {"measure", run_measure},       {"grammar", run_grammar},       {"typability", run_typability},
      {"transport", run_transport},   {"simulation", run_simulation}, {"transfer", run_transfer},
      {"genericity", run_genericity}, {"corpus", run_corpus},         {"soundness", run_soundness}};
  auto it = table.find(cfg.suite);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + cfg.suite + "'");
  Report rep;
  rep.suite = cfg.suite;
  it->second(cfg, rep);
  return rep;
}

Tri typable_by_enumeration(const Term& t, const Bounds& largest) {
  Bounds small{1, largest.pool, std::min(2u, largest.depth)};
  if (!typings_enumerate(System::B, t, small).derivations.empty()) return Tri::Yes;
  return typings_enumerate(System::B, t, largest).derivations.empty() ? Tri::No : Tri::Yes;
}

std::vector<Term> transfer_corpus() {
  std::vector<Term> out;
  for (const char* s : {"\\z.z", "(\\x.x x) (\\x.x x)", "x ((\\x.x x) (\\x.x x))", "\\x.(\\y.y y) (\\y.y y)",
                        "x (\\y.z)", "x (\\y.(\\w.w w) (\\w.w w))"})
    out.push_back(parse_term(s));
  return out;
}

// ---------------------------------------------------------------------------
// Corpus

namespace {

json chain(std::initializer_list<std::pair<const char*, const char*>> steps) {
  json a = json::array();
  for (const auto& [closure, term] : steps) a.push_back({{"closure", closure}, {"term", term}});
  return a;
}

std::string expect_eq(const Term& got, const std::string& want, const std::string& what) {
  if (got == parse_term(want)) return "";
  return what + ": got " + print_term(got) + ", expected " + want;
}

bool one_bang_step(const Term& from, const Term& to, Closure c) {
  for (const Redex& r : redexes(from, c))
    if (r.reduct == to) return true;
  return false;
}

bool one_c_step(Calculus c, const Term& from, const Term& to) {
  for (const CRedex& r : c_redexes(c, from))
    if (r.reduct == to) return true;
  return false;
}

DerivPtr self_application_derivation() {
  Type a = Type::tvar("a"), b = Type::tvar("b");
  Multitype m({a});
  DerivPtr f = derive_var(System::B, "x", Type::arrow(m, b));
  DerivPtr u = derive_var(System::B, "x", Type::multi(m));
  return derive(System::B, "app", parse_term("x x"), "", {f, u});
}

DerivPtr identity_bang_derivation() {
  DerivPtr v = derive_var(System::B, "x", Type::tvar("a"));
  DerivPtr bang = derive(System::B, "bang", parse_term("!x"), "", {v});
  return derive(System::B, "abs", parse_term("\\x.!x"), "x", {bang});
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> e;
    e.push_back({"bang-three-steps", "reduction",
                 {{"term", "(\\x.!der !x) !y"},
                  {"chain", chain({{"surface", "(!der !x)[x<-!y]"}, {"surface", "!(der !y)"}, {"full", "!y"}})}}});
    e.push_back({"self-application-derivation", "derivation",
                 {{"term", "x x"}, {"env", "x:[[a] -> b, [a]]"}, {"type", "b"}, {"build", "self-application"}}});
    e.push_back({"identity-bang-derivation", "derivation",
                 {{"term", "\\x.!x"}, {"env", ""}, {"type", "[a] -> [a]"}, {"build", "identity-bang"}}});
    e.push_back({"inhabit-bang-identity", "inhabitation",
                 {{"system", "B"}, {"type", "[a] -> [a]"}, {"witness", "\\x.!x"}}});
    e.push_back({"cbn-example", "c-reduction",
                 {{"calculus", "cbn"},
                  {"term", "(\\x.y x x) ((\\z.z) (\\z.z))"},
                  {"chain", {"(y x x)[x<-(\\z.z) (\\z.z)]", "y ((\\z.z) (\\z.z)) ((\\z.z) (\\z.z))"}},
                  {"normal_form", "y ((\\z.z) (\\z.z)) ((\\z.z) (\\z.z))"},
                  {"steps", 2}}});
    e.push_back({"cbv-example", "c-reduction",
                 {{"calculus", "cbv"},
                  {"term", "(\\x.y x x) ((\\z.z) (\\z.z))"},
                  {"chain",
                   {"(y x x)[x<-(\\z.z) (\\z.z)]", "(y x x)[x<-z[z<-\\z.z]]", "(y x x)[x<-\\z.z]", "y (\\z.z) (\\z.z)"}},
                  {"normal_form", "y (\\z.z) (\\z.z)"},
                  {"steps", 4}}});
    e.push_back({"cbn-embedding", "embedding",
                 {{"calculus", "cbn"},
                  {"term", "(\\x.y x x) ((\\z.z) (\\z.z))"},
                  {"image", "(\\x.y !x !x) !((\\z.z) !(\\z.z))"}}});
    e.push_back({"cbv-embedding", "embedding",
                 {{"calculus", "cbv"},
                  {"term", "(\\x.y x x) ((\\z.z) (\\z.z))"},
                  {"image", "(\\x.der (y !x) !x) ((\\z.!z) !(\\z.!z))"}}});
    e.push_back({"cbv-embedding-result", "embedding",
                 {{"calculus", "cbv"}, {"term", "y (\\z.z) (\\z.z)"}, {"image", "der (y !(\\z.!z)) !(\\z.!z)"}}});
    e.push_back({"cbv-embedding-variable", "embedding", {{"calculus", "cbv"}, {"term", "x"}, {"image", "!x"}}});
    e.push_back({"cbn-simulated-chain", "reduction",
                 {{"term", "(\\x.y !x !x) !((\\z.z) !(\\z.z))"},
                  {"chain", chain({{"surface", "(y !x !x)[x<-!((\\z.z) !(\\z.z))]"},
                                   {"surface", "y !((\\z.z) !(\\z.z)) !((\\z.z) !(\\z.z))"}})}}});
    e.push_back({"cbv-simulated-chain", "reduction",
                 {{"term", "(\\x.der (y !x) !x) ((\\z.!z) !(\\z.!z))"},
                  {"chain", chain({{"surface", "(der (y !x) !x)[x<-(\\z.!z) !(\\z.!z)]"},
                                   {"surface", "(der (y !x) !x)[x<-(!z)[z<-!(\\z.!z)]]"},
                                   {"surface", "(der (y !x) !x)[x<-!(\\z.!z)]"},
                                   {"surface", "der (y !(\\z.!z)) !(\\z.!z)"}})}}});
    e.push_back({"identity-meaningful", "meaning", {{"term", "\\z.z"}, {"verdict", "meaningful"}}});
    e.push_back({"bang-meaningful", "meaning", {{"term", "!x"}, {"verdict", "meaningful"}}});
    e.push_back({"omega-not-meaningful", "meaning", {{"term", "(\\x.x !x) !(\\x.x !x)"}, {"verdict", "not-meaningful"}}});
    e.push_back({"stuck-omega-not-meaningful", "meaning",
                 {{"term", "x ((\\x.x !x) !(\\x.x !x))"}, {"verdict", "not-meaningful"}}});
    e.push_back({"self-application-not-meaningful", "meaning", {{"term", "x x"}, {"verdict", "not-meaningful"}}});
    e.push_back({"bang-head-clash", "meaning", {{"term", "!x y"}, {"verdict", "meaningless"}}});
    e.push_back({"cbn-solvable", "c-meaning",
                 {{"calculus", "cbn"},
                  {"term", "x (\\y.(\\w.w w) (\\w.w w))"},
                  {"verdict", "meaningful"},
                  {"context", "(\\x.[]) (\\z.\\z.z)"}}});
    e.push_back({"cbn-abstracted-omega", "c-meaning",
                 {{"calculus", "cbn"}, {"term", "\\x.(\\w.w w) (\\w.w w)"}, {"verdict", "unknown"}}});
    e.push_back({"cbv-value-argument", "c-meaning",
                 {{"calculus", "cbv"}, {"term", "x (\\y.z)"}, {"verdict", "meaningful"}}});
    e.push_back({"cbv-stuck-omega", "c-meaning",
                 {{"calculus", "cbv"}, {"term", "x ((\\w.w w) (\\w.w w))"}, {"verdict", "unknown"}}});
    return e;
  }();
  return entries;
}

std::string check_corpus_entry(const CorpusEntry& e) {
  const json& d = e.data;
  try {
    if (e.kind == "reduction") {
      Term cur = parse_term(d.at("term").get<std::string>());
      for (const auto& s : d.at("chain")) {
        Term next = parse_term(s.at("term").get<std::string>());
        if (!one_bang_step(cur, next, parse_closure(s.at("closure").get<std::string>())))
          return "no step from " + print_term(cur) + " to " + print_term(next);
        cur = next;
      }
      return "";
    }
    if (e.kind == "c-reduction") {
      Calculus c = parse_calculus(d.at("calculus").get<std::string>());
      Term t = parse_term(d.at("term").get<std::string>());
      Term cur = t;
      for (const auto& s : d.at("chain")) {
        Term next = parse_term(s.get<std::string>());
        if (!one_c_step(c, cur, next)) return "no step from " + print_term(cur) + " to " + print_term(next);
        cur = next;
      }
      COutcome o = c_normalize(c, t, 10);
      if (!o.normalized) return "no normal form within 10 steps";
      if (o.steps != d.at("steps").get<std::uint64_t>()) return "took " + std::to_string(o.steps) + " steps";
      return expect_eq(o.term, d.at("normal_form").get<std::string>(), "normal form");
    }
    if (e.kind == "embedding") {
      Calculus c = parse_calculus(d.at("calculus").get<std::string>());
      return expect_eq(embed(c, parse_term(d.at("term").get<std::string>())), d.at("image").get<std::string>(),
                       "embedding");
    }
    if (e.kind == "derivation") {
      DerivPtr p = d.at("build") == "self-application" ? self_application_derivation() : identity_bang_derivation();
      CheckReport r = check_derivation(*p);
      if (!r.ok) return "derivation rejected: " + r.message;
      if (p->subject != parse_term(d.at("term").get<std::string>())) return "wrong subject";
      if (p->env != parse_env(d.at("env").get<std::string>())) return "environment " + print_env(p->env);
      if (p->type != parse_type(d.at("type").get<std::string>())) return "type " + print_type(p->type);
      return "";
    }
    if (e.kind == "inhabitation") {
      InhResult r = inhabit(parse_system(d.at("system").get<std::string>()), parse_type(d.at("type").get<std::string>()));
      if (r.status != InhStatus::Inhabited) return std::string("status ") + inh_status_name(r.status);
      return expect_eq(r.witness, d.at("witness").get<std::string>(), "witness");
    }
    if (e.kind == "meaning") {
      Term t = parse_term(d.at("term").get<std::string>());
      MeaningResult m = meaningful(t);
      std::string want = d.at("verdict").get<std::string>();
      std::string got = verdict_name(m.verdict);
      if (want == "not-meaningful" ? m.verdict == Verdict::Meaningful : got != want) return "verdict " + got;
      if (m.verdict == Verdict::Meaningful && !(m.context && replay_to_bang(*m.context, t, 2000)))
        return "context does not replay";
      return "";
    }
    if (e.kind == "c-meaning") {
      Calculus c = parse_calculus(d.at("calculus").get<std::string>());
      CMeaning m = c_meaningful(c, parse_term(d.at("term").get<std::string>()), 100);
      std::string got = verdict_name(m.verdict);
      if (got != d.at("verdict").get<std::string>()) return "verdict " + got;
      if (d.contains("context")) {
        if (!m.context) return "no witness context";
        if (m.context->spine() != parse_ctx(d.at("context").get<std::string>()).spine())
          return "witness context " + print_ctx(*m.context);
      }
      return "";
    }
    return "unknown entry kind " + e.kind;
  } catch (const std::exception& ex) {
    return ex.what();
  }
}

}  // namespace banglab
