#include "banglab/reduction.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "banglab/syntax.hpp"

namespace banglab {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::DB:
      return "dB";
    case Rule::SBang:
      return "s!";
    case Rule::DBang:
      return "d!";
  }
  return "?";
}

Closure parse_closure(const std::string& s) {
  if (s == "surface" || s == "S") return Closure::Surface;
  if (s == "full" || s == "F") return Closure::Full;
  throw std::invalid_argument("unknown closure '" + s + "'");
}

namespace {

// body sits under one binder that disappears; index 0 becomes u (which lives
// under k fresh closures at the redex) and outer indices move past them.
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

}  // namespace

std::optional<std::pair<Rule, Term>> contract_root(const Term& t, unsigned rules) {
  switch (t.kind()) {
    case Kind::App: {
      if (!(rules & kRuleDB)) return std::nullopt;
      auto [core, k] = peel_list(t.fun());
      if (core.kind() != Kind::Abs) return std::nullopt;
      Term inner = Term::raw_sub(core.body(), core.name(), shift(t.arg(), k));
      return std::make_pair(Rule::DB, rewrap_list(t.fun(), k, inner));
    }
    case Kind::Sub: {
      if (!(rules & kRuleSBang)) return std::nullopt;
      auto [core, k] = peel_list(t.arg());
      if (core.kind() != Kind::Bang) return std::nullopt;
      return std::make_pair(Rule::SBang, rewrap_list(t.arg(), k, inst_under_list(t.body(), core.inner(), k)));
    }
    case Kind::Der: {
      if (!(rules & kRuleDBang)) return std::nullopt;
      auto [core, k] = peel_list(t.inner());
      if (core.kind() != Kind::Bang) return std::nullopt;
      return std::make_pair(Rule::DBang, rewrap_list(t.inner(), k, core.inner()));
    }
    default:
      return std::nullopt;
  }
}

namespace {

// Pre-order walk over legal positions; visit returns false to stop.
bool walk_positions(const Term& t, Closure c, Path& path, const std::function<bool(const Term&, const Path&)>& visit) {
  if (!visit(t, path)) return false;
  if (c == Closure::Surface && t.kind() == Kind::Bang) return true;
  for (int i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    bool go_on = walk_positions(t.child(i), c, path, visit);
    path.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

std::vector<Redex> redexes(const Term& t, Closure c, unsigned rules) {
  std::vector<Redex> out;
  Path path;
  walk_positions(t, c, path, [&](const Term& s, const Path& p) {
    if (auto r = contract_root(s, rules)) out.push_back({p, r->first, r->second, replace_at(t, p, r->second)});
    return true;
  });
  return out;
}

std::optional<Redex> first_redex(const Term& t, Closure c, unsigned rules) {
  std::optional<Redex> out;
  Path path;
  walk_positions(t, c, path, [&](const Term& s, const Path& p) {
    if (auto r = contract_root(s, rules)) {
      out = Redex{p, r->first, r->second, replace_at(t, p, r->second)};
      return false;
    }
    return true;
  });
  return out;
}

std::optional<Term> step(const Term& t, Closure c) {
  if (auto r = first_redex(t, c)) return r->reduct;
  return std::nullopt;
}

std::optional<Term> step_at(const Term& t, Closure c, std::size_t index) {
  auto rs = redexes(t, c);
  if (rs.empty()) return std::nullopt;
  if (index >= rs.size()) throw std::out_of_range("redex index out of range");
  return rs[index].reduct;
}

ReduceOutcome normalize(const Term& t, Closure c, std::uint64_t fuel, bool record_trace, unsigned rules,
                        std::uint64_t size_cap) {
  ReduceOutcome out;
  out.term = t;
  while (true) {
    auto r = first_redex(out.term, c, rules);
    if (!r) {
      out.normalized = true;
      return out;
    }
    if (out.steps >= fuel) return out;
    if (r->reduct.size() > size_cap) {
      out.size_capped = true;
      return out;
    }
    out.term = r->reduct;
    ++out.steps;
    if (record_trace) out.trace.push_back({r->rule, r->position, out.term});
  }
}

namespace {

bool is_list_abs(const Term& t) { return peel_list(t).first.kind() == Kind::Abs; }
bool is_list_bang(const Term& t) { return peel_list(t).first.kind() == Kind::Bang; }

bool clash_at(const Term& t) {
  switch (t.kind()) {
    case Kind::App:
      if (is_list_bang(t.fun())) return true;
      return is_list_abs(t.arg()) && !is_list_abs(t.fun());
    case Kind::Sub:
      return is_list_abs(t.arg());
    case Kind::Der:
      return is_list_abs(t.inner());
    default:
      return false;
  }
}

constexpr unsigned kNe = 1, kNa = 2, kNb = 4;

unsigned grammar_mask(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::BVar:
      return kNe | kNa | kNb;
    case Kind::App:
      return ((grammar_mask(t.fun()) & kNe) && (grammar_mask(t.arg()) & kNa)) ? (kNe | kNa | kNb) : 0;
    case Kind::Der:
      return (grammar_mask(t.inner()) & kNe) ? (kNe | kNa | kNb) : 0;
    case Kind::Bang:
      return kNa;
    case Kind::Abs:
      return grammar_mask(t.body()) != 0 ? kNb : 0;
    case Kind::Sub: {
      if (!(grammar_mask(t.arg()) & kNe)) return 0;
      unsigned b = grammar_mask(t.body());
      if (b & kNe) return kNe | kNa | kNb;
      return b & (kNa | kNb);
    }
    default:
      return 0;
  }
}

}  // namespace

std::vector<Path> static_clashes(const Term& t, Closure c) {
  std::vector<Path> out;
  Path path;
  walk_positions(t, c, path, [&](const Term& s, const Path& p) {
    if (clash_at(s)) out.push_back(p);
    return true;
  });
  return out;
}

const char* nf_class_name(NfClass c) {
  switch (c) {
    case NfClass::NeS:
      return "neS";
    case NfClass::NaS:
      return "naS";
    case NfClass::NbS:
      return "nbS";
    case NfClass::NoS:
      return "noS";
    case NfClass::NotNormal:
      return "not-normal";
    case NfClass::ClashNF:
      return "clash-nf";
  }
  return "?";
}

bool in_no_grammar(const Term& t) { return grammar_mask(t) != 0; }

NfClass grammar_class(const Term& t) {
  unsigned m = grammar_mask(t);
  if (m & kNe) return NfClass::NeS;
  if (m & kNa) return NfClass::NaS;
  if (m & kNb) return NfClass::NbS;
  return NfClass::ClashNF;
}

NfClass classify(const Term& t) {
  if (first_redex(t, Closure::Surface)) return NfClass::NotNormal;
  return in_no_grammar(t) ? NfClass::NoS : NfClass::ClashNF;
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Yes:
      return "yes";
    case Tri::No:
      return "no";
    case Tri::Unknown:
      return "unknown";
  }
  return "?";
}

ClashFreeResult clash_free(const Term& t, Closure c, std::uint64_t fuel) {
  ClashFreeResult out;
  Term cur = t;
  std::uint64_t steps = 0;
  while (true) {
    auto cl = static_clashes(cur, c);
    if (!cl.empty()) {
      out.verdict = Tri::No;
      out.clash = cl.front();
      return out;
    }
    auto r = first_redex(cur, c);
    if (!r) {
      out.verdict = Tri::Yes;
      return out;
    }
    if (steps >= fuel || r->reduct.size() > kDefaultSizeCap) {
      out.verdict = Tri::Unknown;
      return out;
    }
    cur = r->reduct;
    ++steps;
    out.trace.push_back({r->rule, r->position, cur});
  }
}

bool joinable(const Term& u1, const Term& u2, Closure c, std::uint64_t fuel, unsigned rules,
              std::size_t node_cap) {
  if (u1 == u2) return true;
  ReduceOutcome n1 = normalize(u1, c, fuel, false, rules);
  ReduceOutcome n2 = normalize(u2, c, fuel, false, rules);
  if (n1.normalized && n2.normalized) return n1.term == n2.term;
  std::unordered_set<Term, TermHash> seen[2];
  std::vector<Term> frontier[2] = {{u1}, {u2}};
  seen[0].insert(u1);
  seen[1].insert(u2);
  for (std::uint64_t depth = 0; depth < fuel; ++depth) {
    for (int side = 0; side < 2; ++side) {
      std::vector<Term> next;
      for (const Term& t : frontier[side]) {
        for (const Redex& r : redexes(t, c, rules)) {
          if (seen[1 - side].count(r.reduct)) return true;
          if (seen[side].insert(r.reduct).second) next.push_back(r.reduct);
          if (seen[side].size() > node_cap) return false;
        }
      }
      frontier[side] = std::move(next);
    }
    if (frontier[0].empty() && frontier[1].empty()) return false;
  }
  return false;
}

std::vector<Term> restricted_step(const Term& t, Fragment f) {
  unsigned rules = f == Fragment::DBDer ? (kRuleDB | kRuleDBang) : kRuleSBang;
  std::vector<Term> out;
  for (const Redex& r : redexes(t, Closure::Full, rules)) out.push_back(r.reduct);
  return out;
}

nlohmann::json trace_to_json(const std::vector<TraceEntry>& trace) {
  nlohmann::json arr = nlohmann::json::array();
  std::size_t i = 1;
  for (const auto& e : trace)
    arr.push_back({{"step", i++}, {"rule", rule_name(e.rule)}, {"position", e.position}, {"term", print_term(e.term)}});
  return arr;
}

nlohmann::json outcome_to_json(const ReduceOutcome& o) {
  return {{"status", o.normalized ? "normalized" : "fuel-exhausted"},
          {"term", print_term(o.term)},
          {"steps", o.steps},
          {"size_capped", o.size_capped},
          {"trace", trace_to_json(o.trace)}};
}

}  // namespace banglab
