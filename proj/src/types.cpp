#include "banglab/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

#include "banglab/syntax.hpp"

namespace banglab {

const char* system_name(System s) {
  switch (s) {
    case System::B:
      return "B";
    case System::N:
      return "N";
    case System::V:
      return "V";
  }
  return "?";
}

System parse_system(const std::string& s) {
  if (s == "B" || s == "b") return System::B;
  if (s == "N" || s == "n") return System::N;
  if (s == "V" || s == "v") return System::V;
  throw std::invalid_argument("unknown type system '" + s + "'");
}

Multitype::Multitype(std::vector<Type> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
}

Multitype Multitype::operator+(const Multitype& o) const {
  Multitype r;
  r.elems_.reserve(elems_.size() + o.elems_.size());
  std::merge(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end(), std::back_inserter(r.elems_));
  return r;
}

bool Multitype::remove_one(const Type& t) {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), t);
  if (it == elems_.end() || *it != t) return false;
  elems_.erase(it);
  return true;
}

std::size_t Multitype::count(const Type& t) const {
  auto r = std::equal_range(elems_.begin(), elems_.end(), t);
  return static_cast<std::size_t>(r.second - r.first);
}

int compare(const Multitype& a, const Multitype& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a.elems()[i], b.elems()[i]);
    if (c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

bool operator==(const Multitype& a, const Multitype& b) { return compare(a, b) == 0; }
bool operator<(const Multitype& a, const Multitype& b) { return compare(a, b) < 0; }

namespace {

std::size_t hmix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::shared_ptr<const TypeNode> make_node(TKind k, std::string name, Multitype m, Type cod) {
  auto n = std::make_shared<TypeNode>();
  n->kind = k;
  n->name = std::move(name);
  n->m = std::move(m);
  n->cod = std::move(cod);
  std::size_t h = static_cast<std::size_t>(k) + 17;
  unsigned md = 0;
  std::size_t mc = n->m.size();
  for (const Type& e : n->m.elems()) {
    md = std::max(md, e.depth());
    mc = std::max(mc, e.max_card());
    h = hmix(h, e.hash());
  }
  switch (k) {
    case TKind::TVar:
      n->depth = 1;
      n->max_card = 0;
      h = hmix(h, std::hash<std::string>{}(n->name));
      break;
    case TKind::Multi:
      n->depth = 1 + md;
      n->max_card = mc;
      break;
    case TKind::Arrow:
      n->depth = 1 + std::max(1 + md, n->cod.depth());
      n->max_card = std::max(mc, n->cod.max_card());
      h = hmix(hmix(h, 99), n->cod.hash());
      break;
  }
  n->hash = h;
  return n;
}

}  // namespace

Type Type::tvar(std::string name) {
  Type t;
  t.node_ = make_node(TKind::TVar, std::move(name), {}, {});
  return t;
}

Type Type::multi(Multitype m) {
  Type t;
  t.node_ = make_node(TKind::Multi, "", std::move(m), {});
  return t;
}

Type Type::arrow(Multitype dom, Type cod) {
  Type t;
  t.node_ = make_node(TKind::Arrow, "", std::move(dom), std::move(cod));
  return t;
}

TKind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const Multitype& Type::multi() const { return node_->m; }
const Type& Type::codomain() const { return node_->cod; }
unsigned Type::depth() const { return node_->depth; }
std::size_t Type::max_card() const { return node_->max_card; }
std::size_t Type::hash() const { return node_->hash; }

int compare(const Type& a, const Type& b) {
  const TypeNode* x = a.raw();
  const TypeNode* y = b.raw();
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case TKind::TVar:
      return x->name < y->name ? -1 : (x->name == y->name ? 0 : 1);
    case TKind::Multi:
      return compare(x->m, y->m);
    case TKind::Arrow: {
      int c = compare(x->m, y->m);
      if (c != 0) return c;
      return compare(x->cod, y->cod);
    }
  }
  return 0;
}

std::string tvar_name(unsigned i) {
  std::string s(1, static_cast<char>('a' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

namespace {

bool tvars_in_pool(const Type& t, unsigned pool) {
  switch (t.kind()) {
    case TKind::TVar:
      for (unsigned i = 0; i < pool; ++i)
        if (t.name() == tvar_name(i)) return true;
      return false;
    case TKind::Multi:
    case TKind::Arrow:
      for (const Type& e : t.multi().elems())
        if (!tvars_in_pool(e, pool)) return false;
      return t.kind() == TKind::Multi || tvars_in_pool(t.codomain(), pool);
  }
  return false;
}

}  // namespace

bool within_bounds(const Type& t, const Bounds& b) {
  return t.depth() <= b.depth && t.max_card() <= b.card && tvars_in_pool(t, b.pool);
}

bool within_bounds(const Multitype& m, const Bounds& b) { return within_bounds(Type::multi(m), b); }

std::string print_multitype(const Multitype& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += print_type(m.elems()[i]);
  }
  return s + "]";
}

std::string print_type(const Type& t) {
  switch (t.kind()) {
    case TKind::TVar:
      return t.name();
    case TKind::Multi:
      return print_multitype(t.multi());
    case TKind::Arrow:
      return print_multitype(t.multi()) + " -> " + print_type(t.codomain());
  }
  return "?";
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(const std::string& s) : s_(s) {}

  Type parse_all() {
    Type t = type();
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

  Env env_all() {
    Env g;
    skip();
    while (i_ < s_.size()) {
      std::string x = ident();
      skip();
      if (!eat(':')) fail("expected ':'");
      Multitype m = multitype();
      g.add(x, m);
      skip();
      if (!eat(',')) break;
    }
    skip();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return g;
  }

  Type type() {
    skip();
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      Type t = type();
      skip();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    if (i_ < s_.size() && s_[i_] == '[') {
      Multitype m = multitype();
      skip();
      if (s_.compare(i_, 2, "->") == 0) {
        i_ += 2;
        return Type::arrow(m, type());
      }
      return Type::multi(m);
    }
    return Type::tvar(ident());
  }

  Multitype multitype() {
    skip();
    if (!eat('[')) fail("expected '['");
    std::vector<Type> elems;
    skip();
    if (eat(']')) return Multitype(elems);
    while (true) {
      elems.push_back(type());
      skip();
      if (eat(']')) break;
      if (!eat(',')) fail("expected ',' or ']'");
    }
    return Multitype(std::move(elems));
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\'')) ++j;
    if (j == i_) fail("expected identifier");
    std::string r = s_.substr(i_, j - i_);
    i_ = j;
    return r;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(i_) + 1);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

Type parse_type(const std::string& src) { return TypeParser(src).parse_all(); }

Multitype parse_multitype(const std::string& src) {
  Type t = parse_type(src);
  if (!t.is_multi()) throw std::invalid_argument("expected a multitype");
  return t.multi();
}

Env Env::single(const std::string& x, const Multitype& m) {
  Env g;
  g.add(x, m);
  return g;
}

namespace {
const Multitype kEmptyMulti;
}

const Multitype& Env::get(const std::string& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const Entry& e, const std::string& k) { return e.first < k; });
  if (it != entries_.end() && it->first == x) return it->second;
  return kEmptyMulti;
}

bool Env::contains(const std::string& x) const { return !get(x).empty(); }

void Env::add(const std::string& x, const Multitype& m) {
  if (m.empty()) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const Entry& e, const std::string& k) { return e.first < k; });
  if (it != entries_.end() && it->first == x)
    it->second = it->second + m;
  else
    entries_.insert(it, {x, m});
}

Env Env::without(const std::string& x) const {
  Env g;
  for (const auto& e : entries_)
    if (e.first != x) g.entries_.push_back(e);
  return g;
}

Env operator+(const Env& a, const Env& b) {
  Env r;
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (i != a.entries_.end() || j != b.entries_.end()) {
    if (j == b.entries_.end() || (i != a.entries_.end() && i->first < j->first)) {
      r.entries_.push_back(*i++);
    } else if (i == a.entries_.end() || j->first < i->first) {
      r.entries_.push_back(*j++);
    } else {
      r.entries_.push_back({i->first, i->second + j->second});
      ++i;
      ++j;
    }
  }
  return r;
}

bool operator==(const Env& a, const Env& b) { return a.entries_ == b.entries_; }

bool operator<(const Env& a, const Env& b) {
  return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                                      [](const Env::Entry& x, const Env::Entry& y) {
                                        if (x.first != y.first) return x.first < y.first;
                                        return x.second < y.second;
                                      });
}

Env env_sum(const std::vector<Env>& gs) {
  Env r;
  for (const auto& g : gs) r = r + g;
  return r;
}

std::string print_env(const Env& g) {
  std::string s;
  for (const auto& [x, m] : g.entries()) {
    if (!s.empty()) s += ", ";
    s += x + ":" + print_multitype(m);
  }
  return s;
}

Env parse_env(const std::string& src) { return TypeParser(src).env_all(); }

std::string print_typing(const Typing& t) { return "(" + print_env(t.first) + " |- " + print_type(t.second) + ")"; }

bool is_observable(System s, const Type& t) {
  switch (s) {
    case System::B:
    case System::V:
      return t.is_multi();
    case System::N:
      return t.is_arrow() && t.multi().size() == 1 && t.multi().elems()[0] == t.codomain();
  }
  return false;
}

std::vector<Multitype> args(System s, const Type& t) {
  std::vector<Multitype> out;
  const Type* cur = &t;
  while (!is_observable(s, *cur) && cur->is_arrow()) {
    out.push_back(cur->multi());
    cur = &cur->codomain();
  }
  return out;
}

namespace {

struct Checker {
  CheckReport report;
  std::vector<int> path;

  bool fail(const Derivation& d, const std::string& msg) {
    report.ok = false;
    report.node = path;
    report.rule = d.rule;
    report.message = msg;
    return false;
  }

  bool premise_count(const Derivation& d, std::size_t n) {
    if (d.premises.size() != n)
      return fail(d, "expected " + std::to_string(n) + " premises, found " + std::to_string(d.premises.size()));
    return true;
  }

  bool check(const Derivation& d) {
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (!d.premises[i]) return fail(d, "missing premise");
      if (d.premises[i]->system != d.system) return fail(d, "premise from another system");
      path.push_back(static_cast<int>(i));
      bool ok = check(*d.premises[i]);
      path.pop_back();
      if (!ok) return false;
    }
    return local(d);
  }

  bool local(const Derivation& d) {
    const Term& t = d.subject;
    if (!t.valid() || !d.type.valid()) return fail(d, "incomplete judgment");
    if (t.dangling() != 0) return fail(d, "subject is not locally closed");
    const auto& P = d.premises;
    if (d.rule == "var") {
      if (t.kind() != Kind::Var) return fail(d, "var rule on a non-variable");
      if (!premise_count(d, 0)) return false;
      if (d.system == System::V) {
        if (!d.type.is_multi()) return fail(d, "V axiom must type the variable with a multitype");
        if (d.env != Env::single(t.name(), d.type.multi())) return fail(d, "axiom env must be x:M for type M");
        return true;
      }
      if (d.env != Env::single(t.name(), Multitype({d.type}))) return fail(d, "axiom env must be x:[type]");
      return true;
    }
    if ((d.system == System::N || d.system == System::V) && (d.rule == "bang" || d.rule == "der"))
      return fail(d, "rule not available in this system");
    if (d.rule == "abs") {
      if (t.kind() != Kind::Abs) return fail(d, "abs rule on a non-abstraction");
      if (d.binder.empty() || occurs_free(d.binder, t)) return fail(d, "binder name is not fresh");
      Term body = open(t.body(), d.binder);
      if (d.system == System::V) {
        if (!d.type.is_multi()) return fail(d, "V abs concludes a multitype of arrows");
        std::vector<Type> arrows;
        std::vector<Env> envs;
        for (const auto& p : P) {
          if (p->subject != body) return fail(d, "premise subject is not the body");
          arrows.push_back(Type::arrow(p->env.get(d.binder), p->type));
          envs.push_back(p->env.without(d.binder));
        }
        if (Multitype(arrows) != d.type.multi()) return fail(d, "conclusion multitype differs from premise arrows");
        if (env_sum(envs) != d.env) return fail(d, "env is not the sum of premise envs");
        return true;
      }
      if (!premise_count(d, 1)) return false;
      if (P[0]->subject != body) return fail(d, "premise subject is not the body");
      if (d.type != Type::arrow(P[0]->env.get(d.binder), P[0]->type)) return fail(d, "arrow type mismatch");
      if (d.env != P[0]->env.without(d.binder)) return fail(d, "env mismatch");
      return true;
    }
    if (d.rule == "app") {
      if (t.kind() != Kind::App) return fail(d, "app rule on a non-application");
      if (P.empty()) return fail(d, "app needs a function premise");
      if (P[0]->subject != t.fun()) return fail(d, "first premise must type the function");
      const Type& ft = P[0]->type;
      if (d.system == System::N) {
        if (!ft.is_arrow()) return fail(d, "function type is not an arrow");
        std::vector<Type> got;
        std::vector<Env> envs = {P[0]->env};
        for (std::size_t i = 1; i < P.size(); ++i) {
          if (P[i]->subject != t.arg()) return fail(d, "argument premise subject mismatch");
          got.push_back(P[i]->type);
          envs.push_back(P[i]->env);
        }
        if (Multitype(got) != ft.multi()) return fail(d, "argument family does not match the domain");
        if (d.type != ft.codomain()) return fail(d, "codomain mismatch");
        if (env_sum(envs) != d.env) return fail(d, "env is not the sum of premise envs");
        return true;
      }
      if (!premise_count(d, 2)) return false;
      if (P[1]->subject != t.arg()) return fail(d, "second premise must type the argument");
      Type arrow;
      if (d.system == System::V) {
        if (!ft.is_multi() || ft.multi().size() != 1 || !ft.multi().elems()[0].is_arrow())
          return fail(d, "V function type must be [M -> s]");
        arrow = ft.multi().elems()[0];
      } else {
        if (!ft.is_arrow()) return fail(d, "function type is not an arrow");
        arrow = ft;
      }
      if (P[1]->type != Type::multi(arrow.multi())) return fail(d, "argument type differs from the domain");
      if (d.type != arrow.codomain()) return fail(d, "codomain mismatch");
      if (d.env != P[0]->env + P[1]->env) return fail(d, "env is not the sum of premise envs");
      return true;
    }
    if (d.rule == "es") {
      if (t.kind() != Kind::Sub) return fail(d, "es rule on a non-closure");
      if (d.binder.empty() || occurs_free(d.binder, t)) return fail(d, "binder name is not fresh");
      if (P.empty()) return fail(d, "es needs a body premise");
      if (P[0]->subject != open(t.body(), d.binder)) return fail(d, "first premise must type the body");
      const Multitype& m = P[0]->env.get(d.binder);
      std::vector<Env> envs = {P[0]->env.without(d.binder)};
      if (d.system == System::N) {
        std::vector<Type> got;
        for (std::size_t i = 1; i < P.size(); ++i) {
          if (P[i]->subject != t.arg()) return fail(d, "argument premise subject mismatch");
          got.push_back(P[i]->type);
          envs.push_back(P[i]->env);
        }
        if (Multitype(got) != m) return fail(d, "argument family does not match the bound multitype");
      } else {
        if (!premise_count(d, 2)) return false;
        if (P[1]->subject != t.arg()) return fail(d, "second premise must type the argument");
        if (P[1]->type != Type::multi(m)) return fail(d, "argument type differs from the bound multitype");
        envs.push_back(P[1]->env);
      }
      if (d.type != P[0]->type) return fail(d, "type must be the body's type");
      if (env_sum(envs) != d.env) return fail(d, "env is not the sum of premise envs");
      return true;
    }
    if (d.rule == "bang") {
      if (t.kind() != Kind::Bang) return fail(d, "bang rule on a non-bang");
      if (!d.type.is_multi()) return fail(d, "bang concludes a multitype");
      std::vector<Type> got;
      std::vector<Env> envs;
      for (const auto& p : P) {
        if (p->subject != t.inner()) return fail(d, "premise subject mismatch");
        got.push_back(p->type);
        envs.push_back(p->env);
      }
      if (Multitype(got) != d.type.multi()) return fail(d, "one premise per multitype element required");
      if (env_sum(envs) != d.env) return fail(d, "env is not the sum of premise envs");
      return true;
    }
    if (d.rule == "der") {
      if (t.kind() != Kind::Der) return fail(d, "der rule on a non-dereliction");
      if (!premise_count(d, 1)) return false;
      if (P[0]->subject != t.inner()) return fail(d, "premise subject mismatch");
      const Type& pt = P[0]->type;
      if (!pt.is_multi() || pt.multi().size() != 1) return fail(d, "der premise must have a singleton multitype");
      if (pt.multi().elems()[0] != d.type) return fail(d, "der conclusion must be the element type");
      if (P[0]->env != d.env) return fail(d, "env mismatch");
      return true;
    }
    return fail(d, "unknown rule");
  }
};

}  // namespace

CheckReport check_derivation(const Derivation& d) {
  Checker c;
  c.check(d);
  return c.report;
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(*p);
  return n;
}

nlohmann::json type_to_json(const Type& t) { return print_type(t); }

nlohmann::json env_to_json(const Env& g) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [x, m] : g.entries()) j[x] = print_multitype(m);
  return j;
}

nlohmann::json derivation_to_json(const Derivation& d) {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : d.premises) ps.push_back(derivation_to_json(*p));
  nlohmann::json j = {{"system", system_name(d.system)},
                      {"rule", d.rule},
                      {"env", env_to_json(d.env)},
                      {"term", print_term(d.subject)},
                      {"type", print_type(d.type)},
                      {"premises", ps}};
  if (!d.binder.empty()) j["binder"] = d.binder;
  return j;
}

DerivPtr derivation_from_json(const nlohmann::json& j) {
  auto d = std::make_shared<Derivation>();
  d->system = parse_system(j.at("system").get<std::string>());
  d->rule = j.at("rule").get<std::string>();
  for (const auto& [x, m] : j.at("env").items()) d->env.add(x, parse_multitype(m.get<std::string>()));
  d->subject = parse_term(j.at("term").get<std::string>());
  d->type = parse_type(j.at("type").get<std::string>());
  if (j.contains("binder")) d->binder = j.at("binder").get<std::string>();
  for (const auto& p : j.at("premises")) d->premises.push_back(derivation_from_json(p));
  return d;
}

Type rename_tvars(const Type& t, const std::vector<std::pair<std::string, std::string>>& m) {
  switch (t.kind()) {
    case TKind::TVar:
      for (const auto& [from, to] : m)
        if (t.name() == from) return Type::tvar(to);
      return t;
    case TKind::Multi:
    case TKind::Arrow: {
      std::vector<Type> es;
      for (const Type& e : t.multi().elems()) es.push_back(rename_tvars(e, m));
      if (t.is_multi()) return Type::multi(Multitype(std::move(es)));
      return Type::arrow(Multitype(std::move(es)), rename_tvars(t.codomain(), m));
    }
  }
  return t;
}

Env rename_tvars(const Env& g, const std::vector<std::pair<std::string, std::string>>& m) {
  Env r;
  for (const auto& [x, mt] : g.entries()) r.add(x, rename_tvars(Type::multi(mt), m).multi());
  return r;
}

}  // namespace banglab
