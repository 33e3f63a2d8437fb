#include "banglab/term.hpp"

#include <cctype>
#include <stdexcept>

namespace banglab {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

int arity_of(Kind k) {
  switch (k) {
    case Kind::Var:
    case Kind::BVar:
    case Kind::Hole:
      return 0;
    case Kind::Abs:
    case Kind::Bang:
    case Kind::Der:
      return 1;
    case Kind::App:
    case Kind::Sub:
      return 2;
  }
  return 0;
}

// Children of binders live one level deeper; Sub binds only in child 0.
bool binds(Kind k, int child) {
  return (k == Kind::Abs || k == Kind::Sub) && child == 0;
}

}  // namespace

Term Term::make(Node n) {
  int a = arity_of(n.kind);
  std::uint64_t size = 1;
  std::uint32_t dang = 0;
  bool hole = n.kind == Kind::Hole;
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911ULL;
  if (n.kind == Kind::BVar) {
    dang = n.index + 1;
    h = mix(h, n.index);
  } else if (n.kind == Kind::Var) {
    h = mix(h, std::hash<std::string>{}(n.name));
  }
  for (int i = 0; i < a; ++i) {
    const Node* c = n.kids[i].raw();
    if (c == nullptr) throw std::logic_error("term node with missing child");
    size = size + c->size < size ? UINT64_MAX : size + c->size;
    std::uint32_t d = c->dangling;
    if (binds(n.kind, i)) d = d > 0 ? d - 1 : 0;
    dang = std::max(dang, d);
    hole = hole || c->has_hole;
    h = mix(h, c->hash);
  }
  n.size = size;
  n.dangling = dang;
  n.has_hole = hole;
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::var(std::string name) {
  Node n;
  n.kind = Kind::Var;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::bvar(std::uint32_t index) {
  Node n;
  n.kind = Kind::BVar;
  n.index = index;
  return make(std::move(n));
}

Term Term::hole() {
  Node n;
  n.kind = Kind::Hole;
  return make(std::move(n));
}

Term Term::raw_abs(std::string hint, Term body) {
  Node n;
  n.kind = Kind::Abs;
  n.name = std::move(hint);
  n.kids[0] = std::move(body);
  return make(std::move(n));
}

Term Term::raw_sub(Term body, std::string hint, Term arg) {
  Node n;
  n.kind = Kind::Sub;
  n.name = std::move(hint);
  n.kids[0] = std::move(body);
  n.kids[1] = std::move(arg);
  return make(std::move(n));
}

Term Term::abs(std::string_view x, const Term& body) {
  return raw_abs(std::string(x), close(body, std::string(x)));
}

Term Term::sub(const Term& body, std::string_view x, Term arg) {
  return raw_sub(close(body, std::string(x)), std::string(x), std::move(arg));
}

Term Term::app(Term fun, Term arg) {
  Node n;
  n.kind = Kind::App;
  n.kids[0] = std::move(fun);
  n.kids[1] = std::move(arg);
  return make(std::move(n));
}

Term Term::bang(Term inner) {
  Node n;
  n.kind = Kind::Bang;
  n.kids[0] = std::move(inner);
  return make(std::move(n));
}

Term Term::der(Term inner) {
  Node n;
  n.kind = Kind::Der;
  n.kids[0] = std::move(inner);
  return make(std::move(n));
}

Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
std::uint32_t Term::index() const { return node_->index; }
const Term& Term::child(int i) const { return node_->kids[i]; }
int Term::arity() const { return arity_of(node_->kind); }
std::uint64_t Term::size() const { return node_->size; }
std::uint32_t Term::dangling() const { return node_->dangling; }
bool Term::has_hole() const { return node_->has_hole; }
std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  const Node* x = a.raw();
  const Node* y = b.raw();
  if (x == y) return true;
  if (x == nullptr || y == nullptr) return false;
  if (x->hash != y->hash || x->kind != y->kind || x->size != y->size) return false;
  switch (x->kind) {
    case Kind::Var:
      return x->name == y->name;
    case Kind::BVar:
      return x->index == y->index;
    case Kind::Hole:
      return true;
    default:
      break;
  }
  int n = arity_of(x->kind);
  for (int i = 0; i < n; ++i)
    if (!(x->kids[i] == y->kids[i])) return false;
  return true;
}

bool operator<(const Term& a, const Term& b) {
  const Node* x = a.raw();
  const Node* y = b.raw();
  if (x == y) return false;
  if (x == nullptr || y == nullptr) return x == nullptr;
  if (x->kind != y->kind) return x->kind < y->kind;
  switch (x->kind) {
    case Kind::Var:
      return x->name < y->name;
    case Kind::BVar:
      return x->index < y->index;
    case Kind::Hole:
      return false;
    default:
      break;
  }
  int n = arity_of(x->kind);
  for (int i = 0; i < n; ++i) {
    if (x->kids[i] < y->kids[i]) return true;
    if (y->kids[i] < x->kids[i]) return false;
  }
  return false;
}

bool alpha_eq(const Term& a, const Term& b) { return a == b; }

namespace {

void collect_fv(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Kind::Var:
      out.insert(t.name());
      return;
    case Kind::BVar:
    case Kind::Hole:
      return;
    default:
      for (int i = 0; i < t.arity(); ++i) collect_fv(t.child(i), out);
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_fv(t, out);
  return out;
}

bool occurs_free(const std::string& x, const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
      return t.name() == x;
    case Kind::BVar:
    case Kind::Hole:
      return false;
    default:
      for (int i = 0; i < t.arity(); ++i)
        if (occurs_free(x, t.child(i))) return true;
      return false;
  }
}

Term with_children(const Term& t, const Term& c0, const Term& c1) {
  switch (t.kind()) {
    case Kind::Abs:
      if (c0.raw() == t.child(0).raw()) return t;
      return Term::raw_abs(t.name(), c0);
    case Kind::Sub:
      if (c0.raw() == t.child(0).raw() && c1.raw() == t.child(1).raw()) return t;
      return Term::raw_sub(c0, t.name(), c1);
    case Kind::App:
      if (c0.raw() == t.child(0).raw() && c1.raw() == t.child(1).raw()) return t;
      return Term::app(c0, c1);
    case Kind::Bang:
      if (c0.raw() == t.child(0).raw()) return t;
      return Term::bang(c0);
    case Kind::Der:
      if (c0.raw() == t.child(0).raw()) return t;
      return Term::der(c0);
    default:
      return t;
  }
}

namespace {

// Generic bottom-up rewrite tracking binder depth.
template <class Leaf>
Term map_depth(const Term& t, std::uint32_t depth, const Leaf& leaf) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::BVar:
    case Kind::Hole:
      return leaf(t, depth);
    default:
      break;
  }
  Term c0 = map_depth(t.child(0), depth + (binds(t.kind(), 0) ? 1 : 0), leaf);
  Term c1;
  if (t.arity() == 2) c1 = map_depth(t.child(1), depth, leaf);
  return with_children(t, c0, c1);
}

}  // namespace

Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0 || t.dangling() <= cutoff) return t;
  std::function<Term(const Term&, std::uint32_t)> go = [&](const Term& s, std::uint32_t d) -> Term {
    if (s.dangling() <= cutoff + d) return s;
    switch (s.kind()) {
      case Kind::BVar:
        return s.index() >= cutoff + d ? Term::bvar(s.index() + by) : s;
      case Kind::Var:
      case Kind::Hole:
        return s;
      default:
        break;
    }
    Term c0 = go(s.child(0), d + (binds(s.kind(), 0) ? 1 : 0));
    Term c1;
    if (s.arity() == 2) c1 = go(s.child(1), d);
    return with_children(s, c0, c1);
  };
  return go(t, 0);
}

Term open(const Term& body, const std::string& x) {
  return instantiate(body, Term::var(x));
}

Term instantiate(const Term& body, const Term& u) {
  if (body.dangling() == 0) return body;
  std::function<Term(const Term&, std::uint32_t)> go = [&](const Term& s, std::uint32_t d) -> Term {
    if (s.dangling() <= d) return s;
    switch (s.kind()) {
      case Kind::BVar:
        if (s.index() == d) return shift(u, d);
        if (s.index() > d) return Term::bvar(s.index() - 1);
        return s;
      case Kind::Var:
      case Kind::Hole:
        return s;
      default:
        break;
    }
    Term c0 = go(s.child(0), d + (binds(s.kind(), 0) ? 1 : 0));
    Term c1;
    if (s.arity() == 2) c1 = go(s.child(1), d);
    return with_children(s, c0, c1);
  };
  return go(body, 0);
}

Term close(const Term& t, const std::string& x, std::uint32_t level) {
  return map_depth(
      t, 0,
      [&](const Term& s, std::uint32_t d) -> Term {
        if (s.kind() == Kind::Var && s.name() == x) return Term::bvar(level + d);
        if (s.kind() == Kind::BVar && s.index() >= d + level) return Term::bvar(s.index() + 1);
        return s;
      });
}

Term msubst(const Term& t, const std::string& x, const Term& u) {
  return map_depth(
      t, 0,
      [&](const Term& s, std::uint32_t d) -> Term {
        if (s.kind() == Kind::Var && s.name() == x) return shift(u, d);
        return s;
      });
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (int i : p) {
    if (i < 0 || i >= cur->arity()) throw std::out_of_range("position outside term");
    cur = &cur->child(i);
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const Path& p, std::size_t at, const Term& r) {
  if (at == p.size()) return r;
  int i = p[at];
  if (i < 0 || i >= t.arity()) throw std::out_of_range("position outside term");
  Term c0 = t.child(0);
  Term c1 = t.arity() == 2 ? t.child(1) : Term();
  if (i == 0)
    c0 = replace_rec(c0, p, at + 1, r);
  else
    c1 = replace_rec(c1, p, at + 1, r);
  return with_children(t, c0, c1);
}

}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) {
  return replace_rec(t, p, 0, replacement);
}

std::uint32_t binders_above(const Term& t, const Path& p) {
  std::uint32_t n = 0;
  const Term* cur = &t;
  for (int i : p) {
    if (binds(cur->kind(), i)) ++n;
    cur = &cur->child(i);
  }
  return n;
}

bool under_bang(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (int i : p) {
    if (cur->kind() == Kind::Bang) return true;
    cur = &cur->child(i);
  }
  return false;
}

std::string fresh_name(const std::string& hint, const std::function<bool(const std::string&)>& taken) {
  std::string base = hint;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "x";
  std::string first = hint.empty() ? base : hint;
  if (!taken(first)) return first;
  for (unsigned k = 1;; ++k) {
    std::string c = base + std::to_string(k);
    if (!taken(c)) return c;
  }
}

std::pair<Term, std::uint32_t> peel_list(const Term& t) {
  const Term* cur = &t;
  std::uint32_t k = 0;
  while (cur->kind() == Kind::Sub) {
    cur = &cur->body();
    ++k;
  }
  return {*cur, k};
}

Term rewrap_list(const Term& shape, std::uint32_t depth, const Term& core) {
  if (depth == 0) return core;
  return Term::raw_sub(rewrap_list(shape.body(), depth - 1, core), shape.name(), shape.arg());
}

bool is_value(const Term& t) {
  return t.kind() == Kind::Var || t.kind() == Kind::BVar || t.kind() == Kind::Abs;
}

bool is_bang_free(const Term& t) {
  if (t.kind() == Kind::Bang || t.kind() == Kind::Der) return false;
  for (int i = 0; i < t.arity(); ++i)
    if (!is_bang_free(t.child(i))) return false;
  return true;
}

Term identity_term() { return Term::abs("z", Term::var("z")); }

Term delta_term() {
  Term x = Term::var("x");
  return Term::abs("x", Term::app(x, Term::bang(x)));
}

Term omega_term() { return Term::app(delta_term(), Term::bang(delta_term())); }

}  // namespace banglab
