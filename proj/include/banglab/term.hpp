#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace banglab {

// Locally nameless terms: bound occurrences are de Bruijn indices, free
// occurrences are names. Abs and Sub bind in their first child; binder names
// are kept only as printing hints, so structural equality is alpha-equality.
enum class Kind : std::uint8_t { Var, BVar, Abs, App, Sub, Bang, Der, Hole };

using Path = std::vector<int>;

class Term;
struct Node;

class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term abs(std::string_view x, const Term& body);
  static Term app(Term fun, Term arg);
  static Term sub(const Term& body, std::string_view x, Term arg);
  static Term bang(Term inner);
  static Term der(Term inner);
  static Term hole();

  // Raw constructors over already-closed bodies.
  static Term bvar(std::uint32_t index);
  static Term raw_abs(std::string hint, Term body);
  static Term raw_sub(Term body, std::string hint, Term arg);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& name() const;  // Var name, or binder hint for Abs/Sub
  std::uint32_t index() const;
  const Term& child(int i) const;
  int arity() const;

  // Convenience views.
  const Term& body() const { return child(0); }
  const Term& fun() const { return child(0); }
  const Term& arg() const { return child(1); }
  const Term& inner() const { return child(0); }

  std::uint64_t size() const;
  // 1 + the largest dangling de Bruijn index, 0 when locally closed.
  std::uint32_t dangling() const;
  bool has_hole() const;
  std::size_t hash() const;

  bool is_binder() const { return kind() == Kind::Abs || kind() == Kind::Sub; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Total structural order, ignoring binder hints.
  friend bool operator<(const Term& a, const Term& b);

  const Node* raw() const { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);
  std::shared_ptr<const Node> node_;
  friend struct TermBuilder;
};

struct Node {
  Kind kind = Kind::Var;
  std::uint32_t index = 0;
  std::string name;
  Term kids[2];
  std::uint64_t size = 1;
  std::uint32_t dangling = 0;
  bool has_hole = false;
  std::size_t hash = 0;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

bool alpha_eq(const Term& a, const Term& b);
std::set<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& x, const Term& t);

// Rebuild a node with new children, keeping kind and hint.
Term with_children(const Term& t, const Term& c0, const Term& c1 = Term());

// Index operations.
Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);
// Replace index `depth` (at the top, 0) by the free name x.
Term open(const Term& body, const std::string& x);
// Abstract the free name x into index `level`.
Term close(const Term& t, const std::string& x, std::uint32_t level = 0);
// body is under one binder; replace index 0 by u and drop the binder.
Term instantiate(const Term& body, const Term& u);

// Capture-avoiding meta-level substitution t{x:=u}.
Term msubst(const Term& t, const std::string& x, const Term& u);

// Path access.
const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);
// Number of binders crossed on the way to p.
std::uint32_t binders_above(const Term& t, const Path& p);
bool under_bang(const Term& t, const Path& p);

// Deterministic fresh-name supply: hint, then base1, base2, ...
std::string fresh_name(const std::string& hint, const std::function<bool(const std::string&)>& taken);

// Peel a maximal list context of closures: t = L<core>, returns core and |L|.
std::pair<Term, std::uint32_t> peel_list(const Term& t);
// Rebuild the closures of `shape` (a list context around something) around core.
Term rewrap_list(const Term& shape, std::uint32_t depth, const Term& core);

bool is_value(const Term& t);
bool is_bang_free(const Term& t);

// Named terms used throughout.
Term identity_term();
Term delta_term();
Term omega_term();

}  // namespace banglab
