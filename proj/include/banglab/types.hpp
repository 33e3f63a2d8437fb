#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "banglab/term.hpp"
#include "json.hpp"

namespace banglab {

enum class System { B, N, V };
const char* system_name(System s);
System parse_system(const std::string& s);

class Type;
struct TypeNode;

// Finite multiset of types, elements kept in canonical order.
class Multitype {
 public:
  Multitype() = default;
  explicit Multitype(std::vector<Type> elems);

  const std::vector<Type>& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  Multitype operator+(const Multitype& o) const;
  // Remove one occurrence of t; false if absent.
  bool remove_one(const Type& t);
  std::size_t count(const Type& t) const;

  friend bool operator==(const Multitype& a, const Multitype& b);
  friend bool operator!=(const Multitype& a, const Multitype& b) { return !(a == b); }
  friend bool operator<(const Multitype& a, const Multitype& b);

 private:
  std::vector<Type> elems_;
};

enum class TKind { TVar, Multi, Arrow };

class Type {
 public:
  Type() = default;
  static Type tvar(std::string name);
  static Type multi(Multitype m);
  static Type arrow(Multitype dom, Type cod);

  bool valid() const { return node_ != nullptr; }
  TKind kind() const;
  const std::string& name() const;
  // Elements for Multi, the domain for Arrow.
  const Multitype& multi() const;
  const Type& codomain() const;
  unsigned depth() const;
  std::size_t max_card() const;
  std::size_t hash() const;

  bool is_multi() const { return kind() == TKind::Multi; }
  bool is_arrow() const { return kind() == TKind::Arrow; }

  friend int compare(const Type& a, const Type& b);
  friend bool operator==(const Type& a, const Type& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Type& a, const Type& b) { return compare(a, b) != 0; }
  friend bool operator<(const Type& a, const Type& b) { return compare(a, b) < 0; }

  const TypeNode* raw() const { return node_.get(); }

 private:
  std::shared_ptr<const TypeNode> node_;
};

struct TypeNode {
  TKind kind;
  std::string name;
  Multitype m;
  Type cod;
  unsigned depth;
  std::size_t max_card;
  std::size_t hash;
};

int compare(const Multitype& a, const Multitype& b);

struct Bounds {
  unsigned card = 2;
  unsigned pool = 2;
  unsigned depth = 3;
};

std::string tvar_name(unsigned i);
bool within_bounds(const Type& t, const Bounds& b);
bool within_bounds(const Multitype& m, const Bounds& b);

std::string print_type(const Type& t);
std::string print_multitype(const Multitype& m);
Type parse_type(const std::string& src);
Multitype parse_multitype(const std::string& src);

// Finite map from names to non-empty multitypes.
class Env {
 public:
  using Entry = std::pair<std::string, Multitype>;
  Env() = default;
  static Env single(const std::string& x, const Multitype& m);

  const Multitype& get(const std::string& x) const;
  void add(const std::string& x, const Multitype& m);
  Env without(const std::string& x) const;
  bool contains(const std::string& x) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend Env operator+(const Env& a, const Env& b);
  friend bool operator==(const Env& a, const Env& b);
  friend bool operator!=(const Env& a, const Env& b) { return !(a == b); }
  friend bool operator<(const Env& a, const Env& b);

 private:
  std::vector<Entry> entries_;
};

Env env_sum(const std::vector<Env>& gs);
std::string print_env(const Env& g);
Env parse_env(const std::string& src);  // "x:[a], y:[]"

using Typing = std::pair<Env, Type>;
std::string print_typing(const Typing& t);

bool is_observable(System s, const Type& t);
std::vector<Multitype> args(System s, const Type& t);

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  System system = System::B;
  std::string rule;  // var, abs, app, es, bang, der
  Env env;
  Term subject;
  Type type;
  std::string binder;  // abs and es: the name the premise body is opened with
  std::vector<DerivPtr> premises;

  Typing typing() const { return {env, type}; }
};

struct CheckReport {
  bool ok = true;
  std::vector<int> node;  // premise indices from the root
  std::string rule;
  std::string message;
};

CheckReport check_derivation(const Derivation& d);
std::size_t derivation_size(const Derivation& d);

nlohmann::json type_to_json(const Type& t);
nlohmann::json env_to_json(const Env& g);
nlohmann::json derivation_to_json(const Derivation& d);
DerivPtr derivation_from_json(const nlohmann::json& j);

// Rename type variables throughout.
Type rename_tvars(const Type& t, const std::vector<std::pair<std::string, std::string>>& m);
Env rename_tvars(const Env& g, const std::vector<std::pair<std::string, std::string>>& m);

}  // namespace banglab
