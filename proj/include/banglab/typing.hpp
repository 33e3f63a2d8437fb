#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "banglab/reduction.hpp"
#include "banglab/types.hpp"

namespace banglab {

// Node constructors computing env and type from the premises by the rule.
DerivPtr derive_var(System s, const std::string& x, const Type& t);
DerivPtr derive(System s, const std::string& rule, const Term& subject, const std::string& binder,
                std::vector<DerivPtr> premises);

// Rename the free variable `from` to `to` in every subject and env of d.
DerivPtr rename_free(const DerivPtr& d, const std::string& from, const std::string& to);
// Give every abs/es binder a distinct name outside `taken`.
DerivPtr freshen_binders(const DerivPtr& d, std::set<std::string> taken);

// Every judgment type within the bounds, in canonical order.
std::vector<Type> type_universe(const Bounds& b);

struct EnumLimits {
  std::size_t max_entries = 60000;  // per subterm
};

struct Enumeration {
  std::vector<DerivPtr> derivations;  // one witness per typing, canonical up to tvar renaming
  bool truncated = false;
};

Enumeration typings_enumerate(System s, const Term& t, const Bounds& b, const EnumLimits& lim = {});
std::set<Typing> typing_set(const Enumeration& e);
// The least renaming of the pool variables.
Typing canonical_typing(const Typing& t, unsigned pool);

struct TypableResult {
  Tri verdict = Tri::Unknown;
  Term normal_form;
  std::uint64_t steps = 0;
};

TypableResult typable(const Term& t, std::uint64_t fuel);

// Derivation of the reduct (resp. the redex side) for the step of t at `pos`.
// d must type t (resp. the reduct). B derivations only.
std::optional<DerivPtr> subject_reduce(const DerivPtr& d, const Term& t, const Path& pos);
std::optional<DerivPtr> subject_expand(const DerivPtr& d, const Term& t, const Path& pos);

// Rebuild d for `target`, which differs from d's subject only at `hole`.
// Fails when the hole position is typed somewhere in d.
std::optional<DerivPtr> replace_untyped(const DerivPtr& d, const Term& target, const Path& hole);

struct TransportReport {
  bool ok = false;
  bool is_step = false;          // u is a one-step full reduct of t
  std::size_t forward = 0;       // typings of t carried to u
  std::size_t backward = 0;      // typings of u carried back to t
  std::size_t failures = 0;
  bool bounded_sets_equal = false;  // informative only
  bool truncated = false;
  std::string detail;
};

TransportReport typing_transport_check(const Term& t, const Term& u, const Bounds& b);

enum class NfShape { MustBang, MustAbs, Violation };
struct NfShapeResult {
  NfShape shape = NfShape::Violation;
  std::string message;
};
const char* nf_shape_name(NfShape s);

// With no evidence, a closed derivation is searched within the bounds.
NfShapeResult nf_shape(const Type& sigma, const Term& t, const DerivPtr& evidence = nullptr,
                       const Bounds& b = {});

}  // namespace banglab
