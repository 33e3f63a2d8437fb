#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banglab/inhabitation.hpp"
#include "banglab/reduction.hpp"
#include "banglab/syntax.hpp"
#include "banglab/typing.hpp"

namespace banglab {

enum class Verdict { Meaningful, Meaningless, Unknown };
const char* verdict_name(Verdict v);

struct Budgets {
  std::uint64_t fuel = 100;
  Bounds bounds;
  InhBounds inh;
  unsigned ctx_depth = 3;  // testing-context search
  bool shape_check = false;
};

struct MeaningResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  Term normal_form;
  bool normalized = false;
  // Meaningful evidence.
  std::optional<Ctx> context;
  DerivPtr derivation;  // testable typing of the normal form
  Term replay;          // the observable the context reaches
  std::vector<TraceEntry> trace;  // surface reduction of the term itself
};

MeaningResult meaningful(const Term& t, const Budgets& b = {});

// A variable with a surface occurrence in head position and another in a
// position that must carry a multitype can only be fed by a witness that is
// both an abstraction and a bang. Returns the offending name.
std::optional<std::string> shape_conflict(const Term& nf);

struct Witnesses {
  std::vector<std::pair<std::string, Term>> env;  // in env order
  std::vector<Term> args;
};

// (λx1.(λx2.[]) w2) w1 followed by the argument witnesses. Throws
// std::invalid_argument when a witness is missing.
Ctx build_testing_context(const Derivation& d, const Witnesses& w);

// Plug and surface-normalize; the observable when one is reached.
std::optional<Term> replay_to_bang(const Ctx& c, const Term& t, std::uint64_t fuel);

struct EverywhereReport {
  bool all_testable = false;
  std::size_t yes = 0, no = 0, unknown = 0;
  std::vector<std::pair<std::vector<int>, Tri>> nodes;
};

EverywhereReport check_testable_everywhere(const Derivation& d, const InhBounds& b = {});

// Terms used as arguments when searching testing contexts.
std::vector<Term> canonical_argument_pool();

// Testing contexts with at most `depth` constructors, arguments from the
// pool and abstractions binding free variables of t; the first that sends t
// to a bang.
std::optional<Ctx> search_testing_context(const Term& t, unsigned depth, std::uint64_t fuel);

struct GenericityReport {
  bool precondition = false;  // t decided meaningless
  bool applies = false;       // F<t> decided meaningful
  std::size_t meaningful = 0, unknown = 0, meaningless = 0;
  bool typed_ok = false;      // same (Env, Type) transported to every F<u>
  std::size_t typed_transported = 0;
  std::string detail;
  bool ok() const { return !applies || (meaningless == 0 && unknown == 0 && typed_ok); }
};

GenericityReport genericity_check(const Ctx& f, const Term& t, const std::vector<Term>& samples, const Budgets& b);

// Derivation of the root term carried back along a surface trace.
std::optional<DerivPtr> expand_along(const DerivPtr& nf_derivation, const Term& t,
                                     const std::vector<TraceEntry>& trace);

// True when the leftmost-outermost surface reduction of t revisits a term
// within fuel steps. Surface reduction has the diamond property, so such a
// term has no surface normal form at all, hence no typing.
bool surface_cycle(const Term& t, std::uint64_t fuel);

struct Discrimination {
  bool separated = false;
  std::optional<Ctx> context;
  Verdict left = Verdict::Unknown, right = Verdict::Unknown;
  // Sides whose unknown verdict was settled by surface_cycle.
  bool left_cycles = false, right_cycles = false;
};

std::vector<Ctx> default_discriminating_contexts();
// Verdicts are compared once decided; an unknown verdict on a term whose
// surface reduction cycles counts as not meaningful.
Discrimination discriminate(const Term& t, const Term& u, const std::vector<Ctx>& ctxs, const Budgets& b);

}  // namespace banglab
