#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banglab/term.hpp"
#include "json.hpp"

namespace banglab {

enum class Rule : std::uint8_t { DB, SBang, DBang };
enum class Closure : std::uint8_t { Surface, Full };

// Bit masks selecting rules.
constexpr unsigned kRuleDB = 1u << 0;
constexpr unsigned kRuleSBang = 1u << 1;
constexpr unsigned kRuleDBang = 1u << 2;
constexpr unsigned kAllRules = kRuleDB | kRuleSBang | kRuleDBang;

const char* rule_name(Rule r);
Closure parse_closure(const std::string& s);

struct Redex {
  Path position;
  Rule rule;
  Term contractum;  // relative to the binders above `position`
  Term reduct;      // the whole term after contraction
};

// Leftmost-outermost order (pre-order, function/body before argument).
std::vector<Redex> redexes(const Term& t, Closure c, unsigned rules = kAllRules);
std::optional<Redex> first_redex(const Term& t, Closure c, unsigned rules = kAllRules);

// Contract the redex rooted at t itself, if any rule in `rules` applies.
std::optional<std::pair<Rule, Term>> contract_root(const Term& t, unsigned rules = kAllRules);

std::optional<Term> step(const Term& t, Closure c);
std::optional<Term> step_at(const Term& t, Closure c, std::size_t index);

struct TraceEntry {
  Rule rule;
  Path position;
  Term term;
};

struct ReduceOutcome {
  bool normalized = false;
  Term term;
  std::uint64_t steps = 0;
  bool size_capped = false;  // stopped because the term outgrew the size cap
  std::vector<TraceEntry> trace;
};

constexpr std::uint64_t kDefaultSizeCap = 200000;

ReduceOutcome normalize(const Term& t, Closure c, std::uint64_t fuel, bool record_trace = true,
                        unsigned rules = kAllRules, std::uint64_t size_cap = kDefaultSizeCap);

// Positions of the four clash shapes, restricted to surface positions when
// c is Surface.
std::vector<Path> static_clashes(const Term& t, Closure c);

enum class NfClass { NeS, NaS, NbS, NoS, NotNormal, ClashNF };
const char* nf_class_name(NfClass c);

// NoS, NotNormal or ClashNF.
NfClass classify(const Term& t);
// Grammar membership only: the finest of NeS, NaS, NbS, or ClashNF when the
// term is outside the grammar (regardless of redexes).
NfClass grammar_class(const Term& t);
bool in_no_grammar(const Term& t);

enum class Tri { Yes, No, Unknown };
const char* tri_name(Tri t);

struct ClashFreeResult {
  Tri verdict = Tri::Unknown;
  std::vector<TraceEntry> trace;
  std::optional<Path> clash;  // position of the clash in the last trace term
};

ClashFreeResult clash_free(const Term& t, Closure c, std::uint64_t fuel);

// Search for a common reduct within `fuel` steps on each side.
bool joinable(const Term& u1, const Term& u2, Closure c, std::uint64_t fuel,
              unsigned rules = kAllRules, std::size_t node_cap = 4000);

enum class Fragment { DBDer, SBang };
std::vector<Term> restricted_step(const Term& t, Fragment f);

nlohmann::json trace_to_json(const std::vector<TraceEntry>& trace);
nlohmann::json outcome_to_json(const ReduceOutcome& o);

}  // namespace banglab
