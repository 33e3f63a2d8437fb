#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banglab/meaning.hpp"

namespace banglab {

enum class Calculus { CBN, CBV };
const char* calculus_name(Calculus c);
Calculus parse_calculus(const std::string& s);

// Bang-free, der-free terms.
bool is_cterm(const Term& t);

enum class CRule { DB, SN, SV };
const char* crule_name(CRule r);

struct CRedex {
  Path position;
  CRule rule;
  Term reduct;
};

std::vector<CRedex> c_redexes(Calculus c, const Term& t);
std::optional<Term> c_step(Calculus c, const Term& t);

struct CTraceEntry {
  CRule rule;
  Path position;
  Term term;
};

struct COutcome {
  bool normalized = false;
  Term term;
  std::uint64_t steps = 0;
  std::vector<CTraceEntry> trace;
};

COutcome c_normalize(Calculus c, const Term& t, std::uint64_t fuel, std::uint64_t size_cap = kDefaultSizeCap);

Term embed(Calculus c, const Term& t);
// Holes map to holes.
Ctx embed_ctx(Calculus c, const Ctx& f);

// Closures on the left of an application floated outwards:
// L<t> u becomes L<t u>. Used to compare terms up to closure placement.
Term float_closures(const Term& t);

struct SimStep {
  Term source, target;      // embeddings of the two ends of a source step
  bool exact = false;       // target reached
  bool modulo = false;      // reached only up to closure placement
  bool exhausted = false;   // search space finished without success
  std::vector<Term> chain;  // lambda-bang terms from source to target
};

struct SimReport {
  std::vector<SimStep> steps;
  std::size_t exact = 0, modulo = 0, failed = 0, unknown = 0;
  bool ok() const { return failed == 0; }
};

SimReport simulate_check(Calculus c, const Term& t, std::uint64_t fuel, unsigned window = 8,
                         std::size_t node_cap = 3000);

struct CMeaning {
  Verdict verdict = Verdict::Unknown;
  Term normal_form;
  std::uint64_t steps = 0;
  std::optional<Ctx> context;  // witness testing context, when synthesized
  Term reached;                // what the context reaches
  std::string reason;
};

CMeaning c_meaningful(Calculus c, const Term& t, std::uint64_t fuel, bool want_context = true);

struct TransferReport {
  CMeaning source;
  MeaningResult target;
  bool disagreement = false;  // both decided and different
};

TransferReport transfer_check(Calculus c, const Term& t, const Budgets& b);

// Derivation translations witnessing typability transfer.
std::optional<DerivPtr> to_bang_derivation(Calculus c, const DerivPtr& d, const Term& t);
std::optional<DerivPtr> from_bang_derivation(Calculus c, const DerivPtr& d, const Term& t);

struct TypingTransfer {
  bool ok = false;
  std::size_t source = 0, target = 0;  // typings enumerated on each side
  std::size_t carried = 0, failures = 0;
  bool sets_equal = false;  // informative
  bool truncated = false;
  std::string detail;
};

TypingTransfer typing_transfer_check(Calculus c, const Term& t, const Bounds& b);

}  // namespace banglab
