#pragma once

#include <map>
#include <string>
#include <vector>

#include "banglab/reduction.hpp"
#include "banglab/types.hpp"

namespace banglab {

struct InhBounds {
  unsigned max_size = 9;  // witness size explored by iterative deepening
  std::size_t node_budget = 200000;
};

enum class InhStatus { Inhabited, NotInhabited, Unknown };
const char* inh_status_name(InhStatus s);

struct InhResult {
  InhStatus status = InhStatus::Unknown;
  Term witness;
  // One closed derivation per goal type sharing the witness: a single one
  // unless an N multitype asked for several.
  std::vector<DerivPtr> derivations;
  std::string reason;
};

// In N a multitype goal means one witness for every element; in B and V the
// multitype is an ordinary judgment type.
InhResult inhabit(System s, const Type& goal, const InhBounds& b = {});
// The witness a variable bound to m must be replaced by.
InhResult inhabit_multi(System s, const Multitype& m, const InhBounds& b = {});
std::map<std::string, InhResult> inhabit_env(System s, const Env& g, const InhBounds& b = {});

struct TestableResult {
  Tri verdict = Tri::Unknown;
  std::map<std::string, Term> env_witnesses;
  std::vector<Term> arg_witnesses;  // aligned with args(s, type)
  std::string reason;
};

TestableResult testable(System s, const Typing& typing, const InhBounds& b = {});

void clear_inhabitation_cache();

}  // namespace banglab
