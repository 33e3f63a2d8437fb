#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banglab/cbnv.hpp"
#include "json.hpp"

namespace banglab {

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 1;
  // Sampled suites draw this many cases. Exhaustive suites enumerate when
  // unset and sample when set.
  std::optional<std::size_t> count;
  std::optional<unsigned> size;  // suite default when unset
  unsigned names = 2;            // free names available to enumeration
  std::uint64_t fuel = 100;
  Bounds bounds;
};

struct Report {
  std::string suite;
  std::string statement;  // what is being tested, in plain words
  std::string regime;     // enumeration or sampling parameters
  std::size_t pass = 0, fail = 0, unknown = 0;
  nlohmann::json cases = nlohmann::json::array();  // non-passing cases, plus curated ones
  nlohmann::json info = nlohmann::json::object();
  bool ok() const { return fail == 0; }
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite.
Report run_suite(const SuiteConfig& cfg);

// The curated corpus behind the `corpus` suite and subcommand.
struct CorpusEntry {
  std::string name;
  std::string kind;  // reduction, c-reduction, embedding, derivation, inhabitation, meaning, c-meaning
  nlohmann::json data;
};
const std::vector<CorpusEntry>& corpus();
// Returns an empty string on success, otherwise what went wrong.
std::string check_corpus_entry(const CorpusEntry& e);

// Terms used by the meaningfulness-transfer check.
std::vector<Term> transfer_corpus();

// Typability by bounded enumeration, trying small bounds first.
Tri typable_by_enumeration(const Term& t, const Bounds& largest);

}  // namespace banglab
