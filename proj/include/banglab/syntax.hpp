#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "banglab/term.hpp"
#include "json.hpp"

namespace banglab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Term parse_term(const std::string& src);
std::string print_term(const Term& t);

enum class CtxKind { List, Surface, Full, Testing };

// A one-hole context. Binders on the way to the hole capture by name when
// plugging, so their hints are meaningful.
class Ctx {
 public:
  Ctx() = default;
  Ctx(CtxKind kind, Term spine);
  CtxKind kind() const { return kind_; }
  const Term& spine() const { return spine_; }
  Path hole_path() const;

  static Ctx hole(CtxKind kind = CtxKind::Full) { return Ctx(kind, Term::hole()); }

 private:
  CtxKind kind_ = CtxKind::Full;
  Term spine_;
};

bool spine_fits(CtxKind kind, const Term& spine);
// The most specific kind the spine belongs to (List, then Testing, Surface, Full).
CtxKind tightest_kind(const Term& spine);

Ctx parse_ctx(const std::string& src, CtxKind kind = CtxKind::Full);
std::string print_ctx(const Ctx& c);

Term plug(const Ctx& c, const Term& t);
Term plug_spine(const Term& spine, const Term& t);

// t = L<!s>: returns the list context and s, with L's binders opened by name.
std::optional<std::pair<Ctx, Term>> match_list_bang(const Term& t);

nlohmann::json term_to_json(const Term& t);
Term term_from_json(const nlohmann::json& j);
const char* ctx_kind_name(CtxKind k);

// Draws use raw engine output (not std distributions) so sequences are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  bool coin(unsigned num = 1, unsigned den = 2) { return below(den) < num; }

 private:
  std::mt19937_64 eng_;
};

enum class GenProfile { Raw, Bang, CbnImage, CbvImage, CTerm };

GenProfile parse_profile(const std::string& s);
Term gen_term(std::uint64_t seed, unsigned size, GenProfile profile);
Term gen_term(Rng& rng, unsigned size, GenProfile profile);

// Calls f on every term of size <= bound over free names `pool`, each alpha
// class exactly once, smaller sizes first. Returning false stops the stream.
void enum_terms(unsigned size_bound, const std::vector<std::string>& pool,
                const std::function<bool(const Term&)>& f);
std::vector<Term> enum_terms(unsigned size_bound, const std::vector<std::string>& pool);
// Same, restricted to the bang-free, der-free fragment.
void enum_cterms(unsigned size_bound, const std::vector<std::string>& pool,
                 const std::function<bool(const Term&)>& f);

}  // namespace banglab
