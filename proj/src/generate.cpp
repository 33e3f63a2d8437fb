#include "banglab/cbnv.hpp"
#include "banglab/syntax.hpp"

namespace banglab {

namespace {

const std::vector<std::string> kGenPool = {"x", "y", "z"};

Term gen_var(Rng& rng, std::uint32_t depth) {
  if (depth > 0 && rng.coin(2, 3)) return Term::bvar(static_cast<std::uint32_t>(rng.below(depth)));
  return Term::var(kGenPool[rng.below(kGenPool.size())]);
}

std::string hint_for(std::uint32_t depth, bool sub) {
  static const char* abs_names[] = {"x", "y", "z", "w"};
  static const char* sub_names[] = {"a", "b", "c", "d"};
  return sub ? sub_names[depth % 4] : abs_names[depth % 4];
}

Term gen_rec(Rng& rng, unsigned size, std::uint32_t depth, GenProfile p);

// An argument position: the Bang profile prefers banged arguments.
Term gen_arg(Rng& rng, unsigned size, std::uint32_t depth, GenProfile p) {
  if (p == GenProfile::Bang && size >= 2 && rng.coin(2, 3))
    return Term::bang(gen_rec(rng, size - 1, depth, p));
  return gen_rec(rng, size, depth, p);
}

Term gen_rec(Rng& rng, unsigned size, std::uint32_t depth, GenProfile p) {
  if (size <= 1) return gen_var(rng, depth);
  bool cterm = p == GenProfile::CTerm;
  enum { Abs, Bang, Der, App, Sub };
  std::vector<int> choices;
  if (size == 2) {
    choices = cterm ? std::vector<int>{Abs} : std::vector<int>{Abs, Bang, Der};
  } else if (cterm) {
    choices = {Abs, App, App, Sub};
  } else if (p == GenProfile::Bang) {
    choices = {Abs, Bang, Der, App, App, App, Sub, Sub};
  } else {
    choices = {Abs, Bang, Der, App, Sub};
  }
  switch (choices[rng.below(choices.size())]) {
    case Abs:
      return Term::raw_abs(hint_for(depth, false), gen_rec(rng, size - 1, depth + 1, p));
    case Bang:
      return Term::bang(gen_rec(rng, size - 1, depth, p));
    case Der:
      return Term::der(gen_arg(rng, size - 1, depth, p));
    case App: {
      unsigned a = 1 + static_cast<unsigned>(rng.below(size - 2));
      Term f = gen_rec(rng, a, depth, p);
      return Term::app(f, gen_arg(rng, size - 1 - a, depth, p));
    }
    default: {
      unsigned a = 1 + static_cast<unsigned>(rng.below(size - 2));
      Term b = gen_rec(rng, a, depth + 1, p);
      return Term::raw_sub(b, hint_for(depth, true), gen_arg(rng, size - 1 - a, depth, p));
    }
  }
}

struct Enumerator {
  const std::vector<std::string>& pool;
  bool cterm;
  const std::function<bool(const Term&)>& sink;
  bool stopped = false;

  // Calls k on every term of exactly `size` nodes at binder depth `depth`.
  void each(unsigned size, std::uint32_t depth, const std::function<void(const Term&)>& k) {
    if (stopped || size == 0) return;
    if (size == 1) {
      for (std::uint32_t i = 0; i < depth && !stopped; ++i) k(Term::bvar(i));
      for (const auto& x : pool) {
        if (stopped) return;
        k(Term::var(x));
      }
      return;
    }
    each(size - 1, depth + 1, [&](const Term& b) { k(Term::raw_abs(hint_for(depth, false), b)); });
    if (!cterm) {
      each(size - 1, depth, [&](const Term& b) { k(Term::bang(b)); });
      each(size - 1, depth, [&](const Term& b) { k(Term::der(b)); });
    }
    for (unsigned a = 1; a + 1 < size; ++a) {
      each(a, depth, [&](const Term& f) {
        each(size - 1 - a, depth, [&](const Term& u) { k(Term::app(f, u)); });
      });
    }
    for (unsigned a = 1; a + 1 < size; ++a) {
      each(a, depth + 1, [&](const Term& b) {
        each(size - 1 - a, depth, [&](const Term& u) { k(Term::raw_sub(b, hint_for(depth, true), u)); });
      });
    }
  }

  void run(unsigned bound) {
    for (unsigned s = 1; s <= bound && !stopped; ++s)
      each(s, 0, [&](const Term& t) {
        if (!stopped && !sink(t)) stopped = true;
      });
  }
};

}  // namespace

GenProfile parse_profile(const std::string& s) {
  if (s == "raw") return GenProfile::Raw;
  if (s == "bang") return GenProfile::Bang;
  if (s == "cbn-image") return GenProfile::CbnImage;
  if (s == "cbv-image") return GenProfile::CbvImage;
  if (s == "cterm") return GenProfile::CTerm;
  throw std::invalid_argument("unknown profile '" + s + "'");
}

Term gen_term(Rng& rng, unsigned size, GenProfile profile) {
  if (size == 0) throw std::invalid_argument("size must be at least 1");
  switch (profile) {
    case GenProfile::CbnImage:
      return embed(Calculus::CBN, gen_rec(rng, size, 0, GenProfile::CTerm));
    case GenProfile::CbvImage:
      return embed(Calculus::CBV, gen_rec(rng, size, 0, GenProfile::CTerm));
    default:
      return gen_rec(rng, size, 0, profile);
  }
}

Term gen_term(std::uint64_t seed, unsigned size, GenProfile profile) {
  Rng rng(seed);
  return gen_term(rng, size, profile);
}

void enum_terms(unsigned size_bound, const std::vector<std::string>& pool,
                const std::function<bool(const Term&)>& f) {
  Enumerator e{pool, false, f};
  e.run(size_bound);
}

std::vector<Term> enum_terms(unsigned size_bound, const std::vector<std::string>& pool) {
  std::vector<Term> out;
  enum_terms(size_bound, pool, [&](const Term& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

void enum_cterms(unsigned size_bound, const std::vector<std::string>& pool,
                 const std::function<bool(const Term&)>& f) {
  Enumerator e{pool, true, f};
  e.run(size_bound);
}

}  // namespace banglab
