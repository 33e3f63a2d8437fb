#include "banglab/measures.hpp"

#include <sstream>

namespace banglab {

NatMultiset::NatMultiset(std::initializer_list<long> xs) {
  for (long x : xs) add(Nat(x));
}

void NatMultiset::add(const Nat& n, std::size_t times) {
  if (times > 0) counts_[n] += times;
}

NatMultiset& NatMultiset::operator+=(const NatMultiset& o) {
  for (const auto& [v, c] : o.counts_) counts_[v] += c;
  return *this;
}

NatMultiset NatMultiset::scaled(const Nat& n) const {
  NatMultiset out;
  for (const auto& [v, c] : counts_) out.add(v * n, c);
  return out;
}

std::size_t NatMultiset::count(const Nat& n) const {
  auto it = counts_.find(n);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t NatMultiset::cardinality() const {
  std::size_t s = 0;
  for (const auto& kv : counts_) s += kv.second;
  return s;
}

std::string NatMultiset::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, c] : counts_)
    for (std::size_t i = 0; i < c; ++i) {
      if (!first) os << ',';
      os << v;
      first = false;
    }
  os << '}';
  return os.str();
}

namespace {

// Potential multiplicities of every free occurrence at once. Keys are free
// names, or "#j" for dangling index j.
using Mults = std::map<std::string, Nat>;

std::string idx_key(std::uint32_t j) { return "#" + std::to_string(j); }

Mults leave_binder(const Mults& m) {
  Mults out;
  for (const auto& [k, v] : m) {
    if (k[0] != '#') {
      out[k] += v;
      continue;
    }
    std::uint32_t j = static_cast<std::uint32_t>(std::stoul(k.substr(1)));
    if (j > 0) out[idx_key(j - 1)] += v;
  }
  return out;
}

Nat get(const Mults& m, const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? Nat(0) : it->second;
}

Mults all_mults(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
      return {{t.name(), Nat(1)}};
    case Kind::BVar:
      return {{idx_key(t.index()), Nat(1)}};
    case Kind::Hole:
      return {};
    case Kind::Abs:
      return leave_binder(all_mults(t.body()));
    case Kind::Bang:
    case Kind::Der:
      return all_mults(t.inner());
    case Kind::App: {
      Mults a = all_mults(t.fun());
      for (const auto& [k, v] : all_mults(t.arg())) a[k] += v;
      return a;
    }
    case Kind::Sub: {
      Mults inner = all_mults(t.body());
      Nat my = get(inner, idx_key(0));
      Nat factor = my > 1 ? my : Nat(1);
      Mults out = leave_binder(inner);
      for (const auto& [k, v] : all_mults(t.arg())) out[k] += factor * v;
      return out;
    }
  }
  return {};
}

}  // namespace

Nat pot_mult(const std::string& x, const Term& t) { return get(all_mults(t), x); }

NatMultiset multi_size(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::BVar:
    case Kind::Hole:
      return {};
    case Kind::Abs:
    case Kind::Bang:
    case Kind::Der:
      return multi_size(t.child(0));
    case Kind::App: {
      NatMultiset m = multi_size(t.fun());
      m += multi_size(t.arg());
      return m;
    }
    case Kind::Sub: {
      Nat mx = get(all_mults(t.body()), idx_key(0));
      NatMultiset m;
      m.add(mx);
      m += multi_size(t.body());
      m += multi_size(t.arg()).scaled(mx > 1 ? mx : Nat(1));
      return m;
    }
  }
  return {};
}

bool ms_gt(const NatMultiset& a, const NatMultiset& b) {
  if (a == b) return false;
  // Every element b has in excess must be dominated by some element a has in excess.
  for (const auto& [y, cb] : b.counts()) {
    if (cb <= a.count(y)) continue;
    bool dominated = false;
    for (const auto& [x, ca] : a.counts()) {
      if (x <= y) break;  // descending order
      if (ca > b.count(x)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) return false;
  }
  return true;
}

}  // namespace banglab
