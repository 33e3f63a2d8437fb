#pragma once

#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "banglab/term.hpp"

namespace banglab {

using Nat = boost::multiprecision::cpp_int;

// Finite multiset of naturals, stored descending with multiplicities.
class NatMultiset {
 public:
  using Counts = std::map<Nat, std::size_t, std::greater<Nat>>;

  NatMultiset() = default;
  NatMultiset(std::initializer_list<long> xs);

  void add(const Nat& n, std::size_t times = 1);
  NatMultiset& operator+=(const NatMultiset& o);
  // n·M multiplies every element by n.
  NatMultiset scaled(const Nat& n) const;

  const Counts& counts() const { return counts_; }
  std::size_t count(const Nat& n) const;
  std::size_t cardinality() const;
  bool empty() const { return counts_.empty(); }

  friend bool operator==(const NatMultiset& a, const NatMultiset& b) { return a.counts_ == b.counts_; }
  std::string str() const;

 private:
  Counts counts_;
};

Nat pot_mult(const std::string& x, const Term& t);
NatMultiset multi_size(const Term& t);

// Dershowitz–Manna strict order.
bool ms_gt(const NatMultiset& a, const NatMultiset& b);

}  // namespace banglab
