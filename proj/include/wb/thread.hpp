#ifndef WB_THREAD_HPP
#define WB_THREAD_HPP

#include <set>
#include <span>
#include <string>
#include <vector>

#include "wb/domain.hpp"

namespace wb {

// Eventually-constant sequence over A: an explicit prefix followed by a
// constant tail.  Canonical form: the prefix never ends with the tail value,
// so equality of representations is equality of sequences.
class EvThread {
public:
  EvThread(FiniteDomain domain, Tuple prefix, Val tail);
  static EvThread constant(FiniteDomain domain, Val a) { return EvThread(domain, {}, a); }

  Val at(size_t i) const { return i < prefix_.size() ? prefix_[i] : tail_; }
  Val tail() const { return tail_; }
  const Tuple& prefix() const { return prefix_; }
  const FiniteDomain& domain() const { return domain_; }

  // First n coordinates.
  Tuple take(size_t n) const;
  // Coordinate i replaced by v (prefix extended when i lies in the tail).
  EvThread with_at(size_t i, Val v) const;
  // s[a_0, ..., a_{k-1}]: the first k coordinates replaced by a.
  EvThread substitute(std::span<const Val> a) const;
  // Set of values taken anywhere in the sequence: set(prefix) plus the tail.
  std::set<Val> value_set() const;

  std::string to_string() const;

  bool operator==(const EvThread& o) const {
    return domain_ == o.domain_ && tail_ == o.tail_ && prefix_ == o.prefix_;
  }
  // Deterministic order: (prefix length, prefix, tail).
  bool operator<(const EvThread& o) const {
    if (prefix_.size() != o.prefix_.size()) return prefix_.size() < o.prefix_.size();
    if (prefix_ != o.prefix_) return prefix_ < o.prefix_;
    return tail_ < o.tail_;
  }

private:
  FiniteDomain domain_;
  Tuple prefix_;
  Val tail_;
};

// Finite-difference equivalence: two eventually-constant threads differ in
// finitely many coordinates exactly when their tails agree.
inline bool eq_omega(const EvThread& a, const EvThread& b) {
  return a.tail() == b.tail();
}

// Restriction of s to an index set, as (index, value) pairs in index order.
std::vector<std::pair<size_t, Val>> restrict_to(const EvThread& s,
                                                const std::vector<size_t>& indices);

// Compact trace: the union of the finite-difference classes of the listed
// tail values.
struct TraceDescriptor {
  std::set<Val> tails;
};

inline bool in_trace(const EvThread& s, const TraceDescriptor& t) {
  return t.tails.count(s.tail()) > 0;
}

// All canonical threads with prefix length <= max_prefix, in (prefix length,
// prefix, tail) order.
std::vector<EvThread> enumerate_threads(FiniteDomain domain, int max_prefix);

}  // namespace wb

#endif
