#pragma once

#include <string>
#include <vector>

#include "wb/domain.hpp"
#include "wb/finrel.hpp"
#include "wb/thread.hpp"

namespace wb {

// One generator of a linear family of eventually constant sequences: the
// member with pump count j is left ++ block^j ++ right followed by the
// constant tail.  An empty block makes the generator a single sequence.
struct PatternGen {
  Tuple left;
  Tuple block;
  Tuple right;
  Val tail = 0;
};

// A set of eventually constant sequences given either by an explicit finite
// list or by finitely many pattern generators (the union of their families).
class EvSet {
 public:
  static EvSet explicit_set(FiniteDomain domain, std::vector<EvThread> members);
  static EvSet pattern(FiniteDomain domain, std::vector<PatternGen> gens);

  FiniteDomain domain() const { return domain_; }
  bool is_explicit() const { return explicit_; }
  const std::vector<EvThread>& members() const;
  const std::vector<PatternGen>& gens() const;

  bool contains(const EvThread& s) const;

  // The set of length-k initial segments of members.
  FinRel cut(int k) const;

  // Every member whose canonical prefix length is at most max_prefix,
  // deduplicated and sorted.  For an explicit set this can be all of it; a
  // pattern family always has finitely many members below any prefix bound.
  std::vector<EvThread> members_up_to(int max_prefix) const;

  std::string to_string() const;

 private:
  EvSet(FiniteDomain d, bool expl) : domain_(d), explicit_(expl) {}
  EvThread instantiate(const PatternGen& g, int j) const;
  int pump_bound(const PatternGen& g, size_t coords) const;

  FiniteDomain domain_;
  bool explicit_;
  std::vector<EvThread> members_;
  std::vector<PatternGen> gens_;
};

}  // namespace wb
