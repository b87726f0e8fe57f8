#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wb/domain.hpp"
#include "wb/evset.hpp"
#include "wb/finrel.hpp"
#include "wb/thread.hpp"

namespace wb {

// Answer of a limit-membership check.  CertifiedOut carries the arity of a
// failing cut, which is a finite counterexample.  CertifiedIn is only issued
// when a sound bound guarantees no deeper cut can fail, or a member
// certificate applies.  Otherwise the check reports how deep it looked.
struct Verdict {
  enum class Kind { CertifiedIn, CertifiedOut, InUpToDepth };
  Kind kind = Kind::InUpToDepth;
  int index = 0;

  static Verdict in() { return {Kind::CertifiedIn, 0}; }
  static Verdict out(int failing_cut) { return {Kind::CertifiedOut, failing_cut}; }
  static Verdict up_to(int depth) { return {Kind::InUpToDepth, depth}; }
  bool is_in() const { return kind == Kind::CertifiedIn; }
  bool is_out() const { return kind == Kind::CertifiedOut; }
  std::string to_string() const;
  bool operator==(const Verdict&) const = default;
};

// A decreasing sequence of finite relations: S_i has arity i and every tuple
// of S_{i+1} restricts to a tuple of S_i.  The limit object it presents is
// the set of eventually constant sequences all of whose initial segments lie
// in the cuts.  Cuts are produced lazily, cached, and checked for the
// decreasing property as they appear.
class DecSeq {
 public:
  // Cuts of a finite-arity relation: pad with full factors above its arity,
  // project below.  Limit: sequences whose first k coordinates lie in s.
  static DecSeq from_finitary(const FinRel& s);
  // Cuts are the diagonals; the limit is the constant sequences.
  static DecSeq diagonal(FiniteDomain d);
  // Cuts are the initial segments of the set's members; the limit is the
  // set's local closure, which may strictly contain it.
  static DecSeq local_closure(const EvSet& set);
  static DecSeq intersect(const DecSeq& a, const DecSeq& b);
  // Pointwise union of cuts; the limit is the union of the two limits.
  static DecSeq join(const DecSeq& a, const DecSeq& b);
  // Existential projection: a sequence belongs when some member of the base
  // limit agrees with it on every coordinate in `constrained`.
  static DecSeq exists(const DecSeq& base, std::vector<int> constrained);
  // Coordinate permutation with finite support: sigma maps i to sigma[i] for
  // i < sigma.size() and fixes everything else.  A sequence u belongs when
  // the sequence i |-> u[sigma[i]] belongs to the base.
  static DecSeq permute(const DecSeq& base, const std::vector<int>& sigma);

  FiniteDomain domain() const;
  // S_i; throws DecreasingViolation if the producer breaks monotonicity.
  const FinRel& cut(int i) const;
  // Index k with S_i = S_k x A^{i-k} for all i >= k, when known.
  std::optional<int> stabilization() const;
  // Every cut tuple extends to a member of the limit.
  bool tight() const;
  // An arity b such that passing every cut up to b settles membership of s
  // in the limit, when one is known for this sequence and thread.
  std::optional<int> decision_bound(const EvThread& s) const;
  // One-sided certificate: true guarantees s is in the limit; false says
  // nothing.
  bool member_certificate(const EvThread& s) const;
  std::string describe() const;

 private:
  struct State;
  DecSeq() = default;
  std::shared_ptr<State> st_;
};

// Three-valued membership of s in the limit of r.  Scans cuts from arity 0
// upward: a failing cut certifies exclusion.  When the sequence carries a
// per-sequence or per-thread decision bound, passing every cut up to it
// certifies membership; otherwise a member certificate may apply, and
// failing that the scan stops at `depth` cuts without a certificate.
Verdict lim_membership(const EvThread& s, const DecSeq& r, int depth);

}  // namespace wb
