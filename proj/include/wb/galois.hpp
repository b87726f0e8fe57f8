#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wb/clone.hpp"
#include "wb/decseq.hpp"
#include "wb/domain.hpp"
#include "wb/evset.hpp"
#include "wb/finrel.hpp"
#include "wb/matrix.hpp"
#include "wb/rop.hpp"
#include "wb/thread.hpp"

namespace wb {

// One agreement constraint: two operations agree on a TestSet when they give
// equal values on every listed thread and, for every listed tail value, on
// every sequence whose tail is that value (decided by padded head-table
// comparison at that tail).  A TestSet with both parts nonempty is the union
// of a finite thread set and a compact trace.
struct TestSet {
  std::vector<EvThread> threads;  // canonical, sorted, deduplicated
  std::set<Val> tails;

  static TestSet finite_threads(std::vector<EvThread> ts);
  static TestSet basic_traces(std::set<Val> tails);
  TestSet unite(const TestSet& o) const;
  bool operator==(const TestSet&) const = default;
  bool operator<(const TestSet& o) const;
};

bool agrees_on(const ROp& a, const ROp& b, const TestSet& t);

// A finite, union-closed family of TestSets.  Closure membership against it:
// phi is in the closure of C when every test has some member of C agreeing
// with phi on it.  Finitely many tests under-approximate the full ideal, so
// passing is necessary for true-closure membership; the canonical specs below
// are chosen so the in-scope checks are exact over width-capped operations.
class IdealSpec {
 public:
  static IdealSpec of(FiniteDomain domain, std::vector<TestSet> tests);
  FiniteDomain domain() const { return domain_; }
  const std::vector<TestSet>& tests() const { return tests_; }

 private:
  explicit IdealSpec(FiniteDomain d) : domain_(d) {}
  FiniteDomain domain_;
  std::vector<TestSet> tests_;
};

// Pointwise-agreement spec: one test holding every canonical thread of prefix
// length <= max_prefix.  Binding for operations of width <= max_prefix.
IdealSpec canonical_local_spec(FiniteDomain domain, int max_prefix);
// Tail-class agreement: the basic traces and their unions.
IdealSpec canonical_trace_spec(FiniteDomain domain);
// Over eventually constant sequences the compact traces are exactly the
// finite unions of basic traces, so this coincides with the trace spec.
IdealSpec canonical_global_spec(FiniteDomain domain);
// Tests combining thread sets with traces; refines both families above.
IdealSpec canonical_uniform_spec(FiniteDomain domain, int max_prefix);

bool cl_membership(const ROp& phi, const std::vector<ROp>& c, const IdealSpec& x);

struct PolVerdict {
  enum class Kind { Holds, FailsWith, HoldsUpToBounds };
  Kind kind = Kind::HoldsUpToBounds;
  std::optional<EvMatrix> witness;
  std::string note;

  static PolVerdict holds(std::string note = "");
  static PolVerdict fails(EvMatrix witness, std::string note = "");
  static PolVerdict bounded(std::string note = "");
  bool ok() const { return kind != Kind::FailsWith; }
  std::string to_string() const;
};

// Exact: phi preserves s iff for every choice of width(phi) prefix columns
// and one eventual column from s, the row-wise image lands in s.  Complete
// because the image depends on nothing else.
bool is_g_polymorphism_fin(const ROp& phi, const FinRel& s);

struct GPolyBounds {
  int max_distinct_cols = 3;  // lead columns plus the eventual one
  int max_prefix = 3;         // column pool prefix bound
  int depth = 8;              // cut depth for membership verdicts
};

// Columns drawn from the set's members; membership of images is exact, so
// FailsWith is definitive.  Holds is issued only when the bounds provably
// cover every matrix (explicit set fully inside the pool, enough distinct
// columns for the operation's width); otherwise HoldsUpToBounds.
PolVerdict is_g_polymorphism(const ROp& phi, const EvSet& r, const GPolyBounds& b);
// Columns are threads not certified out at the given depth; an image
// certified out of the limit is a definitive failure.
PolVerdict is_g_polymorphism(const ROp& phi, const DecSeq& r, const GPolyBounds& b);
// Polymorphism of the local closure: delegates to the DecSeq check on the
// closure of r.
PolVerdict is_bot_polymorphism(const ROp& phi, const EvSet& r, const GPolyBounds& b);

// Single-matrix recheck, used to replay reported witnesses.
PolVerdict check_matrix_gpoly(const ROp& phi, const EvSet& r, const EvMatrix& m);
PolVerdict check_matrix_gpoly(const ROp& phi, const DecSeq& r, const EvMatrix& m, int depth);

// All representable operations of width <= width_cap preserving every listed
// relation, canonical and sorted.  Full head-table enumeration.
std::vector<ROp> pol_omega(FiniteDomain domain, const std::vector<FinRel>& relations,
                           int width_cap);

// All relations of arity <= arity_cap preserved by every member of c.
RelSet inv_finitary(FiniteDomain domain, const std::vector<ROp>& c, int arity_cap);

// The relation {phi[m] : phi in c} over a finite-row matrix.
FinRel r_mc(const EvMatrix& m, const std::vector<ROp>& c);

struct DueBounds {
  int width_cap = 4;   // saturation width for the comparison clone
  int alpha_max = 3;   // row count of scanned matrices
  int prefix_max = 3;  // row prefix bound
};

// Closure via matrices: saturate the generators, then hunt for a finite
// row-injective matrix m with phi[m] outside {psi[m] : psi in clone}.  Such a
// matrix certifies phi is outside the pointwise closure of the clone.
PolVerdict duedue2_condition4_check(const ROp& phi, const std::vector<ROp>& generators,
                                    const DueBounds& b);

// Matrix-anchored polymorphism: every column substitution by relation
// members keeps the image inside (the local closure of) the relation.  The
// finitary case is exact: substitutions beyond the operation's width cannot
// change the image.
PolVerdict matrical_polymorphism(const ROp& phi, const FinRel& r, const EvMatrix& m);
PolVerdict matrical_polymorphism(const ROp& phi, const EvSet& r, const EvMatrix& m,
                                 const GPolyBounds& b);

struct CloneInclusionReport {
  bool inclusion = false;  // per-arity invariant slices of the width-capped
                           // side contained in the finitary side
  bool equality = false;
  int rel_cap = 0, op_cap = 0, width_cap = 0;
  std::vector<std::uint64_t> lhs_sizes, rhs_sizes;  // per arity 0..rel_cap
  std::string violation;
};

// Compares the invariants of the width-capped operations preserving all cuts
// of the family against the invariants of the finitary polymorphism clone of
// the same cuts, arity by arity.
CloneInclusionReport theorem_clone_inclusion_check(FiniteDomain domain,
                                                   const std::vector<DecSeq>& family, int rel_cap,
                                                   int op_cap, int width_cap);

}  // namespace wb
