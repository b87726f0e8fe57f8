#ifndef WB_CLONE_HPP
#define WB_CLONE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wb/finop.hpp"
#include "wb/finrel.hpp"

namespace wb {

// Arity-sliced set of operations with deterministic (arity, table) order.
class OpSet {
public:
  explicit OpSet(FiniteDomain domain, int max_arity);

  bool insert(const FinOp& f);
  bool contains(const FinOp& f) const;
  const std::vector<FinOp>& slice(int arity) const;
  int max_arity() const { return static_cast<int>(slices_.size()) - 1; }
  std::uint64_t total() const;
  std::vector<FinOp> all() const;
  const FiniteDomain& domain() const { return domain_; }

  // Re-sort every slice into (arity, table) order; insertion keeps sets, this
  // fixes the reporting order.
  void normalize();

  bool operator==(const OpSet& o) const;

private:
  FiniteDomain domain_;
  std::vector<std::vector<FinOp>> slices_;          // by arity
  std::vector<std::vector<std::uint8_t>> seen_;     // dense rank bitmap per arity
};

class RelSet {
public:
  explicit RelSet(FiniteDomain domain, int max_arity);

  bool insert(const FinRel& r);
  bool contains(const FinRel& r) const;
  const std::vector<FinRel>& slice(int arity) const;
  int max_arity() const { return static_cast<int>(slices_.size()) - 1; }
  std::uint64_t total() const;
  std::vector<FinRel> all() const;
  const FiniteDomain& domain() const { return domain_; }
  void normalize();

  bool operator==(const RelSet& o) const;

private:
  FiniteDomain domain_;
  std::vector<std::vector<FinRel>> slices_;
};

// Least arity-capped set containing all projections of arity <= cap plus the
// generators of arity <= cap, closed under composition with all arities <= cap.
// Saturation applies generators to tuples of members; output order is
// (arity, table) lexicographic.
OpSet generate_clone(FiniteDomain domain, const std::vector<FinOp>& generators,
                     int arity_cap);

// f preserves S: for every matrix whose columns lie in S, the row-wise image
// lies in S.
bool is_polymorphism(const FinOp& f, const FinRel& s);

// All operations of arity 1..cap preserving every relation in the list.
// Operations always have arity >= 1; a nullary table is a representation
// convenience, not an operation, so the arity-0 slice stays empty.
OpSet pol(FiniteDomain domain, const std::vector<FinRel>& relations, int arity_cap);

// All relations of arity <= cap preserved by every operation in the list.
RelSet inv(FiniteDomain domain, const std::vector<FinOp>& ops, int rel_arity_cap);

enum class RelTransformKind { Diagonal, Product, Reindex, Intersect, Union };

// Least arity-capped set containing the generators and all diagonals,
// closed under products, reindexings and intersections within the cap.
RelSet relation_clone_generate(FiniteDomain domain, const std::vector<FinRel>& generators,
                               int rel_arity_cap);

struct GeigerReport {
  bool equal = false;
  CloneCaps caps;
  std::uint64_t clone_size = 0;
  std::uint64_t pol_inv_size = 0;
  std::uint64_t invariant_count = 0;
  // First operation in Pol(Inv F) \ F when the roundtrip is strict.
  std::optional<FinOp> extra_op;
};

// Computes F = generate_clone(generators), Inv F up to the relation cap,
// Pol(Inv F) up to the op cap, and compares slice-wise with F.
GeigerReport geiger_roundtrip(FiniteDomain domain, const std::vector<FinOp>& generators,
                              CloneCaps caps);

}  // namespace wb

#endif
