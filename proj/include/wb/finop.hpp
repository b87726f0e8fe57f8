#ifndef WB_FINOP_HPP
#define WB_FINOP_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wb/domain.hpp"

namespace wb {

// Finitary operation f : A^k -> A given by its full value table in
// lexicographic input order, leftmost argument most significant.
// Arity 0 is admitted: a single-entry table, i.e. a constant.
class FinOp {
public:
  FinOp(FiniteDomain domain, int arity, Tuple table);

  static FinOp projection(FiniteDomain domain, int arity, int index);
  static FinOp constant(FiniteDomain domain, Val c);

  Val apply(std::span<const Val> args) const;
  Val at(std::uint64_t input_rank) const { return table_[input_rank]; }

  const FiniteDomain& domain() const { return domain_; }
  int arity() const { return arity_; }
  const Tuple& table() const { return table_; }

  // Rank of the table itself in the lexicographic order of all tables of
  // this arity; only valid while it fits 64 bits (callers guard).
  std::uint64_t table_rank() const { return rank_of(table_, domain_.size); }

  std::string to_string() const;

  bool operator==(const FinOp& o) const {
    return domain_ == o.domain_ && arity_ == o.arity_ && table_ == o.table_;
  }
  // Deterministic order: (arity, table) lexicographic.
  bool operator<(const FinOp& o) const {
    if (arity_ != o.arity_) return arity_ < o.arity_;
    return table_ < o.table_;
  }

private:
  FiniteDomain domain_;
  int arity_;
  Tuple table_;
};

// f(g_1, ..., g_n): the g_i share a common arity k; result has arity k.
FinOp compose(const FinOp& f, const std::vector<FinOp>& gs);

}  // namespace wb

#endif
