#include "wb/finop.hpp"

#include "wb/errors.hpp"

namespace wb {

FinOp::FinOp(FiniteDomain domain, int arity, Tuple table)
    : domain_(domain), arity_(arity), table_(std::move(table)) {
  if (arity < 0) throw ArityMismatch("negative arity");
  const std::uint64_t want = pow_checked(static_cast<std::uint64_t>(domain_.size),
                                         static_cast<unsigned>(arity));
  if (table_.size() != want)
    throw ArityMismatch("table size " + std::to_string(table_.size()) +
                        " does not match arity " + std::to_string(arity));
  for (Val v : table_)
    if (v >= domain_.size) throw IndexOutOfRange("table value outside domain");
}

FinOp FinOp::projection(FiniteDomain domain, int arity, int index) {
  if (index < 0 || index >= arity)
    throw IndexOutOfRange("projection index outside arity");
  const std::uint64_t n =
      pow_checked(static_cast<std::uint64_t>(domain.size), static_cast<unsigned>(arity));
  Tuple table(n);
  Tuple args(static_cast<size_t>(arity), 0);
  std::uint64_t r = 0;
  do {
    table[r++] = args[static_cast<size_t>(index)];
  } while (odometer_next(args, domain.size));
  return FinOp(domain, arity, std::move(table));
}

FinOp FinOp::constant(FiniteDomain domain, Val c) {
  return FinOp(domain, 0, Tuple{c});
}

Val FinOp::apply(std::span<const Val> args) const {
  if (static_cast<int>(args.size()) != arity_)
    throw ArityMismatch("apply: expected " + std::to_string(arity_) + " arguments, got " +
                        std::to_string(args.size()));
  return table_[rank_of(args, domain_.size)];
}

std::string FinOp::to_string() const {
  return "op/" + std::to_string(arity_) + ":" + tuple_to_string(table_);
}

FinOp compose(const FinOp& f, const std::vector<FinOp>& gs) {
  if (static_cast<int>(gs.size()) != f.arity())
    throw ArityMismatch("compose: outer arity " + std::to_string(f.arity()) +
                        " but " + std::to_string(gs.size()) + " inner operations");
  if (gs.empty()) return f;  // nullary outer op is already a constant
  const int k = gs[0].arity();
  for (const FinOp& g : gs) {
    if (g.domain() != f.domain()) throw DomainMismatch("compose: mixed domains");
    if (g.arity() != k) throw ArityMismatch("compose: inner arities differ");
  }
  const int q = f.domain().size;
  const std::uint64_t n = pow_checked(static_cast<std::uint64_t>(q), static_cast<unsigned>(k));
  Tuple table(n);
  Tuple inner(gs.size());
  for (std::uint64_t r = 0; r < n; ++r) {
    for (size_t j = 0; j < gs.size(); ++j) inner[j] = gs[j].at(r);
    table[r] = f.apply(inner);
  }
  return FinOp(f.domain(), k, std::move(table));
}

}  // namespace wb
