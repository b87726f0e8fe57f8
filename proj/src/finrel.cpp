#include "wb/finrel.hpp"

#include <algorithm>

#include "wb/errors.hpp"

namespace wb {

namespace {
// Relation tables are materialised in memory; keep a hard ceiling so a typo
// in an arity cannot allocate the machine away.
constexpr std::uint64_t kMaxSpace = 1ull << 28;

std::uint64_t space_for(FiniteDomain d, int arity) {
  if (arity < 0) throw ArityMismatch("negative arity");
  const std::uint64_t n =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(arity));
  if (n > kMaxSpace) throw CapExceeded("relation space q^n too large to materialise");
  return n;
}
}  // namespace

FinRel::FinRel(FiniteDomain domain, int arity)
    : domain_(domain), arity_(arity), bits_(space_for(domain, arity)) {}

FinRel FinRel::full(FiniteDomain domain, int arity) {
  FinRel r(domain, arity);
  for (std::uint64_t i = 0; i < r.space(); ++i) r.bits_.set(i);
  return r;
}

FinRel FinRel::diagonal(FiniteDomain domain, int arity) {
  if (arity < 1) throw ArityMismatch("diagonal arity must be >= 1");
  FinRel r(domain, arity);
  for (int a = 0; a < domain.size; ++a) {
    Tuple t(static_cast<size_t>(arity), static_cast<Val>(a));
    r.add(t);
  }
  return r;
}

FinRel FinRel::of(FiniteDomain domain, int arity, const std::vector<Tuple>& tuples) {
  FinRel r(domain, arity);
  for (const Tuple& t : tuples) r.add(t);
  return r;
}

void FinRel::add(std::span<const Val> t) {
  if (static_cast<int>(t.size()) != arity_) throw ArityMismatch("add: wrong tuple length");
  bits_.set(rank_of(t, domain_.size));
}

bool FinRel::contains(std::span<const Val> t) const {
  if (static_cast<int>(t.size()) != arity_)
    throw ArityMismatch("contains: wrong tuple length");
  return bits_.test(rank_of(t, domain_.size));
}

std::vector<Tuple> FinRel::tuples() const {
  std::vector<Tuple> out;
  out.reserve(static_cast<size_t>(count()));
  for (std::uint64_t r = 0; r < space(); ++r)
    if (bits_.test(r)) out.push_back(unrank(r, arity_, domain_.size));
  return out;
}

FinRel FinRel::product(const FinRel& s, const FinRel& u) {
  if (s.domain() != u.domain()) throw DomainMismatch("product: mixed domains");
  FinRel r(s.domain(), s.arity() + u.arity());
  const std::uint64_t shift =
      pow_checked(static_cast<std::uint64_t>(s.domain().size),
                  static_cast<unsigned>(u.arity()));
  for (std::uint64_t a = 0; a < s.space(); ++a) {
    if (!s.bits_.test(a)) continue;
    for (std::uint64_t b = 0; b < u.space(); ++b)
      if (u.bits_.test(b)) r.bits_.set(a * shift + b);
  }
  return r;
}

FinRel FinRel::reindex(const FinRel& s, std::span<const int> f) {
  for (int i : f)
    if (i < 0 || i >= s.arity()) throw IndexOutOfRange("reindex: map target outside arity");
  FinRel r(s.domain(), static_cast<int>(f.size()));
  Tuple t(f.size());
  for (std::uint64_t a = 0; a < s.space(); ++a) {
    if (!s.bits_.test(a)) continue;
    const Tuple src = unrank(a, s.arity(), s.domain().size);
    for (size_t j = 0; j < f.size(); ++j) t[j] = src[static_cast<size_t>(f[j])];
    r.add(t);
  }
  return r;
}

FinRel FinRel::intersect(const std::vector<FinRel>& family) {
  if (family.empty()) throw ArityMismatch("intersect: empty family");
  FinRel r = family[0];
  for (size_t i = 1; i < family.size(); ++i) {
    if (family[i].domain() != r.domain()) throw DomainMismatch("intersect: mixed domains");
    if (family[i].arity() != r.arity()) throw ArityMismatch("intersect: mixed arities");
    r.bits_ &= family[i].bits_;
  }
  return r;
}

FinRel FinRel::unite(const std::vector<FinRel>& family) {
  if (family.empty()) throw ArityMismatch("unite: empty family");
  FinRel r = family[0];
  for (size_t i = 1; i < family.size(); ++i) {
    if (family[i].domain() != r.domain()) throw DomainMismatch("unite: mixed domains");
    if (family[i].arity() != r.arity()) throw ArityMismatch("unite: mixed arities");
    r.bits_ |= family[i].bits_;
  }
  return r;
}

bool FinRel::subset_of(const FinRel& o) const {
  if (domain_ != o.domain_ || arity_ != o.arity_)
    throw ArityMismatch("subset_of: incompatible relations");
  return bits_.subset_of(o.bits_);
}

std::string FinRel::to_string() const {
  std::string out = "rel/" + std::to_string(arity_) + ":{";
  bool first = true;
  for (const Tuple& t : tuples()) {
    if (!first) out += " ";
    first = false;
    out += tuple_to_string(t);
  }
  out += "}";
  return out;
}

FinRel top_cut(const FinRel& s, int n) {
  if (n < 0) throw ArityMismatch("top_cut: negative arity");
  const int k = s.arity();
  if (n >= k) {
    FinRel r = s;
    for (int i = k; i < n; ++i) r = FinRel::product(r, FinRel::full(s.domain(), 1));
    return r;
  }
  std::vector<int> f(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) f[static_cast<size_t>(i)] = i;
  return FinRel::reindex(s, f);
}

FinRel cut_of_intersection(const std::vector<FinRel>& family, int n) {
  if (family.empty()) throw ArityMismatch("cut_of_intersection: empty family");
  int j = n;
  for (const FinRel& s : family) j = std::max(j, s.arity());
  std::vector<FinRel> padded;
  padded.reserve(family.size());
  for (const FinRel& s : family) padded.push_back(top_cut(s, j));
  return top_cut(FinRel::intersect(padded), n);
}

}  // namespace wb
