#ifndef WB_FINREL_HPP
#define WB_FINREL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wb/domain.hpp"

namespace wb {

// Word-packed bit vector sized at construction.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::uint64_t nbits)
      : nbits_(nbits), blocks_((nbits + 63) / 64, 0) {}

  std::uint64_t size() const { return nbits_; }
  bool test(std::uint64_t i) const { return (blocks_[i >> 6] >> (i & 63)) & 1; }
  void set(std::uint64_t i) { blocks_[i >> 6] |= (1ull << (i & 63)); }
  void reset(std::uint64_t i) { blocks_[i >> 6] &= ~(1ull << (i & 63)); }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (std::uint64_t b : blocks_) c += static_cast<std::uint64_t>(__builtin_popcountll(b));
    return c;
  }

  Bitset& operator&=(const Bitset& o) {
    for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= o.blocks_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
    return *this;
  }

  bool subset_of(const Bitset& o) const {
    for (size_t i = 0; i < blocks_.size(); ++i)
      if (blocks_[i] & ~o.blocks_[i]) return false;
    return true;
  }

  bool operator==(const Bitset&) const = default;
  bool operator<(const Bitset& o) const {
    if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
    // Lexicographic by ascending rank: compare from the low block up.
    for (size_t i = 0; i < blocks_.size(); ++i)
      if (blocks_[i] != o.blocks_[i]) return blocks_[i] < o.blocks_[i];
    return false;
  }

private:
  std::uint64_t nbits_ = 0;
  std::vector<std::uint64_t> blocks_;
};

// Finitary relation S subseteq A^n as a bitset over tuple ranks (lexicographic,
// leftmost coordinate most significant).  Intersection, union and subset tests
// are word-level; products and reindexings walk the member tuples.
class FinRel {
public:
  FinRel(FiniteDomain domain, int arity);

  static FinRel empty(FiniteDomain domain, int arity) { return FinRel(domain, arity); }
  static FinRel full(FiniteDomain domain, int arity);
  // Diagonal Delta_A^(n) = { (a, ..., a) : a in A }, n >= 1.
  static FinRel diagonal(FiniteDomain domain, int arity);
  static FinRel of(FiniteDomain domain, int arity, const std::vector<Tuple>& tuples);

  void add(std::span<const Val> t);
  bool contains(std::span<const Val> t) const;
  bool test_rank(std::uint64_t r) const { return bits_.test(r); }
  void set_rank(std::uint64_t r) { bits_.set(r); }

  const FiniteDomain& domain() const { return domain_; }
  int arity() const { return arity_; }
  std::uint64_t count() const { return bits_.count(); }
  std::uint64_t space() const { return bits_.size(); }
  bool is_empty() const { return bits_.count() == 0; }

  // Member tuples in ascending rank order.
  std::vector<Tuple> tuples() const;

  // S x U: arity = arity(S) + arity(U).
  static FinRel product(const FinRel& s, const FinRel& u);
  // pi_f(S) = { s o f : s in S } where f : m -> arity(S); result arity m.
  static FinRel reindex(const FinRel& s, std::span<const int> f);
  static FinRel intersect(const std::vector<FinRel>& family);
  static FinRel unite(const std::vector<FinRel>& family);

  bool subset_of(const FinRel& o) const;

  std::string to_string() const;

  bool operator==(const FinRel& o) const {
    return domain_ == o.domain_ && arity_ == o.arity_ && bits_ == o.bits_;
  }
  bool operator<(const FinRel& o) const {
    if (arity_ != o.arity_) return arity_ < o.arity_;
    return bits_ < o.bits_;
  }

private:
  FiniteDomain domain_;
  int arity_;
  Bitset bits_;
};

// n-th cut of the intersection of the top extensions of `family`: pad every
// member to the joint arity J = max(n, arities), intersect, project to the
// first n coordinates.  This can be strictly smaller than the intersection of
// the individually padded/projected members.
FinRel cut_of_intersection(const std::vector<FinRel>& family, int n);

// S^T[n]: the n-th cut of the top extension of S alone (pad with full factors
// when n >= arity, otherwise project to the first n coordinates).
FinRel top_cut(const FinRel& s, int n);

}  // namespace wb

#endif
