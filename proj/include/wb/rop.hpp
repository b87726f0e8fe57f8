#ifndef WB_ROP_HPP
#define WB_ROP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wb/finop.hpp"
#include "wb/thread.hpp"

namespace wb {

// Representable omega-operation of width w: the value on an eventually
// constant thread s is head(s_0, ..., s_{w-1}, tail(s)).  The head table is
// indexed by rank(x) * q + c, prefix ranks lexicographic with the leftmost
// coordinate most significant.
class ROp {
public:
  ROp(FiniteDomain domain, int width, Tuple head);

  // f^T: width = arity(f), head ignores the tail argument.
  static ROp top_ext(const FinOp& f);
  // e_n: width n+1, returns coordinate n.
  static ROp proj(FiniteDomain domain, int n);
  // Width 0, value = tail(s).
  static ROp tail_reader(FiniteDomain domain);
  static ROp constant(FiniteDomain domain, Val c);

  Val eval(const EvThread& s) const;
  Val head_at(std::span<const Val> x, Val c) const;

  const FiniteDomain& domain() const { return domain_; }
  int width() const { return width_; }
  const Tuple& head() const { return head_; }

  // Same operation re-tabulated at width w >= width().
  ROp padded(int w) const;
  // Minimal-width form: trailing prefix positions the head ignores are
  // dropped.  Canonical forms are equal exactly when the operations agree on
  // every thread.
  ROp canonical() const;

  std::string to_string() const;

  bool operator==(const ROp& o) const {
    return domain_ == o.domain_ && width_ == o.width_ && head_ == o.head_;
  }
  bool operator<(const ROp& o) const {
    if (width_ != o.width_) return width_ < o.width_;
    return head_ < o.head_;
  }

private:
  FiniteDomain domain_;
  int width_;
  Tuple head_;
};

// Semantic equality: equal values on every eventually constant thread.
bool rop_equal(const ROp& a, const ROp& b);

// Eventually constant sequence of operations: explicit prefix, constant tail.
struct OpSeq {
  std::vector<ROp> prefix;
  ROp tail_op;

  const ROp& at(size_t i) const { return i < prefix.size() ? prefix[i] : tail_op; }
};

// q_n(phi, psi_0, ..., psi_{n-1})(s) = phi(s[psi_0(s), ..., psi_{n-1}(s)]).
ROp q_n(const ROp& phi, const std::vector<ROp>& psis);

// q(phi, seq)(s) = phi((seq_i(s))_i); the argument thread is eventually
// constant because seq is.
ROp q_inf(const ROp& phi, const OpSeq& seq);

// All finitary operations of arity <= cap whose top extension is semantically
// equal to a member of the list.
std::vector<FinOp> fin_of(const std::vector<ROp>& ops, int arity_cap);

// Least width-capped set containing e_0..e_{cap-1} and the generators,
// closed under q_n (n <= cap) whenever the canonical result width fits the
// cap.  Members are canonical, ordered by (width, head).
std::vector<ROp> generate_omega_clone(FiniteDomain domain, const std::vector<ROp>& generators,
                                      int width_cap);

enum class AxiomKind { C1, C2, C3, C4, C5, N1, N2, N3 };

struct SamplePlan {
  int width_cap = 1;
  bool exhaustive = true;   // every head table of width <= cap, every operand tuple
  int samples = 1000;       // when not exhaustive
  std::uint64_t seed = 0x5eed;
  int n_max = 2;            // substitution ranks exercised
};

struct AxiomReport {
  AxiomKind kind;
  bool surrogate = false;   // N2 is checked through its finitary form (C3)
  bool pass = false;
  std::uint64_t instances = 0;
  std::string counterexample;  // empty when pass
};

AxiomReport axiom_suite(FiniteDomain domain, AxiomKind kind, const SamplePlan& plan);

// Minimal separation construction: the least n at which the threads of d are
// pairwise distinguished by their first n coordinates; f agrees with phi on d
// and falls back elsewhere.
FinOp finitary_approximation(const ROp& phi, const std::vector<EvThread>& d, Val fallback);

}  // namespace wb

#endif
