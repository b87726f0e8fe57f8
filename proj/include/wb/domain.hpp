#ifndef WB_DOMAIN_HPP
#define WB_DOMAIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wb/errors.hpp"

namespace wb {

// Element of a finite domain.  Domains are {0, 1, ..., size-1}.
using Val = std::uint8_t;
using Tuple = std::vector<Val>;

struct FiniteDomain {
  int size = 0;

  explicit FiniteDomain(int n = 0) : size(n) {
    if (n < 1 || n > 255) throw IndexOutOfRange("domain size must be in [1, 255]");
  }
  bool operator==(const FiniteDomain&) const = default;
};

// Saturation / enumeration caps shared by the finitary clone operations.
struct CloneCaps {
  int op_arity_cap = 2;
  int rel_arity_cap = 3;
};

// q^e with overflow detection; enumerations derived from the result must be
// refused (CapExceeded) rather than silently wrapped.
inline std::uint64_t pow_checked(std::uint64_t q, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > UINT64_MAX / (q ? q : 1)) throw CapExceeded("q^e overflows 64 bits");
    r *= q;
  }
  return r;
}

// Lexicographic rank of a tuple, leftmost coordinate most significant.
inline std::uint64_t rank_of(std::span<const Val> t, int q) {
  std::uint64_t r = 0;
  for (Val v : t) {
    if (v >= q) throw IndexOutOfRange("tuple entry outside domain");
    r = r * static_cast<std::uint64_t>(q) + v;
  }
  return r;
}

inline Tuple unrank(std::uint64_t rank, int len, int q) {
  Tuple t(static_cast<size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    t[static_cast<size_t>(i)] = static_cast<Val>(rank % static_cast<std::uint64_t>(q));
    rank /= static_cast<std::uint64_t>(q);
  }
  return t;
}

// Advance a base-q odometer; returns false once the tuple wraps to all
// zeros.  Leftmost digit most significant: increments rightmost first.
inline bool odometer_next(Tuple& t, int q) {
  for (size_t i = t.size(); i-- > 0;) {
    if (++t[i] < q) return true;
    t[i] = 0;
  }
  return false;
}

// Compact digit rendering; domains of size > 10 fall back to dotted decimal
// so the output stays unambiguous.
inline std::string tuple_to_string(std::span<const Val> t) {
  bool digits = true;
  for (Val v : t)
    if (v > 9) digits = false;
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) {
    if (digits) {
      s += static_cast<char>('0' + t[i]);
    } else {
      if (i) s += '.';
      s += std::to_string(static_cast<int>(t[i]));
    }
  }
  return s;
}

}  // namespace wb

#endif
