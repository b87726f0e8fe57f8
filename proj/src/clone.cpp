#include "wb/clone.hpp"

#include <algorithm>
#include <set>

#include "wb/errors.hpp"

namespace wb {

namespace {
// Dense dedup bitmaps are only allocated while q^(q^k) stays small; larger
// slices fall back to an ordered set of tables.
constexpr std::uint64_t kDenseLimit = 1ull << 26;
// Enumerations of full table / relation spaces refuse beyond this many items.
constexpr std::uint64_t kEnumLimit = 1ull << 24;

std::uint64_t table_space(FiniteDomain d, int arity) {
  const std::uint64_t entries =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(arity));
  // q^entries, saturating to "too big" without overflow.
  std::uint64_t space = 1;
  for (std::uint64_t i = 0; i < entries; ++i) {
    if (space > kDenseLimit) return UINT64_MAX;
    space *= static_cast<std::uint64_t>(d.size);
  }
  return space;
}
}  // namespace

// ---------------------------------------------------------------- OpSet

OpSet::OpSet(FiniteDomain domain, int max_arity) : domain_(domain) {
  if (max_arity < 0) throw ArityMismatch("negative arity cap");
  slices_.resize(static_cast<size_t>(max_arity) + 1);
  seen_.resize(static_cast<size_t>(max_arity) + 1);
  for (int k = 0; k <= max_arity; ++k) {
    const std::uint64_t space = table_space(domain_, k);
    if (space <= kDenseLimit) seen_[static_cast<size_t>(k)].assign(space, 0);
  }
}

bool OpSet::insert(const FinOp& f) {
  if (f.domain() != domain_) throw DomainMismatch("OpSet: mixed domains");
  if (f.arity() > max_arity()) throw ArityMismatch("OpSet: arity above cap");
  auto& seen = seen_[static_cast<size_t>(f.arity())];
  if (!seen.empty()) {
    const std::uint64_t r = f.table_rank();
    if (seen[r]) return false;
    seen[r] = 1;
  } else {
    if (contains(f)) return false;
  }
  slices_[static_cast<size_t>(f.arity())].push_back(f);
  return true;
}

bool OpSet::contains(const FinOp& f) const {
  if (f.domain() != domain_ || f.arity() > max_arity()) return false;
  const auto& seen = seen_[static_cast<size_t>(f.arity())];
  if (!seen.empty()) return seen[f.table_rank()] != 0;
  const auto& sl = slices_[static_cast<size_t>(f.arity())];
  return std::find(sl.begin(), sl.end(), f) != sl.end();
}

const std::vector<FinOp>& OpSet::slice(int arity) const {
  if (arity < 0 || arity > max_arity()) throw IndexOutOfRange("OpSet: slice outside cap");
  return slices_[static_cast<size_t>(arity)];
}

std::uint64_t OpSet::total() const {
  std::uint64_t n = 0;
  for (const auto& sl : slices_) n += sl.size();
  return n;
}

std::vector<FinOp> OpSet::all() const {
  std::vector<FinOp> out;
  out.reserve(static_cast<size_t>(total()));
  for (const auto& sl : slices_) out.insert(out.end(), sl.begin(), sl.end());
  return out;
}

void OpSet::normalize() {
  for (auto& sl : slices_) std::sort(sl.begin(), sl.end());
}

bool OpSet::operator==(const OpSet& o) const {
  if (domain_ != o.domain_ || slices_.size() != o.slices_.size()) return false;
  for (size_t k = 0; k < slices_.size(); ++k) {
    auto a = slices_[k];
    auto b = o.slices_[k];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
  }
  return true;
}

// ---------------------------------------------------------------- RelSet

RelSet::RelSet(FiniteDomain domain, int max_arity) : domain_(domain) {
  if (max_arity < 0) throw ArityMismatch("negative arity cap");
  slices_.resize(static_cast<size_t>(max_arity) + 1);
}

bool RelSet::insert(const FinRel& r) {
  if (r.domain() != domain_) throw DomainMismatch("RelSet: mixed domains");
  if (r.arity() > max_arity()) throw ArityMismatch("RelSet: arity above cap");
  auto& sl = slices_[static_cast<size_t>(r.arity())];
  if (std::find(sl.begin(), sl.end(), r) != sl.end()) return false;
  sl.push_back(r);
  return true;
}

bool RelSet::contains(const FinRel& r) const {
  if (r.domain() != domain_ || r.arity() > max_arity()) return false;
  const auto& sl = slices_[static_cast<size_t>(r.arity())];
  return std::find(sl.begin(), sl.end(), r) != sl.end();
}

const std::vector<FinRel>& RelSet::slice(int arity) const {
  if (arity < 0 || arity > max_arity()) throw IndexOutOfRange("RelSet: slice outside cap");
  return slices_[static_cast<size_t>(arity)];
}

std::uint64_t RelSet::total() const {
  std::uint64_t n = 0;
  for (const auto& sl : slices_) n += sl.size();
  return n;
}

std::vector<FinRel> RelSet::all() const {
  std::vector<FinRel> out;
  out.reserve(static_cast<size_t>(total()));
  for (const auto& sl : slices_) out.insert(out.end(), sl.begin(), sl.end());
  return out;
}

void RelSet::normalize() {
  for (auto& sl : slices_) std::sort(sl.begin(), sl.end());
}

bool RelSet::operator==(const RelSet& o) const {
  if (domain_ != o.domain_ || slices_.size() != o.slices_.size()) return false;
  for (size_t k = 0; k < slices_.size(); ++k) {
    auto a = slices_[k];
    auto b = o.slices_[k];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
  }
  return true;
}

// ------------------------------------------------------- generate_clone

namespace {

// Raw-table saturation of one arity slice: applies each generator to tuples
// of slice members, dedup by table.  Tables stay plain vectors until wrapped.
struct SliceSaturator {
  int q;
  std::uint64_t entries;  // q^k
  std::vector<Tuple> tables;
  std::vector<std::uint8_t> dense;  // empty -> use ordered fallback
  std::set<Tuple> fallback;

  explicit SliceSaturator(FiniteDomain d, int k)
      : q(d.size),
        entries(pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(k))) {
    const std::uint64_t space = table_space(d, k);
    if (space <= kDenseLimit) dense.assign(space, 0);
  }

  bool add(const Tuple& t) {
    if (!dense.empty()) {
      std::uint64_t r = 0;
      for (Val v : t) r = r * static_cast<std::uint64_t>(q) + v;
      if (dense[r]) return false;
      dense[r] = 1;
    } else {
      if (!fallback.insert(t).second) return false;
    }
    tables.push_back(t);
    return true;
  }
};

}  // namespace

OpSet generate_clone(FiniteDomain domain, const std::vector<FinOp>& generators,
                     int arity_cap) {
  for (const FinOp& g : generators)
    if (g.domain() != domain) throw DomainMismatch("generate_clone: mixed domains");
  std::vector<FinOp> gens;
  for (const FinOp& g : generators)
    if (g.arity() <= arity_cap) gens.push_back(g);

  OpSet out(domain, arity_cap);
  const int q = domain.size;

  for (int k = 0; k <= arity_cap; ++k) {
    SliceSaturator sat(domain, k);
    for (int i = 0; i < k; ++i) sat.add(FinOp::projection(domain, k, i).table());
    for (const FinOp& g : gens)
      if (g.arity() == k) sat.add(g.table());

    Tuple scratch(sat.entries);
    // Index-ordered worklist: tuples whose maximal index equals the index
    // currently processed cover every new combination exactly once.
    for (size_t idx = 0; idx < sat.tables.size(); ++idx) {
      for (const FinOp& f : gens) {
        const int n = f.arity();
        if (n == 0) continue;
        const Tuple& ftab = f.table();
        std::vector<size_t> pick(static_cast<size_t>(n));
        // First occurrence of idx at position p; positions before p range
        // below idx, positions after range up to idx.
        for (int p = 0; p < n; ++p) {
          if (p > 0 && idx == 0) break;  // no room below idx
          for (size_t j = 0; j < static_cast<size_t>(n); ++j)
            pick[j] = (static_cast<int>(j) == p) ? idx : 0;
          bool more = true;
          while (more) {
            // Compose f over the picked tables.
            for (std::uint64_t r = 0; r < sat.entries; ++r) {
              std::uint64_t inner = 0;
              for (int j = 0; j < n; ++j)
                inner = inner * static_cast<std::uint64_t>(q) + sat.tables[pick[static_cast<size_t>(j)]][r];
              scratch[r] = ftab[inner];
            }
            sat.add(scratch);
            // Advance the free positions (all but p); position j < p stays
            // strictly below idx, position j > p may reach idx.
            more = false;
            for (size_t j = pick.size(); j-- > 0;) {
              if (static_cast<int>(j) == p) continue;
              const size_t limit = (static_cast<int>(j) < p) ? idx : idx + 1;
              if (++pick[j] < limit) {
                more = true;
                break;
              }
              pick[j] = 0;
            }
          }
        }
      }
    }

    for (const Tuple& t : sat.tables) out.insert(FinOp(domain, k, t));
  }
  out.normalize();
  return out;
}

// ------------------------------------------------------- polymorphisms

bool is_polymorphism(const FinOp& f, const FinRel& s) {
  if (f.domain() != s.domain()) throw DomainMismatch("is_polymorphism: mixed domains");
  const int k = f.arity();
  const int n = s.arity();
  const std::vector<Tuple> members = s.tuples();
  // No matrices exist over an empty relation unless f is nullary, whose one
  // empty matrix still demands an image inside s.
  if (members.empty()) return k > 0;
  std::vector<size_t> col(static_cast<size_t>(k), 0);
  Tuple row(static_cast<size_t>(k));
  Tuple image(static_cast<size_t>(n));
  while (true) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j)
        row[static_cast<size_t>(j)] = members[col[static_cast<size_t>(j)]][static_cast<size_t>(i)];
      image[static_cast<size_t>(i)] = f.apply(row);
    }
    if (!s.contains(image)) return false;
    bool advanced = false;
    for (size_t j = col.size(); j-- > 0;) {
      if (++col[j] < members.size()) {
        advanced = true;
        break;
      }
      col[j] = 0;
    }
    if (!advanced) return true;  // wrapped; nullary f checks its single matrix once
  }
}

OpSet pol(FiniteDomain domain, const std::vector<FinRel>& relations, int arity_cap) {
  for (const FinRel& s : relations)
    if (s.domain() != domain) throw DomainMismatch("pol: mixed domains");
  OpSet out(domain, arity_cap);
  // Operations have arity >= 1; nullary tables exist only as a
  // representation convenience and are never enumerated here.
  for (int k = 1; k <= arity_cap; ++k) {
    const std::uint64_t space = table_space(domain, k);
    if (space > kEnumLimit)
      throw CapExceeded("pol: q^(q^k) table space too large at arity " + std::to_string(k));
    const std::uint64_t entries =
        pow_checked(static_cast<std::uint64_t>(domain.size), static_cast<unsigned>(k));
    Tuple table(entries, 0);
    do {
      FinOp f(domain, k, table);
      bool ok = true;
      for (const FinRel& s : relations)
        if (!is_polymorphism(f, s)) {
          ok = false;
          break;
        }
      if (ok) out.insert(f);
    } while (odometer_next(table, domain.size));
  }
  out.normalize();
  return out;
}

RelSet inv(FiniteDomain domain, const std::vector<FinOp>& ops, int rel_arity_cap) {
  for (const FinOp& f : ops)
    if (f.domain() != domain) throw DomainMismatch("inv: mixed domains");
  RelSet out(domain, rel_arity_cap);
  for (int n = 0; n <= rel_arity_cap; ++n) {
    const std::uint64_t space =
        pow_checked(static_cast<std::uint64_t>(domain.size), static_cast<unsigned>(n));
    if (space > 20) throw CapExceeded("inv: 2^(q^n) relation space too large at arity " +
                                      std::to_string(n));
    const std::uint64_t masks = 1ull << space;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      FinRel s(domain, n);
      for (std::uint64_t r = 0; r < space; ++r)
        if ((mask >> r) & 1) s.set_rank(r);
      bool ok = true;
      for (const FinOp& f : ops)
        if (!is_polymorphism(f, s)) {
          ok = false;
          break;
        }
      if (ok) out.insert(s);
    }
  }
  out.normalize();
  return out;
}

// ------------------------------------------------- relation_clone_generate

RelSet relation_clone_generate(FiniteDomain domain, const std::vector<FinRel>& generators,
                               int rel_arity_cap) {
  for (const FinRel& s : generators)
    if (s.domain() != domain) throw DomainMismatch("relation_clone_generate: mixed domains");
  const std::uint64_t space =
      pow_checked(static_cast<std::uint64_t>(domain.size),
                  static_cast<unsigned>(rel_arity_cap));
  if (space > 20)
    throw CapExceeded("relation_clone_generate: relation space too large for saturation");

  RelSet out(domain, rel_arity_cap);
  std::vector<FinRel> work;
  auto push = [&](const FinRel& r) {
    if (out.insert(r)) work.push_back(r);
  };

  for (int n = 1; n <= rel_arity_cap; ++n) push(FinRel::diagonal(domain, n));
  for (const FinRel& g : generators)
    if (g.arity() <= rel_arity_cap) push(g);

  for (size_t idx = 0; idx < work.size(); ++idx) {
    const FinRel r = work[idx];
    // Products, both orders, against everything seen so far (self included).
    for (size_t j = 0; j <= idx; ++j) {
      const FinRel other = work[j];
      if (r.arity() + other.arity() <= rel_arity_cap) {
        push(FinRel::product(r, other));
        push(FinRel::product(other, r));
      }
      if (r.arity() == other.arity()) push(FinRel::intersect({r, other}));
    }
    // All reindexings pi_f with f : m -> arity(r), m <= cap.
    for (int m = 0; m <= rel_arity_cap; ++m) {
      if (r.arity() == 0 && m > 0) continue;
      std::vector<int> f(static_cast<size_t>(m), 0);
      while (true) {
        push(FinRel::reindex(r, f));
        size_t j = f.size();
        bool more = false;
        while (j-- > 0) {
          if (++f[j] < r.arity()) {
            more = true;
            break;
          }
          f[j] = 0;
        }
        if (!more) break;
      }
    }
  }
  out.normalize();
  return out;
}

// --------------------------------------------------------------- Geiger

GeigerReport geiger_roundtrip(FiniteDomain domain, const std::vector<FinOp>& generators,
                              CloneCaps caps) {
  GeigerReport rep;
  rep.caps = caps;
  OpSet f = generate_clone(domain, generators, caps.op_arity_cap);
  RelSet invariants = inv(domain, f.all(), caps.rel_arity_cap);
  OpSet p = pol(domain, invariants.all(), caps.op_arity_cap);
  rep.clone_size = f.total();
  rep.pol_inv_size = p.total();
  rep.invariant_count = invariants.total();
  rep.equal = (f == p);
  if (!rep.equal) {
    for (int k = 0; k <= caps.op_arity_cap && !rep.extra_op; ++k)
      for (const FinOp& g : p.slice(k))
        if (!f.contains(g)) {
          rep.extra_op = g;
          break;
        }
  }
  return rep;
}

}  // namespace wb
