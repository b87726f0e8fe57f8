#include "wb/galois.hpp"

#include <algorithm>

#include "wb/errors.hpp"

namespace wb {

// ------------------------------------------------------------- test sets

TestSet TestSet::finite_threads(std::vector<EvThread> ts) {
  TestSet t;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  t.threads = std::move(ts);
  return t;
}

TestSet TestSet::basic_traces(std::set<Val> tails) {
  TestSet t;
  t.tails = std::move(tails);
  return t;
}

TestSet TestSet::unite(const TestSet& o) const {
  std::vector<EvThread> ts = threads;
  ts.insert(ts.end(), o.threads.begin(), o.threads.end());
  TestSet t = finite_threads(std::move(ts));
  t.tails = tails;
  t.tails.insert(o.tails.begin(), o.tails.end());
  return t;
}

bool TestSet::operator<(const TestSet& o) const {
  if (threads != o.threads) return threads < o.threads;
  return tails < o.tails;
}

bool agrees_on(const ROp& a, const ROp& b, const TestSet& t) {
  if (a.domain() != b.domain()) throw DomainMismatch("agreement: mixed domains");
  for (const EvThread& s : t.threads)
    if (a.eval(s) != b.eval(s)) return false;
  if (!t.tails.empty()) {
    const int w = std::max(a.width(), b.width());
    const ROp pa = a.padded(w), pb = b.padded(w);
    const std::uint64_t q = static_cast<std::uint64_t>(a.domain().size);
    const std::uint64_t prefixes = pa.head().size() / q;
    for (Val c : t.tails)
      for (std::uint64_t r = 0; r < prefixes; ++r)
        if (pa.head()[r * q + c] != pb.head()[r * q + c]) return false;
  }
  return true;
}

IdealSpec IdealSpec::of(FiniteDomain domain, std::vector<TestSet> tests) {
  IdealSpec spec(domain);
  for (const TestSet& t : tests)
    for (const EvThread& s : t.threads)
      if (s.domain() != domain) throw DomainMismatch("test thread domain");
  std::set<TestSet> closed(tests.begin(), tests.end());
  // close under pairwise union; finite families reach a fixpoint
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<TestSet> snapshot(closed.begin(), closed.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j)
        if (closed.insert(snapshot[i].unite(snapshot[j])).second) grew = true;
  }
  spec.tests_.assign(closed.begin(), closed.end());
  return spec;
}

IdealSpec canonical_local_spec(FiniteDomain domain, int max_prefix) {
  return IdealSpec::of(domain,
                       {TestSet::finite_threads(enumerate_threads(domain, max_prefix))});
}

IdealSpec canonical_trace_spec(FiniteDomain domain) {
  std::vector<TestSet> tests;
  for (int a = 0; a < domain.size; ++a)
    tests.push_back(TestSet::basic_traces({static_cast<Val>(a)}));
  return IdealSpec::of(domain, std::move(tests));
}

IdealSpec canonical_global_spec(FiniteDomain domain) { return canonical_trace_spec(domain); }

IdealSpec canonical_uniform_spec(FiniteDomain domain, int max_prefix) {
  std::vector<TestSet> tests;
  tests.push_back(TestSet::finite_threads(enumerate_threads(domain, max_prefix)));
  for (int a = 0; a < domain.size; ++a)
    tests.push_back(TestSet::basic_traces({static_cast<Val>(a)}));
  return IdealSpec::of(domain, std::move(tests));
}

bool cl_membership(const ROp& phi, const std::vector<ROp>& c, const IdealSpec& x) {
  for (const TestSet& t : x.tests()) {
    bool matched = false;
    for (const ROp& psi : c)
      if (agrees_on(phi, psi, t)) {
        matched = true;
        break;
      }
    if (!matched) return false;
  }
  return true;
}

// ------------------------------------------------------------- verdicts

PolVerdict PolVerdict::holds(std::string note) {
  return {Kind::Holds, std::nullopt, std::move(note)};
}
PolVerdict PolVerdict::fails(EvMatrix witness, std::string note) {
  return {Kind::FailsWith, std::move(witness), std::move(note)};
}
PolVerdict PolVerdict::bounded(std::string note) {
  return {Kind::HoldsUpToBounds, std::nullopt, std::move(note)};
}

std::string PolVerdict::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::Holds:
      out = "holds";
      break;
    case Kind::FailsWith:
      out = "fails-with " + (witness ? witness->to_string() : std::string("?"));
      break;
    case Kind::HoldsUpToBounds:
      out = "holds-up-to-bounds";
      break;
  }
  if (!note.empty()) out += " (" + note + ")";
  return out;
}

// ------------------------------------------- exact finitary gpoly check

bool is_g_polymorphism_fin(const ROp& phi, const FinRel& s) {
  if (phi.domain() != s.domain()) throw DomainMismatch("gpoly: mixed domains");
  const ROp op = phi.canonical();
  const int w = op.width();
  const std::vector<Tuple> pool = s.tuples();
  if (pool.empty()) return true;
  const size_t arity = static_cast<size_t>(s.arity());
  // pick[0..w-1] are the prefix columns, pick[w] the eventual column
  std::vector<size_t> pick(static_cast<size_t>(w) + 1, 0);
  Tuple row(static_cast<size_t>(w));
  Tuple out(arity);
  while (true) {
    const Tuple& t = pool[pick[static_cast<size_t>(w)]];
    for (size_t i = 0; i < arity; ++i) {
      for (int j = 0; j < w; ++j) row[static_cast<size_t>(j)] = pool[pick[static_cast<size_t>(j)]][i];
      out[i] = op.head_at(row, t[i]);
    }
    if (!s.contains(out)) return false;
    bool more = false;
    for (size_t j = pick.size(); j-- > 0;) {
      if (++pick[j] < pool.size()) {
        more = true;
        break;
      }
      pick[j] = 0;
    }
    if (!more) break;
  }
  return true;
}

// --------------------------------------------------- bounded gpoly checks

namespace {

bool is_projection(const ROp& phi) {
  const ROp c = phi.canonical();
  if (c.width() == 0) return false;
  return rop_equal(c, ROp::proj(c.domain(), c.width() - 1));
}

}  // namespace

PolVerdict check_matrix_gpoly(const ROp& phi, const EvSet& r, const EvMatrix& m) {
  const EvThread out = m.apply_omega(phi);
  if (!r.contains(out))
    return PolVerdict::fails(m, "image " + out.to_string() + " is not a member");
  return PolVerdict::bounded("matrix passes");
}

PolVerdict check_matrix_gpoly(const ROp& phi, const DecSeq& r, const EvMatrix& m, int depth) {
  const EvThread out = m.apply_omega(phi);
  const Verdict v = lim_membership(out, r, depth);
  if (v.is_out())
    return PolVerdict::fails(m, "image " + out.to_string() + " fails cut " +
                                    std::to_string(v.index));
  return PolVerdict::bounded("matrix passes: image " + v.to_string());
}

PolVerdict is_g_polymorphism(const ROp& phi, const EvSet& r, const GPolyBounds& b) {
  if (phi.domain() != r.domain()) throw DomainMismatch("gpoly: mixed domains");
  if (is_projection(phi)) return PolVerdict::holds("projection: image is a column");
  const std::vector<EvThread> pool = r.members_up_to(b.max_prefix);
  for (const EvMatrix& m : enumerate_matrices(r.domain(), pool, b.max_distinct_cols)) {
    const PolVerdict v = check_matrix_gpoly(phi, r, m);
    if (!v.ok()) return v;
  }
  const int need = phi.canonical().width() + 1;
  if (r.is_explicit() && pool.size() == r.members().size() && b.max_distinct_cols >= need)
    return PolVerdict::holds("bounds cover every matrix of this width");
  return PolVerdict::bounded("cols<=" + std::to_string(b.max_distinct_cols) +
                             " prefix<=" + std::to_string(b.max_prefix));
}

PolVerdict is_g_polymorphism(const ROp& phi, const DecSeq& r, const GPolyBounds& b) {
  if (phi.domain() != r.domain()) throw DomainMismatch("gpoly: mixed domains");
  if (is_projection(phi)) return PolVerdict::holds("projection: image is a column");
  std::vector<EvThread> pool;
  size_t uncertified = 0;
  for (const EvThread& s : enumerate_threads(r.domain(), b.max_prefix)) {
    const Verdict v = lim_membership(s, r, b.depth);
    if (v.is_out()) continue;
    if (!v.is_in()) ++uncertified;
    pool.push_back(s);
  }
  for (const EvMatrix& m : enumerate_matrices(r.domain(), pool, b.max_distinct_cols)) {
    const PolVerdict v = check_matrix_gpoly(phi, r, m, b.depth);
    if (!v.ok()) return v;
  }
  return PolVerdict::bounded("cols<=" + std::to_string(b.max_distinct_cols) + " prefix<=" +
                             std::to_string(b.max_prefix) + " depth=" + std::to_string(b.depth) +
                             " columns-in-up-to-depth=" + std::to_string(uncertified));
}

PolVerdict is_bot_polymorphism(const ROp& phi, const EvSet& r, const GPolyBounds& b) {
  return is_g_polymorphism(phi, DecSeq::local_closure(r), b);
}

// --------------------------------------------------------- pol / inv sides

std::vector<ROp> pol_omega(FiniteDomain domain, const std::vector<FinRel>& relations,
                           int width_cap) {
  for (const FinRel& s : relations)
    if (s.domain() != domain) throw DomainMismatch("pol_omega: mixed domains");
  const std::uint64_t q = static_cast<std::uint64_t>(domain.size);
  const std::uint64_t entries =
      pow_checked(q, static_cast<unsigned>(width_cap)) * q;
  if (entries > 24) throw CapExceeded("pol_omega: width " + std::to_string(width_cap) + " needs " +
                                      std::to_string(entries) + " head entries per table");
  const std::uint64_t count = pow_checked(q, static_cast<unsigned>(entries));
  if (count > (1ull << 22))
    throw CapExceeded("pol_omega: " + std::to_string(count) + " head tables exceed the cap");

  // relations ordered by size so cheap, selective checks run first
  std::vector<FinRel> ordered = relations;
  std::sort(ordered.begin(), ordered.end(),
            [](const FinRel& x, const FinRel& y) { return x.count() < y.count(); });

  std::vector<ROp> out;
  Tuple head(entries, 0);
  do {
    const ROp op(domain, width_cap, head);
    bool keep = true;
    for (const FinRel& s : ordered)
      if (!is_g_polymorphism_fin(op, s)) {
        keep = false;
        break;
      }
    if (keep) out.push_back(op.canonical());
  } while (odometer_next(head, domain.size));
  std::sort(out.begin(), out.end());
  return out;
}

RelSet inv_finitary(FiniteDomain domain, const std::vector<ROp>& c, int arity_cap) {
  RelSet out(domain, arity_cap);
  for (int n = 0; n <= arity_cap; ++n) {
    const std::uint64_t space =
        pow_checked(static_cast<std::uint64_t>(domain.size), static_cast<unsigned>(n));
    if (space > 20)
      throw CapExceeded("inv_finitary: 2^" + std::to_string(space) + " relations at arity " +
                        std::to_string(n));
    const std::uint64_t masks = 1ull << space;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      FinRel s = FinRel::empty(domain, n);
      for (std::uint64_t r = 0; r < space; ++r)
        if (mask & (1ull << r)) s.set_rank(r);
      bool keep = true;
      for (const ROp& op : c)
        if (!is_g_polymorphism_fin(op, s)) {
          keep = false;
          break;
        }
      if (keep) out.insert(s);
    }
  }
  out.normalize();
  return out;
}

FinRel r_mc(const EvMatrix& m, const std::vector<ROp>& c) {
  if (m.is_omega()) throw ShapeMismatch("r_mc needs finitely many rows");
  FinRel out = FinRel::empty(m.domain(), static_cast<int>(m.lead_rows()));
  for (const ROp& phi : c) out.add(m.apply_fin(phi));
  return out;
}

PolVerdict duedue2_condition4_check(const ROp& phi, const std::vector<ROp>& generators,
                                    const DueBounds& b) {
  const FiniteDomain d = phi.domain();
  const std::vector<ROp> clone = generate_omega_clone(d, generators, b.width_cap);
  for (const ROp& psi : clone)
    if (rop_equal(phi, psi)) return PolVerdict::holds("member of the saturated clone");
  for (const EvMatrix& m : enumerate_row_injective(d, b.alpha_max, b.prefix_max)) {
    const Tuple image = m.apply_fin(phi);
    if (!r_mc(m, clone).contains(image))
      return PolVerdict::fails(m, "image " + tuple_to_string(image) +
                                      " is outside the clone's images of this matrix");
  }
  return PolVerdict::bounded("alpha<=" + std::to_string(b.alpha_max) + " prefix<=" +
                             std::to_string(b.prefix_max) + " width<=" +
                             std::to_string(b.width_cap));
}

// ------------------------------------------------- matrical polymorphisms

PolVerdict matrical_polymorphism(const ROp& phi, const FinRel& r, const EvMatrix& m) {
  if (phi.domain() != r.domain() || m.domain() != r.domain())
    throw DomainMismatch("matrical: mixed domains");
  if (m.is_omega()) throw ShapeMismatch("finitary matrical check needs finitely many rows");
  if (static_cast<int>(m.lead_rows()) != r.arity())
    throw ShapeMismatch("matrix row count differs from relation arity");
  for (size_t j = 0; j < m.stable_cols(); ++j)
    if (!r.contains(m.column_fin(j)))
      throw ColumnNotInRelation("column " + std::to_string(j) + " is outside the relation");
  if (!r.contains(m.eventual_column_fin()))
    throw ColumnNotInRelation("eventual column is outside the relation");

  // Substituting more than width(phi) columns cannot change the image, so
  // scanning substitution counts up to the width is exhaustive.
  const int w = phi.canonical().width();
  const std::vector<Tuple> pool = r.tuples();
  for (int n = 0; n <= w; ++n) {
    if (n > 0 && pool.empty()) break;
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<Tuple> cols;
      cols.reserve(static_cast<size_t>(n));
      for (size_t v : pick) cols.push_back(pool[v]);
      const EvMatrix sub = m.substitute_columns(cols);
      const Tuple image = sub.apply_fin(phi);
      if (!r.contains(image))
        return PolVerdict::fails(sub, "image " + tuple_to_string(image) + " leaves the relation");
      bool more = false;
      for (size_t j = pick.size(); j-- > 0;) {
        if (++pick[j] < pool.size()) {
          more = true;
          break;
        }
        pick[j] = 0;
      }
      if (!more) break;
    }
  }
  return PolVerdict::holds("exact: substitutions beyond the width are irrelevant");
}

PolVerdict matrical_polymorphism(const ROp& phi, const EvSet& r, const EvMatrix& m,
                                 const GPolyBounds& b) {
  if (phi.domain() != r.domain() || m.domain() != r.domain())
    throw DomainMismatch("matrical: mixed domains");
  if (!m.is_omega()) throw ShapeMismatch("set-valued matrical check needs omega-many rows");
  for (size_t j = 0; j < m.stable_cols(); ++j)
    if (!r.contains(m.column_omega(j)))
      throw ColumnNotInRelation("column " + std::to_string(j) + " is outside the relation");
  if (!r.contains(m.eventual_column_omega()))
    throw ColumnNotInRelation("eventual column is outside the relation");

  const DecSeq closure = DecSeq::local_closure(r);
  const int w = phi.canonical().width();
  const std::vector<EvThread> pool = r.members_up_to(b.max_prefix);
  bool pool_complete = r.is_explicit() && pool.size() == r.members().size();
  for (int n = 0; n <= w; ++n) {
    if (n > 0 && pool.empty()) break;
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<EvThread> cols;
      cols.reserve(static_cast<size_t>(n));
      for (size_t v : pick) cols.push_back(pool[v]);
      const EvMatrix sub = m.substitute_columns(cols);
      const EvThread image = sub.apply_omega(phi);
      const Verdict v = lim_membership(image, closure, b.depth);
      if (v.is_out())
        return PolVerdict::fails(sub, "image " + image.to_string() + " fails cut " +
                                          std::to_string(v.index));
      bool more = false;
      for (size_t j = pick.size(); j-- > 0;) {
        if (++pick[j] < pool.size()) {
          more = true;
          break;
        }
        pick[j] = 0;
      }
      if (!more) break;
    }
  }
  if (pool_complete) return PolVerdict::holds("every substitution from the finite set checked");
  return PolVerdict::bounded("prefix<=" + std::to_string(b.max_prefix) +
                             " depth=" + std::to_string(b.depth));
}

// ------------------------------------------------- clone inclusion harness

CloneInclusionReport theorem_clone_inclusion_check(FiniteDomain domain,
                                                   const std::vector<DecSeq>& family, int rel_cap,
                                                   int op_cap, int width_cap) {
  CloneInclusionReport rep;
  rep.rel_cap = rel_cap;
  rep.op_cap = op_cap;
  rep.width_cap = width_cap;

  std::vector<FinRel> cuts;
  for (const DecSeq& r : family)
    for (int k = 0; k <= rel_cap; ++k) {
      const FinRel& c = r.cut(k);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }

  const std::vector<ROp> c_omega = pol_omega(domain, cuts, width_cap);
  RelSet lhs = inv_finitary(domain, c_omega, rel_cap);

  OpSet f = pol(domain, cuts, op_cap);
  RelSet rhs = inv(domain, f.all(), rel_cap);
  lhs.normalize();
  rhs.normalize();

  rep.inclusion = true;
  for (int k = 0; k <= rel_cap; ++k) {
    rep.lhs_sizes.push_back(lhs.slice(k).size());
    rep.rhs_sizes.push_back(rhs.slice(k).size());
    for (const FinRel& s : lhs.slice(k))
      if (!rhs.contains(s)) {
        rep.inclusion = false;
        if (rep.violation.empty())
          rep.violation = "width-capped invariant " + s.to_string() + " escapes the finitary side";
      }
  }
  rep.equality = rep.inclusion;
  for (int k = 0; k <= rel_cap && rep.equality; ++k)
    for (const FinRel& s : rhs.slice(k))
      if (!lhs.contains(s)) {
        rep.equality = false;
        if (rep.violation.empty())
          rep.violation = "finitary invariant " + s.to_string() + " is not width-capped invariant";
      }
  return rep;
}

}  // namespace wb
