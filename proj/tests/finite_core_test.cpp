#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "wb/clone.hpp"
#include "wb/domain.hpp"
#include "wb/errors.hpp"
#include "wb/finop.hpp"
#include "wb/finrel.hpp"

using namespace wb;

namespace {

FinOp op_of(FiniteDomain d, int arity, std::initializer_list<int> table) {
  Tuple t;
  for (int v : table) t.push_back(static_cast<Val>(v));
  return FinOp(d, arity, std::move(t));
}

FinRel rel_of(FiniteDomain d, int arity, const std::vector<std::vector<int>>& tuples) {
  FinRel r(d, arity);
  for (const auto& row : tuples) {
    Tuple t;
    for (int v : row) t.push_back(static_cast<Val>(v));
    r.add(t);
  }
  return r;
}

std::vector<FinOp> all_ops(FiniteDomain d, int arity) {
  std::vector<FinOp> out;
  const std::uint64_t entries =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(arity));
  Tuple table(entries, 0);
  do {
    out.emplace_back(d, arity, table);
  } while (odometer_next(table, d.size));
  return out;
}

std::vector<FinRel> all_rels(FiniteDomain d, int arity) {
  std::vector<FinRel> out;
  const std::uint64_t space =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(arity));
  for (std::uint64_t mask = 0; mask < (1ull << space); ++mask) {
    FinRel r(d, arity);
    for (std::uint64_t i = 0; i < space; ++i)
      if ((mask >> i) & 1) r.set_rank(i);
    out.push_back(r);
  }
  return out;
}

// Definitional preservation check: every matrix of k member tuples maps
// row-wise into the relation.
bool preserves(const FinOp& f, const FinRel& s) {
  const int k = f.arity();
  const std::vector<Tuple> members = s.tuples();
  std::vector<size_t> pick(static_cast<size_t>(k), 0);
  // The empty matrix exists for a nullary op, so its image must land in s.
  if (members.empty()) return k == 0 ? false : true;
  while (true) {
    Tuple image;
    for (int i = 0; i < s.arity(); ++i) {
      Tuple args;
      for (int j = 0; j < k; ++j) args.push_back(members[pick[static_cast<size_t>(j)]][static_cast<size_t>(i)]);
      image.push_back(f.apply(args));
    }
    if (!s.contains(image)) return false;
    size_t j = pick.size();
    while (j-- > 0) {
      if (++pick[j] < members.size()) break;
      pick[j] = 0;
      if (j == 0) return true;
    }
    if (k == 0) return true;
  }
}

// Naive composition-closure fixpoint over std::set, independent of the
// saturation order used by generate_clone.
std::vector<FinOp> closure_oracle(FiniteDomain d, const std::vector<FinOp>& gens, int cap) {
  std::set<FinOp> set;
  for (int k = 1; k <= cap; ++k)
    for (int i = 0; i < k; ++i) set.insert(FinOp::projection(d, k, i));
  for (const FinOp& g : gens)
    if (g.arity() <= cap) set.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<FinOp> snap(set.begin(), set.end());
    for (const FinOp& f : snap) {
      if (f.arity() == 0) continue;
      for (int m = 1; m <= cap; ++m) {
        std::vector<const FinOp*> pool;
        for (const FinOp& g : snap)
          if (g.arity() == m) pool.push_back(&g);
        if (pool.empty()) continue;
        std::vector<size_t> pick(static_cast<size_t>(f.arity()), 0);
        while (true) {
          std::vector<FinOp> gs;
          for (size_t j = 0; j < pick.size(); ++j) gs.push_back(*pool[pick[j]]);
          grew |= set.insert(compose(f, gs)).second;
          size_t j = pick.size();
          bool done = true;
          while (j-- > 0) {
            if (++pick[j] < pool.size()) { done = false; break; }
            pick[j] = 0;
          }
          if (done) break;
        }
      }
    }
  }
  return {set.begin(), set.end()};
}

}  // namespace

TEST_CASE("tuple ranking round-trips") {
  const int q = 3, len = 4;
  std::uint64_t expect = 0;
  Tuple t(static_cast<size_t>(len), 0);
  do {
    CHECK(rank_of(t, q) == expect);
    CHECK(unrank(expect, len, q) == t);
    ++expect;
  } while (odometer_next(t, q));
  CHECK(expect == 81);  // odometer visits every tuple exactly once
  Tuple bad{0, 3};
  CHECK_THROWS_AS(rank_of(bad, q), IndexOutOfRange);
  CHECK_THROWS_AS(pow_checked(2, 64), CapExceeded);
  CHECK(pow_checked(255, 8) == 17878103347812890625ull);
}

TEST_CASE("tuple rendering stays parseable") {
  Tuple small{0, 1, 9};
  CHECK(tuple_to_string(small) == "019");
  Tuple wide{10, 2, 11};
  CHECK(tuple_to_string(wide) == "10.2.11");
  CHECK(tuple_to_string(Tuple{}) == "");
}

TEST_CASE("finitary operations evaluate their tables") {
  FiniteDomain d2(2);
  const FinOp p1 = FinOp::projection(d2, 2, 1);
  CHECK(p1.apply(Tuple{0, 1}) == 1);
  CHECK(p1.apply(Tuple{1, 0}) == 0);
  CHECK(p1.to_string() == "op/2:0101");

  const FinOp c = FinOp::constant(d2, 1);
  CHECK(c.arity() == 0);
  CHECK(c.apply(Tuple{}) == 1);

  FiniteDomain d3(3);
  const FinOp p0 = FinOp::projection(d3, 3, 0);
  Tuple args{2, 0, 1};
  CHECK(p0.apply(args) == 2);

  CHECK_THROWS_AS(FinOp(d2, 1, Tuple{0, 1, 0}), ArityMismatch);
  CHECK_THROWS_AS(FinOp(d2, 1, Tuple{0, 2}), IndexOutOfRange);
  CHECK_THROWS_AS(FinOp::projection(d2, 2, 2), IndexOutOfRange);
  CHECK_THROWS_AS(p1.apply(Tuple{0}), ArityMismatch);
}

TEST_CASE("composition matches pointwise evaluation") {
  FiniteDomain d2(2);
  const FinOp nand = op_of(d2, 2, {1, 1, 1, 0});
  const FinOp orr = op_of(d2, 2, {0, 1, 1, 1});
  const FinOp xorr = op_of(d2, 2, {0, 1, 1, 0});
  const FinOp h = compose(nand, {orr, xorr});
  Tuple args{0, 0};
  do {
    const Val inner0 = orr.apply(args), inner1 = xorr.apply(args);
    CHECK(h.apply(args) == nand.apply(Tuple{inner0, inner1}));
  } while (odometer_next(args, 2));

  FiniteDomain d3(3);
  const FinOp succ = op_of(d3, 1, {1, 2, 0});
  const FinOp g = FinOp::projection(d3, 3, 2);
  const FinOp sg = compose(succ, {g});
  Tuple a3{0, 0, 0};
  do {
    CHECK(sg.apply(a3) == succ.apply(Tuple{g.apply(a3)}));
  } while (odometer_next(a3, 3));

  CHECK_THROWS_AS(compose(nand, {orr}), ArityMismatch);
  const FinOp notop = op_of(d2, 1, {1, 0});
  CHECK_THROWS_AS(compose(nand, {orr, notop}), ArityMismatch);  // inner arities differ
  CHECK_THROWS_AS(compose(nand, {orr, succ}), DomainMismatch);
  const FinOp k1 = FinOp::constant(d2, 1);
  CHECK(compose(k1, {}) == k1);
}

TEST_CASE("relations store tuples by rank") {
  FiniteDomain d3(3);
  FinRel r = rel_of(d3, 2, {{2, 1}, {0, 1}, {2, 1}});
  CHECK(r.count() == 2);
  CHECK(r.contains(Tuple{0, 1}));
  CHECK(!r.contains(Tuple{1, 0}));
  const auto ts = r.tuples();
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == Tuple{0, 1});  // ascending rank order
  CHECK(ts[1] == Tuple{2, 1});
  CHECK(r.to_string() == "rel/2:{01 21}");

  CHECK(FinRel::full(d3, 2).count() == 9);
  CHECK(FinRel::diagonal(d3, 2).count() == 3);
  CHECK(FinRel::empty(d3, 2).is_empty());
  CHECK(FinRel::diagonal(d3, 1) == FinRel::full(d3, 1));
  CHECK_THROWS_AS(FinRel::diagonal(d3, 0), ArityMismatch);
  CHECK_THROWS_AS(r.add(Tuple{0}), ArityMismatch);
  FiniteDomain d2(2);
  CHECK_THROWS_AS(FinRel(d2, 29), CapExceeded);
}

TEST_CASE("relation algebra matches definitions") {
  FiniteDomain d3(3);
  const FinRel s = rel_of(d3, 2, {{0, 1}, {1, 2}, {2, 2}});
  const FinRel u = rel_of(d3, 1, {{0}, {2}});

  SUBCASE("product") {
    const FinRel p = FinRel::product(s, u);
    CHECK(p.arity() == 3);
    CHECK(p.count() == s.count() * u.count());
    Tuple t{0, 0, 0};
    do {
      const bool want = s.contains(Tuple{t[0], t[1]}) && u.contains(Tuple{t[2]});
      CHECK(p.contains(t) == want);
    } while (odometer_next(t, 3));
  }

  SUBCASE("reindex") {
    const std::vector<int> swap{1, 0};
    const FinRel sw = FinRel::reindex(s, swap);
    Tuple t{0, 0};
    do {
      CHECK(sw.contains(t) == s.contains(Tuple{t[1], t[0]}));
    } while (odometer_next(t, 3));

    const std::vector<int> dup{1, 1};  // repeats a coordinate
    const FinRel dd = FinRel::reindex(s, dup);
    CHECK(dd == rel_of(d3, 2, {{1, 1}, {2, 2}}));

    const std::vector<int> stretch{0, 1, 0};  // result arity above the source
    const FinRel st = FinRel::reindex(s, stretch);
    Tuple t3{0, 0, 0};
    do {
      CHECK(st.contains(t3) == (s.contains(Tuple{t3[0], t3[1]}) && t3[2] == t3[0]));
    } while (odometer_next(t3, 3));

    CHECK(FinRel::reindex(s, std::vector<int>{}) == FinRel::full(d3, 0));
    CHECK(FinRel::reindex(FinRel::empty(d3, 2), std::vector<int>{}) == FinRel::empty(d3, 0));
    CHECK_THROWS_AS(FinRel::reindex(s, std::vector<int>{0, 2}), IndexOutOfRange);
  }

  SUBCASE("intersect unite subset") {
    const FinRel a = rel_of(d3, 2, {{0, 1}, {1, 2}});
    const FinRel both = FinRel::intersect({s, a});
    CHECK(both == a);
    const FinRel either = FinRel::unite({a, rel_of(d3, 2, {{2, 2}})});
    CHECK(either == s);
    CHECK(a.subset_of(s));
    CHECK(!s.subset_of(a));
    CHECK_THROWS_AS(FinRel::intersect({s, u}), ArityMismatch);
  }
}

TEST_CASE("cuts of a single relation pad and project") {
  FiniteDomain d2(2);
  const FinRel leq = rel_of(d2, 2, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(top_cut(leq, 0) == FinRel::full(d2, 0));
  CHECK(top_cut(leq, 1) == FinRel::full(d2, 1));
  CHECK(top_cut(leq, 2) == leq);
  const FinRel c3 = top_cut(leq, 3);
  Tuple t{0, 0, 0};
  do {
    CHECK(c3.contains(t) == leq.contains(Tuple{t[0], t[1]}));
  } while (odometer_next(t, 2));
  CHECK(c3.to_string() == "rel/3:{000 001 010 011 110 111}");
  CHECK(top_cut(FinRel::empty(d2, 2), 0) == FinRel::empty(d2, 0));
}

TEST_CASE("intersection cuts are computed jointly, not cutwise") {
  FiniteDomain d3(3);
  const FinRel s1 = rel_of(d3, 2, {{0, 1}});
  const FinRel s2 = rel_of(d3, 2, {{0, 2}});

  // The extensions share no sequence, so every joint cut is empty.
  CHECK(cut_of_intersection({s1, s2}, 1) == FinRel::empty(d3, 1));
  CHECK(cut_of_intersection({s1, s2}, 2) == FinRel::empty(d3, 2));
  CHECK(cut_of_intersection({s1, s2}, 3) == FinRel::empty(d3, 3));

  // Cutting each factor first loses the conflict in the second coordinate.
  const FinRel naive = FinRel::intersect({top_cut(s1, 1), top_cut(s2, 1)});
  CHECK(naive == rel_of(d3, 1, {{0}}));
  CHECK(cut_of_intersection({s1, s2}, 1) != naive);

  // A one-member family degenerates to plain cuts.
  for (int n = 0; n <= 4; ++n) CHECK(cut_of_intersection({s1}, n) == top_cut(s1, n));

  // Compatible factors keep their joint solutions.
  const FinRel t1 = rel_of(d3, 2, {{0, 1}, {1, 1}});
  const FinRel t2 = rel_of(d3, 2, {{0, 1}, {2, 1}});
  CHECK(cut_of_intersection({t1, t2}, 1) == rel_of(d3, 1, {{0}}));
  CHECK(cut_of_intersection({t1, t2}, 2) == rel_of(d3, 2, {{0, 1}}));
}

TEST_CASE("arity-capped saturation equals the naive composition closure") {
  FiniteDomain d2(2);
  const FinOp andd = op_of(d2, 2, {0, 0, 0, 1});
  const FinOp orr = op_of(d2, 2, {0, 1, 1, 1});
  const FinOp nand = op_of(d2, 2, {1, 1, 1, 0});
  const FinOp nott = op_of(d2, 1, {1, 0});

  SUBCASE("lattice operations") {
    const OpSet c = generate_clone(d2, {andd, orr}, 2);
    CHECK(c.total() == 5);
    CHECK(c.slice(0).empty());
    CHECK(c.slice(1).size() == 1);  // identity only: no constants arise
    CHECK(c.slice(2).size() == 4);
    CHECK(c.contains(andd));
    CHECK(c.contains(FinOp::projection(d2, 2, 0)));
    const auto oracle = closure_oracle(d2, {andd, orr}, 2);
    CHECK(c.all() == oracle);
  }

  SUBCASE("a complete generator fills every slice") {
    const OpSet c = generate_clone(d2, {nand}, 2);
    CHECK(c.slice(1).size() == 4);
    CHECK(c.slice(2).size() == 16);
    CHECK(c.all() == closure_oracle(d2, {nand}, 2));
  }

  SUBCASE("involution clone") {
    const OpSet c = generate_clone(d2, {nott}, 2);
    CHECK(c.all() == closure_oracle(d2, {nott}, 2));
    CHECK(c.total() == 6);
  }

  SUBCASE("no generators leaves the projections") {
    const OpSet c = generate_clone(d2, {}, 3);
    CHECK(c.total() == 6);  // 1 + 2 + 3 projections
    for (int k = 1; k <= 3; ++k)
      for (int i = 0; i < k; ++i) CHECK(c.contains(FinOp::projection(d2, k, i)));
  }

  SUBCASE("generators above the cap are dropped") {
    Tuple majt;
    for (int r = 0; r < 8; ++r) majt.push_back(static_cast<Val>((__builtin_popcount(r) >= 2) ? 1 : 0));
    const FinOp maj(d2, 3, majt);
    const OpSet c = generate_clone(d2, {maj}, 2);
    CHECK(c.total() == 3);  // projections only
  }

  SUBCASE("saturation is a fixpoint") {
    const OpSet c = generate_clone(d2, {andd, orr}, 2);
    const OpSet again = generate_clone(d2, c.all(), 2);
    CHECK(c == again);
  }

  SUBCASE("ternary domain spot check") {
    FiniteDomain d3(3);
    const FinOp succ = op_of(d3, 1, {1, 2, 0});
    const OpSet c = generate_clone(d3, {succ}, 1);
    CHECK(c.all() == closure_oracle(d3, {succ}, 1));
    CHECK(c.total() == 3);  // identity, succ, succ o succ
  }
}

TEST_CASE("polymorphism check agrees with the matrix definition everywhere") {
  FiniteDomain d2(2);
  std::vector<FinOp> ops;
  for (int k = 0; k <= 2; ++k)
    for (const FinOp& f : all_ops(d2, k)) ops.push_back(f);
  std::vector<FinRel> rels;
  for (int n = 0; n <= 2; ++n)
    for (const FinRel& r : all_rels(d2, n)) rels.push_back(r);
  REQUIRE(ops.size() == 22);
  REQUIRE(rels.size() == 22);
  for (const FinOp& f : ops)
    for (const FinRel& s : rels) CHECK(is_polymorphism(f, s) == preserves(f, s));
}

TEST_CASE("operation side of the connection") {
  FiniteDomain d2(2);
  const FinRel leq = rel_of(d2, 2, {{0, 0}, {0, 1}, {1, 1}});

  const OpSet p = pol(d2, {leq}, 2);
  CHECK(p.slice(0).empty());
  CHECK(p.slice(1).size() == 3);
  CHECK(p.slice(2).size() == 6);
  std::uint64_t brute = 0;
  for (int k = 1; k <= 2; ++k)
    for (const FinOp& f : all_ops(d2, k)) {
      if (preserves(f, leq)) ++brute;
      CHECK(p.contains(f) == preserves(f, leq));
    }
  CHECK(p.total() == brute);

  // Empty relation list: every operation within the cap.
  CHECK(pol(d2, {}, 2).total() == 4 + 16);
  CHECK_THROWS_AS(pol(d2, {}, 5), CapExceeded);
}

TEST_CASE("relation side of the connection") {
  FiniteDomain d2(2);
  const FinOp nott = op_of(d2, 1, {1, 0});
  const RelSet v = inv(d2, {nott}, 2);
  CHECK(v.slice(0).size() == 2);  // both nullary relations survive a unary op
  CHECK(v.slice(1).size() == 2);
  CHECK(v.slice(2).size() == 4);
  for (int n = 0; n <= 2; ++n)
    for (const FinRel& r : all_rels(d2, n)) CHECK(v.contains(r) == preserves(nott, r));
  CHECK_THROWS_AS(inv(d2, {nott}, 5), CapExceeded);
}

TEST_CASE("roundtrip through invariants recovers the clone") {
  FiniteDomain d2(2);
  const FinOp andd = op_of(d2, 2, {0, 0, 0, 1});
  const FinOp orr = op_of(d2, 2, {0, 1, 1, 1});

  const GeigerReport r = geiger_roundtrip(d2, {andd, orr}, {2, 3});
  CHECK(r.equal);
  CHECK(r.clone_size == 5);
  CHECK(r.pol_inv_size == 5);
  CHECK(r.invariant_count == 93);
  CHECK(!r.extra_op.has_value());

  const FinOp nott = op_of(d2, 1, {1, 0});
  CHECK(geiger_roundtrip(d2, {nott}, {2, 2}).equal);

  // A relation cap of 0 keeps only the nullary invariants, which every
  // operation preserves, so the roundtrip collects strictly more than the
  // projection clone and reports the first extra operation.
  const GeigerReport strict = geiger_roundtrip(d2, {}, {1, 0});
  CHECK(!strict.equal);
  CHECK(strict.clone_size == 1);
  CHECK(strict.pol_inv_size == 4);
  REQUIRE(strict.extra_op.has_value());
  CHECK(strict.extra_op->to_string() == "op/1:00");
}

TEST_CASE("relation clone closure contains its seeds and stays closed") {
  FiniteDomain d2(2);
  const FinRel leq = rel_of(d2, 2, {{0, 0}, {0, 1}, {1, 1}});
  const RelSet c = relation_clone_generate(d2, {leq}, 2);

  CHECK(c.contains(leq));
  CHECK(c.contains(FinRel::diagonal(d2, 2)));
  CHECK(c.contains(FinRel::diagonal(d2, 1)));
  CHECK(c.contains(FinRel::reindex(leq, std::vector<int>{1, 0})));  // the reverse order
  CHECK(c.slice(0).size() == 1);
  CHECK(c.slice(1).size() == 1);
  CHECK(c.slice(2).size() == 4);

  const std::vector<FinRel> members = c.all();
  for (const FinRel& a : members) {
    for (const FinRel& b : members) {
      if (a.arity() == b.arity()) CHECK(c.contains(FinRel::intersect({a, b})));
      if (a.arity() + b.arity() <= 2) CHECK(c.contains(FinRel::product(a, b)));
    }
    for (int m = 0; m <= 2; ++m) {
      std::vector<int> f(static_cast<size_t>(m), 0);
      bool carry;
      do {
        if (a.arity() > 0) CHECK(c.contains(FinRel::reindex(a, f)));
        carry = true;
        for (size_t i = f.size(); i-- > 0;) {
          if (++f[i] < a.arity()) { carry = false; break; }
          f[i] = 0;
        }
      } while (!carry && a.arity() > 0);
    }
  }

  CHECK_THROWS_AS(relation_clone_generate(d2, {}, 5), CapExceeded);
}
