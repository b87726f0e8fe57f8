#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "wb/clone.hpp"
#include "wb/decseq.hpp"
#include "wb/domain.hpp"
#include "wb/errors.hpp"
#include "wb/evset.hpp"
#include "wb/galois.hpp"
#include "wb/matrix.hpp"
#include "wb/rop.hpp"
#include "wb/thread.hpp"

using namespace wb;

namespace {

EvThread thr(FiniteDomain d, std::initializer_list<int> prefix, int tail) {
  Tuple p;
  for (int v : prefix) p.push_back(static_cast<Val>(v));
  return EvThread(d, std::move(p), static_cast<Val>(tail));
}

std::vector<ROp> rops_of_width(FiniteDomain d, int w) {
  const std::uint64_t entries =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(w)) *
      static_cast<std::uint64_t>(d.size);
  std::vector<ROp> out;
  Tuple head(entries, 0);
  do {
    out.emplace_back(d, w, head);
  } while (odometer_next(head, d.size));
  return out;
}

std::vector<FinRel> all_rels(FiniteDomain d, int arity) {
  const std::uint64_t space =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(arity));
  std::vector<FinRel> out;
  for (std::uint64_t mask = 0; mask < (1ull << space); ++mask) {
    FinRel r(d, arity);
    for (std::uint64_t i = 0; i < space; ++i)
      if ((mask >> i) & 1) r.set_rank(i);
    out.push_back(r);
  }
  return out;
}

EvSet zeros_then_ones_family(FiniteDomain d) {
  return EvSet::pattern(d, {PatternGen{.left = {}, .block = {0}, .right = {}, .tail = 1}});
}

}  // namespace

TEST_CASE("agreement constraints read threads and traces") {
  FiniteDomain d2(2);
  const ROp e0 = ROp::proj(d2, 0);
  const ROp e1 = ROp::proj(d2, 1);
  const ROp tr = ROp::tail_reader(d2);
  const ROp k1 = ROp::constant(d2, 1);

  const TestSet same = TestSet::finite_threads({thr(d2, {0}, 0), thr(d2, {1}, 1)});
  CHECK(agrees_on(e0, e1, same));  // both coordinates coincide on these threads
  const TestSet apart = TestSet::finite_threads({thr(d2, {0, 1}, 1)});
  CHECK(!agrees_on(e0, e1, apart));

  CHECK(agrees_on(tr, k1, TestSet::basic_traces({1})));
  CHECK(!agrees_on(tr, k1, TestSet::basic_traces({0})));
  CHECK(!agrees_on(tr, k1, TestSet::basic_traces({0, 1})));

  // A union constraint requires agreement on both parts.
  const TestSet u = TestSet::basic_traces({1}).unite(TestSet::finite_threads({thr(d2, {1}, 0)}));
  CHECK(!agrees_on(tr, k1, u));
  CHECK(agrees_on(ROp::proj(d2, 2), tr, TestSet::finite_threads({thr(d2, {0, 1}, 1)})));

  // Duplicated threads collapse in the canonical constraint.
  const TestSet dup = TestSet::finite_threads({thr(d2, {0}, 1), thr(d2, {0, 1}, 1)});
  CHECK(dup.threads.size() == 1);
}

TEST_CASE("union-closed families and the canonical specs") {
  FiniteDomain d2(2);
  const TestSet a = TestSet::finite_threads({thr(d2, {0}, 1)});
  const TestSet b = TestSet::basic_traces({0});
  const IdealSpec spec = IdealSpec::of(d2, {a, b});
  CHECK(spec.tests().size() == 3);  // a, b and their union
  const TestSet ab = a.unite(b);
  CHECK(std::find(spec.tests().begin(), spec.tests().end(), ab) != spec.tests().end());

  // The local spec is a single test carrying every short thread.
  const IdealSpec local = canonical_local_spec(d2, 3);
  REQUIRE(local.tests().size() == 1);
  CHECK(local.tests()[0].threads.size() == 16);
  CHECK(local.tests()[0].tails.empty());

  const IdealSpec trace = canonical_trace_spec(d2);
  CHECK(trace.tests().size() == 3);  // {0}, {1} and {0,1}
  const IdealSpec uniform = canonical_uniform_spec(d2, 1);
  CHECK(uniform.tests().size() > trace.tests().size());
}

TEST_CASE("closure membership distinguishes local from trace agreement") {
  FiniteDomain d2(2);
  std::vector<ROp> projections;
  for (int i = 0; i < 4; ++i) projections.push_back(ROp::proj(d2, i));
  const ROp tr = ROp::tail_reader(d2);

  CHECK(cl_membership(tr, {tr}, canonical_local_spec(d2, 3)));
  CHECK(cl_membership(ROp::proj(d2, 0), projections, canonical_local_spec(d2, 3)));

  // On threads of prefix length <= 3 the fourth coordinate already sits in
  // the tail, so one projection matches the tail reader pointwise: the local
  // spec cannot separate them.
  CHECK(cl_membership(tr, projections, canonical_local_spec(d2, 3)));
  // No single projection agrees with the tail reader on a whole trace.
  CHECK(!cl_membership(tr, projections, canonical_trace_spec(d2)));
  CHECK(!cl_membership(tr, projections, canonical_uniform_spec(d2, 3)));

  const ROp k1 = ROp::constant(d2, 1);
  CHECK(!cl_membership(k1, projections, canonical_local_spec(d2, 3)));
}

TEST_CASE("prefix-column preservation mirrors finitary preservation") {
  FiniteDomain d2(2);
  std::vector<FinRel> rels;
  for (int n = 1; n <= 2; ++n)
    for (const FinRel& r : all_rels(d2, n)) rels.push_back(r);

  for (int w = 0; w <= 2; ++w)
    for (const ROp& phi : rops_of_width(d2, w)) {
      // Reading the head as a (w+1)-ary operation of (prefix, tail) turns
      // column preservation into plain preservation.
      const FinOp g(d2, w + 1, phi.head());
      for (const FinRel& s : rels)
        CHECK(is_g_polymorphism_fin(phi, s) == is_polymorphism(g, s));
    }

  const FinRel leq = FinRel::of(d2, 2, {Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}});
  for (int k = 1; k <= 2; ++k)
    for (int i = 0; i < k; ++i) {
      const FinOp p = FinOp::projection(d2, k, i);
      CHECK(is_g_polymorphism_fin(ROp::top_ext(p), leq));
    }
  CHECK(is_g_polymorphism_fin(ROp::tail_reader(d2), leq));
  CHECK(is_g_polymorphism_fin(ROp::constant(d2, 1), leq));
  CHECK(!is_g_polymorphism_fin(ROp::top_ext(FinOp(d2, 2, Tuple{0, 1, 1, 0})), leq));
}

TEST_CASE("width-capped polymorphism enumeration") {
  FiniteDomain d2(2);
  const FinRel leq = FinRel::of(d2, 2, {Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}});

  const auto ops = pol_omega(d2, {leq}, 2);
  CHECK(ops.size() == 20);
  // Same count as the ternary slice of the finitary side: the head of a
  // width-2 table is a ternary operation of (prefix, tail).
  CHECK(ops.size() == pol(d2, {leq}, 3).slice(3).size());
  CHECK(std::is_sorted(ops.begin(), ops.end()));
  for (const ROp& phi : ops) {
    CHECK(phi == phi.canonical());
    CHECK(is_g_polymorphism_fin(phi, leq));
  }
  // Distinct members are semantically distinct.
  for (size_t i = 0; i + 1 < ops.size(); ++i) CHECK(!rop_equal(ops[i], ops[i + 1]));

  CHECK(pol_omega(d2, {}, 1).size() == 16);
  CHECK_THROWS_AS(pol_omega(d2, {leq}, 4), CapExceeded);
  CHECK_THROWS_AS(pol_omega(FiniteDomain(3), {}, 2), CapExceeded);
}

TEST_CASE("invariants of representable operations") {
  FiniteDomain d2(2);
  const RelSet everything = inv_finitary(d2, {ROp::proj(d2, 0)}, 3);
  CHECK(everything.slice(0).size() == 2);
  CHECK(everything.slice(1).size() == 4);
  CHECK(everything.slice(2).size() == 16);
  CHECK(everything.slice(3).size() == 256);

  // A width-0 table acting on tails preserves the same relations as the
  // corresponding unary finitary operation.
  const ROp tail_not(d2, 0, Tuple{1, 0});
  const RelSet via_tails = inv_finitary(d2, {tail_not}, 2);
  const RelSet via_unary = inv(d2, {FinOp(d2, 1, Tuple{1, 0})}, 2);
  for (int n = 0; n <= 2; ++n) CHECK(via_tails.slice(n) == via_unary.slice(n));

  CHECK_THROWS_AS(inv_finitary(d2, {ROp::proj(d2, 0)}, 5), CapExceeded);
}

TEST_CASE("matrix images under a collection of operations") {
  FiniteDomain d2(2);
  const EvMatrix m = EvMatrix::from_columns(d2, {Tuple{0, 1}, Tuple{1, 1}}, Tuple{0, 0});
  const std::vector<ROp> c = {ROp::proj(d2, 0), ROp::proj(d2, 1), ROp::tail_reader(d2)};
  const FinRel r = r_mc(m, c);
  CHECK(r.arity() == 2);
  CHECK(r.count() == 3);
  CHECK(r.contains(Tuple{0, 1}));
  CHECK(r.contains(Tuple{1, 1}));
  CHECK(r.contains(Tuple{0, 0}));  // the tail reader recovers the eventual column

  const EvMatrix om(d2, {thr(d2, {0}, 1)}, thr(d2, {}, 0));
  CHECK_THROWS_AS(r_mc(om, c), ShapeMismatch);
}

TEST_CASE("matrix-hunting closure check is one-sided") {
  FiniteDomain d2(2);
  const DueBounds b;

  const PolVerdict member = duedue2_condition4_check(ROp::proj(d2, 0), {ROp::proj(d2, 0)}, b);
  CHECK(member.kind == PolVerdict::Kind::Holds);
  CHECK(member.note == "member of the saturated clone");

  // A constant disagrees with every projection already on one-row matrices.
  const PolVerdict out = duedue2_condition4_check(ROp::constant(d2, 0), {}, b);
  CHECK(out.kind == PolVerdict::Kind::FailsWith);
  REQUIRE(out.witness.has_value());
  CHECK(out.witness->to_string() == "[| 1]");

  // The tail reader agrees with a wide projection on every scanned matrix,
  // so the hunt stays inconclusive.
  const PolVerdict open = duedue2_condition4_check(ROp::tail_reader(d2), {}, b);
  CHECK(open.kind == PolVerdict::Kind::HoldsUpToBounds);
}

TEST_CASE("polymorphism verdicts against eventual sets") {
  FiniteDomain d2(2);
  const GPolyBounds b;
  const EvSet family = zeros_then_ones_family(d2);

  // Projections always hold, no enumeration needed.
  const PolVerdict p = is_g_polymorphism(ROp::proj(d2, 1), family, b);
  CHECK(p.kind == PolVerdict::Kind::Holds);

  // Constant one maps every matrix into the family, but an infinite family
  // can never be certified by a finite pool.
  const PolVerdict c1 = is_g_polymorphism(ROp::constant(d2, 1), family, b);
  CHECK(c1.kind == PolVerdict::Kind::HoldsUpToBounds);

  // Constant zero produces the all-zero image, which is outside the family.
  const PolVerdict c0 = is_g_polymorphism(ROp::constant(d2, 0), family, b);
  CHECK(c0.kind == PolVerdict::Kind::FailsWith);
  REQUIRE(c0.witness.has_value());
  CHECK(!family.contains(c0.witness->apply_omega(ROp::constant(d2, 0))));

  // Explicit sets small enough for the bounds certify both polarities.
  const EvSet consts = EvSet::explicit_set(d2, {thr(d2, {}, 0), thr(d2, {}, 1)});
  const PolVerdict h = is_g_polymorphism(ROp::top_ext(FinOp(d2, 2, Tuple{0, 1, 1, 0})), consts, b);
  CHECK(h.kind == PolVerdict::Kind::Holds);
  const EvSet lone = EvSet::explicit_set(d2, {thr(d2, {1}, 0)});
  const PolVerdict f = is_g_polymorphism(ROp::top_ext(FinOp(d2, 2, Tuple{1, 1, 1, 0})), lone, b);
  CHECK(f.kind == PolVerdict::Kind::FailsWith);

  const std::string shown = f.to_string();
  CHECK(shown.substr(0, 10) == "fails-with");
}

TEST_CASE("polymorphism verdicts against decreasing sequences") {
  FiniteDomain d2(2);
  const GPolyBounds b;
  const DecSeq closure = DecSeq::local_closure(zeros_then_ones_family(d2));

  CHECK(is_g_polymorphism(ROp::proj(d2, 0), closure, b).kind == PolVerdict::Kind::Holds);

  // The all-zero image is never certified out of the closure, so the check
  // stays bounded instead of failing.
  const PolVerdict c0 = is_g_polymorphism(ROp::constant(d2, 0), closure, b);
  CHECK(c0.kind == PolVerdict::Kind::HoldsUpToBounds);
  CHECK(c0.note.find("columns-in-up-to-depth=") != std::string::npos);

  const PolVerdict bot = is_bot_polymorphism(ROp::constant(d2, 0), zeros_then_ones_family(d2), b);
  CHECK(bot.kind == PolVerdict::Kind::HoldsUpToBounds);

  // Negation flips a member into a thread certified out of the closure.
  const ROp nott = ROp::top_ext(FinOp(d2, 1, Tuple{1, 0}));
  const PolVerdict vd = is_g_polymorphism(nott, closure, b);
  CHECK(vd.kind == PolVerdict::Kind::FailsWith);
  REQUIRE(vd.witness.has_value());
  CHECK(lim_membership(vd.witness->apply_omega(nott), closure, b.depth).is_out());

  // Every operation preserves the diagonal: its limit holds only constant
  // sequences, and a matrix of constant columns has constant rows.
  const PolVerdict anyop = is_g_polymorphism(nott, DecSeq::diagonal(d2), b);
  CHECK(anyop.ok());
}

TEST_CASE("witness replay matches the full scan") {
  FiniteDomain d2(2);
  const GPolyBounds b;
  const EvSet family = zeros_then_ones_family(d2);
  const ROp c0 = ROp::constant(d2, 0);

  const PolVerdict full = is_g_polymorphism(c0, family, b);
  REQUIRE(full.witness.has_value());
  const PolVerdict replay = check_matrix_gpoly(c0, family, *full.witness);
  CHECK(replay.kind == PolVerdict::Kind::FailsWith);

  // The same matrix passes for an operation that does preserve the family.
  CHECK(check_matrix_gpoly(ROp::constant(d2, 1), family, *full.witness).ok());

  const DecSeq closure = DecSeq::local_closure(family);
  CHECK(check_matrix_gpoly(c0, closure, *full.witness, 8).kind ==
        PolVerdict::Kind::HoldsUpToBounds);
}

TEST_CASE("matrix-anchored preservation") {
  FiniteDomain d2(2);
  const FinRel leq = FinRel::of(d2, 2, {Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}});
  const EvMatrix m = EvMatrix::from_columns(d2, {Tuple{0, 1}}, Tuple{1, 1});

  const PolVerdict ok = matrical_polymorphism(ROp::top_ext(FinOp(d2, 2, Tuple{0, 0, 0, 1})), leq, m);
  CHECK(ok.kind == PolVerdict::Kind::Holds);
  CHECK(ok.note == "exact: substitutions beyond the width are irrelevant");

  const PolVerdict bad = matrical_polymorphism(ROp::top_ext(FinOp(d2, 2, Tuple{0, 1, 1, 0})), leq, m);
  CHECK(bad.kind == PolVerdict::Kind::FailsWith);
  REQUIRE(bad.witness.has_value());

  const EvMatrix outside = EvMatrix::from_columns(d2, {Tuple{1, 0}}, Tuple{0, 0});
  CHECK_THROWS_AS(matrical_polymorphism(ROp::proj(d2, 0), leq, outside), ColumnNotInRelation);

  // Eventual-set anchoring: explicit small sets certify, failures are exact.
  const EvSet consts = EvSet::explicit_set(d2, {thr(d2, {}, 0), thr(d2, {}, 1)});
  const EvMatrix om = EvMatrix::from_columns(
      d2, std::vector<EvThread>{thr(d2, {}, 1)}, thr(d2, {}, 0));
  const GPolyBounds gb;
  CHECK(matrical_polymorphism(ROp::proj(d2, 0), consts, om, gb).ok());
  const EvSet lone = EvSet::explicit_set(d2, {thr(d2, {}, 1)});
  const EvMatrix lm = EvMatrix::from_columns(
      d2, std::vector<EvThread>{thr(d2, {}, 1)}, thr(d2, {}, 1));
  const PolVerdict drop = matrical_polymorphism(ROp(d2, 0, Tuple{0, 0}), lone, lm, gb);
  CHECK(drop.kind == PolVerdict::Kind::FailsWith);
}

TEST_CASE("width-capped and finitary invariants coincide on cut families") {
  FiniteDomain d2(2);

  const CloneInclusionReport diag =
      theorem_clone_inclusion_check(d2, {DecSeq::diagonal(d2)}, 2, 2, 2);
  CHECK(diag.inclusion);
  CHECK(diag.equality);
  REQUIRE(diag.lhs_sizes.size() == 3);
  CHECK(diag.lhs_sizes == diag.rhs_sizes);
  CHECK(diag.violation.empty());

  const FinRel leq = FinRel::of(d2, 2, {Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}});
  const CloneInclusionReport order =
      theorem_clone_inclusion_check(d2, {DecSeq::from_finitary(leq)}, 2, 2, 2);
  CHECK(order.inclusion);
  CHECK(order.equality);

  const CloneInclusionReport both = theorem_clone_inclusion_check(
      d2, {DecSeq::diagonal(d2), DecSeq::from_finitary(leq)}, 2, 2, 2);
  CHECK(both.inclusion);
}
