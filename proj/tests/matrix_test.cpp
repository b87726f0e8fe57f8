#include <set>
#include <vector>

#include "doctest.h"
#include "wb/domain.hpp"
#include "wb/errors.hpp"
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

}  // namespace

TEST_CASE("infinite-shape matrices strip trailing tail rows") {
  FiniteDomain d2(2);
  const EvThread tail = thr(d2, {}, 1);
  const EvMatrix m(d2, {thr(d2, {0}, 1), thr(d2, {}, 1)}, tail);
  CHECK(m.is_omega());
  CHECK(m.lead_rows() == 1);  // the second row equals the tail row
  CHECK(m.row(0) == thr(d2, {0}, 1));
  CHECK(m.to_string() == "[0 | 1 ;; | 1]");

  const EvMatrix bare(d2, {}, tail);
  CHECK(bare.lead_rows() == 0);
  CHECK(bare.to_string() == "[;; | 1]");

  const EvMatrix fin(d2, {thr(d2, {0}, 1), thr(d2, {}, 1)});
  CHECK(!fin.is_omega());
  CHECK(fin.lead_rows() == 2);  // finite shape keeps every row
  CHECK(fin.to_string() == "[0 | 1 ; | 1]");
  CHECK_THROWS_AS(fin.row(2), IndexOutOfRange);
}

TEST_CASE("column construction round-trips") {
  FiniteDomain d2(2);

  SUBCASE("finite shape") {
    const std::vector<Tuple> cols = {{0, 1}, {1, 1}};
    const Tuple eventual{0, 1};
    const EvMatrix m = EvMatrix::from_columns(d2, cols, eventual);
    CHECK(!m.is_omega());
    CHECK(m.lead_rows() == 2);
    CHECK(m.column_fin(0) == cols[0]);
    CHECK(m.column_fin(1) == cols[1]);
    CHECK(m.column_fin(2) == eventual);
    CHECK(m.column_fin(100) == eventual);
    CHECK(m.eventual_column_fin() == eventual);
    CHECK(m.stable_cols() == 2);
    // Row 0 reads 0,1 then 0 forever; row 1 reads 1,1 then 1 forever.
    CHECK(m.row(0) == thr(d2, {0, 1}, 0));
    CHECK(m.row(1) == thr(d2, {}, 1));
    CHECK_THROWS_AS(EvMatrix::from_columns(d2, {Tuple{0}}, eventual), ShapeMismatch);
  }

  SUBCASE("infinite shape") {
    const EvThread c0 = thr(d2, {1}, 0), ev = thr(d2, {}, 1);
    const EvMatrix m = EvMatrix::from_columns(d2, std::vector<EvThread>{c0}, ev);
    CHECK(m.is_omega());
    CHECK(m.column_omega(0) == c0);
    CHECK(m.column_omega(5) == ev);
    CHECK(m.eventual_column_omega() == ev);
    CHECK(m.stable_cols() == 1);
    // Row i is (c0_i, ev_i, ev_i, ...): row 0 = 1 then 1s, row 1+ = 0 then 1s.
    CHECK(m.row(0) == thr(d2, {}, 1));
    CHECK(m.tail_row().value() == thr(d2, {0}, 1));
  }
}

TEST_CASE("columns stabilize at the reported index") {
  FiniteDomain d3(3);
  const EvMatrix m(d3, {thr(d3, {2, 0, 1}, 0), thr(d3, {1}, 2)});
  const size_t sc = m.stable_cols();
  CHECK(sc == 3);  // the longest row prefix
  for (size_t j = sc; j < sc + 4; ++j) CHECK(m.column_fin(j) == m.eventual_column_fin());
  CHECK(m.column_fin(sc - 1) != m.eventual_column_fin());
}

TEST_CASE("row-wise application evaluates each row") {
  FiniteDomain d2(2);
  const ROp xo = ROp::top_ext(FinOp(d2, 2, Tuple{0, 1, 1, 0}));

  const EvMatrix fin(d2, {thr(d2, {0, 1}, 0), thr(d2, {1}, 0), thr(d2, {}, 1)});
  const Tuple img = fin.apply_fin(xo);
  REQUIRE(img.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(img[i] == xo.eval(fin.row(i)));
  CHECK_THROWS_AS(fin.apply_omega(xo), ShapeMismatch);

  const EvMatrix om(d2, {thr(d2, {0, 1}, 0)}, thr(d2, {1}, 0));
  const EvThread oimg = om.apply_omega(xo);
  CHECK(oimg.at(0) == xo.eval(om.row(0)));
  for (size_t i = 1; i < 6; ++i) CHECK(oimg.at(i) == xo.eval(om.tail_row().value()));
  CHECK_THROWS_AS(om.apply_fin(xo), ShapeMismatch);
  CHECK_THROWS_AS(om.column_fin(0), ShapeMismatch);
  CHECK_THROWS_AS(fin.column_omega(0), ShapeMismatch);
}

TEST_CASE("images depend on the leading columns and the eventual column only") {
  FiniteDomain d2(2);
  const ROp phi(d2, 2, Tuple{0, 1, 1, 1, 1, 0, 0, 1});  // width 2, reads the tail too
  const std::vector<Tuple> lead = {{0, 1}, {1, 0}};
  const EvMatrix a = EvMatrix::from_columns(d2, lead, Tuple{1, 1});
  // Same two leading columns and eventual column, different padding in between.
  std::vector<Tuple> padded = lead;
  padded.push_back(Tuple{0, 0});
  padded.push_back(Tuple{1, 1});
  const EvMatrix b = EvMatrix::from_columns(d2, padded, Tuple{1, 1});
  CHECK(a != b);  // column 2 differs
  CHECK(a.apply_fin(phi) == b.apply_fin(phi));
  // Changing the eventual column changes the tails phi reads.
  const EvMatrix c = EvMatrix::from_columns(d2, lead, Tuple{1, 0});
  CHECK(a.apply_fin(phi) != c.apply_fin(phi));
}

TEST_CASE("substitution replaces exactly the leading columns") {
  FiniteDomain d2(2);
  const std::vector<Tuple> cols = {{0, 0}, {1, 1}};
  const EvMatrix m = EvMatrix::from_columns(d2, cols, Tuple{0, 1});
  const EvMatrix s = m.substitute_columns({Tuple{1, 0}});
  CHECK(s.column_fin(0) == Tuple{1, 0});
  CHECK(s.column_fin(1) == cols[1]);
  CHECK(s.eventual_column_fin() == Tuple{0, 1});
  CHECK_THROWS_AS(m.substitute_columns({Tuple{1, 0, 0}}), ShapeMismatch);

  const EvMatrix om(d2, {thr(d2, {0}, 1)}, thr(d2, {}, 0));
  const EvMatrix os = om.substitute_columns(std::vector<EvThread>{thr(d2, {}, 1), thr(d2, {1}, 0)});
  CHECK(os.column_omega(0) == thr(d2, {}, 1));
  CHECK(os.column_omega(1) == thr(d2, {1}, 0));
  CHECK(os.column_omega(7) == om.column_omega(7));
  CHECK_THROWS_AS(om.substitute_columns({Tuple{1}}), ShapeMismatch);
}

TEST_CASE("row injectivity") {
  FiniteDomain d2(2);
  CHECK(EvMatrix(d2, {thr(d2, {0}, 1), thr(d2, {}, 1)}).row_injective());
  CHECK(!EvMatrix(d2, {thr(d2, {0}, 1), thr(d2, {0}, 1)}).row_injective());
  // An infinite-shape matrix repeats its tail row.
  CHECK(!EvMatrix(d2, {thr(d2, {0}, 1)}, thr(d2, {}, 0)).row_injective());
  CHECK(!EvMatrix(d2, {}, thr(d2, {}, 0)).row_injective());
}

TEST_CASE("matrix enumeration by column pool") {
  FiniteDomain d3(3);
  const std::vector<Tuple> pool = {{0}, {1}, {2}};
  const auto ms = enumerate_matrices(d3, pool, 2);
  // One eventual column, then lead sequences whose last entry differs from it.
  CHECK(ms.size() == 9);
  std::set<std::string> seen;
  for (const EvMatrix& m : ms) {
    CHECK(!m.is_omega());
    CHECK(m.stable_cols() <= 1);  // lead count + 1 stays within max_distinct_cols
    if (m.stable_cols() > 0) CHECK(m.column_fin(m.stable_cols() - 1) != m.eventual_column_fin());
    seen.insert(m.to_string());
  }
  CHECK(seen.size() == ms.size());

  FiniteDomain d2(2);
  const std::vector<Tuple> two = {{0}, {1}};
  CHECK(enumerate_matrices(d2, two, 1).size() == 2);  // eventual column only
  // l lead columns with a free choice except the last: 2 * (1 + 1 + 2) = 8.
  CHECK(enumerate_matrices(d2, two, 3).size() == 8);

  const std::vector<EvThread> tpool = {thr(d2, {}, 0), thr(d2, {}, 1)};
  const auto oms = enumerate_matrices(d2, tpool, 2);
  CHECK(oms.size() == 4);
  for (const EvMatrix& m : oms) CHECK(m.is_omega());
}

TEST_CASE("row-injective enumeration counts row sets") {
  FiniteDomain d2(2);
  // 8 canonical threads of prefix length <= 2: row sets of size 1 or 2.
  const auto ms = enumerate_row_injective(d2, 2, 2);
  CHECK(ms.size() == 8 + 28);
  std::set<std::string> seen;
  for (const EvMatrix& m : ms) {
    CHECK(m.row_injective());
    CHECK(!m.is_omega());
    CHECK(m.lead_rows() <= 2);
    bool sorted = true;
    for (size_t i = 1; i < m.lead_rows(); ++i)
      if (!(m.row(i - 1) < m.row(i))) sorted = false;
    CHECK(sorted);
    seen.insert(m.to_string());
  }
  CHECK(seen.size() == ms.size());

  CHECK(enumerate_row_injective(d2, 3, 3).size() == 16 + 120 + 560);
}

TEST_CASE("matrix ordering and equality") {
  FiniteDomain d2(2);
  const EvMatrix a(d2, {thr(d2, {0}, 1)});
  const EvMatrix b(d2, {thr(d2, {0}, 1)});
  const EvMatrix c(d2, {thr(d2, {1}, 0)});
  CHECK(a == b);
  CHECK(a != c);
  CHECK((a < c || c < a));
  CHECK(!(a < b));
  // Canonically equal representations compare equal.
  const EvMatrix d(d2, {thr(d2, {0}, 1), thr(d2, {}, 0)}, thr(d2, {}, 0));
  const EvMatrix e(d2, {thr(d2, {0}, 1)}, thr(d2, {}, 0));
  CHECK(d == e);
}
