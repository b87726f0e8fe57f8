#include "wb/matrix.hpp"

#include <algorithm>

#include "wb/errors.hpp"

namespace wb {

EvMatrix::EvMatrix(FiniteDomain domain, std::vector<EvThread> rows,
                   std::optional<EvThread> tail_row)
    : domain_(domain), rows_(std::move(rows)), tail_row_(std::move(tail_row)) {
  for (const EvThread& r : rows_)
    if (r.domain() != domain_) throw DomainMismatch("matrix row domain");
  if (tail_row_) {
    if (tail_row_->domain() != domain_) throw DomainMismatch("matrix tail row domain");
    while (!rows_.empty() && rows_.back() == *tail_row_) rows_.pop_back();
  }
}

EvMatrix EvMatrix::from_columns(FiniteDomain domain, const std::vector<Tuple>& cols,
                                const Tuple& eventual) {
  const size_t alpha = eventual.size();
  for (const Tuple& c : cols)
    if (c.size() != alpha) throw ShapeMismatch("column length differs from eventual column");
  std::vector<EvThread> rows;
  rows.reserve(alpha);
  for (size_t i = 0; i < alpha; ++i) {
    Tuple prefix;
    prefix.reserve(cols.size());
    for (const Tuple& c : cols) prefix.push_back(c[i]);
    rows.emplace_back(domain, std::move(prefix), eventual[i]);
  }
  return EvMatrix(domain, std::move(rows));
}

EvMatrix EvMatrix::from_columns(FiniteDomain domain, const std::vector<EvThread>& cols,
                                const EvThread& eventual) {
  size_t lead = eventual.prefix().size();
  for (const EvThread& c : cols) lead = std::max(lead, c.prefix().size());
  std::vector<EvThread> rows;
  rows.reserve(lead);
  for (size_t i = 0; i < lead; ++i) {
    Tuple prefix;
    prefix.reserve(cols.size());
    for (const EvThread& c : cols) prefix.push_back(c.at(i));
    rows.emplace_back(domain, std::move(prefix), eventual.at(i));
  }
  Tuple tail_prefix;
  tail_prefix.reserve(cols.size());
  for (const EvThread& c : cols) tail_prefix.push_back(c.tail());
  EvThread tail_row(domain, std::move(tail_prefix), eventual.tail());
  return EvMatrix(domain, std::move(rows), std::move(tail_row));
}

const EvThread& EvMatrix::row(size_t i) const {
  if (i < rows_.size()) return rows_[i];
  if (tail_row_) return *tail_row_;
  throw IndexOutOfRange("matrix row index");
}

size_t EvMatrix::stable_cols() const {
  size_t n = 0;
  for (const EvThread& r : rows_) n = std::max(n, r.prefix().size());
  if (tail_row_) n = std::max(n, tail_row_->prefix().size());
  return n;
}

Tuple EvMatrix::column_fin(size_t j) const {
  if (tail_row_) throw ShapeMismatch("finite column of an infinite-shape matrix");
  Tuple out;
  out.reserve(rows_.size());
  for (const EvThread& r : rows_) out.push_back(r.at(j));
  return out;
}

EvThread EvMatrix::column_omega(size_t j) const {
  if (!tail_row_) throw ShapeMismatch("infinite column of a finite-shape matrix");
  Tuple prefix;
  prefix.reserve(rows_.size());
  for (const EvThread& r : rows_) prefix.push_back(r.at(j));
  return EvThread(domain_, std::move(prefix), tail_row_->at(j));
}

Tuple EvMatrix::eventual_column_fin() const {
  if (tail_row_) throw ShapeMismatch("finite column of an infinite-shape matrix");
  Tuple out;
  out.reserve(rows_.size());
  for (const EvThread& r : rows_) out.push_back(r.tail());
  return out;
}

EvThread EvMatrix::eventual_column_omega() const {
  if (!tail_row_) throw ShapeMismatch("infinite column of a finite-shape matrix");
  Tuple prefix;
  prefix.reserve(rows_.size());
  for (const EvThread& r : rows_) prefix.push_back(r.tail());
  return EvThread(domain_, std::move(prefix), tail_row_->tail());
}

Tuple EvMatrix::apply_fin(const ROp& op) const {
  if (tail_row_) throw ShapeMismatch("finite application on an infinite-shape matrix");
  Tuple out;
  out.reserve(rows_.size());
  for (const EvThread& r : rows_) out.push_back(op.eval(r));
  return out;
}

EvThread EvMatrix::apply_omega(const ROp& op) const {
  if (!tail_row_) throw ShapeMismatch("infinite application on a finite-shape matrix");
  Tuple prefix;
  prefix.reserve(rows_.size());
  for (const EvThread& r : rows_) prefix.push_back(op.eval(r));
  return EvThread(domain_, std::move(prefix), op.eval(*tail_row_));
}

EvMatrix EvMatrix::substitute_columns(const std::vector<Tuple>& cols) const {
  if (tail_row_) throw ShapeMismatch("tuple columns into an infinite-shape matrix");
  for (const Tuple& c : cols)
    if (c.size() != rows_.size()) throw ShapeMismatch("substituted column length");
  std::vector<EvThread> rows;
  rows.reserve(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    Tuple head;
    head.reserve(cols.size());
    for (const Tuple& c : cols) head.push_back(c[i]);
    rows.push_back(rows_[i].substitute(head));
  }
  return EvMatrix(domain_, std::move(rows));
}

EvMatrix EvMatrix::substitute_columns(const std::vector<EvThread>& cols) const {
  if (!tail_row_) throw ShapeMismatch("thread columns into a finite-shape matrix");
  for (const EvThread& c : cols)
    if (c.domain() != domain_) throw DomainMismatch("substituted column domain");
  size_t lead = rows_.size();
  for (const EvThread& c : cols) lead = std::max(lead, c.prefix().size());
  std::vector<EvThread> rows;
  rows.reserve(lead);
  for (size_t i = 0; i < lead; ++i) {
    Tuple head;
    head.reserve(cols.size());
    for (const EvThread& c : cols) head.push_back(c.at(i));
    rows.push_back(row(i).substitute(head));
  }
  Tuple tail_head;
  tail_head.reserve(cols.size());
  for (const EvThread& c : cols) tail_head.push_back(c.tail());
  return EvMatrix(domain_, std::move(rows), tail_row_->substitute(tail_head));
}

bool EvMatrix::row_injective() const {
  if (tail_row_) return false;
  for (size_t i = 0; i < rows_.size(); ++i)
    for (size_t j = i + 1; j < rows_.size(); ++j)
      if (rows_[i] == rows_[j]) return false;
  return true;
}

std::string EvMatrix::to_string() const {
  std::string out = "[";
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (i) out += " ; ";
    out += rows_[i].to_string();
  }
  if (tail_row_) {
    if (!rows_.empty()) out += " ";
    out += ";; " + tail_row_->to_string();
  }
  out += "]";
  return out;
}

bool EvMatrix::operator==(const EvMatrix& o) const {
  return domain_ == o.domain_ && rows_ == o.rows_ && tail_row_ == o.tail_row_;
}

bool EvMatrix::operator<(const EvMatrix& o) const {
  const bool a = tail_row_.has_value(), b = o.tail_row_.has_value();
  if (a != b) return b;
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (a) return *tail_row_ < *o.tail_row_;
  return false;
}

namespace {

// Lead columns c_0..c_{l-1} plus the eventual column, all from the pool,
// enumerated by l then pool indices; l >= 1 requires c_{l-1} != eventual so
// the same matrix never shows up under two lead lengths.
template <typename Col, typename Make>
std::vector<EvMatrix> enumerate_by_columns(const std::vector<Col>& pool, int max_distinct_cols,
                                           Make make) {
  std::vector<EvMatrix> out;
  if (pool.empty() || max_distinct_cols < 1) return out;
  for (int l = 0; l < max_distinct_cols; ++l) {
    std::vector<size_t> pick(static_cast<size_t>(l) + 1, 0);  // lead indices, then eventual
    while (true) {
      std::vector<Col> cols;
      for (int j = 0; j < l; ++j) cols.push_back(pool[pick[static_cast<size_t>(j)]]);
      const Col& eventual = pool[pick[static_cast<size_t>(l)]];
      if (l == 0 || !(cols.back() == eventual)) out.push_back(make(cols, eventual));
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
  return out;
}

}  // namespace

std::vector<EvMatrix> enumerate_matrices(FiniteDomain domain, const std::vector<Tuple>& pool,
                                         int max_distinct_cols) {
  return enumerate_by_columns(pool, max_distinct_cols,
                              [&](const std::vector<Tuple>& cols, const Tuple& eventual) {
                                return EvMatrix::from_columns(domain, cols, eventual);
                              });
}

std::vector<EvMatrix> enumerate_matrices(FiniteDomain domain, const std::vector<EvThread>& pool,
                                         int max_distinct_cols) {
  return enumerate_by_columns(pool, max_distinct_cols,
                              [&](const std::vector<EvThread>& cols, const EvThread& eventual) {
                                return EvMatrix::from_columns(domain, cols, eventual);
                              });
}

std::vector<EvMatrix> enumerate_row_injective(FiniteDomain domain, int alpha_max, int prefix_max) {
  const std::vector<EvThread> pool = enumerate_threads(domain, prefix_max);
  std::vector<EvMatrix> out;
  for (int alpha = 1; alpha <= alpha_max; ++alpha) {
    if (static_cast<size_t>(alpha) > pool.size()) break;
    std::vector<size_t> idx(static_cast<size_t>(alpha));
    for (int i = 0; i < alpha; ++i) idx[static_cast<size_t>(i)] = static_cast<size_t>(i);
    while (true) {
      std::vector<EvThread> rows;
      rows.reserve(idx.size());
      for (size_t v : idx) rows.push_back(pool[v]);
      out.emplace_back(domain, std::move(rows));
      // next strictly increasing index combination
      size_t j = idx.size();
      bool more = false;
      while (j-- > 0) {
        if (idx[j] + (idx.size() - j) < pool.size()) {
          ++idx[j];
          for (size_t k = j + 1; k < idx.size(); ++k) idx[k] = idx[k - 1] + 1;
          more = true;
          break;
        }
      }
      if (!more) break;
    }
  }
  return out;
}

}  // namespace wb
