#include "wb/thread.hpp"

#include "wb/errors.hpp"

namespace wb {

EvThread::EvThread(FiniteDomain domain, Tuple prefix, Val tail)
    : domain_(domain), prefix_(std::move(prefix)), tail_(tail) {
  if (tail_ >= domain_.size) throw IndexOutOfRange("tail outside domain");
  for (Val v : prefix_)
    if (v >= domain_.size) throw IndexOutOfRange("prefix value outside domain");
  while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
}

Tuple EvThread::take(size_t n) const {
  Tuple t(n);
  for (size_t i = 0; i < n; ++i) t[i] = at(i);
  return t;
}

EvThread EvThread::with_at(size_t i, Val v) const {
  Tuple p = prefix_;
  if (i >= p.size()) p.resize(i + 1, tail_);
  p[i] = v;
  return EvThread(domain_, std::move(p), tail_);
}

EvThread EvThread::substitute(std::span<const Val> a) const {
  Tuple p(a.begin(), a.end());
  for (size_t i = a.size(); i < prefix_.size(); ++i) p.push_back(prefix_[i]);
  return EvThread(domain_, std::move(p), tail_);
}

std::set<Val> EvThread::value_set() const {
  std::set<Val> vals(prefix_.begin(), prefix_.end());
  vals.insert(tail_);
  return vals;
}

std::string EvThread::to_string() const {
  std::string out;
  for (Val v : prefix_) {
    out += tuple_to_string(std::span<const Val>(&v, 1));
    out += ' ';
  }
  out += "| ";
  out += tuple_to_string(std::span<const Val>(&tail_, 1));
  return out;
}

std::vector<std::pair<size_t, Val>> restrict_to(const EvThread& s,
                                                const std::vector<size_t>& indices) {
  std::vector<std::pair<size_t, Val>> out;
  out.reserve(indices.size());
  std::set<size_t> sorted(indices.begin(), indices.end());
  for (size_t i : sorted) out.emplace_back(i, s.at(i));
  return out;
}

std::vector<EvThread> enumerate_threads(FiniteDomain domain, int max_prefix) {
  std::vector<EvThread> out;
  for (int len = 0; len <= max_prefix; ++len) {
    std::vector<Tuple> prefixes;
    Tuple p(static_cast<size_t>(len), 0);
    while (true) {
      prefixes.push_back(p);
      if (!odometer_next(p, domain.size)) break;
    }
    for (const Tuple& pre : prefixes)
      for (int t = 0; t < domain.size; ++t) {
        if (len > 0 && pre.back() == t) continue;  // not canonical
        out.emplace_back(domain, pre, static_cast<Val>(t));
      }
  }
  return out;
}

}  // namespace wb
