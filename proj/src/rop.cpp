#include "wb/rop.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "wb/errors.hpp"

namespace wb {

namespace {
std::uint64_t head_size(FiniteDomain d, int width) {
  if (width < 0) throw ArityMismatch("negative width");
  return pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(width)) *
         static_cast<std::uint64_t>(d.size);
}
}  // namespace

ROp::ROp(FiniteDomain domain, int width, Tuple head)
    : domain_(domain), width_(width), head_(std::move(head)) {
  if (head_.size() != head_size(domain_, width_))
    throw ArityMismatch("head table size does not match width");
  for (Val v : head_)
    if (v >= domain_.size) throw IndexOutOfRange("head value outside domain");
}

ROp ROp::top_ext(const FinOp& f) {
  const FiniteDomain d = f.domain();
  const int w = f.arity();
  Tuple head(head_size(d, w));
  const std::uint64_t prefixes =
      pow_checked(static_cast<std::uint64_t>(d.size), static_cast<unsigned>(w));
  for (std::uint64_t r = 0; r < prefixes; ++r)
    for (int c = 0; c < d.size; ++c)
      head[r * static_cast<std::uint64_t>(d.size) + static_cast<std::uint64_t>(c)] = f.at(r);
  return ROp(d, w, std::move(head));
}

ROp ROp::proj(FiniteDomain domain, int n) {
  if (n < 0) throw IndexOutOfRange("negative projection index");
  const int w = n + 1;
  Tuple head(head_size(domain, w));
  const std::uint64_t prefixes =
      pow_checked(static_cast<std::uint64_t>(domain.size), static_cast<unsigned>(w));
  for (std::uint64_t r = 0; r < prefixes; ++r) {
    const Tuple x = unrank(r, w, domain.size);
    for (int c = 0; c < domain.size; ++c)
      head[r * static_cast<std::uint64_t>(domain.size) + static_cast<std::uint64_t>(c)] =
          x[static_cast<size_t>(n)];
  }
  return ROp(domain, w, std::move(head));
}

ROp ROp::tail_reader(FiniteDomain domain) {
  Tuple head(static_cast<size_t>(domain.size));
  for (int c = 0; c < domain.size; ++c) head[static_cast<size_t>(c)] = static_cast<Val>(c);
  return ROp(domain, 0, std::move(head));
}

ROp ROp::constant(FiniteDomain domain, Val c) {
  if (c >= domain.size) throw IndexOutOfRange("constant outside domain");
  return ROp(domain, 0, Tuple(static_cast<size_t>(domain.size), c));
}

Val ROp::eval(const EvThread& s) const {
  if (s.domain() != domain_) throw DomainMismatch("eval: mixed domains");
  std::uint64_t r = 0;
  for (int i = 0; i < width_; ++i)
    r = r * static_cast<std::uint64_t>(domain_.size) + s.at(static_cast<size_t>(i));
  return head_[r * static_cast<std::uint64_t>(domain_.size) + s.tail()];
}

Val ROp::head_at(std::span<const Val> x, Val c) const {
  if (static_cast<int>(x.size()) != width_) throw ArityMismatch("head_at: wrong prefix length");
  return head_[rank_of(x, domain_.size) * static_cast<std::uint64_t>(domain_.size) + c];
}

ROp ROp::padded(int w) const {
  if (w < width_) throw ArityMismatch("padded: cannot shrink width");
  if (w == width_) return *this;
  Tuple head(head_size(domain_, w));
  const std::uint64_t prefixes =
      pow_checked(static_cast<std::uint64_t>(domain_.size), static_cast<unsigned>(w));
  Tuple x(static_cast<size_t>(w), 0);
  for (std::uint64_t r = 0; r < prefixes; ++r) {
    const Tuple full = unrank(r, w, domain_.size);
    std::uint64_t base = 0;
    for (int i = 0; i < width_; ++i)
      base = base * static_cast<std::uint64_t>(domain_.size) + full[static_cast<size_t>(i)];
    for (int c = 0; c < domain_.size; ++c)
      head[r * static_cast<std::uint64_t>(domain_.size) + static_cast<std::uint64_t>(c)] =
          head_[base * static_cast<std::uint64_t>(domain_.size) + static_cast<std::uint64_t>(c)];
  }
  return ROp(domain_, w, std::move(head));
}

ROp ROp::canonical() const {
  ROp cur = *this;
  while (cur.width_ > 0) {
    // Position width-1 is the second-least significant digit of the head
    // index (the tail is least significant).
    const std::uint64_t q = static_cast<std::uint64_t>(cur.domain_.size);
    const std::uint64_t outer = cur.head_.size() / (q * q);
    bool ignored = true;
    for (std::uint64_t hi = 0; hi < outer && ignored; ++hi)
      for (std::uint64_t c = 0; c < q && ignored; ++c) {
        const Val v0 = cur.head_[(hi * q + 0) * q + c];
        for (std::uint64_t xv = 1; xv < q; ++xv)
          if (cur.head_[(hi * q + xv) * q + c] != v0) {
            ignored = false;
            break;
          }
      }
    if (!ignored) break;
    Tuple head(outer * q);
    for (std::uint64_t hi = 0; hi < outer; ++hi)
      for (std::uint64_t c = 0; c < q; ++c) head[hi * q + c] = cur.head_[(hi * q) * q + c];
    cur = ROp(cur.domain_, cur.width_ - 1, std::move(head));
  }
  return cur;
}

std::string ROp::to_string() const {
  return "rop w=" + std::to_string(width_) + ":" + tuple_to_string(head_);
}

bool rop_equal(const ROp& a, const ROp& b) {
  if (a.domain() != b.domain()) return false;
  const int w = std::max(a.width(), b.width());
  return a.padded(w).head() == b.padded(w).head();
}

ROp q_n(const ROp& phi, const std::vector<ROp>& psis) {
  const FiniteDomain d = phi.domain();
  for (const ROp& p : psis)
    if (p.domain() != d) throw DomainMismatch("q_n: mixed domains");
  const int n = static_cast<int>(psis.size());
  int w = std::max(phi.width(), n);
  for (const ROp& p : psis) w = std::max(w, p.width());
  const std::uint64_t q = static_cast<std::uint64_t>(d.size);
  const std::uint64_t prefixes = pow_checked(q, static_cast<unsigned>(w));
  Tuple head(prefixes * q);
  Tuple x(static_cast<size_t>(w), 0);
  Tuple u(static_cast<size_t>(phi.width()));
  std::uint64_t r = 0;
  do {
    for (int c = 0; c < d.size; ++c) {
      // Coordinates of s[psi_0(s), ..., psi_{n-1}(s)] that phi reads.
      for (int j = 0; j < phi.width(); ++j) {
        if (j < n)
          u[static_cast<size_t>(j)] = psis[static_cast<size_t>(j)].head_at(
              std::span<const Val>(x.data(), static_cast<size_t>(psis[static_cast<size_t>(j)].width())),
              static_cast<Val>(c));
        else
          u[static_cast<size_t>(j)] = x[static_cast<size_t>(j)];
      }
      head[r * q + static_cast<std::uint64_t>(c)] = phi.head_at(u, static_cast<Val>(c));
    }
    ++r;
  } while (odometer_next(x, d.size));
  return ROp(d, w, std::move(head));
}

ROp q_inf(const ROp& phi, const OpSeq& seq) {
  const FiniteDomain d = phi.domain();
  if (seq.tail_op.domain() != d) throw DomainMismatch("q_inf: mixed domains");
  for (const ROp& p : seq.prefix)
    if (p.domain() != d) throw DomainMismatch("q_inf: mixed domains");
  const size_t m = seq.prefix.size();
  int w = seq.tail_op.width();
  for (const ROp& p : seq.prefix) w = std::max(w, p.width());
  const std::uint64_t q = static_cast<std::uint64_t>(d.size);
  const std::uint64_t prefixes = pow_checked(q, static_cast<unsigned>(w));
  Tuple head(prefixes * q);
  Tuple x(static_cast<size_t>(w), 0);
  Tuple u(static_cast<size_t>(phi.width()));
  std::uint64_t r = 0;
  do {
    for (int c = 0; c < d.size; ++c) {
      auto value_of = [&](const ROp& p) {
        return p.head_at(std::span<const Val>(x.data(), static_cast<size_t>(p.width())),
                         static_cast<Val>(c));
      };
      const Val t = value_of(seq.tail_op);
      for (int j = 0; j < phi.width(); ++j)
        u[static_cast<size_t>(j)] =
            (static_cast<size_t>(j) < m) ? value_of(seq.prefix[static_cast<size_t>(j)]) : t;
      head[r * q + static_cast<std::uint64_t>(c)] = phi.head_at(u, t);
    }
    ++r;
  } while (odometer_next(x, d.size));
  return ROp(d, w, std::move(head));
}

std::vector<FinOp> fin_of(const std::vector<ROp>& ops, int arity_cap) {
  std::vector<FinOp> out;
  std::set<std::pair<int, Tuple>> seen;
  for (const ROp& raw : ops) {
    const ROp op = raw.canonical();
    const FiniteDomain d = op.domain();
    const std::uint64_t q = static_cast<std::uint64_t>(d.size);
    // Tail-independence is necessary: a top extension never reads the tail.
    bool tail_free = true;
    for (std::uint64_t r = 0; r < op.head().size() / q && tail_free; ++r)
      for (std::uint64_t c = 1; c < q; ++c)
        if (op.head()[r * q + c] != op.head()[r * q]) {
          tail_free = false;
          break;
        }
    if (!tail_free || op.width() > arity_cap) continue;
    const std::uint64_t base_inputs = op.head().size() / q;
    Tuple base(base_inputs);
    for (std::uint64_t r = 0; r < base_inputs; ++r) base[r] = op.head()[r * q];
    for (int k = op.width(); k <= arity_cap; ++k) {
      // f(x) = head(x_0..x_{w-1}); higher arities read only the first w.
      const std::uint64_t inputs = pow_checked(q, static_cast<unsigned>(k));
      const std::uint64_t drop = pow_checked(q, static_cast<unsigned>(k - op.width()));
      Tuple table(inputs);
      for (std::uint64_t r = 0; r < inputs; ++r) table[r] = base[r / drop];
      if (seen.insert({k, table}).second) out.emplace_back(d, k, std::move(table));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ROp> generate_omega_clone(FiniteDomain domain, const std::vector<ROp>& generators,
                                      int width_cap) {
  std::vector<ROp> members;
  std::set<std::pair<int, Tuple>> seen;
  auto add = [&](const ROp& raw) {
    const ROp op = raw.canonical();
    if (op.width() > width_cap) return;
    if (seen.insert({op.width(), op.head()}).second) members.push_back(op);
  };
  for (int i = 0; i < width_cap; ++i) add(ROp::proj(domain, i));
  for (const ROp& g : generators) {
    if (g.domain() != domain) throw DomainMismatch("generate_omega_clone: mixed domains");
    add(g);
  }

  // Worklist: all (outer, operand tuple) combinations whose maximal member
  // index equals the index being processed are new.
  for (size_t idx = 0; idx < members.size(); ++idx) {
    for (int n = 0; n <= width_cap; ++n) {
      std::vector<size_t> pick(static_cast<size_t>(n) + 1);  // pick[0] = outer
      pick.assign(static_cast<size_t>(n) + 1, 0);
      while (true) {
        bool uses_idx = false;
        for (size_t v : pick)
          if (v == idx) uses_idx = true;
        if (uses_idx) {
          std::vector<ROp> psis;
          psis.reserve(static_cast<size_t>(n));
          for (int j = 0; j < n; ++j) psis.push_back(members[pick[static_cast<size_t>(j) + 1]]);
          add(q_n(members[pick[0]], psis));
        }
        bool more = false;
        for (size_t j = pick.size(); j-- > 0;) {
          if (++pick[j] <= idx) {
            more = true;
            break;
          }
          pick[j] = 0;
        }
        if (!more) break;
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

// ----------------------------------------------------------- axiom suite

namespace {

std::vector<ROp> all_rops(FiniteDomain d, int width) {
  const std::uint64_t entries = head_size(d, width);
  if (entries > 24) throw CapExceeded("axiom_suite: exhaustive head space too large");
  std::vector<ROp> out;
  Tuple head(entries, 0);
  do {
    out.emplace_back(d, width, head);
  } while (odometer_next(head, d.size));
  return out;
}

ROp random_rop(FiniteDomain d, int width, std::mt19937_64& rng) {
  Tuple head(head_size(d, width));
  for (Val& v : head) v = static_cast<Val>(rng() % static_cast<std::uint64_t>(d.size));
  return ROp(d, width, std::move(head));
}

OpSeq random_seq(FiniteDomain d, int width, int max_prefix, std::mt19937_64& rng) {
  OpSeq seq{.prefix = {}, .tail_op = random_rop(d, width, rng)};
  const size_t len = rng() % static_cast<std::uint64_t>(max_prefix + 1);
  for (size_t i = 0; i < len; ++i) seq.prefix.push_back(random_rop(d, width, rng));
  return seq;
}

std::string seq_str(const OpSeq& s) {
  std::string out = "[";
  for (const ROp& p : s.prefix) out += p.to_string() + " ";
  out += "| " + s.tail_op.to_string() + "]";
  return out;
}

}  // namespace

AxiomReport axiom_suite(FiniteDomain domain, AxiomKind kind, const SamplePlan& plan) {
  AxiomReport rep;
  rep.kind = kind;
  rep.pass = true;

  AxiomKind effective = kind;
  if (kind == AxiomKind::N2) {
    // The substitution-invariance law has no finite presentation over head
    // tables; its finitary instance C3 stands in for it.
    rep.surrogate = true;
    effective = AxiomKind::C3;
  }

  std::mt19937_64 rng(plan.seed);
  std::vector<ROp> pool;
  std::vector<OpSeq> seqs;
  if (plan.exhaustive) {
    pool = all_rops(domain, plan.width_cap);
  } else {
    for (int i = 0; i < plan.samples; ++i) pool.push_back(random_rop(domain, plan.width_cap, rng));
  }
  const auto fail = [&](const std::string& what) {
    rep.pass = false;
    if (rep.counterexample.empty()) rep.counterexample = what;
  };

  switch (effective) {
    case AxiomKind::C1: {
      for (int n = 0; n <= plan.n_max; ++n)
        for (int i = 0; i < n; ++i) {
          const ROp e = ROp::proj(domain, i);
          std::vector<size_t> pick(static_cast<size_t>(n), 0);
          bool more = !pool.empty();
          while (more && n > 0) {
            std::vector<ROp> psis;
            for (size_t v : pick) psis.push_back(pool[v]);
            ++rep.instances;
            if (!rop_equal(q_n(e, psis), psis[static_cast<size_t>(i)]))
              fail("q_" + std::to_string(n) + "(e_" + std::to_string(i) + ", ...) != psi_i");
            more = false;
            for (size_t j = pick.size(); j-- > 0;) {
              if (++pick[j] < pool.size()) {
                more = true;
                break;
              }
              pick[j] = 0;
            }
            if (!plan.exhaustive && rep.instances >= static_cast<std::uint64_t>(plan.samples))
              more = false;
          }
        }
      break;
    }
    case AxiomKind::C2: {
      for (int n = 0; n <= plan.n_max; ++n)
        for (int i = n; i <= plan.n_max + 2; ++i) {
          const ROp e = ROp::proj(domain, i);
          std::vector<size_t> pick(static_cast<size_t>(n), 0);
          bool more = true;
          while (more) {
            std::vector<ROp> psis;
            for (size_t v : pick) psis.push_back(pool[v]);
            ++rep.instances;
            if (!rop_equal(q_n(e, psis), e))
              fail("q_" + std::to_string(n) + "(e_" + std::to_string(i) + ", ...) != e_i");
            more = false;
            for (size_t j = pick.size(); j-- > 0;) {
              if (++pick[j] < pool.size()) {
                more = true;
                break;
              }
              pick[j] = 0;
            }
            if (!plan.exhaustive && rep.instances >= static_cast<std::uint64_t>(plan.samples))
              more = false;
          }
        }
      break;
    }
    case AxiomKind::C3: {
      for (const ROp& phi : pool)
        for (int n = 0; n <= plan.n_max; ++n) {
          std::vector<ROp> es;
          for (int i = 0; i < n; ++i) es.push_back(ROp::proj(domain, i));
          ++rep.instances;
          if (!rop_equal(q_n(phi, es), phi))
            fail("q_" + std::to_string(n) + "(" + phi.to_string() + ", e_0..e_{n-1}) != phi");
        }
      break;
    }
    case AxiomKind::C4: {
      for (int n = 0; n <= plan.n_max; ++n)
        for (int k = n; k <= plan.n_max + 1; ++k) {
          std::vector<size_t> pick(static_cast<size_t>(n) + 1, 0);  // phi + psis
          bool more = true;
          while (more) {
            const ROp& phi = pool[pick[0]];
            std::vector<ROp> psis;
            for (int j = 0; j < n; ++j) psis.push_back(pool[pick[static_cast<size_t>(j) + 1]]);
            std::vector<ROp> extended = psis;
            for (int i = n; i < k; ++i) extended.push_back(ROp::proj(domain, i));
            ++rep.instances;
            if (!rop_equal(q_n(phi, psis), q_n(phi, extended)))
              fail("padding " + std::to_string(n) + "->" + std::to_string(k) + " changed " +
                   phi.to_string());
            more = false;
            for (size_t j = pick.size(); j-- > 0;) {
              if (++pick[j] < pool.size()) {
                more = true;
                break;
              }
              pick[j] = 0;
            }
            if (!plan.exhaustive && rep.instances >= static_cast<std::uint64_t>(plan.samples))
              more = false;
          }
        }
      break;
    }
    case AxiomKind::C5: {
      for (int n = 0; n <= plan.n_max; ++n) {
        std::vector<size_t> pick(static_cast<size_t>(2 * n) + 1, 0);
        bool more = true;
        while (more) {
          const ROp& phi = pool[pick[0]];
          std::vector<ROp> psis, chis;
          for (int j = 0; j < n; ++j) {
            psis.push_back(pool[pick[static_cast<size_t>(j) + 1]]);
            chis.push_back(pool[pick[static_cast<size_t>(n + j) + 1]]);
          }
          std::vector<ROp> inner;
          for (int j = 0; j < n; ++j) inner.push_back(q_n(psis[static_cast<size_t>(j)], chis));
          ++rep.instances;
          if (!rop_equal(q_n(q_n(phi, psis), chis), q_n(phi, inner)))
            fail("associativity failed at n=" + std::to_string(n) + " phi=" + phi.to_string());
          more = false;
          for (size_t j = pick.size(); j-- > 0;) {
            if (++pick[j] < pool.size()) {
              more = true;
              break;
            }
            pick[j] = 0;
          }
          if (!plan.exhaustive && rep.instances >= static_cast<std::uint64_t>(plan.samples))
            more = false;
        }
      }
      break;
    }
    case AxiomKind::N1: {
      const int count = plan.exhaustive ? static_cast<int>(pool.size()) : plan.samples;
      for (int i = 0; i < count; ++i) {
        const OpSeq seq = random_seq(domain, plan.width_cap, 2, rng);
        const int n = static_cast<int>(rng() % 4);
        ++rep.instances;
        if (!rop_equal(q_inf(ROp::proj(domain, n), seq), seq.at(static_cast<size_t>(n))))
          fail("q(e_" + std::to_string(n) + ", " + seq_str(seq) + ") != seq[n]");
      }
      break;
    }
    case AxiomKind::N3: {
      const int count = plan.exhaustive ? static_cast<int>(pool.size()) : plan.samples;
      for (int i = 0; i < count; ++i) {
        const ROp phi = random_rop(domain, plan.width_cap, rng);
        const OpSeq psis = random_seq(domain, plan.width_cap, 2, rng);
        const OpSeq chis = random_seq(domain, plan.width_cap, 2, rng);
        OpSeq mapped{.prefix = {}, .tail_op = q_inf(psis.tail_op, chis)};
        for (const ROp& p : psis.prefix) mapped.prefix.push_back(q_inf(p, chis));
        ++rep.instances;
        if (!rop_equal(q_inf(q_inf(phi, psis), chis), q_inf(phi, mapped)))
          fail("q(q(phi, psis), chis) != q(phi, q(psi_i, chis)) at phi=" + phi.to_string());
      }
      break;
    }
    case AxiomKind::N2:
      break;  // handled via surrogate above
  }
  return rep;
}

FinOp finitary_approximation(const ROp& phi, const std::vector<EvThread>& d, Val fallback) {
  const FiniteDomain dom = phi.domain();
  if (fallback >= dom.size) throw IndexOutOfRange("fallback outside domain");
  std::vector<EvThread> ds;
  for (const EvThread& s : d) {
    if (s.domain() != dom) throw DomainMismatch("finitary_approximation: mixed domains");
    if (std::find(ds.begin(), ds.end(), s) == ds.end()) ds.push_back(s);
  }
  if (ds.empty()) return FinOp::constant(dom, fallback);

  // Least n whose prefixes separate the set; distinct eventually constant
  // threads always differ within max prefix length + 1 coordinates.
  size_t bound = 1;
  for (const EvThread& s : ds) bound = std::max(bound, s.prefix().size() + 1);
  size_t n = 0;
  for (; n <= bound; ++n) {
    std::set<Tuple> prefixes;
    bool ok = true;
    for (const EvThread& s : ds)
      if (!prefixes.insert(s.take(n)).second) {
        ok = false;
        break;
      }
    if (ok) break;
  }

  const std::uint64_t inputs =
      pow_checked(static_cast<std::uint64_t>(dom.size), static_cast<unsigned>(n));
  Tuple table(inputs, fallback);
  for (const EvThread& s : ds)
    table[rank_of(s.take(n), dom.size)] = phi.eval(s);
  return FinOp(dom, static_cast<int>(n), std::move(table));
}

}  // namespace wb
