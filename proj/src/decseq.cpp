#include "wb/decseq.hpp"

#include <algorithm>
#include <deque>

#include "wb/errors.hpp"

namespace wb {

std::string Verdict::to_string() const {
  switch (kind) {
    case Kind::CertifiedIn:
      return "certified-in";
    case Kind::CertifiedOut:
      return "certified-out(cut=" + std::to_string(index) + ")";
    default:
      return "in-up-to-depth(" + std::to_string(index) + ")";
  }
}

struct DecSeq::State {
  FiniteDomain domain{1};
  std::function<FinRel(int)> producer;
  // deque: references handed out by cut() stay valid while the cache grows
  mutable std::deque<FinRel> cache;
  std::optional<int> stab;
  bool tight = false;
  std::function<std::optional<int>(const EvThread&)> decide;
  std::function<bool(const EvThread&)> certify;
  std::string label;
};

namespace {

bool certainly_in(const DecSeq& r, const EvThread& s) {
  return lim_membership(s, r, 0).is_in();
}

// The finitely supported extension of a coordinate permutation applied to a
// thread: coordinate i of the result reads coordinate sigma(i) of s.
EvThread permute_thread(const EvThread& s, const std::vector<int>& sigma) {
  const size_t m = sigma.size();
  const size_t len = std::max(m, s.prefix().size());
  Tuple prefix(len);
  for (size_t i = 0; i < len; ++i)
    prefix[i] = s.at(i < m ? static_cast<size_t>(sigma[i]) : i);
  return EvThread(s.domain(), std::move(prefix), s.tail());
}

}  // namespace

FiniteDomain DecSeq::domain() const { return st_->domain; }
std::optional<int> DecSeq::stabilization() const { return st_->stab; }
bool DecSeq::tight() const { return st_->tight; }
std::string DecSeq::describe() const { return st_->label; }

const FinRel& DecSeq::cut(int i) const {
  if (i < 0) throw IndexOutOfRange("negative cut index");
  auto& cache = st_->cache;
  while (static_cast<int>(cache.size()) <= i) {
    const int j = static_cast<int>(cache.size());
    FinRel r = st_->producer(j);
    if (r.domain() != st_->domain) throw DomainMismatch("cut domain");
    if (r.arity() != j) throw ShapeMismatch("cut arity differs from its index");
    if (j >= 1) {
      const FinRel widened = FinRel::product(cache.back(), FinRel::full(st_->domain, 1));
      if (!r.subset_of(widened))
        throw DecreasingViolation("cut " + std::to_string(j) +
                                  " is not contained in the previous cut times the domain");
    }
    cache.push_back(std::move(r));
  }
  return cache[static_cast<size_t>(i)];
}

std::optional<int> DecSeq::decision_bound(const EvThread& s) const {
  std::optional<int> bound = st_->stab;
  if (st_->decide) {
    const std::optional<int> b = st_->decide(s);
    if (b) bound = bound ? std::min(*bound, *b) : *b;
  }
  return bound;
}

bool DecSeq::member_certificate(const EvThread& s) const {
  return st_->certify && st_->certify(s);
}

DecSeq DecSeq::from_finitary(const FinRel& s) {
  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = s.domain();
  out.st_->producer = [s](int i) { return top_cut(s, i); };
  out.st_->stab = s.arity();
  out.st_->tight = true;
  out.st_->label = "cuts-of " + s.to_string();
  return out;
}

DecSeq DecSeq::diagonal(FiniteDomain d) {
  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = d;
  out.st_->producer = [d](int i) {
    return i == 0 ? FinRel::full(d, 0) : FinRel::diagonal(d, i);
  };
  out.st_->tight = true;
  // A thread constant on its prefix plus one tail position is constant.
  out.st_->decide = [](const EvThread& s) {
    return std::optional<int>(static_cast<int>(s.prefix().size()) + 1);
  };
  out.st_->label = "diagonal";
  return out;
}

DecSeq DecSeq::local_closure(const EvSet& set) {
  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = set.domain();
  out.st_->producer = [set](int i) { return set.cut(i); };
  out.st_->tight = true;
  if (set.is_explicit()) {
    size_t maxp = 0;
    for (const EvThread& m : set.members()) maxp = std::max(maxp, m.prefix().size());
    // Two threads agreeing past both prefixes are equal, so one cut at that
    // length pins s to a listed member.
    out.st_->decide = [maxp](const EvThread& s) {
      return std::optional<int>(static_cast<int>(std::max(maxp, s.prefix().size())) + 1);
    };
  } else {
    // The closure of an infinite family can exceed the family; listed
    // members certify themselves, anything else stays depth-bounded.
    out.st_->certify = [set](const EvThread& s) { return set.contains(s); };
  }
  out.st_->label = "closure " + set.to_string();
  return out;
}

DecSeq DecSeq::intersect(const DecSeq& a, const DecSeq& b) {
  if (a.domain() != b.domain()) throw DomainMismatch("intersect: mixed domains");
  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = a.domain();
  out.st_->producer = [a, b](int i) {
    return FinRel::intersect({a.cut(i), b.cut(i)});
  };
  if (a.stabilization() && b.stabilization())
    out.st_->stab = std::max(*a.stabilization(), *b.stabilization());
  out.st_->tight = false;  // joint extendability of a shared cut tuple can fail
  out.st_->decide = [a, b](const EvThread& s) -> std::optional<int> {
    const auto ba = a.decision_bound(s), bb = b.decision_bound(s);
    if (ba && bb) return std::max(*ba, *bb);
    return std::nullopt;
  };
  out.st_->certify = [a, b](const EvThread& s) {
    return certainly_in(a, s) && certainly_in(b, s);
  };
  out.st_->label = "(" + a.describe() + " and " + b.describe() + ")";
  return out;
}

DecSeq DecSeq::join(const DecSeq& a, const DecSeq& b) {
  if (a.domain() != b.domain()) throw DomainMismatch("join: mixed domains");
  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = a.domain();
  out.st_->producer = [a, b](int i) { return FinRel::unite({a.cut(i), b.cut(i)}); };
  if (a.stabilization() && b.stabilization())
    out.st_->stab = std::max(*a.stabilization(), *b.stabilization());
  out.st_->tight = a.tight() && b.tight();
  // Passing the single cut at the larger bound places the initial segment in
  // one side's cut, and decreasingness drags every shorter segment along.
  out.st_->decide = [a, b](const EvThread& s) -> std::optional<int> {
    const auto ba = a.decision_bound(s), bb = b.decision_bound(s);
    if (ba && bb) return std::max(*ba, *bb);
    return std::nullopt;
  };
  out.st_->certify = [a, b](const EvThread& s) {
    return certainly_in(a, s) || certainly_in(b, s);
  };
  out.st_->label = "(" + a.describe() + " or " + b.describe() + ")";
  return out;
}

DecSeq DecSeq::exists(const DecSeq& base, std::vector<int> constrained) {
  std::sort(constrained.begin(), constrained.end());
  constrained.erase(std::unique(constrained.begin(), constrained.end()), constrained.end());
  for (int c : constrained)
    if (c < 0) throw IndexOutOfRange("negative constrained coordinate");
  const int max_c = constrained.empty() ? -1 : constrained.back();
  const FiniteDomain d = base.domain();

  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = d;
  out.st_->producer = [base, constrained, d](int n) {
    const FinRel& s = base.cut(n);
    FinRel t = FinRel::empty(d, n);
    std::vector<bool> pinned(static_cast<size_t>(n), false);
    for (int c : constrained)
      if (c < n) pinned[static_cast<size_t>(c)] = true;
    for (const Tuple& u : s.tuples()) {
      Tuple cand = u;
      for (size_t i = 0; i < cand.size(); ++i)
        if (!pinned[i]) cand[i] = 0;
      while (true) {
        t.add(cand);
        // odometer over the unpinned coordinates only
        bool more = false;
        for (size_t i = cand.size(); i-- > 0;) {
          if (pinned[i]) continue;
          if (++cand[i] < d.size) {
            more = true;
            break;
          }
          cand[i] = 0;
        }
        if (!more) break;
      }
    }
    return t;
  };
  if (base.stabilization()) out.st_->stab = std::max(*base.stabilization(), max_c + 1);
  out.st_->tight = base.tight();
  if (base.tight()) {
    // Tight base: a passing cut covering all constrained coordinates already
    // has a limit witness, and nothing constrains the other coordinates.
    const int bound = std::max(max_c + 1, 1);
    out.st_->decide = [bound](const EvThread&) { return std::optional<int>(bound); };
  }
  out.st_->certify = [base](const EvThread& s) { return certainly_in(base, s); };
  std::string cs;
  for (int c : constrained) cs += (cs.empty() ? "" : ",") + std::to_string(c);
  out.st_->label = "exists(" + base.describe() + " keep " + cs + ")";
  return out;
}

DecSeq DecSeq::permute(const DecSeq& base, const std::vector<int>& sigma) {
  const int m = static_cast<int>(sigma.size());
  std::vector<int> tau(sigma.size(), -1);
  for (int i = 0; i < m; ++i) {
    if (sigma[static_cast<size_t>(i)] < 0 || sigma[static_cast<size_t>(i)] >= m ||
        tau[static_cast<size_t>(sigma[static_cast<size_t>(i)])] != -1)
      throw NotFiniteSupport("permutation images must form a bijection of their support");
    tau[static_cast<size_t>(sigma[static_cast<size_t>(i)])] = i;
  }
  auto tau_at = [tau, m](int j) { return j < m ? tau[static_cast<size_t>(j)] : j; };

  DecSeq out;
  out.st_ = std::make_shared<State>();
  out.st_->domain = base.domain();
  // Cut k reads, through the inverse permutation, the base cut that is just
  // deep enough to contain every consulted coordinate.
  out.st_->producer = [base, tau_at](int k) {
    if (k == 0) return base.cut(0);
    std::vector<int> map(static_cast<size_t>(k));
    int deep = 0;
    for (int j = 0; j < k; ++j) {
      map[static_cast<size_t>(j)] = tau_at(j);
      deep = std::max(deep, tau_at(j));
    }
    return FinRel::reindex(base.cut(deep + 1), map);
  };
  if (base.stabilization()) out.st_->stab = std::max(*base.stabilization(), m);
  out.st_->tight = base.tight();
  out.st_->decide = [base, sigma, m](const EvThread& s) -> std::optional<int> {
    const auto b = base.decision_bound(permute_thread(s, sigma));
    if (!b) return std::nullopt;
    return std::max(*b, m);
  };
  out.st_->certify = [base, sigma](const EvThread& s) {
    return certainly_in(base, permute_thread(s, sigma));
  };
  std::string ms;
  for (int i = 0; i < m; ++i)
    ms += (ms.empty() ? "" : ",") + std::to_string(i) + ":" + std::to_string(sigma[static_cast<size_t>(i)]);
  out.st_->label = "permute(" + base.describe() + " by " + ms + ")";
  return out;
}

Verdict lim_membership(const EvThread& s, const DecSeq& r, int depth) {
  if (s.domain() != r.domain()) throw DomainMismatch("lim_membership: mixed domains");
  const std::optional<int> bound = r.decision_bound(s);
  const int limit = bound ? *bound : std::max(depth, 0);
  for (int i = 0; i <= limit; ++i) {
    const Tuple seg = s.take(static_cast<size_t>(i));
    if (!r.cut(i).contains(seg)) return Verdict::out(i);
  }
  if (bound) return Verdict::in();
  if (r.member_certificate(s)) return Verdict::in();
  return Verdict::up_to(limit);
}

}  // namespace wb
