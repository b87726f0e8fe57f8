#include "wb/evset.hpp"

#include <algorithm>
#include <set>

#include "wb/errors.hpp"

namespace wb {

EvSet EvSet::explicit_set(FiniteDomain domain, std::vector<EvThread> members) {
  EvSet out(domain, true);
  for (const EvThread& s : members) {
    if (s.domain() != domain) throw DomainMismatch("explicit member domain");
    if (std::find(out.members_.begin(), out.members_.end(), s) == out.members_.end())
      out.members_.push_back(s);
  }
  std::sort(out.members_.begin(), out.members_.end());
  return out;
}

EvSet EvSet::pattern(FiniteDomain domain, std::vector<PatternGen> gens) {
  EvSet out(domain, false);
  for (const PatternGen& g : gens) {
    for (Val v : g.left)
      if (v >= domain.size) throw IndexOutOfRange("pattern value outside domain");
    for (Val v : g.block)
      if (v >= domain.size) throw IndexOutOfRange("pattern value outside domain");
    for (Val v : g.right)
      if (v >= domain.size) throw IndexOutOfRange("pattern value outside domain");
    if (g.tail >= domain.size) throw IndexOutOfRange("pattern tail outside domain");
  }
  out.gens_ = std::move(gens);
  return out;
}

const std::vector<EvThread>& EvSet::members() const {
  if (!explicit_) throw ShapeMismatch("pattern set has no finite member list");
  return members_;
}

const std::vector<PatternGen>& EvSet::gens() const {
  if (explicit_) throw ShapeMismatch("explicit set has no generators");
  return gens_;
}

EvThread EvSet::instantiate(const PatternGen& g, int j) const {
  Tuple prefix = g.left;
  for (int r = 0; r < j; ++r) prefix.insert(prefix.end(), g.block.begin(), g.block.end());
  prefix.insert(prefix.end(), g.right.begin(), g.right.end());
  return EvThread(domain_, std::move(prefix), g.tail);
}

// Pump counts beyond this cannot produce a member whose first `coords`
// coordinates (or whose canonical form of that length) are still in play.
int EvSet::pump_bound(const PatternGen& g, size_t coords) const {
  const size_t step = std::max<size_t>(1, g.block.size());
  return static_cast<int>((coords + g.left.size() + g.right.size()) / step) + 2;
}

bool EvSet::contains(const EvThread& s) const {
  if (s.domain() != domain_) throw DomainMismatch("contains: mixed domains");
  if (explicit_) return std::find(members_.begin(), members_.end(), s) != members_.end();
  for (const PatternGen& g : gens_) {
    if (g.block.empty()) {
      if (instantiate(g, 0) == s) return true;
      continue;
    }
    const int bound = pump_bound(g, s.prefix().size());
    for (int j = 0; j <= bound; ++j)
      if (instantiate(g, j) == s) return true;
  }
  return false;
}

FinRel EvSet::cut(int k) const {
  if (k < 0) throw ArityMismatch("negative cut length");
  FinRel out = FinRel::empty(domain_, k);
  auto add = [&](const EvThread& s) {
    const Tuple t = s.take(static_cast<size_t>(k));
    out.add(t);
  };
  if (explicit_) {
    for (const EvThread& s : members_) add(s);
    return out;
  }
  for (const PatternGen& g : gens_) {
    const int bound = g.block.empty() ? 0 : pump_bound(g, static_cast<size_t>(k));
    for (int j = 0; j <= bound; ++j) add(instantiate(g, j));
  }
  return out;
}

std::vector<EvThread> EvSet::members_up_to(int max_prefix) const {
  std::set<EvThread> seen;
  if (explicit_) {
    for (const EvThread& s : members_)
      if (s.prefix().size() <= static_cast<size_t>(max_prefix)) seen.insert(s);
  } else {
    for (const PatternGen& g : gens_) {
      const int bound = g.block.empty() ? 0 : pump_bound(g, static_cast<size_t>(max_prefix));
      for (int j = 0; j <= bound; ++j) {
        EvThread s = instantiate(g, j);
        if (s.prefix().size() <= static_cast<size_t>(max_prefix)) seen.insert(std::move(s));
      }
    }
  }
  return std::vector<EvThread>(seen.begin(), seen.end());
}

std::string EvSet::to_string() const {
  std::string out = "evset{";
  if (explicit_) {
    for (size_t i = 0; i < members_.size(); ++i) {
      if (i) out += " ; ";
      out += members_[i].to_string();
    }
  } else {
    for (size_t i = 0; i < gens_.size(); ++i) {
      if (i) out += " ; ";
      out += tuple_to_string(gens_[i].left) + " (" + tuple_to_string(gens_[i].block) + ")* " +
             tuple_to_string(gens_[i].right) + " | " + std::to_string(gens_[i].tail);
    }
  }
  return out + "}";
}

}  // namespace wb
