#include "kbal/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace kbal {

namespace {

// Letter order for free groups: a < a^-1 < b < b^-1 < ...
inline int letter_key(std::int32_t l) {
  return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0);
}

}  // namespace

Group::Group(GroupSpec spec) : spec_(spec) {
  if (spec_.rank < 1) throw ConstructionError("Group: generator count must be >= 1");
}

GroupElement Group::identity() const {
  if (spec_.kind == GroupKind::FreeAbelian)
    return GroupElement{std::vector<std::int32_t>(spec_.rank, 0)};
  return GroupElement{{}};
}

void Group::validate(const GroupElement& g) const {
  if (spec_.kind == GroupKind::FreeAbelian) {
    if (static_cast<int>(g.word.size()) != spec_.rank)
      throw ConstructionError("GroupElement: exponent vector has wrong length");
    return;
  }
  for (std::size_t i = 0; i < g.word.size(); ++i) {
    std::int32_t l = g.word[i];
    if (l == 0 || std::abs(l) > spec_.rank)
      throw ConstructionError("GroupElement: letter out of range");
    if (i + 1 < g.word.size() && g.word[i + 1] == -l)
      throw ConstructionError("GroupElement: word is not reduced");
  }
}

GroupElement Group::multiply(const GroupElement& g, const GroupElement& h) const {
  if (spec_.kind == GroupKind::FreeAbelian) {
    GroupElement r = g;
    for (int i = 0; i < spec_.rank; ++i) r.word[i] += h.word[i];
    return r;
  }
  GroupElement r = g;
  for (std::int32_t l : h.word) {
    if (!r.word.empty() && r.word.back() == -l)
      r.word.pop_back();
    else
      r.word.push_back(l);
  }
  return r;
}

GroupElement Group::inverse(const GroupElement& g) const {
  GroupElement r;
  if (spec_.kind == GroupKind::FreeAbelian) {
    r.word.resize(g.word.size());
    for (std::size_t i = 0; i < g.word.size(); ++i) r.word[i] = -g.word[i];
    return r;
  }
  r.word.assign(g.word.rbegin(), g.word.rend());
  for (auto& l : r.word) l = -l;
  return r;
}

int Group::length(const GroupElement& g) const {
  if (spec_.kind == GroupKind::FreeAbelian) {
    long s = 0;
    for (auto v : g.word) s += std::abs(v);
    return static_cast<int>(s);
  }
  return static_cast<int>(g.word.size());
}

bool Group::is_identity(const GroupElement& g) const { return length(g) == 0; }

bool Group::less(const GroupElement& g, const GroupElement& h) const {
  int lg = length(g), lh = length(h);
  if (lg != lh) return lg < lh;
  if (spec_.kind == GroupKind::FreeAbelian)
    return std::lexicographical_compare(g.word.begin(), g.word.end(), h.word.begin(),
                                        h.word.end());
  return std::lexicographical_compare(
      g.word.begin(), g.word.end(), h.word.begin(), h.word.end(),
      [](std::int32_t a, std::int32_t b) { return letter_key(a) < letter_key(b); });
}

GroupElement Group::generator(int i, bool inverse) const {
  if (i < 0 || i >= spec_.rank) throw ConstructionError("generator index out of range");
  if (spec_.kind == GroupKind::FreeAbelian) {
    GroupElement g = identity();
    g.word[i] = inverse ? -1 : 1;
    return g;
  }
  return GroupElement{{inverse ? static_cast<std::int32_t>(-(i + 1))
                               : static_cast<std::int32_t>(i + 1)}};
}

std::string Group::to_string(const GroupElement& g) const {
  if (spec_.kind == GroupKind::FreeAbelian) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.word.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(g.word[i]);
    }
    return s + ")";
  }
  if (g.word.empty()) return "e";
  std::string s;
  for (auto l : g.word) {
    s += static_cast<char>('a' + std::abs(l) - 1);
    if (l < 0) s += '\'';
  }
  return s;
}

std::uint64_t Group::ball_size(int radius) const {
  if (radius < 0) return 0;
  std::uint64_t k = static_cast<std::uint64_t>(spec_.rank);
  if (spec_.kind == GroupKind::Free) {
    // 1 + 2k ((2k-1)^R - 1)/(2k-2) for k >= 2; the F_1 = Z case is 2R+1.
    if (k == 1) return 2ull * radius + 1ull;
    std::uint64_t q = 2 * k - 1, pw = 1, sum = 1;
    for (int r = 1; r <= radius; ++r) {
      pw *= q;
      std::uint64_t shell = 2 * k * (pw / q);
      sum += shell;
      if (sum > (1ull << 62)) return sum;  // saturate, caller caps anyway
    }
    return sum;
  }
  // Z^k: lattice points with l1 norm <= R,
  // count(k, R) = sum_{i=0..min(k,R)} 2^i C(k,i) C(R,i).
  auto binom = [](std::uint64_t n, std::uint64_t r) -> std::uint64_t {
    if (r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t v = 1;
    for (std::uint64_t j = 1; j <= r; ++j) v = v * (n - r + j) / j;
    return v;
  };
  std::uint64_t total = 0, pow2 = 1;
  for (int i = 0; i <= std::min<int>(spec_.rank, radius); ++i) {
    total += pow2 * binom(k, i) * binom(static_cast<std::uint64_t>(radius), i);
    pow2 *= 2;
  }
  return total;
}

namespace {

void enumerate_zk(const Group& grp, int radius, std::vector<GroupElement>& out) {
  int k = grp.spec().rank;
  std::vector<std::int32_t> cur(k, 0);
  // depth-first over exponent vectors with remaining l1 budget
  std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == k) {
      out.push_back(GroupElement{cur});
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      cur[pos] = v;
      rec(pos + 1, budget - std::abs(v));
    }
    cur[pos] = 0;
  };
  rec(0, radius);
}

void enumerate_free(const Group& grp, int radius, std::vector<GroupElement>& out) {
  out.push_back(grp.identity());
  std::size_t level_begin = 0, level_end = out.size();
  for (int r = 1; r <= radius; ++r) {
    for (std::size_t i = level_begin; i < level_end; ++i) {
      GroupElement parent = out[i];
      for (int gi = 0; gi < grp.spec().rank; ++gi) {
        for (bool inv : {false, true}) {
          std::int32_t l = inv ? -(gi + 1) : (gi + 1);
          if (!parent.word.empty() && parent.word.back() == -l) continue;
          GroupElement child = parent;
          child.word.push_back(l);
          out.push_back(std::move(child));
        }
      }
    }
    level_begin = level_end;
    level_end = out.size();
  }
}

}  // namespace

Ball Group::ball(int radius, std::uint64_t cap) const {
  if (radius < 0) throw ConstructionError("ball: radius must be >= 0");
  std::uint64_t predicted = ball_size(radius);
  if (predicted > cap)
    throw ResourceCapError("ball: size " + std::to_string(predicted) +
                           " exceeds cap " + std::to_string(cap));
  std::vector<GroupElement> elems;
  elems.reserve(predicted);
  if (spec_.kind == GroupKind::FreeAbelian)
    enumerate_zk(*this, radius, elems);
  else
    enumerate_free(*this, radius, elems);
  std::sort(elems.begin(), elems.end(),
            [this](const GroupElement& a, const GroupElement& b) { return less(a, b); });
  return Ball(*this, radius, std::move(elems));
}

Ball::Ball(const Group& group, int radius, std::vector<GroupElement> elements)
    : spec_(group.spec()), radius_(radius), elements_(std::move(elements)) {
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
}

bool Ball::contains(const GroupElement& g) const { return index_.count(g) > 0; }

std::ptrdiff_t Ball::index_of(const GroupElement& g) const {
  auto it = index_.find(g);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

}  // namespace kbal
