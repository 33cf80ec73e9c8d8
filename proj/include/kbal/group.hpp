#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kbal/errors.hpp"

namespace kbal {

enum class GroupKind { FreeAbelian, Free };

struct GroupSpec {
  GroupKind kind = GroupKind::FreeAbelian;
  int rank = 1;  // number of generators k >= 1
};

// Reduced word in Z^k or F_k.
//  - FreeAbelian: `word` is the exponent vector, length k.
//  - Free: `word` is the reduced letter string; letter l in {±1..±k},
//    negative = inverse generator, no adjacent cancelling pair.
struct GroupElement {
  std::vector<std::int32_t> word;
  bool operator==(const GroupElement& o) const { return word == o.word; }
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : g.word) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

class Ball;

// Group operations for a fixed GroupSpec. All values are immutable; instances
// are freely shareable.
class Group {
 public:
  explicit Group(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  GroupElement identity() const;
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;
  int length(const GroupElement& g) const;
  bool is_identity(const GroupElement& g) const;

  /// Canonical order: word length first, then lexicographic. For F_k letters
  /// compare as a < a^-1 < b < b^-1 < ...
  bool less(const GroupElement& g, const GroupElement& h) const;

  /// Generator i (0-based) or its inverse.
  GroupElement generator(int i, bool inverse = false) const;

  std::string to_string(const GroupElement& g) const;

  void validate(const GroupElement& g) const;  // throws ConstructionError

  /// Closed-form ball size (used for the resource-cap check before
  /// enumerating). For F_1 this is the Z value 2R+1.
  std::uint64_t ball_size(int radius) const;

  Ball ball(int radius, std::uint64_t cap = 4'000'000) const;

 private:
  GroupSpec spec_;
};

// Cayley ball of radius R: exactly the elements of length <= R, ordered
// breadth-first by length with lexicographic tie-break. Ball(R) is a prefix
// of Ball(R') for R <= R', so the induced subspace projections are nested.
class Ball {
 public:
  Ball(const Group& group, int radius, std::vector<GroupElement> elements);

  int radius() const { return radius_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& at(std::size_t i) const { return elements_[i]; }

  bool contains(const GroupElement& g) const;
  /// Position in the canonical order; -1 when absent.
  std::ptrdiff_t index_of(const GroupElement& g) const;

  const GroupSpec& group_spec() const { return spec_; }

 private:
  GroupSpec spec_;
  int radius_;
  std::vector<GroupElement> elements_;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index_;
};

}  // namespace kbal
