#pragma once

#include <functional>

#include "kbal/group.hpp"
#include "kbal/numerics.hpp"

namespace kbal {

// Pair of selfadjoint End(V)-valued multiplication symbols on the orbit
// Z^2 = Gamma x of the plane, with B+ = B- wherever the word length is at
// least `support_radius`. Instances also carry the continuous plane symbol
// so the same data can be sampled over the compactified plane.
struct SymbolPair {
  int fiber_dim = 2;
  int support_radius = 0;
  std::function<Mat(const GroupElement&)> Bplus;        // lattice points
  std::function<Mat(double, double)> Bplus_plane;       // continuous plane
  Mat Bminus;                                           // constant symbol

  Mat Bminus_at(const GroupElement&) const { return Bminus; }
  Mat B(int sign, const GroupElement& y) const {
    return sign >= 0 ? Bplus(y) : Bminus;
  }
};

struct BottParams {
  // B+ = B- exactly once the l1 radius reaches support_radius; the profile
  // climbs smoothly from the rank-one projection at the origin.
  double support_radius = 10.0;
  int winding = 1;
};

/// Bott-type pair: B- is the constant projection diag(0,1); B+ is a rank-one
/// projection field sweeping the complex line once, deformed to equal B-
/// outside the support radius. The radial coordinate is the l1 norm, so the
/// support statement holds in the word metric.
SymbolPair make_bott_pair(const BottParams& params);

/// B+ = B- = the given constant selfadjoint matrix.
SymbolPair make_constant_pair(const Mat& b);

/// B+ = B- = identity: the pair of compressed regular representations.
SymbolPair make_identity_pair(int fiber_dim);

/// Max over y in ball(R) and generator steps h of ||B(hy) - B(y)|| (both
/// signs); the (Lip) variation bound, measured rather than assumed.
double measured_variation(const Group& group, const SymbolPair& symbols, int R);

/// Checks B+(y) = B-(y) on all sampled y with length in
/// [support_radius, R]; returns the worst deviation.
double support_defect(const Group& group, const SymbolPair& symbols, int R);

}  // namespace kbal
