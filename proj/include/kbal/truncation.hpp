#pragma once

#include <variant>
#include <vector>

#include "kbal/defects.hpp"
#include "kbal/finite_map.hpp"
#include "kbal/symbols.hpp"

namespace kbal {

// Operator on l2(Gamma) (x) V given by a translation or a multiplication
// symbol; compressions are taken in the Ball(R) (x) V basis with the fiber
// index fastest.
struct RegularOperatorSpec {
  int fiber_dim = 1;
  std::variant<GroupElement, std::function<Mat(const GroupElement&)>> symbol;
};

/// P_R lambda(g) P_R: entry ((y',v'),(y,v)) = [y' = gy][v' = v].
SpMat compress_lambda(const Group& group, const Ball& ball, const GroupElement& g,
                      int fiber_dim);

/// P_R M_B P_R = diag(B(y)); B(y) must be selfadjoint within 1e-12.
SpMat compress_mult(const Group& group, const Ball& ball,
                    const std::function<Mat(const GroupElement&)>& B, int fiber_dim);

/// P_R lambda(g) M_B P_R: column block y goes to row block gy carrying B(y).
/// Coincides with compress_lambda * compress_mult exactly.
SpMat compress_lambda_mult(const Group& group, const Ball& ball,
                           const GroupElement& g,
                           const std::function<Mat(const GroupElement&)>& B,
                           int fiber_dim);

SpMat compress(const Group& group, const Ball& ball, const RegularOperatorSpec& op);

// The truncated family (pi^+_R, pi^-_R) over an increasing list of radii,
// all maps tabulated on the same domain ball. Underlying subspaces are
// nested because balls are prefix-nested.
struct TruncationFamily {
  Group group;
  std::vector<int> radii;
  std::vector<int> space_dims;
  Ball domain;
  std::vector<MapPair> pairs;
};

/// The *-symmetrized truncation of the pair lambda(.) M_{B+-}: values on the
/// canonical positive set are P_R lambda(g) M_B P_R, inverses get adjoints,
/// the identity is the (already selfadjoint) multiplication block.
MapPair truncated_pair(const Group& group, const SymbolPair& symbols, int R,
                       const Ball& domain, std::uint64_t cap = 4'000'000);

TruncationFamily truncate_pair(const Group& group, const SymbolPair& symbols,
                               const std::vector<int>& radii, int domain_radius,
                               std::uint64_t cap = 4'000'000);

/// pi_t along the nested family: for t in [k, k+1] (segment k of the radii
/// list), returns (1-s) pi_{R_k} + s pi_{R_{k+1}} with s = t - k, the smaller
/// map zero-padded into the larger basis. Range error outside [0, len-1].
MapPair interpolate(const TruncationFamily& family, double t);

struct RadiusDefects {
  int radius = 0;
  int dim = 0;
  double eps1 = 0.0, eps2 = 0.0, eps2prime = 0.0;
  double seconds = 0.0;
};

std::vector<RadiusDefects> family_defect_curve(const TruncationFamily& family,
                                               const Ball& F);

}  // namespace kbal
