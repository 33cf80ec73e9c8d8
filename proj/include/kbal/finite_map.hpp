#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kbal/group.hpp"
#include "kbal/numerics.hpp"

namespace kbal {

// A map pi: Gamma -> M_n tabulated on a finite symmetric domain (a Cayley
// ball). Tables are stored sparse; truncated regular representations are
// near-permutation matrices, and everything downstream profits.
//
// Invariants enforced at construction:
//   - table(g^{-1}) = table(g)^* for every g in the domain,
//   - table(e) is defined.
// A symmetry violation above `symmetry_tol` is a construction error; it is
// never silently symmetrized.
class FiniteMap {
 public:
  static constexpr double kSymmetryTol = 1e-9;

  FiniteMap(Group group, Ball domain, int dim, std::vector<SpMat> table,
            double symmetry_tol = kSymmetryTol);

  static FiniteMap build(const Group& group, const Ball& domain, int dim,
                         const std::function<Mat(const GroupElement&)>& fn,
                         double symmetry_tol = kSymmetryTol);

  static FiniteMap build_sparse(const Group& group, const Ball& domain, int dim,
                                const std::function<SpMat(const GroupElement&)>& fn,
                                double symmetry_tol = kSymmetryTol);

  const Group& group() const { return group_; }
  const Ball& domain() const { return domain_; }
  int dim() const { return dim_; }

  bool has(const GroupElement& g) const { return domain_.contains(g); }
  const SpMat& at(const GroupElement& g) const;  // throws DomainEscapeError
  Mat dense_at(const GroupElement& g) const { return Mat(at(g)); }

  /// Max over the domain of ||table(g^{-1}) - table(g)^*||.
  double symmetry_defect() const;

 private:
  Group group_;
  Ball domain_;
  int dim_;
  std::vector<SpMat> table_;
};

/// The defect M_pi(g,h) = pi(gh) - pi(g) pi(h). Requires g, h, gh in the
/// domain.
SpMat defect(const FiniteMap& pi, const GroupElement& g, const GroupElement& h);
Mat defect_dense(const FiniteMap& pi, const GroupElement& g, const GroupElement& h);

}  // namespace kbal
