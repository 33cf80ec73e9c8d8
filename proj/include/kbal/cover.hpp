#pragma once

#include <array>
#include <vector>

#include "kbal/finite_map.hpp"
#include "kbal/group.hpp"
#include "kbal/numerics.hpp"

namespace kbal {

enum class CoverSpace { Circle, Torus2 };

// Finite open cover of S^1 or T^2 with a partition-of-unity sample and a
// Gamma-valued cocycle (one group element per overlapping chart pair, the
// deck transformation relating the chosen chart lifts). Built so that
// sum_i phi_i(x)^2 = 1 holds analytically: cos/sin ramps across overlaps.
class CoverData {
 public:
  CoverSpace space;
  Group group;      // Z for the circle, Z^2 for the torus
  int charts = 0;
  int grid_x = 0, grid_y = 1;
  std::vector<std::array<double, 2>> grid;   // points in [0,1)^2
  Eigen::MatrixXd phi;                       // charts x points
  std::vector<std::vector<char>> overlap;    // chart pair has nonempty overlap
  std::vector<std::vector<GroupElement>> cocycle;
  std::vector<std::vector<char>> multivalued;  // overlap has several deck
                                               // components (2-arc circle)

  int points() const { return static_cast<int>(grid.size()); }
  double phi_at(int chart, int point) const { return phi(chart, point); }
  std::vector<int> active_charts(int point, double tol = 0.0) const;
  const GroupElement& gamma(int i, int j) const;  // throws if undefined
  bool gamma_defined(int i, int j) const;

  /// Grid index helpers (row-major over (ix, iy)).
  int point_index(int ix, int iy) const { return ix * grid_y + iy; }

  /// Validates the partition and cocycle invariants on the grid; throws
  /// ConstructionError on violation.
  void validate(double tol = 1e-12) const;
};

/// Circle cover with `arcs` >= 2 equal arcs. For arcs >= 3 every pairwise
/// overlap is connected and the cocycle encodes the deck holonomy of R ->
/// S^1 (values 0 and -+1). For arcs = 2 the two overlap components cannot
/// carry a single-valued deck cocycle; the trivial value is used and the
/// pair is flagged multivalued.
CoverData make_circle_cover(int arcs, int grid_points);

/// Product cover of T^2 from two circle covers (arcs^2 charts), cocycle in
/// Z^2. Use arcs = 3 for the Mishchenko bundle.
CoverData make_torus_cover(int arcs, int grid_x, int grid_y);

// Formal |I| x |I| matrix with entries (coefficient, group element).
struct FormalGroupMatrix {
  int n = 0;
  Eigen::MatrixXd coeff;
  std::vector<GroupElement> elems;  // n*n, row-major; valid where coeff != 0
  const GroupElement& elem(int i, int j) const { return elems[i * n + j]; }
};

/// The cocycle idempotent p(x) with p_ij(x) = phi_i(x) phi_j(x) gamma_ij.
/// Throws DomainEscapeError when an overlap with nonzero coefficient has no
/// cocycle value.
FormalGroupMatrix mishchenko_idempotent(const CoverData& cover, int point);

/// A_pi(x) = pi(p(x)) = (phi_i phi_j pi(gamma_ij))_{ij}, dense.
Mat push_map(const FiniteMap& pi, const CoverData& cover, int point);

}  // namespace kbal
