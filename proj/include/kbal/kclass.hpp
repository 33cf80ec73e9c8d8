#pragma once

#include <functional>
#include <vector>

#include "kbal/numerics.hpp"
#include "kbal/projections.hpp"

namespace kbal {

/// K0 shadow of [P] - [Q] where Q is the same-size block projection
/// diag(1,0): number of eigenvalues above 1/2 minus dim/2. Requires
/// deviation < 1/4, else the gap is considered closed.
int spectral_class(const AlmostProjection& P);

struct RankFieldReport {
  std::vector<int> ranks;
  double gap_min = 0.0;
  bool locally_constant = false;
  std::vector<int> jump_points;  // grid indices where the rank differs from
                                 // a neighbour
};

/// Rank function over a torus grid (row-major, wraparound adjacency).
/// Requires an open gap at every point.
RankFieldReport rank_field(const std::vector<AlmostProjection>& field, int grid_x,
                           int grid_y, double min_gap = 1e-9);

// Plaquette field-strength summation over a periodic grid from caller-
// provided link overlaps; the total flux over 2 pi is asserted to be an
// integer (it is one by construction, up to rounding).
struct ChernComputation {
  int chern = 0;
  double total_flux = 0.0;      // sum of plaquette phases
  double max_plaquette = 0.0;   // largest |phase|, must stay below pi
  double min_link_abs = 1.0;    // smallest |overlap| encountered
};

/// link(ix, iy, dir): overlap determinant from grid point (ix,iy) to its
/// neighbour in direction dir (0: +x, 1: +y), periodic.
ChernComputation chern_from_links(
    int grid_x, int grid_y, const std::function<cd(int, int, int)>& link);

/// Frames from the spectral projection above 1/2 at each point; the rank
/// must be constant over the grid. Field is row-major (ix * grid_y + iy).
ChernComputation chern_number_dense(const std::vector<Mat>& field, int grid_x,
                                    int grid_y, double herm_tol = 1e-9);

struct ChernReport {
  int chern_input = 0;
  int chern_output = 0;
  bool agree = false;
};

}  // namespace kbal
