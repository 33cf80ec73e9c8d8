#include "kbal/kclass.hpp"

#include <cmath>

namespace kbal {

int spectral_class(const AlmostProjection& P) {
  if (P.deviation >= 0.25)
    throw GapClosedError("spectral_class: deviation " + std::to_string(P.deviation) +
                         " >= 1/4, gap at 1/2 closed");
  if (P.dim % 2 != 0)
    throw ConstructionError("spectral_class: odd dimension, Q = diag(1,0) undefined");
  return P.rank_above_half - P.dim / 2;
}

RankFieldReport rank_field(const std::vector<AlmostProjection>& field, int grid_x,
                           int grid_y, double min_gap) {
  if (static_cast<int>(field.size()) != grid_x * grid_y)
    throw ConstructionError("rank_field: field size does not match grid");
  RankFieldReport rep;
  rep.gap_min = 0.5;
  for (const auto& ap : field) {
    if (ap.gap <= min_gap)
      throw GapClosedError("rank_field: spectral gap closed at a grid point");
    rep.ranks.push_back(ap.rank_above_half);
    rep.gap_min = std::min(rep.gap_min, ap.gap);
  }
  rep.locally_constant = true;
  for (int ix = 0; ix < grid_x; ++ix)
    for (int iy = 0; iy < grid_y; ++iy) {
      int p = ix * grid_y + iy;
      int px = ((ix + 1) % grid_x) * grid_y + iy;
      int py = ix * grid_y + (iy + 1) % grid_y;
      if (rep.ranks[p] != rep.ranks[px] || rep.ranks[p] != rep.ranks[py]) {
        rep.locally_constant = false;
        rep.jump_points.push_back(p);
      }
    }
  return rep;
}

ChernComputation chern_from_links(int grid_x, int grid_y,
                                  const std::function<cd(int, int, int)>& link) {
  ChernComputation out;
  // Cache links: ux(ix,iy) from (ix,iy) to (ix+1,iy); uy likewise.
  std::vector<cd> ux(static_cast<std::size_t>(grid_x) * grid_y);
  std::vector<cd> uy(static_cast<std::size_t>(grid_x) * grid_y);
  for (int ix = 0; ix < grid_x; ++ix)
    for (int iy = 0; iy < grid_y; ++iy) {
      ux[ix * grid_y + iy] = link(ix, iy, 0);
      uy[ix * grid_y + iy] = link(ix, iy, 1);
    }
  for (const auto& u : ux) out.min_link_abs = std::min(out.min_link_abs, std::abs(u));
  for (const auto& u : uy) out.min_link_abs = std::min(out.min_link_abs, std::abs(u));
  if (out.min_link_abs < 1e-12)
    throw GapClosedError("chern: degenerate link overlap, frame projection broke down");
  double flux = 0.0;
  for (int ix = 0; ix < grid_x; ++ix)
    for (int iy = 0; iy < grid_y; ++iy) {
      int jx = (ix + 1) % grid_x, jy = (iy + 1) % grid_y;
      cd w = ux[ix * grid_y + iy] * uy[jx * grid_y + iy] /
             (ux[ix * grid_y + jy] * uy[ix * grid_y + iy]);
      double f = std::arg(w);
      out.max_plaquette = std::max(out.max_plaquette, std::abs(f));
      flux += f;
    }
  if (out.max_plaquette > M_PI * (1.0 - 1e-9))
    throw GapClosedError("chern: plaquette phase overflow, grid too coarse");
  out.total_flux = flux;
  double c = flux / (2.0 * M_PI);
  out.chern = static_cast<int>(std::lround(c));
  if (std::abs(c - out.chern) > 1e-6)
    throw ConstructionError("chern: flux sum is not an integer multiple of 2 pi");
  return out;
}

ChernComputation chern_number_dense(const std::vector<Mat>& field, int grid_x,
                                    int grid_y, double herm_tol) {
  if (static_cast<int>(field.size()) != grid_x * grid_y)
    throw ConstructionError("chern_number_dense: field size does not match grid");
  std::vector<Mat> frames(field.size());
  int rank = -1;
  for (std::size_t p = 0; p < field.size(); ++p) {
    EigH e = eig_selfadjoint(field[p], herm_tol);
    int r = 0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      if (e.values(i) > 0.5) ++r;
    if (rank < 0) rank = r;
    if (r != rank)
      throw GapClosedError("chern_number_dense: occupied rank jumps across the grid");
    frames[p] = e.vectors.rightCols(r);  // ascending order: top r eigenvectors
  }
  if (rank == 0) {
    // Empty bundle: zero class.
    ChernComputation out;
    return out;
  }
  auto link = [&](int ix, int iy, int dir) -> cd {
    int jx = dir == 0 ? (ix + 1) % grid_x : ix;
    int jy = dir == 1 ? (iy + 1) % grid_y : iy;
    Mat ov = frames[ix * grid_y + iy].adjoint() * frames[jx * grid_y + jy];
    return Eigen::PartialPivLU<Mat>(ov).determinant();
  };
  return chern_from_links(grid_x, grid_y, link);
}

}  // namespace kbal
