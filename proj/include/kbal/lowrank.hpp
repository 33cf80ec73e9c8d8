#pragma once

#include <optional>
#include <vector>

#include "kbal/cover.hpp"
#include "kbal/kclass.hpp"
#include "kbal/pipeline.hpp"
#include "kbal/symbols.hpp"

namespace kbal {

// Deflated representation of the pushforward family
//   P''(A_+(x), A_-(x)) = Q + W(x) (a-b)(x) W(x)^*,
// exploiting that (a-b)(x) is supported, exactly, on the fixed subspace
// spanned by chart copies of U0 = (rows+columns touched by the truncated
// symbol difference). Spectral data and frame-overlap determinants then
// reduce to dense algebra of size O(active charts * dim U0), independent of
// the ball radius once the symbol difference clears the boundary.
//
// Chern links use the frame Phi(x) = P''(x) G(theta) with the reference
// injection G(theta) = [cos(theta) I; sin(theta) I]. Plaquette products are
// frame-gauge invariant, so any nondegenerate per-point theta gives the
// orthonormal-frame value; theta is chosen per point by a conditioning
// probe (the plain Q-frame theta = 0 degenerates where the symbol
// difference acts as -1 on an occupied direction).
class DeflatedPushforward {
 public:
  DeflatedPushforward(const Group& group, const SymbolPair& symbols,
                      const CoverData& cover, int R, double trunc_tol = 1e-12,
                      std::uint64_t cap = 4'000'000);

  int u0() const { return u0_; }
  int a_dim() const { return m_; }

  struct PointSpectrum {
    double deviation = 0.0;
    double gap = 0.5;
    int rank_above_half = 0;
    int class_rank = 0;  // rank_above_half - m
    int dim = 0;
    int deflation_rank = 0;
  };

  const PointSpectrum& spectrum(int point);

  /// Mixing angle chosen for the frame at this point.
  double mix_angle(int point);

  /// Normalized overlap determinant det(Phi(x)^* Phi(x')) / (c_x c_x')^m
  /// between neighbouring frames.
  cd link_det(int point_from, int point_to);

  ChernComputation chern();
  RankFieldReport rank_gap_field(double min_gap = 1e-9);

 private:
  struct PointData {
    std::vector<int> act;
    std::vector<double> phiw;
    int r = 0;
    Mat F;         // u_x x r
    RVec sigma;    // r
    Mat g11, gvv;  // r x r compressed grams at (x,x)
    double cmix = 1.0, smix = 0.0, mumix = 1.0;
    Mat gB;        // F^* E^*(1-a)(c - mu a)E F
    PointSpectrum spec;
    bool ready = false;
  };

  const PointData& point(int p);
  Mat delta_hat(const PointData& pd) const;
  Mat gram_a(const std::vector<int>& acta, const std::vector<int>& actb,
             int phi_point) const;
  Mat gram_aa(const PointData& x, int px, const PointData& y, int py) const;
  /// E(x)^* (p0 + p1 a(px)) (q0 + q1 a(py)) E(y).
  Mat gram_poly(const PointData& x, int px, double p0, double p1,
                const PointData& y, int py, double q0, double q1) const;
  Mat self_overlap(const PointData& pd, int p) const;  // normalized, 2r x 2r

  const CoverData* cover_;
  Group group_;
  int R_, nv_, n_, charts_, m_, u0_;
  double trunc_tol_;
  std::vector<GroupElement> gammas_;
  std::vector<std::vector<int>> pair_gamma_;
  std::vector<int> u0_idx_;                 // composite indices of U0 in C^n
  std::vector<Mat> ahat_, dhat_;            // per gamma, u0 x u0
  std::vector<std::vector<Mat>> aa_;        // per gamma pair, u0 x u0
  std::vector<PointData> points_;
};

}  // namespace kbal
