#include "kbal/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kbal {

namespace {

Mat gather_dense(const SpMat& t, const std::vector<int>& cols) {
  Mat out = Mat::Zero(t.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (SpMat::InnerIterator it(t, cols[j]); it; ++it)
      out(it.row(), static_cast<Eigen::Index>(j)) = it.value();
  return out;
}

Mat submatrix(const SpMat& t, const std::vector<int>& idx) {
  std::vector<int> pos(t.rows(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(idx.size()),
                      static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (SpMat::InnerIterator it(t, idx[j]); it; ++it)
      if (pos[it.row()] >= 0)
        out(pos[it.row()], static_cast<Eigen::Index>(j)) = it.value();
  return out;
}

constexpr double kProbeFloor = 1e-6;

}  // namespace

DeflatedPushforward::DeflatedPushforward(const Group& group, const SymbolPair& symbols,
                                         const CoverData& cover, int R,
                                         double trunc_tol, std::uint64_t cap)
    : cover_(&cover), group_(group), R_(R), nv_(symbols.fiber_dim),
      charts_(cover.charts), trunc_tol_(trunc_tol) {
  Ball space = group.ball(R, cap);
  n_ = static_cast<int>(space.size()) * nv_;
  m_ = n_ * charts_;

  pair_gamma_.assign(charts_, std::vector<int>(charts_, -1));
  for (int i = 0; i < charts_; ++i)
    for (int j = 0; j < charts_; ++j) {
      if (!cover.gamma_defined(i, j)) continue;
      const GroupElement& g = cover.gamma(i, j);
      int idx = -1;
      for (std::size_t k = 0; k < gammas_.size(); ++k)
        if (gammas_[k] == g) {
          idx = static_cast<int>(k);
          break;
        }
      if (idx < 0) {
        idx = static_cast<int>(gammas_.size());
        gammas_.push_back(g);
      }
      pair_gamma_[i][j] = idx;
    }

  auto build = [&](int sign, const GroupElement& g) -> SpMat {
    GroupElement gi = group.inverse(g);
    auto B = [&](const GroupElement& y) { return symbols.B(sign, y); };
    if (group.is_identity(g) || group.less(g, gi))
      return compress_lambda_mult(group, space, g, B, nv_);
    SpMat t = compress_lambda_mult(group, space, gi, B, nv_);
    return SpMat(t.adjoint());
  };

  std::vector<SpMat> tp, dm;
  tp.reserve(gammas_.size());
  dm.reserve(gammas_.size());
  std::set<int> touched;
  for (const auto& g : gammas_) {
    SpMat p = build(+1, g);
    SpMat d = p - build(-1, g);
    d.prune(1e-14, 1.0);
    for (int k = 0; k < d.outerSize(); ++k)
      for (SpMat::InnerIterator it(d, k); it; ++it) {
        touched.insert(static_cast<int>(it.row()));
        touched.insert(static_cast<int>(it.col()));
      }
    tp.push_back(std::move(p));
    dm.push_back(std::move(d));
  }
  u0_idx_.assign(touched.begin(), touched.end());
  u0_ = static_cast<int>(u0_idx_.size());

  ahat_.resize(gammas_.size());
  dhat_.resize(gammas_.size());
  aa_.assign(gammas_.size(), std::vector<Mat>(gammas_.size()));
  if (u0_ > 0) {
    std::vector<Mat> te(gammas_.size());   // T_g E0, n x u0
    std::vector<Mat> tae(gammas_.size());  // T_g^* E0
    for (std::size_t k = 0; k < gammas_.size(); ++k) {
      te[k] = gather_dense(tp[k], u0_idx_);
      tae[k] = gather_dense(SpMat(tp[k].adjoint()), u0_idx_);
      ahat_[k] = submatrix(tp[k], u0_idx_);
      dhat_[k] = submatrix(dm[k], u0_idx_);
    }
    for (std::size_t g = 0; g < gammas_.size(); ++g)
      for (std::size_t h = 0; h < gammas_.size(); ++h)
        aa_[g][h] = tae[g].adjoint() * te[h];
  }
  points_.resize(cover.points());
}

Mat DeflatedPushforward::delta_hat(const PointData& pd) const {
  const int na = static_cast<int>(pd.act.size());
  Mat d = Mat::Zero(static_cast<Eigen::Index>(na) * u0_,
                    static_cast<Eigen::Index>(na) * u0_);
  for (int ia = 0; ia < na; ++ia)
    for (int ja = 0; ja < na; ++ja) {
      int gi = pair_gamma_[pd.act[ia]][pd.act[ja]];
      if (gi < 0) continue;
      d.block(static_cast<Eigen::Index>(ia) * u0_,
              static_cast<Eigen::Index>(ja) * u0_, u0_, u0_) =
          (pd.phiw[ia] * pd.phiw[ja]) * dhat_[gi];
    }
  return d;
}

Mat DeflatedPushforward::gram_a(const std::vector<int>& acta,
                                const std::vector<int>& actb, int phi_point) const {
  const int na = static_cast<int>(acta.size()), nb = static_cast<int>(actb.size());
  Mat g = Mat::Zero(static_cast<Eigen::Index>(na) * u0_,
                    static_cast<Eigen::Index>(nb) * u0_);
  for (int ia = 0; ia < na; ++ia) {
    double pi = cover_->phi(acta[ia], phi_point);
    if (pi == 0.0) continue;
    for (int jb = 0; jb < nb; ++jb) {
      double pj = cover_->phi(actb[jb], phi_point);
      if (pj == 0.0) continue;
      int gi = pair_gamma_[acta[ia]][actb[jb]];
      if (gi < 0) continue;
      g.block(static_cast<Eigen::Index>(ia) * u0_,
              static_cast<Eigen::Index>(jb) * u0_, u0_, u0_) = (pi * pj) * ahat_[gi];
    }
  }
  return g;
}

Mat DeflatedPushforward::gram_aa(const PointData& x, int px, const PointData& y,
                                 int py) const {
  const int na = static_cast<int>(x.act.size()), nb = static_cast<int>(y.act.size());
  Mat g = Mat::Zero(static_cast<Eigen::Index>(na) * u0_,
                    static_cast<Eigen::Index>(nb) * u0_);
  for (int k = 0; k < charts_; ++k) {
    double pk = cover_->phi(k, px), qk = cover_->phi(k, py);
    if (pk == 0.0 || qk == 0.0) continue;
    for (int ia = 0; ia < na; ++ia) {
      double pi = cover_->phi(x.act[ia], px);
      if (pi == 0.0) continue;
      int gik = pair_gamma_[x.act[ia]][k];
      if (gik < 0) continue;
      for (int jb = 0; jb < nb; ++jb) {
        double qj = cover_->phi(y.act[jb], py);
        if (qj == 0.0) continue;
        int gkj = pair_gamma_[k][y.act[jb]];
        if (gkj < 0) continue;
        g.block(static_cast<Eigen::Index>(ia) * u0_,
                static_cast<Eigen::Index>(jb) * u0_, u0_, u0_) +=
            (pi * pk * qk * qj) * aa_[gik][gkj];
      }
    }
  }
  return g;
}

Mat DeflatedPushforward::gram_poly(const PointData& x, int px, double p0, double p1,
                                   const PointData& y, int py, double q0,
                                   double q1) const {
  const int na = static_cast<int>(x.act.size()), nb = static_cast<int>(y.act.size());
  Mat g = Mat::Zero(static_cast<Eigen::Index>(na) * u0_,
                    static_cast<Eigen::Index>(nb) * u0_);
  if (p0 * q1 != 0.0) g += (p0 * q1) * gram_a(x.act, y.act, py);
  if (p1 * q0 != 0.0) g += (p1 * q0) * gram_a(x.act, y.act, px);
  if (p1 * q1 != 0.0) g += (p1 * q1) * gram_aa(x, px, y, py);
  if (p0 * q0 != 0.0)
    for (int ia = 0; ia < na; ++ia)
      for (int jb = 0; jb < nb; ++jb)
        if (x.act[ia] == y.act[jb])
          g.block(static_cast<Eigen::Index>(ia) * u0_,
                  static_cast<Eigen::Index>(jb) * u0_, u0_, u0_) +=
              (p0 * q0) * Mat::Identity(u0_, u0_);
  return g;
}

// Normalized frame self-overlap det matrix at a point, used both for the
// conditioning probe and, with two points, for the links.
Mat DeflatedPushforward::self_overlap(const PointData& pd, int p) const {
  const int r = pd.r;
  const double c = pd.cmix, mu = pd.mumix;
  Mat gC = pd.F.adjoint() *
           gram_poly(pd, p, c, -mu, pd, p, c, -mu) * pd.F;
  Mat sg = pd.sigma.asDiagonal();
  Mat m11 = c * pd.gB * sg;
  Mat pvs = pd.gvv * sg;
  Mat m12 = (c * c) * pd.g11 * sg + c * pd.gB * sg * pvs;
  Mat m21 = gC * sg;
  Mat m22 = c * pd.gB.adjoint() * sg + gC * sg * pvs;
  Mat M(2 * r, 2 * r);
  M << m11, m12, m21, m22;
  M /= c * c;
  M += Mat::Identity(2 * r, 2 * r);
  return M;
}

const DeflatedPushforward::PointData& DeflatedPushforward::point(int p) {
  PointData& pd = points_.at(p);
  if (pd.ready) return pd;
  pd.act = cover_->active_charts(p);
  for (int i : pd.act) pd.phiw.push_back(cover_->phi(i, p));
  pd.spec.dim = 2 * m_;
  if (u0_ == 0) {
    pd.r = 0;
    pd.spec.rank_above_half = m_;
    pd.ready = true;
    return pd;
  }
  Mat dh = delta_hat(pd);
  EigH de = eig_selfadjoint(0.5 * (dh + dh.adjoint()), 1e-8);
  double top = 0.0;
  for (Eigen::Index i = 0; i < de.values.size(); ++i)
    top = std::max(top, std::abs(de.values(i)));
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < de.values.size(); ++i)
    if (std::abs(de.values(i)) > std::max(trunc_tol_ * top, 1e-15))
      keep.push_back(static_cast<int>(i));
  pd.r = static_cast<int>(keep.size());
  if (pd.r == 0) {
    pd.spec.rank_above_half = m_;
    pd.ready = true;
    return pd;
  }
  pd.F.resize(dh.rows(), pd.r);
  pd.sigma.resize(pd.r);
  for (int i = 0; i < pd.r; ++i) {
    pd.F.col(i) = de.vectors.col(keep[i]);
    pd.sigma(i) = de.values(keep[i]);
  }
  Mat g11full = gram_poly(pd, p, 1, -1, pd, p, 1, -1);
  Mat aafull = gram_aa(pd, p, pd, p);
  pd.g11 = pd.F.adjoint() * g11full * pd.F;
  pd.gvv = pd.g11 + pd.F.adjoint() * aafull * pd.F;

  // Frame mixing angle: first ladder entry whose self-overlap is well
  // conditioned; otherwise the best seen.
  double best_sigma = -1.0, best_theta = M_PI / 4;
  for (double theta : {M_PI / 4, 0.15, 1.1, -0.5}) {
    pd.cmix = std::cos(theta);
    pd.smix = std::sin(theta);
    pd.mumix = pd.cmix + pd.smix;
    pd.gB = pd.F.adjoint() *
            gram_poly(pd, p, 1, -1, pd, p, pd.cmix, -pd.mumix) * pd.F;
    Eigen::JacobiSVD<Mat> svd(self_overlap(pd, p));
    double smin = svd.singularValues().minCoeff();
    if (smin > best_sigma) {
      best_sigma = smin;
      best_theta = theta;
    }
    if (smin >= kProbeFloor) break;
  }
  pd.cmix = std::cos(best_theta);
  pd.smix = std::sin(best_theta);
  pd.mumix = pd.cmix + pd.smix;
  pd.gB = pd.F.adjoint() *
          gram_poly(pd, p, 1, -1, pd, p, pd.cmix, -pd.mumix) * pd.F;

  // Spectrum of P'' on the invariant subspace S = ran[QVF, VF]; on the
  // complement P'' acts as Q.
  const int r = pd.r;
  Mat H(2 * r, 2 * r), Pinner(2 * r, 2 * r), Qinner(2 * r, 2 * r);
  Mat sg = pd.sigma.asDiagonal();
  Mat g11_s_g11 = pd.g11 * sg * pd.g11;
  Mat g11_s_gvv = pd.g11 * sg * pd.gvv;
  Mat gvv_s_g11 = pd.gvv * sg * pd.g11;
  Mat gvv_s_gvv = pd.gvv * sg * pd.gvv;
  H << pd.g11, pd.g11, pd.g11, pd.gvv;
  Pinner << pd.g11 + g11_s_g11, pd.g11 + g11_s_gvv, pd.g11 + gvv_s_g11,
      pd.g11 + gvv_s_gvv;
  Qinner << pd.g11, pd.g11, pd.g11, pd.g11;
  EigH he = eig_selfadjoint(0.5 * (H + H.adjoint()), 1e-8);
  double hmax = he.values.maxCoeff();
  std::vector<int> hk;
  for (Eigen::Index i = 0; i < he.values.size(); ++i)
    if (he.values(i) > std::max(1e-12 * hmax, 1e-14))
      hk.push_back(static_cast<int>(i));
  Mat C(2 * r, static_cast<Eigen::Index>(hk.size()));
  for (std::size_t i = 0; i < hk.size(); ++i)
    C.col(static_cast<Eigen::Index>(i)) =
        he.vectors.col(hk[i]) / std::sqrt(he.values(hk[i]));
  Mat Ps = C.adjoint() * Pinner * C;
  Ps = 0.5 * (Ps + Ps.adjoint());
  Mat Qs = C.adjoint() * Qinner * C;
  Qs = 0.5 * (Qs + Qs.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> pe(Ps), qe(Qs);
  int rank_qs = 0;
  for (Eigen::Index i = 0; i < qe.eigenvalues().size(); ++i)
    if (qe.eigenvalues()(i) > 0.5) ++rank_qs;
  int above = 0;
  double dev = 0.0, gap = 0.5;
  for (Eigen::Index i = 0; i < pe.eigenvalues().size(); ++i) {
    double t = pe.eigenvalues()(i);
    dev = std::max(dev, std::abs(t * t - t));
    gap = std::min(gap, std::abs(t - 0.5));
    if (t > 0.5) ++above;
  }
  pd.spec.deviation = dev;
  pd.spec.gap = gap;
  pd.spec.rank_above_half = m_ - rank_qs + above;
  pd.spec.class_rank = above - rank_qs;
  pd.spec.deflation_rank = r;
  pd.ready = true;
  return pd;
}

const DeflatedPushforward::PointSpectrum& DeflatedPushforward::spectrum(int p) {
  return point(p).spec;
}

double DeflatedPushforward::mix_angle(int p) {
  const PointData& pd = point(p);
  return std::atan2(pd.smix, pd.cmix);
}

cd DeflatedPushforward::link_det(int pa, int pb) {
  const PointData& x = point(pa);
  const PointData& y = point(pb);
  if (x.r == 0 && y.r == 0) return cd(1.0, 0.0);
  if (x.r == 0) {
    Mat blk = Mat::Identity(y.r, y.r) +
              (y.gB.adjoint() * Mat(y.sigma.asDiagonal())) / y.cmix;
    return Eigen::PartialPivLU<Mat>(blk).determinant();
  }
  if (y.r == 0) {
    Mat blk = Mat::Identity(x.r, x.r) +
              (x.gB * Mat(x.sigma.asDiagonal())) / x.cmix;
    return Eigen::PartialPivLU<Mat>(blk).determinant();
  }
  const double c = x.cmix, cp = y.cmix, mu = x.mumix, mup = y.mumix;
  Mat g11xy = gram_poly(x, pa, 1, -1, y, pb, 1, -1);
  Mat gaaxy = gram_aa(x, pa, y, pb);
  Mat P1 = x.F.adjoint() * g11xy * y.F;
  Mat PV = P1 + x.F.adjoint() * gaaxy * y.F;
  Mat GCyx = y.F.adjoint() * gram_poly(y, pb, cp, -mup, x, pa, c, -mu) * x.F;
  Mat sgx = x.sigma.asDiagonal();
  Mat sgy = y.sigma.asDiagonal();
  const int r = x.r, rp = y.r;
  Mat PVs = PV * sgy;
  Mat M(r + rp, r + rp);
  M.topLeftCorner(r, r) = cp * x.gB * sgx;
  M.topRightCorner(r, rp) = (c * cp) * P1 * sgy + cp * x.gB * sgx * PVs;
  M.bottomLeftCorner(rp, r) = GCyx * sgx;
  M.bottomRightCorner(rp, rp) = c * y.gB.adjoint() * sgy + GCyx * sgx * PVs;
  M /= c * cp;
  M += Mat::Identity(r + rp, r + rp);
  return Eigen::PartialPivLU<Mat>(M).determinant();
}

ChernComputation DeflatedPushforward::chern() {
  const int gx = cover_->grid_x, gy = cover_->grid_y;
  auto link = [this, gx, gy](int ix, int iy, int dir) -> cd {
    int jx = dir == 0 ? (ix + 1) % gx : ix;
    int jy = dir == 1 ? (iy + 1) % gy : iy;
    return link_det(cover_->point_index(ix, iy), cover_->point_index(jx, jy));
  };
  return chern_from_links(gx, gy, link);
}

RankFieldReport DeflatedPushforward::rank_gap_field(double min_gap) {
  std::vector<AlmostProjection> field;
  field.reserve(cover_->points());
  for (int p = 0; p < cover_->points(); ++p) {
    const PointSpectrum& s = spectrum(p);
    AlmostProjection ap;
    ap.deviation = s.deviation;
    ap.gap = s.gap;
    ap.rank_above_half = s.rank_above_half;
    ap.dim = s.dim;
    field.push_back(std::move(ap));
  }
  return rank_field(field, cover_->grid_x, cover_->grid_y, min_gap);
}

}  // namespace kbal
