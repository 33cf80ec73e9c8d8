#include "kbal/projections.hpp"

#include <cmath>

namespace kbal {

SelfadjointPair make_pair(const Mat& a, const Mat& b, double herm_tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ConstructionError("SelfadjointPair: dimensions mismatch");
  if (!is_hermitian(a, herm_tol) || !is_hermitian(b, herm_tol))
    throw ConstructionError("SelfadjointPair: inputs must be selfadjoint");
  return SelfadjointPair{a, b};
}

AlmostProjection almost_projection_from(const Mat& P, double herm_tol) {
  EigH e = eig_selfadjoint(P, herm_tol);
  AlmostProjection ap;
  ap.P = P;
  ap.dim = static_cast<int>(P.rows());
  double dev = 0.0, gap = 0.5;
  int rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double t = e.values(i);
    dev = std::max(dev, std::abs(t * t - t));
    gap = std::min(gap, std::abs(t - 0.5));
    if (t > 0.5) ++rank;
  }
  ap.deviation = dev;
  ap.gap = gap;
  ap.rank_above_half = rank;
  return ap;
}

namespace {

Mat two_by_two(const Mat& b11, const Mat& b12, const Mat& b21, const Mat& b22) {
  const Eigen::Index n = b11.rows();
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = b11;
  out.topRightCorner(n, n) = b12;
  out.bottomLeftCorner(n, n) = b21;
  out.bottomRightCorner(n, n) = b22;
  return out;
}

}  // namespace

AlmostProjection build_P(const SelfadjointPair& pair, double clamp_tol) {
  const Eigen::Index n = pair.a.rows();
  Mat ga = g_sqrt(pair.a, clamp_tol);
  Mat P = two_by_two(identity(static_cast<int>(n)) - pair.b, ga, ga, pair.a);
  return almost_projection_from(P);
}

AlmostProjection build_Pprime(const SelfadjointPair& pair, double clamp_tol) {
  const Eigen::Index n = pair.a.rows();
  Mat one = identity(static_cast<int>(n));
  Mat sa = sqrt_psd(pair.a, clamp_tol);
  Mat sia = sqrt_psd(one - pair.a, clamp_tol);
  Mat ab = pair.a - pair.b;
  Mat Pp = two_by_two(one + sia * ab * sia, sia * (-ab) * sa, sa * (-ab) * sia,
                      sa * ab * sa);
  // U = [[(1-a)^{1/2}, -a^{1/2}], [a^{1/2}, (1-a)^{1/2}]]; both checks are
  // the paper's displayed relations, kept as hard postconditions.
  Mat U = two_by_two(sia, -sa, sa, sia);
  Mat UU = U.adjoint() * U;
  UU -= identity(static_cast<int>(2 * n));
  if (operator_norm(UU) > 1e-12 * std::max(1.0, operator_norm(pair.a)))
    throw ConstructionError("build_Pprime: U failed the unitarity check");
  Mat P = build_P(pair, clamp_tol).P;
  if (operator_norm(Mat(U.adjoint() * P * U - Pp)) > 1e-10)
    throw ConstructionError("build_Pprime: U*PU does not match the block formula");
  return almost_projection_from(Pp);
}

Mat pdoubleprime_factored(const SelfadjointPair& pair) {
  const Eigen::Index n = pair.a.rows();
  Mat one = identity(static_cast<int>(n));
  Mat w(2 * n, n);
  w.topRows(n) = one - pair.a;
  w.bottomRows(n) = -pair.a;
  Mat out = Mat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = one;
  out += w * (pair.a - pair.b) * w.adjoint();
  return out;
}

AlmostProjection build_Pdoubleprime(const SelfadjointPair& pair) {
  const Eigen::Index n = pair.a.rows();
  Mat one = identity(static_cast<int>(n));
  Mat ia = one - pair.a;
  Mat ab = pair.a - pair.b;
  Mat blocks = two_by_two(one + ia * ab * ia, ia * (-ab) * pair.a,
                          pair.a * (-ab) * ia, pair.a * ab * pair.a);
  Mat factored = pdoubleprime_factored(pair);
  if (operator_norm(Mat(blocks - factored)) > 1e-12 * std::max(1.0, operator_norm(blocks)))
    throw ConstructionError("build_Pdoubleprime: block and factored forms disagree");
  return almost_projection_from(blocks);
}

AlmostProjection homotopy_path(const SelfadjointPair& pair, double s) {
  if (s < 0.0 || s > 1.0) throw ConfigError("homotopy_path: s outside [0,1]");
  auto hs = [s](double t) {
    double h = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return (1.0 - s) * t + s * h;
  };
  Mat a = apply_selfadjoint_fn(pair.a, hs);
  Mat b = apply_selfadjoint_fn(pair.b, hs);
  return build_Pdoubleprime(SelfadjointPair{a, b});
}

HomotopyReport homotopy_sweep(const SelfadjointPair& pair, int samples) {
  if (samples < 2) throw ConfigError("homotopy_sweep: need at least 2 samples");
  HomotopyReport rep;
  rep.gap_ok = true;
  rep.rank_constant = true;
  for (int i = 0; i < samples; ++i) {
    double s = static_cast<double>(i) / (samples - 1);
    AlmostProjection ap = homotopy_path(pair, s);
    rep.s.push_back(s);
    rep.deviations.push_back(ap.deviation);
    rep.ranks.push_back(ap.rank_above_half);
    if (ap.deviation >= 0.25) rep.gap_ok = false;
    if (ap.rank_above_half != rep.ranks.front()) rep.rank_constant = false;
  }
  return rep;
}

SelfadjointPair universal_generators(double t) {
  if (t < -1.0 || t > 1.0)
    throw ConfigError("universal_generators: t outside [-1,1]");
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  double c = std::cos(0.5 * M_PI * t), s = std::sin(0.5 * M_PI * t);
  if (t <= 0.0) {
    a(0, 0) = c * c;
    b = a;
  } else {
    a(0, 0) = 1.0;
    b(0, 0) = c * c;
    b(0, 1) = c * s;
    b(1, 0) = c * s;
    b(1, 1) = s * s;
  }
  return SelfadjointPair{a, b};
}

}  // namespace kbal
