#include "kbal/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace kbal {

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Largest eigenvalue of the PSD Gram matrix of `a` (smaller side), exact
// dense path.
double dense_opnorm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Mat gram;
  if (a.rows() <= a.cols())
    gram = a * a.adjoint();
  else
    gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

// Lanczos on the PSD operator v -> A^*(A v) with full reorthogonalization.
// Returns sqrt of the top Ritz value. Falls back to a fixed iteration count;
// extreme Ritz values converge long before the basis is exhausted.
double lanczos_opnorm(int n, const std::function<Vec(const Vec&)>& gram_apply,
                      int max_iter, double tol) {
  if (n == 0) return 0.0;
  max_iter = std::min(max_iter, n);
  std::vector<Vec> basis;
  basis.reserve(max_iter);
  Vec v = Vec::Zero(n);
  // Deterministic start spread over all coordinates.
  for (int i = 0; i < n; ++i)
    v(i) = cd(1.0 + 0.37 * ((i * 2654435761u) % 97), 0.11 * ((i * 40503u) % 89));
  v.normalize();
  std::vector<double> alpha, beta;
  double prev = -1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int k = 0; k < max_iter; ++k) {
    basis.push_back(v);
    Vec w = gram_apply(v);
    double a = std::real(v.dot(w));
    alpha.push_back(a);
    w -= a * v;
    if (k > 0) w -= beta.back() * basis[k - 1];
    // Full reorthogonalization keeps the Ritz values trustworthy.
    for (const Vec& b : basis) w -= b.dot(w) * b;
    double bnorm = w.norm();
    int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    es.compute(tri, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    if (bnorm <= 1e-14 * std::max(1.0, std::abs(a))) return std::sqrt(std::max(0.0, top));
    if (prev >= 0.0 && std::abs(top - prev) <= tol * std::max(1.0, top) && k >= 8)
      return std::sqrt(std::max(0.0, top));
    prev = top;
    beta.push_back(bnorm);
    v = w / bnorm;
  }
  return std::sqrt(std::max(0.0, prev));
}

}  // namespace

double operator_norm(const Mat& a) {
  if (std::min(a.rows(), a.cols()) == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= 384) return dense_opnorm(a);
  auto gram_apply = [&a](const Vec& v) -> Vec { return a.adjoint() * (a * v); };
  if (a.rows() >= a.cols())
    return lanczos_opnorm(static_cast<int>(a.cols()), gram_apply, 240, 1e-13);
  auto gram_apply_t = [&a](const Vec& v) -> Vec { return a * (a.adjoint() * v); };
  return lanczos_opnorm(static_cast<int>(a.rows()), gram_apply_t, 240, 1e-13);
}

double operator_norm(const SpMat& a) {
  if (std::min(a.rows(), a.cols()) == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= 384) return dense_opnorm(Mat(a));
  SpMat ah = a.adjoint();
  if (a.rows() >= a.cols()) {
    auto gram_apply = [&](const Vec& v) -> Vec { return ah * (a * v); };
    return lanczos_opnorm(static_cast<int>(a.cols()), gram_apply, 240, 1e-13);
  }
  auto gram_apply_t = [&](const Vec& v) -> Vec { return a * (ah * v); };
  return lanczos_opnorm(static_cast<int>(a.rows()), gram_apply_t, 240, 1e-13);
}

double matfree_sym_norm(int dim, const std::function<void(const Vec&, Vec&)>& apply,
                        int max_iter, double tol) {
  if (dim == 0) return 0.0;
  Vec tmp(dim);
  auto gram = [&](const Vec& v) -> Vec {
    Vec mid(dim);
    apply(v, mid);
    apply(mid, tmp);
    return tmp;
  };
  // Norm of a selfadjoint operator equals sqrt of the top eigenvalue of A^2.
  return lanczos_opnorm(dim, gram, max_iter, tol);
}

EigH eig_selfadjoint(const Mat& a, double herm_tol) {
  if (!is_hermitian(a, herm_tol))
    throw ConstructionError("eig_selfadjoint: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
  return EigH{es.eigenvalues(), es.eigenvectors()};
}

Mat apply_selfadjoint_fn(const Mat& a, const std::function<double(double)>& f,
                         double herm_tol) {
  EigH e = eig_selfadjoint(a, herm_tol);
  RVec fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

namespace {
// Values this close to a sqrt branch point are indistinguishable from it at
// working precision; snapping keeps sqrt from amplifying 1e-16 rounding of
// exact inputs into 1e-8 output noise.
constexpr double kSnapTol = 1e-14;
}  // namespace

Mat g_sqrt(const Mat& a, double clamp_tol) {
  EigH e = eig_selfadjoint(a);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double t = e.values(i);
    if (t < -clamp_tol || t > 1.0 + clamp_tol)
      throw SpectralRangeError("g_sqrt: eigenvalue " + std::to_string(t) +
                               " outside [0,1] beyond clamp tolerance");
  }
  RVec fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double t = e.values(i);
    double v = t - t * t;
    fv(i) = v <= kSnapTol ? 0.0 : std::sqrt(v);
  }
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Mat sqrt_psd(const Mat& a, double clamp_tol) {
  EigH e = eig_selfadjoint(a);
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) < -clamp_tol)
      throw SpectralRangeError("sqrt_psd: eigenvalue " + std::to_string(e.values(i)) +
                               " below zero beyond clamp tolerance");
  RVec fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double t = e.values(i);
    fv(i) = t <= kSnapTol ? 0.0 : std::sqrt(t);
  }
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Mat cutting(const Mat& a, double herm_tol) {
  return apply_selfadjoint_fn(
      a, [](double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }, herm_tol);
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(gen_);
}

double Rng::gaussian() {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(gen_);
}

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(gen_);
}

Mat Rng::gaussian_matrix(int rows, int cols) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cd(gaussian(), gaussian());
  return m;
}

Mat Rng::hermitian(int n, double scale) {
  Mat g = gaussian_matrix(n, n);
  Mat h = 0.5 * (g + g.adjoint());
  double nrm = operator_norm(h);
  if (nrm > 0.0) h *= scale / nrm;
  return h;
}

Mat Rng::unitary(int n) {
  Mat g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  // Fix the phase ambiguity so the result is a deterministic function of g.
  Mat r = q.adjoint() * g;
  for (int i = 0; i < n; ++i) {
    cd d = r(i, i);
    double ad = std::abs(d);
    if (ad > 0) q.col(i) *= d / ad;
  }
  return q;
}

Mat Rng::projection(int n, int rank) {
  Mat u = unitary(n);
  Mat p = Mat::Zero(n, n);
  for (int i = 0; i < rank; ++i) p += u.col(i) * u.col(i).adjoint();
  return p;
}

}  // namespace kbal
