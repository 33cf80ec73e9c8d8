#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "kbal/errors.hpp"

namespace kbal {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cd>;

inline Mat identity(int n) { return Mat::Identity(n, n); }

bool is_hermitian(const Mat& a, double tol = 1e-12);

/// Largest singular value. On selfadjoint inputs this equals the spectral
/// radius (asserted by the test suite, not here).
double operator_norm(const Mat& a);
double operator_norm(const SpMat& a);

/// Largest |eigenvalue| of a selfadjoint operator given only by its action.
/// Lanczos with full reorthogonalization; deterministic start vector.
double matfree_sym_norm(int dim, const std::function<void(const Vec&, Vec&)>& apply,
                        int max_iter = 220, double tol = 1e-12);

/// Eigendecomposition of a selfadjoint matrix. Throws ConstructionError if
/// the input is not Hermitian within `herm_tol`.
struct EigH {
  RVec values;   // ascending
  Mat vectors;   // columns
};
EigH eig_selfadjoint(const Mat& a, double herm_tol = 1e-9);

/// f applied through the spectral theorem.
Mat apply_selfadjoint_fn(const Mat& a, const std::function<double(double)>& f,
                         double herm_tol = 1e-9);

/// sqrt(t - t^2) with eigenvalues clamped into [0,1] first. Eigenvalues
/// outside [-clamp_tol, 1+clamp_tol] raise SpectralRangeError.
Mat g_sqrt(const Mat& a, double clamp_tol = 1e-8);

/// Positive square root with small negative eigenvalues clamped to zero;
/// eigenvalues below -clamp_tol raise SpectralRangeError.
Mat sqrt_psd(const Mat& a, double clamp_tol = 1e-8);

/// The cutting function h (clamp of the line to [0,1]) through functional
/// calculus.
Mat cutting(const Mat& a, double herm_tol = 1e-9);

// Deterministic randomness for tests and calibration runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0);
  double gaussian();
  int uniform_int(int lo, int hi);  // inclusive
  Mat gaussian_matrix(int rows, int cols);
  Mat hermitian(int n, double scale = 1.0);
  Mat unitary(int n);                 // Haar via QR of a Ginibre matrix
  Mat projection(int n, int rank);    // random rank-r orthogonal projection
  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace kbal
