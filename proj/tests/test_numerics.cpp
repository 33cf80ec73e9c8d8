#include "doctest.h"
#include "kbal/numerics.hpp"

using namespace kbal;

TEST_CASE("operator norm equals largest singular value") {
  Rng rng(11);
  for (int n : {1, 3, 8, 20}) {
    Mat a = rng.gaussian_matrix(n, n);
    Eigen::JacobiSVD<Mat> svd(a);
    CHECK(operator_norm(a) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  }
}

TEST_CASE("on selfadjoint inputs the norm equals the spectral radius") {
  Rng rng(12);
  for (int n : {2, 5, 16}) {
    Mat h = rng.hermitian(n, 2.0);
    EigH e = eig_selfadjoint(h);
    double rho = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
    CHECK(std::abs(operator_norm(h) - rho) < 1e-10);
  }
}

TEST_CASE("sparse and matrix-free norms agree with dense") {
  Rng rng(13);
  Mat a = rng.gaussian_matrix(40, 40);
  SpMat s = a.sparseView();
  CHECK(operator_norm(s) == doctest::Approx(operator_norm(a)).epsilon(1e-11));

  Mat h = rng.hermitian(30, 1.5);
  auto apply = [&](const Vec& v, Vec& w) { w = h * v; };
  CHECK(matfree_sym_norm(30, apply) == doctest::Approx(operator_norm(h)).epsilon(1e-10));
}

TEST_CASE("lanczos path norm (large matrices) matches known values") {
  // Diagonal sparse with known top value, above the dense threshold.
  int n = 800;
  SpMat s(n, n);
  std::vector<Eigen::Triplet<cd>> trips;
  for (int i = 0; i < n; ++i)
    trips.emplace_back(i, i, cd(1.0 + static_cast<double>(i) / n, 0));
  s.setFromTriplets(trips.begin(), trips.end());
  CHECK(operator_norm(s) == doctest::Approx(2.0 - 1.0 / n).epsilon(1e-10));
}

TEST_CASE("functional calculus: g_sqrt, sqrt_psd, cutting") {
  Rng rng(14);
  Mat p = rng.projection(6, 2);
  CHECK(operator_norm(g_sqrt(p)) < 1e-12);  // g vanishes on {0,1}

  Mat half = 0.5 * Mat::Identity(3, 3);
  CHECK(operator_norm(Mat(g_sqrt(half) - half)) < 1e-12);

  Mat bad = Mat::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS(g_sqrt(bad), SpectralRangeError);
  CHECK_THROWS_AS(sqrt_psd(Mat(-Mat::Identity(2, 2))), SpectralRangeError);

  Mat h = rng.hermitian(5, 0.9);
  Mat hp = h + Mat::Identity(5, 5);  // psd-ish
  Mat r = sqrt_psd(hp, 1e-6);
  CHECK(operator_norm(Mat(r * r - hp)) < 1e-10);

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = -0.2;
  d(1, 1) = 0.5;
  d(2, 2) = 1.3;
  Mat cut = cutting(d);
  CHECK(std::abs(cut(0, 0).real() - 0.0) < 1e-14);
  CHECK(std::abs(cut(1, 1).real() - 0.5) < 1e-14);
  CHECK(std::abs(cut(2, 2).real() - 1.0) < 1e-14);
  CHECK(operator_norm(Mat(cutting(p) - p)) < 1e-12);
}

TEST_CASE("haar unitary and projection helpers") {
  Rng rng(15);
  Mat u = rng.unitary(7);
  CHECK(operator_norm(Mat(u.adjoint() * u - Mat::Identity(7, 7))) < 1e-12);
  Mat p = rng.projection(7, 3);
  CHECK(operator_norm(Mat(p * p - p)) < 1e-12);
  CHECK(std::abs(p.trace().real() - 3.0) < 1e-10);
}

TEST_CASE("eig_selfadjoint rejects non-hermitian input") {
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_selfadjoint(a), ConstructionError);
}
