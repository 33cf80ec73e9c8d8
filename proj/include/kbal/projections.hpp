#pragma once

#include <vector>

#include "kbal/numerics.hpp"

namespace kbal {

struct SelfadjointPair {
  Mat a, b;
};

SelfadjointPair make_pair(const Mat& a, const Mat& b, double herm_tol = 1e-9);

// Selfadjoint matrix with its almost-projection data: deviation ||P^2 - P||,
// distance of the spectrum to 1/2, and the rank read above 1/2.
struct AlmostProjection {
  Mat P;
  double deviation = 0.0;
  double gap = 0.0;
  int rank_above_half = 0;
  int dim = 0;
};

AlmostProjection almost_projection_from(const Mat& P, double herm_tol = 1e-9);

/// P = [[1-b, g(a)], [g(a), a]] with g(t) = sqrt(t - t^2) by functional
/// calculus; spectrum of a must lie in [-tol, 1+tol].
AlmostProjection build_P(const SelfadjointPair& pair, double clamp_tol = 1e-8);

/// P' = U* P U via U = [[(1-a)^{1/2}, -a^{1/2}], [a^{1/2}, (1-a)^{1/2}]],
/// returned from its explicit blocks. The unitarity of U and the relation
/// ||U* P U - P'|| < 1e-10 are verified internally.
AlmostProjection build_Pprime(const SelfadjointPair& pair, double clamp_tol = 1e-8);

/// Polynomial almost projection: blocks
///   [[1 + (1-a)(a-b)(1-a), (1-a)(b-a)a], [a(b-a)(1-a), a(a-b)a]].
/// Also evaluated through the rank-factored form
///   diag(1,0) + [1-a; -a](a-b)[1-a, -a]; the two must agree to 1e-12.
AlmostProjection build_Pdoubleprime(const SelfadjointPair& pair);

/// P'' from the factored form only (no agreement check); used by property
/// tests as the second route.
Mat pdoubleprime_factored(const SelfadjointPair& pair);

/// P''(h_s(a), h_s(b)) with h_s = (1-s) id + s h, h the cutting function.
AlmostProjection homotopy_path(const SelfadjointPair& pair, double s);

struct HomotopyReport {
  std::vector<double> s;
  std::vector<double> deviations;
  std::vector<int> ranks;
  bool gap_ok = false;        // deviation < 1/4 at every sample
  bool rank_constant = false;
};

HomotopyReport homotopy_sweep(const SelfadjointPair& pair, int samples = 101);

/// The universal-algebra generators as 2x2 matrix functions on [-1,1]:
///   a(t) = diag(cos^2(pi t/2), 0) on [-1,0], diag(1,0) on [0,1];
///   b(t) = a(t) on [-1,0], the rank-one projection at angle pi t/2 on [0,1].
SelfadjointPair universal_generators(double t);

}  // namespace kbal
