#include "kbal/symbols.hpp"

#include <cmath>

namespace kbal {

namespace {

double smoothstep01(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

Mat bott_point(double x, double y, double support_radius, int winding) {
  double t = std::abs(x) + std::abs(y);
  if (t >= support_radius) {
    // Exactly the constant symbol beyond the support radius.
    Mat p = Mat::Zero(2, 2);
    p(1, 1) = 1.0;
    return p;
  }
  double beta = 0.5 * M_PI * smoothstep01(t / support_radius);
  double c = std::cos(beta), s = std::sin(beta);
  double theta = std::atan2(y, x) * winding;
  cd phase(std::cos(theta), std::sin(theta));
  // Projection onto (cos b, sin b e^{i w theta}); equals diag(0,1) once the
  // climb is complete, diag(1,0) at the origin.
  Mat p(2, 2);
  p(0, 0) = c * c;
  p(0, 1) = c * s * std::conj(phase);
  p(1, 0) = c * s * phase;
  p(1, 1) = s * s;
  return p;
}

}  // namespace

SymbolPair make_bott_pair(const BottParams& params) {
  SymbolPair sp;
  sp.fiber_dim = 2;
  sp.support_radius = static_cast<int>(std::ceil(params.support_radius));
  double r0 = params.support_radius;
  int w = params.winding;
  sp.Bplus_plane = [r0, w](double x, double y) { return bott_point(x, y, r0, w); };
  sp.Bplus = [r0, w](const GroupElement& g) {
    if (g.word.size() != 2)
      throw ConstructionError("bott symbol: expected a Z^2 element");
    return bott_point(g.word[0], g.word[1], r0, w);
  };
  sp.Bminus = Mat::Zero(2, 2);
  sp.Bminus(1, 1) = 1.0;
  return sp;
}

SymbolPair make_constant_pair(const Mat& b) {
  if (!is_hermitian(b, 1e-12))
    throw ConstructionError("constant symbol must be selfadjoint");
  SymbolPair sp;
  sp.fiber_dim = static_cast<int>(b.rows());
  sp.support_radius = 0;
  Mat bc = b;
  sp.Bplus = [bc](const GroupElement&) { return bc; };
  sp.Bplus_plane = [bc](double, double) { return bc; };
  sp.Bminus = bc;
  return sp;
}

SymbolPair make_identity_pair(int fiber_dim) {
  return make_constant_pair(Mat::Identity(fiber_dim, fiber_dim));
}

double measured_variation(const Group& group, const SymbolPair& symbols, int R) {
  Ball ball = group.ball(R);
  double worst = 0.0;
  std::vector<GroupElement> steps;
  for (int i = 0; i < group.spec().rank; ++i) {
    steps.push_back(group.generator(i, false));
    steps.push_back(group.generator(i, true));
  }
  for (std::size_t yi = 0; yi < ball.size(); ++yi) {
    const GroupElement& y = ball.at(yi);
    Mat by = symbols.Bplus(y);
    for (const auto& h : steps) {
      GroupElement hy = group.multiply(h, y);
      worst = std::max(worst, operator_norm(Mat(symbols.Bplus(hy) - by)));
    }
  }
  return worst;
}

double support_defect(const Group& group, const SymbolPair& symbols, int R) {
  Ball ball = group.ball(R);
  double worst = 0.0;
  for (std::size_t yi = 0; yi < ball.size(); ++yi) {
    const GroupElement& y = ball.at(yi);
    if (group.length(y) < symbols.support_radius) continue;
    worst = std::max(worst, operator_norm(Mat(symbols.Bplus(y) - symbols.Bminus)));
  }
  return worst;
}

}  // namespace kbal
