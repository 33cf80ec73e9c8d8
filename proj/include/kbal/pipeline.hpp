#pragma once

#include <vector>

#include "kbal/cover.hpp"
#include "kbal/defects.hpp"
#include "kbal/symbols.hpp"
#include "kbal/truncation.hpp"

namespace kbal {

/// Raw (unsymmetrized) truncated operator P_R lambda(g) M_{B_sign} P_R.
/// This is the object the closed-form casewise defect describes exactly.
SpMat raw_truncated(const Group& group, const Ball& space, const SymbolPair& symbols,
                    int sign, const GroupElement& g);

/// Defect M(g,h) of the raw truncated map, dense, for oracle comparisons.
SpMat raw_defect(const Group& group, const Ball& space, const SymbolPair& symbols,
                 int sign, const GroupElement& g, const GroupElement& h);

/// The *-symmetrized pair (pi^+_R, pi^-_R) on the given domain ball.
MapPair ball_pair(const Group& group, const SymbolPair& symbols, int R,
                  int domain_radius, std::uint64_t cap = 4'000'000);

// One column of the defect in closed form: acting on delta_y the defect is
//   (1 - B(hy)) B(y) delta_{ghy}   if hy in Y and ghy in Y   (case 1)
//   B(y) delta_{ghy}               if hy not in Y, ghy in Y  (case 2)
//   0                              otherwise                 (case 3).
struct CasewiseDefect {
  int case_tag = 3;
  Mat value;                    // fiber block, zero for case 3
  std::ptrdiff_t target = -1;   // ball index of ghy, -1 when outside
};

CasewiseDefect casewise_defect(const Group& group, const Ball& space,
                               const SymbolPair& symbols, int sign,
                               const GroupElement& g, const GroupElement& h,
                               const GroupElement& y);

struct M1M2 {
  double m1 = 0.0, m2 = 0.0;
  bool m1_empty = true, m2_empty = true;
};

/// m1 = sup ||B+(y)-B-(y)|| over {y in Y: ghy in Y, hy not in Y};
/// m2 = sup ||(1-B+(hy))B+(y) - (1-B-(hy))B-(y)|| over {y: hy, ghy in Y}.
/// Empty index sets report 0 with the emptiness flag set.
M1M2 m1_m2(const Group& group, const Ball& space, const SymbolPair& symbols,
           const GroupElement& g, const GroupElement& h);

struct LipschitzReport {
  double delta = 0.0;       // measured (Lip) variation over generator steps
  double sup_p1 = 0.0;      // sup_y ||p(B+) - p(B-)||, p(t) = t(1-t)
  double sup_p2 = 0.0;      // same for p(t) = t^2(1-t)
  double eps2 = 0.0;        // pair balancedness, condition (2)
  double eps2prime = 0.0;   // condition (2')
  double C = 0.0;
  bool forward_ok = false;  // sup_p <= eps + C delta for both polynomials
  bool backward_ok = false; // eps <= max sup_p + C delta
};

LipschitzReport lipschitz_balance_check(const Group& group, const SymbolPair& symbols,
                                        int F_radius, int R, double C,
                                        std::uint64_t cap = 4'000'000);

// Matrix-free application of the pushforward A_{pi_sign}(x) and of
// P''(A_+, A_-)(x) in the Ball(R) (x) V (x) C^{charts} space, with the
// truncated operators optionally zero-padded into a larger ball.
class PushforwardOps {
 public:
  PushforwardOps(const Group& group, const SymbolPair& symbols,
                 const CoverData& cover, int R, int pad_radius = -1,
                 std::uint64_t cap = 4'000'000);

  int chart_dim() const { return n_; }          // per-chart space dim
  int a_dim() const { return n_ * charts_; }    // dim of A_(x)
  int p_dim() const { return 2 * n_ * charts_; }

  /// w = A_{pi_sign}(x) v.
  void apply_A(int point, int sign, const Vec& v, Vec& w) const;
  /// w = P''(A_+(x), A_-(x)) v.
  void apply_Pdoubleprime(int point, const Vec& v, Vec& w) const;

  const CoverData& cover() const { return *cover_; }
  int radius() const { return R_; }

 private:
  const CoverData* cover_;
  int R_, n_, charts_;
  std::vector<GroupElement> gammas_;
  std::vector<SpMat> tp_, tm_;                // symmetrized, padded
  std::vector<std::vector<int>> pair_gamma_;  // chart pair -> gamma index
};

struct ConvergenceCurve {
  std::vector<int> radii;
  int Rstar = 0;
  std::vector<double> sup_norm;           // sup over grid of ||P''_R - P''_R*||
  std::vector<std::vector<double>> per_point;
  std::vector<double> seconds;
};

/// For each R, || P''(A_{+,R}, A_{-,R}) - P''(A_{+,R*}, A_{-,R*}) || at every
/// cover grid point (smaller radius zero-padded; the norm is computed
/// matrix-free), reported as the sup over the grid.
ConvergenceCurve convergence_experiment(const Group& group, const SymbolPair& symbols,
                                        const CoverData& cover,
                                        const std::vector<int>& radii, int Rstar,
                                        std::uint64_t cap = 4'000'000);

}  // namespace kbal
