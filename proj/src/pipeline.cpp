#include "kbal/pipeline.hpp"

#include <chrono>

namespace kbal {

SpMat raw_truncated(const Group& group, const Ball& space, const SymbolPair& symbols,
                    int sign, const GroupElement& g) {
  auto B = [&](const GroupElement& y) { return symbols.B(sign, y); };
  return compress_lambda_mult(group, space, g, B, symbols.fiber_dim);
}

SpMat raw_defect(const Group& group, const Ball& space, const SymbolPair& symbols,
                 int sign, const GroupElement& g, const GroupElement& h) {
  SpMat tg = raw_truncated(group, space, symbols, sign, g);
  SpMat th = raw_truncated(group, space, symbols, sign, h);
  SpMat tgh = raw_truncated(group, space, symbols, sign, group.multiply(g, h));
  SpMat d = tgh - SpMat(tg * th);
  d.prune(1e-300, 1.0);
  return d;
}

MapPair ball_pair(const Group& group, const SymbolPair& symbols, int R,
                  int domain_radius, std::uint64_t cap) {
  Ball domain = group.ball(domain_radius, cap);
  return truncated_pair(group, symbols, R, domain, cap);
}

CasewiseDefect casewise_defect(const Group& group, const Ball& space,
                               const SymbolPair& symbols, int sign,
                               const GroupElement& g, const GroupElement& h,
                               const GroupElement& y) {
  if (!space.contains(y))
    throw DomainEscapeError("casewise_defect: y outside the ball");
  const int nv = symbols.fiber_dim;
  GroupElement hy = group.multiply(h, y);
  GroupElement ghy = group.multiply(g, hy);
  CasewiseDefect out;
  out.target = space.index_of(ghy);
  if (out.target < 0) {
    out.case_tag = 3;
    out.value = Mat::Zero(nv, nv);
    return out;
  }
  Mat by = symbols.B(sign, y);
  if (space.contains(hy)) {
    out.case_tag = 1;
    out.value = (Mat::Identity(nv, nv) - symbols.B(sign, hy)) * by;
  } else {
    out.case_tag = 2;
    out.value = by;
  }
  return out;
}

M1M2 m1_m2(const Group& group, const Ball& space, const SymbolPair& symbols,
           const GroupElement& g, const GroupElement& h) {
  M1M2 out;
  const int nv = symbols.fiber_dim;
  Mat one = Mat::Identity(nv, nv);
  for (std::size_t yi = 0; yi < space.size(); ++yi) {
    const GroupElement& y = space.at(yi);
    GroupElement hy = group.multiply(h, y);
    GroupElement ghy = group.multiply(g, hy);
    if (!space.contains(ghy)) continue;
    if (space.contains(hy)) {
      Mat d = (one - symbols.Bplus(hy)) * symbols.Bplus(y) -
              (one - symbols.Bminus_at(hy)) * symbols.Bminus_at(y);
      out.m2 = std::max(out.m2, operator_norm(d));
      out.m2_empty = false;
    } else {
      Mat d = symbols.Bplus(y) - symbols.Bminus_at(y);
      out.m1 = std::max(out.m1, operator_norm(d));
      out.m1_empty = false;
    }
  }
  return out;
}

LipschitzReport lipschitz_balance_check(const Group& group, const SymbolPair& symbols,
                                        int F_radius, int R, double C,
                                        std::uint64_t cap) {
  LipschitzReport rep;
  rep.C = C;
  rep.delta = measured_variation(group, symbols, R);
  Ball space = group.ball(R, cap);
  for (std::size_t yi = 0; yi < space.size(); ++yi) {
    const GroupElement& y = space.at(yi);
    Mat bp = symbols.Bplus(y), bm = symbols.Bminus_at(y);
    Mat p1 = (bp - bp * bp) - (bm - bm * bm);
    Mat p2 = (bp * bp - bp * bp * bp) - (bm * bm - bm * bm * bm);
    rep.sup_p1 = std::max(rep.sup_p1, operator_norm(p1));
    rep.sup_p2 = std::max(rep.sup_p2, operator_norm(p2));
  }
  MapPair pair = ball_pair(group, symbols, R, 2 * F_radius, cap);
  DefectReport dr = defect_report(pair, group.ball(F_radius, cap));
  rep.eps2 = dr.eps_balanced_2;
  rep.eps2prime = dr.eps_balanced_2prime;
  double supp = std::max(rep.sup_p1, rep.sup_p2);
  double eps = std::max(rep.eps2, rep.eps2prime);
  rep.forward_ok = supp <= eps + C * rep.delta + 1e-10;
  rep.backward_ok = eps <= supp + C * rep.delta + 1e-10;
  return rep;
}

PushforwardOps::PushforwardOps(const Group& group, const SymbolPair& symbols,
                               const CoverData& cover, int R, int pad_radius,
                               std::uint64_t cap)
    : cover_(&cover), R_(R), charts_(cover.charts) {
  if (pad_radius < R) pad_radius = R;
  Ball space = group.ball(R, cap);
  Ball padded = pad_radius == R ? space : group.ball(pad_radius, cap);
  n_ = static_cast<int>(padded.size()) * symbols.fiber_dim;
  const int n_small = static_cast<int>(space.size()) * symbols.fiber_dim;

  // Distinct cocycle values, closed under inverse by antisymmetry.
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

  auto pad = [&](const SpMat& m) {
    if (pad_radius == R) return m;
    SpMat out(n_, n_);
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(m.nonZeros());
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                           it.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
  };

  // Symmetrized truncations, exactly as in truncated_pair.
  auto build = [&](int sign, const GroupElement& g) -> SpMat {
    GroupElement gi = group.inverse(g);
    auto B = [&](const GroupElement& y) { return symbols.B(sign, y); };
    if (group.is_identity(g) || group.less(g, gi))
      return compress_lambda_mult(group, space, g, B, symbols.fiber_dim);
    SpMat t = compress_lambda_mult(group, space, gi, B, symbols.fiber_dim);
    return SpMat(t.adjoint());
  };
  (void)n_small;
  tp_.reserve(gammas_.size());
  tm_.reserve(gammas_.size());
  for (const auto& g : gammas_) {
    tp_.push_back(pad(build(+1, g)));
    tm_.push_back(pad(build(-1, g)));
  }
}

void PushforwardOps::apply_A(int point, int sign, const Vec& v, Vec& w) const {
  const auto& T = sign >= 0 ? tp_ : tm_;
  w.setZero(static_cast<Eigen::Index>(n_) * charts_);
  for (int i = 0; i < charts_; ++i) {
    double pi = cover_->phi(i, point);
    if (pi == 0.0) continue;
    auto wi = w.segment(static_cast<Eigen::Index>(i) * n_, n_);
    for (int j = 0; j < charts_; ++j) {
      double pj = cover_->phi(j, point);
      if (pj == 0.0 || pair_gamma_[i][j] < 0) continue;
      wi += (pi * pj) * (T[pair_gamma_[i][j]] * v.segment(
                             static_cast<Eigen::Index>(j) * n_, n_));
    }
  }
}

void PushforwardOps::apply_Pdoubleprime(int point, const Vec& v, Vec& w) const {
  const Eigen::Index m = static_cast<Eigen::Index>(n_) * charts_;
  Vec v1 = v.head(m), v2 = v.tail(m);
  // W^* v = (1-a) v1 - a v2 = v1 - a (v1 + v2)
  Vec s = v1 + v2, as(m);
  apply_A(point, +1, s, as);
  Vec u = v1 - as;
  // (a-b) u
  Vec au(m), bu(m);
  apply_A(point, +1, u, au);
  apply_A(point, -1, u, bu);
  Vec d = au - bu;
  // W d = [(1-a) d; -a d]
  Vec ad(m);
  apply_A(point, +1, d, ad);
  w.resize(2 * m);
  w.head(m) = v1 + d - ad;  // Q v + top of W d
  w.tail(m) = -ad;
}

ConvergenceCurve convergence_experiment(const Group& group, const SymbolPair& symbols,
                                        const CoverData& cover,
                                        const std::vector<int>& radii, int Rstar,
                                        std::uint64_t cap) {
  for (int R : radii)
    if (R > Rstar) throw ConfigError("convergence_experiment: radius exceeds R*");
  ConvergenceCurve curve;
  curve.radii = radii;
  curve.Rstar = Rstar;
  PushforwardOps ref(group, symbols, cover, Rstar, Rstar, cap);
  const int dim = ref.p_dim();
  for (int R : radii) {
    auto t0 = std::chrono::steady_clock::now();
    PushforwardOps ops(group, symbols, cover, R, Rstar, cap);
    std::vector<double> per_point;
    double sup = 0.0;
    for (int p = 0; p < cover.points(); ++p) {
      auto apply = [&](const Vec& v, Vec& w) {
        Vec wr(dim), ws(dim);
        ops.apply_Pdoubleprime(p, v, wr);
        ref.apply_Pdoubleprime(p, v, ws);
        w = wr - ws;
      };
      double nrm = matfree_sym_norm(dim, apply, 160, 1e-11);
      per_point.push_back(nrm);
      sup = std::max(sup, nrm);
    }
    auto t1 = std::chrono::steady_clock::now();
    curve.per_point.push_back(std::move(per_point));
    curve.sup_norm.push_back(sup);
    curve.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return curve;
}

}  // namespace kbal
