#include "doctest.h"
#include "kbal/lowrank.hpp"
#include "kbal/pipeline.hpp"

using namespace kbal;

TEST_CASE("ball_pair with identity symbols: compressed regular representation") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair sym = make_identity_pair(1);
  MapPair pair = ball_pair(z2, sym, 3, 2);
  DefectReport rep = defect_report(pair, z2.ball(1));
  CHECK(rep.eps_balanced_2 == 0.0);
  CHECK(rep.eps_balanced_2prime == 0.0);
  CHECK(rep.eps_admissible == 0.0);
  // The plus map is exactly the compressed left regular representation.
  Ball space = z2.ball(3);
  GroupElement g{{1, 0}};
  CHECK(operator_norm(Mat(pair.plus.dense_at(g) -
                          Mat(compress_lambda(z2, space, g, 1)))) == 0.0);
}

TEST_CASE("equal non-identity symbols still give zero balancedness") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  Mat b(2, 2);
  b << 0.3, cd(0.1, 0.2), cd(0.1, -0.2), 0.9;
  SymbolPair sym = make_constant_pair(b);
  MapPair pair = ball_pair(z2, sym, 3, 2);
  DefectReport rep = defect_report(pair, z2.ball(1));
  CHECK(rep.eps_balanced_2 == 0.0);
  CHECK(rep.eps_balanced_2prime == 0.0);
}

TEST_CASE("casewise defect: the three cases") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  const int R = 3;
  Ball space = z2.ball(R);

  // Constant projection symbol: interior case-1 value (1-B)B = 0.
  Mat proj = Mat::Zero(2, 2);
  proj(0, 0) = 1.0;
  SymbolPair cproj = make_constant_pair(proj);
  CasewiseDefect c1 = casewise_defect(z2, space, cproj, +1, GroupElement{{1, 0}},
                                      GroupElement{{0, 1}}, z2.identity());
  CHECK(c1.case_tag == 1);
  CHECK(operator_norm(c1.value) < 1e-15);

  // hy outside, ghy inside: the value is B(y).
  SymbolPair bott = make_bott_pair(BottParams{2.0, 1});
  GroupElement y{{3, 0}}, h{{1, 0}}, gback{{-1, 0}};
  CasewiseDefect c2 = casewise_defect(z2, space, bott, +1, gback, h, y);
  CHECK(c2.case_tag == 2);
  CHECK(operator_norm(Mat(c2.value - bott.Bplus(y))) < 1e-15);

  // ghy outside: zero.
  CasewiseDefect c3 = casewise_defect(z2, space, bott, +1, h, h, y);
  CHECK(c3.case_tag == 3);
  CHECK(operator_norm(c3.value) == 0.0);
}

TEST_CASE("casewise defect equals the dense defect column") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  const int R = 4;
  Ball space = z2.ball(R);
  SymbolPair bott = make_bott_pair(BottParams{3.0, 1});
  Ball small = z2.ball(2);
  Rng rng(51);
  const int nv = bott.fiber_dim;
  for (int trial = 0; trial < 40; ++trial) {
    const GroupElement& g = small.at(rng.uniform_int(0, (int)small.size() - 1));
    const GroupElement& h = small.at(rng.uniform_int(0, (int)small.size() - 1));
    const GroupElement& y = space.at(rng.uniform_int(0, (int)space.size() - 1));
    int sign = rng.uniform_int(0, 1) ? 1 : -1;
    CasewiseDefect cw = casewise_defect(z2, space, bott, sign, g, h, y);
    Mat dense = Mat(raw_defect(z2, space, bott, sign, g, h));
    Mat column = dense.middleCols(space.index_of(y) * nv, nv);
    Mat expected = Mat::Zero(dense.rows(), nv);
    if (cw.case_tag != 3) expected.middleRows(cw.target * nv, nv) = cw.value;
    CHECK(operator_norm(Mat(column - expected)) < 1e-13);
  }
}

TEST_CASE("m1/m2: emptiness, boundary localization, dense norm equality") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  const int R = 8;
  Ball space = z2.ball(R);

  SymbolPair equal = make_identity_pair(2);
  M1M2 m0 = m1_m2(z2, space, equal, GroupElement{{1, 0}}, GroupElement{{0, 1}});
  CHECK(m0.m1 == 0.0);
  CHECK(m0.m2 == 0.0);

  // Difference supported at radius < R - |g| - |h|: the boundary index set
  // of m1 misses it entirely.
  SymbolPair bott2 = make_bott_pair(BottParams{2.0, 1});
  GroupElement g{{1, 0}}, h{{0, 1}};
  M1M2 m = m1_m2(z2, space, bott2, g, h);
  CHECK_FALSE(m.m1_empty);
  CHECK(m.m1 == 0.0);
  CHECK(m.m2 > 0.0);

  // Dense equality || M_+ - M_- || = max(m1, m2) for the raw maps.
  for (auto& gg : {GroupElement{{1, 0}}, GroupElement{{1, 1}}}) {
    for (auto& hh : {GroupElement{{0, 1}}, GroupElement{{-1, 0}}}) {
      M1M2 mm = m1_m2(z2, space, bott2, gg, hh);
      SpMat dp = raw_defect(z2, space, bott2, +1, gg, hh);
      SpMat dm = raw_defect(z2, space, bott2, -1, gg, hh);
      double dense = operator_norm(SpMat(dp - dm));
      CHECK(std::abs(std::max(mm.m1, mm.m2) - dense) < 1e-10);
    }
  }
}

TEST_CASE("lipschitz balance report") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  // Equal pairs: both sides vanish.
  SymbolPair equal = make_constant_pair(Mat(0.5 * Mat::Identity(2, 2)));
  LipschitzReport r0 = lipschitz_balance_check(z2, equal, 1, 4, 4.0);
  CHECK(r0.sup_p1 == 0.0);
  CHECK(r0.eps2 == 0.0);
  CHECK(r0.forward_ok);
  CHECK(r0.backward_ok);

  // Projection-valued bott pair: p(B) = 0 exactly, eps controlled by C delta.
  SymbolPair bott = make_bott_pair(BottParams{3.0, 1});
  LipschitzReport r1 = lipschitz_balance_check(z2, bott, 1, 5, 4.0);
  CHECK(r1.sup_p1 < 1e-12);
  CHECK(r1.sup_p2 < 1e-12);
  CHECK(r1.delta > 0.0);
  CHECK(r1.forward_ok);
  CHECK(r1.backward_ok);
}

TEST_CASE("matrix-free pushforward agrees with the dense push_map") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair bott = make_bott_pair(BottParams{2.0, 1});
  CoverData cover = make_torus_cover(3, 5, 5);
  const int R = 3;
  PushforwardOps ops(z2, bott, cover, R);
  MapPair pair = ball_pair(z2, bott, R, 2);
  Rng rng(52);
  for (int p : {0, 6, 12, 25 - 1}) {
    Mat ap = push_map(pair.plus, cover, p);
    Mat am = push_map(pair.minus, cover, p);
    Vec v = rng.gaussian_matrix(ops.a_dim(), 1);
    Vec w(ops.a_dim());
    ops.apply_A(p, +1, v, w);
    CHECK((w - ap * v).norm() < 1e-11 * std::max(1.0, v.norm()));
    ops.apply_A(p, -1, v, w);
    CHECK((w - am * v).norm() < 1e-11 * std::max(1.0, v.norm()));

    // P'' application against the dense construction.
    Mat pd = build_Pdoubleprime(SelfadjointPair{ap, am}).P;
    Vec v2 = rng.gaussian_matrix(ops.p_dim(), 1);
    Vec w2(ops.p_dim());
    ops.apply_Pdoubleprime(p, v2, w2);
    CHECK((w2 - pd * v2).norm() < 1e-10 * std::max(1.0, v2.norm()));
  }
}

TEST_CASE("convergence experiment: zeros for equal symbols, stabilization") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  CoverData cover = make_torus_cover(3, 3, 3);

  SymbolPair equal = make_identity_pair(2);
  ConvergenceCurve c0 = convergence_experiment(z2, equal, cover, {2, 3}, 5);
  for (double v : c0.sup_norm) CHECK(v < 1e-12);

  // Support radius 2: differences vanish exactly once R >= support + 2.
  SymbolPair bott = make_bott_pair(BottParams{2.0, 1});
  ConvergenceCurve c1 = convergence_experiment(z2, bott, cover, {2, 3, 4}, 6);
  CHECK(c1.sup_norm[0] > c1.sup_norm[1]);
  CHECK(c1.sup_norm[1] > c1.sup_norm[2]);
  CHECK(c1.sup_norm[2] < 1e-10);
}
