#include "doctest.h"
#include "kbal/lowrank.hpp"

using namespace kbal;

namespace {

// Dense reference data for a small radius.
struct DenseRef {
  std::vector<Mat> Ppp;  // P'' field over the grid
  int m = 0;
};

DenseRef dense_reference(const Group& grp, const SymbolPair& sym,
                         const CoverData& cover, int R) {
  DenseRef ref;
  MapPair pair = ball_pair(grp, sym, R, 2);
  for (int p = 0; p < cover.points(); ++p) {
    Mat a = push_map(pair.plus, cover, p);
    Mat b = push_map(pair.minus, cover, p);
    ref.m = static_cast<int>(a.rows());
    ref.Ppp.push_back(build_Pdoubleprime(SelfadjointPair{a, b}).P);
  }
  return ref;
}

}  // namespace

TEST_CASE("deflated engine matches the dense route at small radius") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair sym = make_bott_pair(BottParams{2.0, 1});
  CoverData cover = make_torus_cover(3, 4, 4);
  const int R = 3;
  DenseRef ref = dense_reference(z2, sym, cover, R);
  DeflatedPushforward dp(z2, sym, cover, R);
  REQUIRE(dp.a_dim() == ref.m);

  for (int p = 0; p < cover.points(); ++p) {
    AlmostProjection dense = almost_projection_from(ref.Ppp[p]);
    const auto& spec = dp.spectrum(p);
    CHECK(std::abs(spec.deviation - dense.deviation) < 1e-9);
    CHECK(std::abs(spec.gap - dense.gap) < 1e-9);
    CHECK(spec.rank_above_half == dense.rank_above_half);
  }

  // Link determinants in the same frame gauge Phi = P'' G(theta), after the
  // (c c')^m normalization the engine applies.
  auto mixed_frame = [&](int p) {
    double t = dp.mix_angle(p);
    Mat g = Mat::Zero(2 * ref.m, ref.m);
    g.topRows(ref.m) = std::cos(t) * Mat::Identity(ref.m, ref.m);
    g.bottomRows(ref.m) = std::sin(t) * Mat::Identity(ref.m, ref.m);
    return g;
  };
  for (auto [pa, pb] : std::vector<std::pair<int, int>>{{0, 1}, {5, 6}, {10, 14}}) {
    Mat ga = mixed_frame(pa), gb = mixed_frame(pb);
    double norm = std::cos(dp.mix_angle(pa)) * std::cos(dp.mix_angle(pb));
    Mat overlap = (ga.adjoint() * ref.Ppp[pa] * ref.Ppp[pb] * gb) / norm;
    cd dense_det = Eigen::PartialPivLU<Mat>(overlap).determinant();
    cd lr_det = dp.link_det(pa, pb);
    CHECK(std::abs(dense_det - lr_det) < 1e-8 * std::max(1.0, std::abs(dense_det)));
  }
}

TEST_CASE("deflated chern equals dense chern on a coarse torus") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair sym = make_bott_pair(BottParams{2.0, 1});
  CoverData cover = make_torus_cover(3, 8, 8);
  const int R = 3;
  DenseRef ref = dense_reference(z2, sym, cover, R);
  DeflatedPushforward dp(z2, sym, cover, R);

  ChernComputation lr = dp.chern();
  ChernComputation dn = chern_number_dense(ref.Ppp, 8, 8);
  CHECK(lr.chern == dn.chern);
  CHECK(std::abs(lr.total_flux - dn.total_flux) < 1e-7);

  RankFieldReport rk = dp.rank_gap_field();
  CHECK(rk.locally_constant);
  CHECK(rk.ranks.front() == dp.a_dim());  // class rank zero
}

TEST_CASE("trivial symbols give the trivial deflation") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair sym = make_identity_pair(2);
  CoverData cover = make_torus_cover(3, 3, 3);
  DeflatedPushforward dp(z2, sym, cover, 3);
  for (int p = 0; p < cover.points(); ++p) {
    const auto& s = dp.spectrum(p);
    CHECK(s.deviation == 0.0);
    CHECK(s.class_rank == 0);
  }
  CHECK(dp.chern().chern == 0);
}
