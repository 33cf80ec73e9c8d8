#include <cmath>

#include "doctest.h"
#include "kbal/cover.hpp"
#include "kbal/symbols.hpp"
#include "kbal/truncation.hpp"

using namespace kbal;

TEST_CASE("circle covers: partition and cocycle invariants") {
  for (int arcs : {2, 3, 4}) {
    CoverData cv = make_circle_cover(arcs, 60);
    CHECK(cv.charts == arcs);
    CHECK_NOTHROW(cv.validate());
    if (arcs >= 3) {
      // Single-valued deck cocycle with holonomy around the circle.
      for (int i = 0; i < arcs; ++i)
        for (int j = 0; j < arcs; ++j)
          if (cv.gamma_defined(i, j)) CHECK(cv.multivalued[i][j] == 0);
      CHECK(cv.cocycle[0][arcs - 1] == GroupElement{{-1}});
      CHECK(cv.cocycle[arcs - 1][0] == GroupElement{{1}});
      CHECK(cv.cocycle[0][1] == GroupElement{{0}});
    }
  }
}

TEST_CASE("one-set cover: the idempotent is the single entry (1, e)") {
  CoverData cv = make_circle_cover(1, 8);
  FormalGroupMatrix p = mishchenko_idempotent(cv, 3);
  CHECK(p.n == 1);
  CHECK(p.coeff(0, 0) == doctest::Approx(1.0));
  CHECK(p.elem(0, 0) == cv.group.identity());
}

TEST_CASE("two-arc circle: idempotent at single-chart and overlap points") {
  CoverData cv = make_circle_cover(2, 8);  // grid includes 0 and 1/4
  // x = 0: interior of chart 0.
  FormalGroupMatrix p0 = mishchenko_idempotent(cv, 0);
  CHECK(p0.coeff(0, 0) == doctest::Approx(1.0));
  CHECK(p0.coeff(1, 1) == doctest::Approx(0.0));
  CHECK(p0.coeff(0, 1) == doctest::Approx(0.0));
  // x = 1/4: overlap midpoint, phi_0 = phi_1 = 1/sqrt(2).
  FormalGroupMatrix pm = mishchenko_idempotent(cv, 2);
  CHECK(pm.coeff(0, 0) == doctest::Approx(0.5));
  CHECK(pm.coeff(0, 1) == doctest::Approx(0.5));
  CHECK(pm.coeff(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("cocycle undefined on a needed overlap raises") {
  CoverData cv = make_circle_cover(3, 60);
  // Break a pair that genuinely overlaps.
  int bad_i = -1, bad_j = -1, point = -1;
  for (int p = 0; p < cv.points() && point < 0; ++p) {
    auto act = cv.active_charts(p);
    if (act.size() == 2) {
      bad_i = act[0];
      bad_j = act[1];
      point = p;
    }
  }
  REQUIRE(point >= 0);
  cv.overlap[bad_i][bad_j] = 0;
  CHECK_THROWS_AS(mishchenko_idempotent(cv, point), DomainEscapeError);
}

TEST_CASE("torus cover: partition, cocycle, active chart count") {
  CoverData cv = make_torus_cover(3, 12, 12);
  CHECK(cv.charts == 9);
  CHECK_NOTHROW(cv.validate());
  for (int p = 0; p < cv.points(); ++p) CHECK(cv.active_charts(p).size() <= 4);
}

TEST_CASE("push_map of an exact representation is an exact projection") {
  CoverData cv = make_circle_cover(3, 24);
  Group z = cv.group;
  Ball domain = z.ball(2);
  double theta = 1.3;
  FiniteMap chr = FiniteMap::build(z, domain, 1, [theta](const GroupElement& g) {
    Mat m(1, 1);
    m(0, 0) = cd(std::cos(theta * g.word[0]), std::sin(theta * g.word[0]));
    return m;
  });
  for (int p = 0; p < cv.points(); ++p) {
    Mat a = push_map(chr, cv, p);
    CHECK(is_hermitian(a, 1e-13));
    CHECK(operator_norm(Mat(a * a - a)) < 1e-12);
  }
}

TEST_CASE("push_map of the constant-identity map is the rank-one phi Gram") {
  CoverData cv = make_circle_cover(2, 16);
  Group z = cv.group;
  Ball domain = z.ball(2);
  FiniteMap idm = FiniteMap::build(z, domain, 1, [](const GroupElement&) {
    return Mat(Mat::Identity(1, 1));
  });
  for (int p = 0; p < cv.points(); ++p) {
    Mat a = push_map(idm, cv, p);
    CHECK(operator_norm(Mat(a * a - a)) < 1e-12);
    CHECK(std::abs(a.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("pushed truncated pair: selfadjoint, K1 within |I| eps") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair sym = make_bott_pair(BottParams{2.0, 1});
  CoverData cv = make_torus_cover(3, 6, 6);
  const int R = 4;
  // F must contain every cocycle value, so ball(2), with F.F in ball(4).
  MapPair pair = truncated_pair(z2, sym, R, z2.ball(4));
  DefectReport rep = defect_report(pair, z2.ball(2));
  double bound = cv.charts * rep.eps_admissible;
  for (int p : {0, 7, 21, 35}) {
    Mat a = push_map(pair.plus, cv, p);
    Mat b = push_map(pair.minus, cv, p);
    CHECK(is_hermitian(a, 1e-12));
    CHECK(is_hermitian(b, 1e-12));
    auto [k1a, k1b] = check_K1(a, b);
    CHECK(k1a <= bound + 1e-12);
    CHECK(k1b <= bound + 1e-12);
  }
  // Balanced pairs satisfy (K2) within the same |I| eps budget.
  double bound2 = cv.charts * std::max(rep.eps_balanced_2, rep.eps_balanced_2prime);
  for (int p : {3, 18}) {
    Mat a = push_map(pair.plus, cv, p);
    Mat b = push_map(pair.minus, cv, p);
    auto [k2a, k2b] = check_K2(a, b);
    CHECK(k2a <= bound2 + 1e-12);
    CHECK(k2b <= bound2 + 1e-12);
  }
}
