#include <cmath>

#include "doctest.h"
#include "kbal/defects.hpp"

using namespace kbal;

namespace {

// Truncated shift on l2({0..N-1}): table(n) = compression of the shift by n.
FiniteMap truncated_shift_map(const Group& z, const Ball& domain, int N) {
  return FiniteMap::build(z, domain, N, [N](const GroupElement& g) {
    int n = g.word[0];
    Mat m = Mat::Zero(N, N);
    for (int j = 0; j < N; ++j)
      if (j + n >= 0 && j + n < N) m(j + n, j) = 1.0;
    return m;
  });
}

FiniteMap character_map(const Group& z, const Ball& domain, double theta) {
  return FiniteMap::build(z, domain, 1, [theta](const GroupElement& g) {
    Mat m(1, 1);
    m(0, 0) = cd(std::cos(theta * g.word[0]), std::sin(theta * g.word[0]));
    return m;
  });
}

}  // namespace

TEST_CASE("defect examples") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  Ball domain = z.ball(2);

  // Exact one-dimensional unitary representation: defect vanishes.
  FiniteMap chr = character_map(z, domain, 0.83);
  CHECK(operator_norm(defect_dense(chr, GroupElement{{1}}, GroupElement{{1}})) < 1e-14);

  // Truncated shift: defect(pi_N, 1, -1) is the rank-one projection onto
  // delta_0, norm 1.
  const int N = 6;
  FiniteMap sh = truncated_shift_map(z, domain, N);
  Mat d = defect_dense(sh, GroupElement{{1}}, GroupElement{{-1}});
  Mat expected = Mat::Zero(N, N);
  expected(0, 0) = 1.0;
  CHECK(operator_norm(Mat(d - expected)) < 1e-14);
  CHECK(operator_norm(d) == doctest::Approx(1.0));

  // Constant-identity map: defect I - I*I = 0.
  FiniteMap idm = FiniteMap::build(z, domain, 3, [](const GroupElement&) {
    return Mat(Mat::Identity(3, 3));
  });
  CHECK(operator_norm(defect_dense(idm, GroupElement{{1}}, GroupElement{{1}})) == 0.0);
}

TEST_CASE("defect domain escape") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  FiniteMap sh = truncated_shift_map(z, z.ball(1), 4);
  CHECK_THROWS_AS(defect(sh, GroupElement{{1}}, GroupElement{{1}}), DomainEscapeError);
}

TEST_CASE("*-symmetry is enforced, not repaired") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  Ball domain = z.ball(1);
  auto bad = [](const GroupElement& g) {
    Mat m = Mat::Identity(2, 2);
    if (g.word[0] == 1) m(0, 1) = 1.0;  // adjoint at -1 will not match
    return m;
  };
  CHECK_THROWS_AS(FiniteMap::build(z, domain, 2, bad), ConstructionError);
}

TEST_CASE("equal pairs have all three epsilons exactly zero") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  Ball domain = z.ball(2);
  FiniteMap sh = truncated_shift_map(z, domain, 8);
  MapPair pair{sh, sh};
  DefectReport rep = defect_report(pair, z.ball(1));
  CHECK(rep.eps_admissible == 0.0);
  CHECK(rep.eps_balanced_2 == 0.0);
  CHECK(rep.eps_balanced_2prime == 0.0);
}

TEST_CASE("admissibility zero for pairs of exact representations") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  Ball domain = z.ball(2);
  MapPair pair{character_map(z, domain, 0.3), character_map(z, domain, 1.1)};
  DefectReport rep = defect_report(pair, z.ball(1));
  CHECK(rep.eps_admissible < 1e-15);
  CHECK(rep.eps_balanced_2 < 1e-15);
  CHECK(rep.eps_balanced_2prime < 1e-15);
}

TEST_CASE("defect symmetry M(g,h)* = M(h^-1, g^-1) on *-symmetric maps") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  Ball domain = z2.ball(2);
  Rng rng(21);
  const int n = 4;
  // Random *-symmetric table: assign the canonical positive set, mirror the
  // rest.
  std::vector<Mat> vals(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const GroupElement& g = domain.at(i);
    GroupElement gi = z2.inverse(g);
    if (z2.is_identity(g))
      vals[i] = rng.hermitian(n, 1.0);
    else if (z2.less(g, gi))
      vals[i] = rng.gaussian_matrix(n, n);
  }
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const GroupElement& g = domain.at(i);
    GroupElement gi = z2.inverse(g);
    if (!z2.is_identity(g) && !z2.less(g, gi))
      vals[i] = vals[domain.index_of(gi)].adjoint();
  }
  FiniteMap pi = FiniteMap::build(z2, domain, n, [&](const GroupElement& g) {
    return vals[domain.index_of(g)];
  });
  Ball F = z2.ball(1);
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = 0; j < F.size(); ++j) {
      const GroupElement &g = F.at(i), &h = F.at(j);
      Mat lhs = defect_dense(pi, g, h).adjoint();
      Mat rhs = defect_dense(pi, z2.inverse(h), z2.inverse(g));
      CHECK(operator_norm(Mat(lhs - rhs)) < 1e-12);
    }
}

TEST_CASE("enlarging F never decreases the reported epsilons") {
  Group z2(GroupSpec{GroupKind::FreeAbelian, 2});
  Ball domain = z2.ball(2);
  Rng rng(22);
  const int n = 3;
  auto noisy_rep = [&](double amp) {
    std::vector<Mat> vals(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const GroupElement& g = domain.at(i);
      GroupElement gi = z2.inverse(g);
      if (z2.is_identity(g))
        vals[i] = Mat::Identity(n, n) + amp * rng.hermitian(n, 1.0);
      else if (z2.less(g, gi))
        vals[i] = rng.unitary(n) + amp * rng.gaussian_matrix(n, n);
    }
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const GroupElement& g = domain.at(i);
      GroupElement gi = z2.inverse(g);
      if (!z2.is_identity(g) && !z2.less(g, gi))
        vals[i] = vals[domain.index_of(gi)].adjoint();
    }
    return FiniteMap::build(z2, domain, n, [&, vals](const GroupElement& g) {
      return vals[domain.index_of(g)];
    });
  };
  MapPair pair{noisy_rep(0.1), noisy_rep(0.2)};
  std::vector<GroupElement> Fsmall = {z2.identity(), GroupElement{{1, 0}},
                                      GroupElement{{-1, 0}}};
  Ball Fbig = z2.ball(1);
  DefectReport small = defect_report(pair, Fsmall);
  DefectReport big = defect_report(pair, Fbig);
  CHECK(big.eps_admissible >= small.eps_admissible);
  CHECK(big.eps_balanced_2 >= small.eps_balanced_2);
  CHECK(big.eps_balanced_2prime >= small.eps_balanced_2prime);
}

TEST_CASE("check_K1 and check_K2 basics") {
  Rng rng(23);
  Mat a = rng.hermitian(5, 1.0);
  auto [k1a, k1b] = check_K1(a, a);
  CHECK(k1a == 0.0);
  CHECK(k1b == 0.0);
  auto [k2a, k2b] = check_K2(a, a);
  CHECK(k2a == 0.0);
  CHECK(k2b == 0.0);

  // Commuting projections with ab = b.
  Mat p = Mat::Zero(4, 4), q = Mat::Zero(4, 4);
  p(0, 0) = p(1, 1) = 1.0;
  q(0, 0) = 1.0;
  auto [v1, v2] = check_K1(p, q);
  CHECK(v1 < 1e-15);
  CHECK(v2 < 1e-15);
}

TEST_CASE("F validation: symmetry and domain coverage") {
  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  Ball domain = z.ball(2);
  FiniteMap sh = truncated_shift_map(z, domain, 5);
  MapPair pair{sh, sh};
  std::vector<GroupElement> asym = {z.identity(), GroupElement{{1}}};
  CHECK_THROWS_AS(defect_report(pair, asym), ConstructionError);
  std::vector<GroupElement> toobig = {GroupElement{{2}}, GroupElement{{-2}}};
  CHECK_THROWS_AS(defect_report(pair, toobig), DomainEscapeError);
}
