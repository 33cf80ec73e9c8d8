#include "kbal/truncation.hpp"

#include <chrono>

namespace kbal {

namespace {

using Trip = Eigen::Triplet<cd>;

SpMat from_triplets(int n, std::vector<Trip>& trips) {
  SpMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SpMat compress_lambda(const Group& group, const Ball& ball, const GroupElement& g,
                      int fiber_dim) {
  const int n = static_cast<int>(ball.size()) * fiber_dim;
  std::vector<Trip> trips;
  trips.reserve(ball.size() * fiber_dim);
  for (std::size_t yi = 0; yi < ball.size(); ++yi) {
    auto ti = ball.index_of(group.multiply(g, ball.at(yi)));
    if (ti < 0) continue;
    for (int v = 0; v < fiber_dim; ++v)
      trips.emplace_back(static_cast<int>(ti) * fiber_dim + v,
                         static_cast<int>(yi) * fiber_dim + v, cd(1.0, 0.0));
  }
  return from_triplets(n, trips);
}

SpMat compress_mult(const Group& group, const Ball& ball,
                    const std::function<Mat(const GroupElement&)>& B, int fiber_dim) {
  (void)group;
  const int n = static_cast<int>(ball.size()) * fiber_dim;
  std::vector<Trip> trips;
  for (std::size_t yi = 0; yi < ball.size(); ++yi) {
    Mat b = B(ball.at(yi));
    if (!is_hermitian(b, 1e-12))
      throw ConstructionError("multiplication symbol is not selfadjoint at " +
                              group.to_string(ball.at(yi)));
    for (int v = 0; v < fiber_dim; ++v)
      for (int w = 0; w < fiber_dim; ++w)
        if (b(v, w) != cd(0, 0))
          trips.emplace_back(static_cast<int>(yi) * fiber_dim + v,
                             static_cast<int>(yi) * fiber_dim + w, b(v, w));
  }
  return from_triplets(n, trips);
}

SpMat compress_lambda_mult(const Group& group, const Ball& ball,
                           const GroupElement& g,
                           const std::function<Mat(const GroupElement&)>& B,
                           int fiber_dim) {
  const int n = static_cast<int>(ball.size()) * fiber_dim;
  std::vector<Trip> trips;
  for (std::size_t yi = 0; yi < ball.size(); ++yi) {
    auto ti = ball.index_of(group.multiply(g, ball.at(yi)));
    if (ti < 0) continue;
    Mat b = B(ball.at(yi));
    if (!is_hermitian(b, 1e-12))
      throw ConstructionError("multiplication symbol is not selfadjoint at " +
                              group.to_string(ball.at(yi)));
    for (int v = 0; v < fiber_dim; ++v)
      for (int w = 0; w < fiber_dim; ++w)
        if (b(v, w) != cd(0, 0))
          trips.emplace_back(static_cast<int>(ti) * fiber_dim + v,
                             static_cast<int>(yi) * fiber_dim + w, b(v, w));
  }
  return from_triplets(n, trips);
}

SpMat compress(const Group& group, const Ball& ball, const RegularOperatorSpec& op) {
  if (std::holds_alternative<GroupElement>(op.symbol))
    return compress_lambda(group, ball, std::get<GroupElement>(op.symbol),
                           op.fiber_dim);
  return compress_mult(group, ball,
                       std::get<std::function<Mat(const GroupElement&)>>(op.symbol),
                       op.fiber_dim);
}

MapPair truncated_pair(const Group& group, const SymbolPair& symbols, int R,
                       const Ball& domain, std::uint64_t cap) {
  Ball space = group.ball(R, cap);
  const int dim = static_cast<int>(space.size()) * symbols.fiber_dim;

  auto build_one = [&](bool plus) {
    auto B = [&](const GroupElement& y) {
      return plus ? symbols.Bplus(y) : symbols.Bminus_at(y);
    };
    std::vector<SpMat> table(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const GroupElement& g = domain.at(i);
      GroupElement gi = group.inverse(g);
      if (group.is_identity(g) || group.less(g, gi)) {
        table[i] = compress_lambda_mult(group, space, g, B, symbols.fiber_dim);
      }
    }
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const GroupElement& g = domain.at(i);
      GroupElement gi = group.inverse(g);
      if (!group.is_identity(g) && !group.less(g, gi)) {
        auto j = domain.index_of(gi);
        table[i] = SpMat(table[static_cast<std::size_t>(j)].adjoint());
      }
    }
    return FiniteMap(group, domain, dim, std::move(table));
  };

  return MapPair{build_one(true), build_one(false)};
}

TruncationFamily truncate_pair(const Group& group, const SymbolPair& symbols,
                               const std::vector<int>& radii, int domain_radius,
                               std::uint64_t cap) {
  if (radii.empty()) throw ConfigError("truncate_pair: radii list is empty");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw ConfigError("truncate_pair: radii must be strictly increasing");
  Ball domain = group.ball(domain_radius, cap);
  TruncationFamily fam{group, radii, {}, domain, {}};
  for (int R : radii) {
    fam.pairs.push_back(truncated_pair(group, symbols, R, domain, cap));
    fam.space_dims.push_back(fam.pairs.back().plus.dim());
  }
  return fam;
}

namespace {

SpMat pad_to(const SpMat& m, int n) {
  SpMat out(n, n);
  std::vector<Trip> trips;
  trips.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

FiniteMap blend(const FiniteMap& small, const FiniteMap& large, double s) {
  const int n = large.dim();
  const Ball& domain = small.domain();
  std::vector<SpMat> table;
  table.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const GroupElement& g = domain.at(i);
    SpMat m = (1.0 - s) * pad_to(small.at(g), n) + s * large.at(g);
    m.prune(1e-300, 1.0);
    table.push_back(std::move(m));
  }
  return FiniteMap(small.group(), domain, n, std::move(table));
}

}  // namespace

MapPair interpolate(const TruncationFamily& family, double t) {
  const int segs = static_cast<int>(family.radii.size()) - 1;
  if (segs < 1) throw ConfigError("interpolate: need at least two radii");
  if (t < 0.0 || t > static_cast<double>(segs))
    throw ConfigError("interpolate: parameter outside [0, len-1]");
  int k = std::min(static_cast<int>(t), segs - 1);
  double s = t - k;
  // Zero-padding is canonical: Ball(R) is a prefix of Ball(R'), and the
  // fiber index is fastest, so the small basis is a prefix of the large one.
  return MapPair{blend(family.pairs[k].plus, family.pairs[k + 1].plus, s),
                 blend(family.pairs[k].minus, family.pairs[k + 1].minus, s)};
}

std::vector<RadiusDefects> family_defect_curve(const TruncationFamily& family,
                                               const Ball& F) {
  std::vector<RadiusDefects> curve;
  for (std::size_t i = 0; i < family.radii.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    DefectReport rep = defect_report(family.pairs[i], F);
    auto t1 = std::chrono::steady_clock::now();
    RadiusDefects row;
    row.radius = family.radii[i];
    row.dim = family.space_dims[i];
    row.eps1 = rep.eps_admissible;
    row.eps2 = rep.eps_balanced_2;
    row.eps2prime = rep.eps_balanced_2prime;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    curve.push_back(row);
  }
  return curve;
}

}  // namespace kbal
