#include "kbal/finite_map.hpp"

namespace kbal {

FiniteMap::FiniteMap(Group group, Ball domain, int dim, std::vector<SpMat> table,
                     double symmetry_tol)
    : group_(std::move(group)), domain_(std::move(domain)), dim_(dim),
      table_(std::move(table)) {
  if (table_.size() != domain_.size())
    throw ConstructionError("FiniteMap: table size does not match domain");
  for (const auto& m : table_)
    if (m.rows() != dim_ || m.cols() != dim_)
      throw ConstructionError("FiniteMap: table entry has wrong dimensions");
  if (!domain_.contains(group_.identity()))
    throw ConstructionError("FiniteMap: domain must contain the identity");
  // Domain closed under inverse and *-symmetric table.
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const GroupElement& g = domain_.at(i);
    auto j = domain_.index_of(group_.inverse(g));
    if (j < 0)
      throw ConstructionError("FiniteMap: domain not closed under inverse at " +
                              group_.to_string(g));
    double dev = operator_norm(SpMat(table_[j] - SpMat(table_[i].adjoint())));
    if (dev > symmetry_tol)
      throw ConstructionError("FiniteMap: *-symmetry violated at " +
                              group_.to_string(g) + " by " + std::to_string(dev));
  }
}

FiniteMap FiniteMap::build(const Group& group, const Ball& domain, int dim,
                           const std::function<Mat(const GroupElement&)>& fn,
                           double symmetry_tol) {
  std::vector<SpMat> table;
  table.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    Mat m = fn(domain.at(i));
    table.push_back(m.sparseView(1.0, 1e-300));
  }
  return FiniteMap(group, domain, dim, std::move(table), symmetry_tol);
}

FiniteMap FiniteMap::build_sparse(const Group& group, const Ball& domain, int dim,
                                  const std::function<SpMat(const GroupElement&)>& fn,
                                  double symmetry_tol) {
  std::vector<SpMat> table;
  table.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) table.push_back(fn(domain.at(i)));
  return FiniteMap(group, domain, dim, std::move(table), symmetry_tol);
}

const SpMat& FiniteMap::at(const GroupElement& g) const {
  auto i = domain_.index_of(g);
  if (i < 0)
    throw DomainEscapeError("FiniteMap: element " + group_.to_string(g) +
                            " escapes the tabulated domain");
  return table_[static_cast<std::size_t>(i)];
}

double FiniteMap::symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    auto j = domain_.index_of(group_.inverse(domain_.at(i)));
    worst = std::max(worst,
                     operator_norm(SpMat(table_[j] - SpMat(table_[i].adjoint()))));
  }
  return worst;
}

SpMat defect(const FiniteMap& pi, const GroupElement& g, const GroupElement& h) {
  const GroupElement gh = pi.group().multiply(g, h);
  SpMat d = pi.at(gh) - SpMat(pi.at(g) * pi.at(h));
  d.prune(1e-300, 1.0);
  return d;
}

Mat defect_dense(const FiniteMap& pi, const GroupElement& g, const GroupElement& h) {
  return Mat(defect(pi, g, h));
}

}  // namespace kbal
