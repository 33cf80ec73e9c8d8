#include "kbal/defects.hpp"

#include <algorithm>

namespace kbal {

void validate_F(const MapPair& pair, const std::vector<GroupElement>& F) {
  const Group& grp = pair.plus.group();
  const Ball& dom = pair.plus.domain();
  for (const auto& g : F) {
    bool has_inv = false;
    GroupElement gi = grp.inverse(g);
    for (const auto& h : F)
      if (h == gi) {
        has_inv = true;
        break;
      }
    if (!has_inv)
      throw ConstructionError("F is not symmetric: missing inverse of " +
                              grp.to_string(g));
  }
  for (const auto& g : F)
    for (const auto& h : F)
      if (!dom.contains(grp.multiply(g, h)))
        throw DomainEscapeError("F.F escapes the domain at " + grp.to_string(g) +
                                "*" + grp.to_string(h));
}

DefectReport defect_report(const MapPair& pair, const std::vector<GroupElement>& F,
                           int F_radius) {
  if (pair.plus.dim() != pair.minus.dim())
    throw ConstructionError("defect_report: pair dimensions differ");
  validate_F(pair, F);
  const Group& grp = pair.plus.group();
  const std::size_t nf = F.size();

  DefectReport rep;
  rep.F_radius = F_radius;
  rep.F = F;

  // Defect matrices for both signs over F x F.
  std::vector<std::vector<SpMat>> mp(nf, std::vector<SpMat>(nf));
  std::vector<std::vector<SpMat>> mm(nf, std::vector<SpMat>(nf));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      mp[i][j] = defect(pair.plus, F[i], F[j]);
      mm[i][j] = defect(pair.minus, F[i], F[j]);
    }

  // Differences pi^+(gamma) - pi^-(gamma).
  std::vector<SpMat> diff(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    diff[k] = pair.plus.at(F[k]) - pair.minus.at(F[k]);
    diff[k].prune(1e-300, 1.0);
  }

  auto consider = [](double v, std::optional<DefectWitness>& w, double& eps,
                     const DefectWitness& cand) {
    if (v > eps) {
      eps = v;
      w = cand;
      w->value = v;
    }
  };

  // Condition (1): both signs of M, gamma over F.
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j)
      for (std::size_t k = 0; k < nf; ++k) {
        double vp = operator_norm(SpMat(mp[i][j] * diff[k]));
        consider(vp, rep.witness_admissible, rep.eps_admissible,
                 DefectWitness{F[i], F[j], F[k], +1, vp});
        double vm = operator_norm(SpMat(mm[i][j] * diff[k]));
        consider(vm, rep.witness_admissible, rep.eps_admissible,
                 DefectWitness{F[i], F[j], F[k], -1, vm});
      }

  // Condition (2).
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      double v = operator_norm(SpMat(mp[i][j] - mm[i][j]));
      consider(v, rep.witness_2, rep.eps_balanced_2,
               DefectWitness{F[i], F[j], grp.identity(), 0, v});
    }

  // Condition (2'): left translate by every k in F.
  for (std::size_t k = 0; k < nf; ++k) {
    const SpMat& tp = pair.plus.at(F[k]);
    const SpMat& tm = pair.minus.at(F[k]);
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nf; ++j) {
        double v = operator_norm(SpMat(tp * mp[i][j] - tm * mm[i][j]));
        consider(v, rep.witness_2prime, rep.eps_balanced_2prime,
                 DefectWitness{F[i], F[j], F[k], 0, v});
      }
  }
  return rep;
}

DefectReport defect_report(const MapPair& pair, const Ball& F) {
  return defect_report(pair, F.elements(), F.radius());
}

double admissibility_eps(const MapPair& pair, const std::vector<GroupElement>& F) {
  return defect_report(pair, F).eps_admissible;
}

std::pair<double, double> balancedness_eps(const MapPair& pair,
                                           const std::vector<GroupElement>& F) {
  DefectReport rep = defect_report(pair, F);
  return {rep.eps_balanced_2, rep.eps_balanced_2prime};
}

std::pair<double, double> check_K1(const Mat& a, const Mat& b) {
  Mat ab = a - b;
  return {operator_norm(Mat((a * a - a) * ab)), operator_norm(Mat((b * b - b) * ab))};
}

std::pair<double, double> check_K2(const Mat& a, const Mat& b) {
  Mat a2 = a * a, b2 = b * b;
  double f1 = operator_norm(Mat((a - a2) - (b - b2)));
  double f2 = operator_norm(Mat((a2 - a2 * a) - (b2 - b2 * b)));
  return {f1, f2};
}

}  // namespace kbal
