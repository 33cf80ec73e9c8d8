#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kbal/finite_map.hpp"

namespace kbal {

// A pair of maps (pi+, pi-) sharing a group and a domain.
struct MapPair {
  FiniteMap plus;
  FiniteMap minus;
};

struct DefectWitness {
  GroupElement g, h, gamma;  // gamma meaningful for eps1/eps2prime only
  int sign = +1;             // which of pi^{+-} attains the max (eps1)
  double value = 0.0;
};

// Admissibility / balancedness report over a finite symmetric set F.
struct DefectReport {
  int F_radius = -1;                 // -1 when F is not a ball
  std::vector<GroupElement> F;
  double eps_admissible = 0.0;       // condition (1)
  double eps_balanced_2 = 0.0;       // condition (2)
  double eps_balanced_2prime = 0.0;  // condition (2')
  std::optional<DefectWitness> witness_admissible;
  std::optional<DefectWitness> witness_2;
  std::optional<DefectWitness> witness_2prime;
};

/// Checks F is symmetric and F.F lies inside the pair's domain; throws
/// ConstructionError / DomainEscapeError otherwise.
void validate_F(const MapPair& pair, const std::vector<GroupElement>& F);

/// Full Definition-1 report: the three maxima with their witnesses.
/// Iteration order (hence tie-breaking) is the canonical ball order.
DefectReport defect_report(const MapPair& pair, const std::vector<GroupElement>& F,
                           int F_radius = -1);
DefectReport defect_report(const MapPair& pair, const Ball& F);

/// max over g,h,gamma in F and both signs of
/// ||M_{pi^s}(g,h) (pi^+(gamma) - pi^-(gamma))||.
double admissibility_eps(const MapPair& pair, const std::vector<GroupElement>& F);

/// The two balancedness maxima: (2) ||M_+ - M_-|| and (2')
/// ||pi^+(k) M_+ - pi^-(k) M_-||.
std::pair<double, double> balancedness_eps(const MapPair& pair,
                                           const std::vector<GroupElement>& F);

/// (K1) quantities ||(a^2-a)(a-b)|| and ||(b^2-b)(a-b)||.
std::pair<double, double> check_K1(const Mat& a, const Mat& b);

/// (K2) quantities ||f(a)-f(b)|| for f(t)=t(1-t) and f(t)=t^2(1-t).
std::pair<double, double> check_K2(const Mat& a, const Mat& b);

}  // namespace kbal
