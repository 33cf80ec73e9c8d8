#include "kbal/cover.hpp"

#include <cmath>

namespace kbal {

namespace {

double circ_dist(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

// Arc geometry: centers i/m, half-width 3/(4m); the ramp occupies
// d in [1/(4m), 3/(4m)] so adjacent ramps sum as cos^2 + sin^2.
struct ArcProfile {
  int m;
  double flat, width;  // flat = 1/(4m), width = 3/(4m)
  explicit ArcProfile(int arcs)
      : m(arcs), flat(0.25 / arcs), width(0.75 / arcs) {}
  double value(double x, int i) const {
    double d = circ_dist(x, static_cast<double>(i) / m);
    if (d >= width) return 0.0;
    if (d <= flat) return 1.0;
    double u = (d - flat) / (width - flat);
    return std::cos(0.5 * M_PI * u);
  }
};

// Deck offsets n with lift interval of chart i meeting (lift of j) + n.
std::vector<int> deck_offsets(const ArcProfile& arc, int i, int j) {
  double ci = static_cast<double>(i) / arc.m, cj = static_cast<double>(j) / arc.m;
  std::vector<int> out;
  for (int n = -1; n <= 1; ++n) {
    double lo = std::max(ci - arc.width, cj + n - arc.width);
    double hi = std::min(ci + arc.width, cj + n + arc.width);
    if (hi > lo + 1e-12) out.push_back(n);
  }
  return out;
}

}  // namespace

std::vector<int> CoverData::active_charts(int point, double tol) const {
  std::vector<int> act;
  for (int i = 0; i < charts; ++i)
    if (phi(i, point) > tol) act.push_back(i);
  return act;
}

bool CoverData::gamma_defined(int i, int j) const { return overlap[i][j] != 0; }

const GroupElement& CoverData::gamma(int i, int j) const {
  if (!overlap[i][j])
    throw DomainEscapeError("cocycle undefined for chart pair (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
  return cocycle[i][j];
}

void CoverData::validate(double tol) const {
  for (int p = 0; p < points(); ++p) {
    double s = 0.0;
    for (int i = 0; i < charts; ++i) s += phi(i, p) * phi(i, p);
    if (std::abs(s - 1.0) > tol)
      throw ConstructionError("partition of unity: sum phi^2 deviates by " +
                              std::to_string(std::abs(s - 1.0)));
  }
  for (int i = 0; i < charts; ++i)
    for (int j = 0; j < charts; ++j) {
      if (!overlap[i][j]) continue;
      if (!overlap[j][i]) throw ConstructionError("overlap table not symmetric");
      GroupElement gji = group.inverse(cocycle[i][j]);
      if (!(cocycle[j][i] == gji))
        throw ConstructionError("cocycle not antisymmetric");
    }
  // gamma_ij gamma_jk = gamma_ik wherever a triple overlap is witnessed on
  // the grid.
  for (int p = 0; p < points(); ++p) {
    std::vector<int> act = active_charts(p);
    for (int i : act)
      for (int j : act)
        for (int k : act) {
          if (!overlap[i][j] || !overlap[j][k] || !overlap[i][k]) continue;
          GroupElement prod = group.multiply(cocycle[i][j], cocycle[j][k]);
          if (!(prod == cocycle[i][k]))
            throw ConstructionError("cocycle condition fails on a triple overlap");
        }
  }
}

CoverData make_circle_cover(int arcs, int grid_points) {
  if (arcs < 1) throw ConfigError("circle cover needs at least 1 arc");
  if (grid_points < 1) throw ConfigError("circle cover needs a nonempty grid");
  if (arcs == 1) {
    // Degenerate one-set cover: phi = 1, gamma_11 = e. Carries no holonomy.
    CoverData cv{CoverSpace::Circle, Group(GroupSpec{GroupKind::FreeAbelian, 1})};
    cv.charts = 1;
    cv.grid_x = grid_points;
    cv.grid_y = 1;
    cv.grid.resize(grid_points);
    cv.phi.resize(1, grid_points);
    for (int p = 0; p < grid_points; ++p) {
      cv.grid[p] = {static_cast<double>(p) / grid_points, 0.0};
      cv.phi(0, p) = 1.0;
    }
    cv.overlap.assign(1, std::vector<char>(1, 1));
    cv.multivalued.assign(1, std::vector<char>(1, 0));
    cv.cocycle.assign(1, std::vector<GroupElement>(1, cv.group.identity()));
    cv.validate();
    return cv;
  }
  ArcProfile arc(arcs);
  CoverData cv{CoverSpace::Circle, Group(GroupSpec{GroupKind::FreeAbelian, 1})};
  cv.charts = arcs;
  cv.grid_x = grid_points;
  cv.grid_y = 1;
  cv.grid.resize(grid_points);
  cv.phi.resize(arcs, grid_points);
  for (int p = 0; p < grid_points; ++p) {
    double x = static_cast<double>(p) / grid_points;
    cv.grid[p] = {x, 0.0};
    for (int i = 0; i < arcs; ++i) cv.phi(i, p) = arc.value(x, i);
  }
  cv.overlap.assign(arcs, std::vector<char>(arcs, 0));
  cv.multivalued.assign(arcs, std::vector<char>(arcs, 0));
  GroupElement e = cv.group.identity();
  cv.cocycle.assign(arcs, std::vector<GroupElement>(arcs, e));
  for (int i = 0; i < arcs; ++i)
    for (int j = 0; j < arcs; ++j) {
      std::vector<int> offs = deck_offsets(arc, i, j);
      if (offs.empty()) continue;
      cv.overlap[i][j] = 1;
      int n = offs.front();
      if (offs.size() > 1) {
        // Disconnected overlap (only the 2-arc cover); the deck cocycle is
        // not single-valued, keep the trivial value and flag it.
        cv.multivalued[i][j] = 1;
        n = 0;
      }
      cv.cocycle[i][j] = GroupElement{{n}};
    }
  cv.validate();
  return cv;
}

CoverData make_torus_cover(int arcs, int grid_x, int grid_y) {
  CoverData cx = make_circle_cover(arcs, std::max(grid_x, 1));
  ArcProfile arc(arcs);
  CoverData cv{CoverSpace::Torus2, Group(GroupSpec{GroupKind::FreeAbelian, 2})};
  int m = arcs;
  cv.charts = m * m;
  cv.grid_x = grid_x;
  cv.grid_y = grid_y;
  cv.grid.resize(static_cast<std::size_t>(grid_x) * grid_y);
  cv.phi.resize(cv.charts, grid_x * grid_y);
  for (int px = 0; px < grid_x; ++px)
    for (int py = 0; py < grid_y; ++py) {
      int p = px * grid_y + py;
      double x = static_cast<double>(px) / grid_x;
      double y = static_cast<double>(py) / grid_y;
      cv.grid[p] = {x, y};
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          cv.phi(i * m + j, p) = arc.value(x, i) * arc.value(y, j);
    }
  cv.overlap.assign(cv.charts, std::vector<char>(cv.charts, 0));
  cv.multivalued.assign(cv.charts, std::vector<char>(cv.charts, 0));
  GroupElement e2 = cv.group.identity();
  cv.cocycle.assign(cv.charts, std::vector<GroupElement>(cv.charts, e2));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          if (!cx.overlap[i][k] || !cx.overlap[j][l]) continue;
          int c1 = i * m + j, c2 = k * m + l;
          cv.overlap[c1][c2] = 1;
          cv.multivalued[c1][c2] =
              static_cast<char>(cx.multivalued[i][k] || cx.multivalued[j][l]);
          cv.cocycle[c1][c2] =
              GroupElement{{cx.cocycle[i][k].word[0], cx.cocycle[j][l].word[0]}};
        }
  cv.validate();
  return cv;
}

FormalGroupMatrix mishchenko_idempotent(const CoverData& cover, int point) {
  FormalGroupMatrix f;
  f.n = cover.charts;
  f.coeff.resize(f.n, f.n);
  f.elems.assign(static_cast<std::size_t>(f.n) * f.n, cover.group.identity());
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) {
      double c = cover.phi(i, point) * cover.phi(j, point);
      f.coeff(i, j) = c;
      if (c != 0.0) f.elems[i * f.n + j] = cover.gamma(i, j);
    }
  return f;
}

Mat push_map(const FiniteMap& pi, const CoverData& cover, int point) {
  const int n = pi.dim();
  Mat a = Mat::Zero(static_cast<Eigen::Index>(cover.charts) * n,
                    static_cast<Eigen::Index>(cover.charts) * n);
  for (int i = 0; i < cover.charts; ++i)
    for (int j = 0; j < cover.charts; ++j) {
      double c = cover.phi(i, point) * cover.phi(j, point);
      if (c == 0.0) continue;
      a.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n,
              n) = c * pi.dense_at(cover.gamma(i, j));
    }
  return a;
}

}  // namespace kbal
