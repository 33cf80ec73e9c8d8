#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kbal/defects.hpp"
#include "kbal/kclass.hpp"
#include "kbal/pipeline.hpp"
#include "kbal/projections.hpp"
#include "kbal/symbols.hpp"
#include "kbal/truncation.hpp"

namespace kbal {

using nlohmann::json;

json to_json(const Group& group, const DefectReport& rep);
json to_json(const AlmostProjection& ap);
json to_json(const ChernReport& rep);
json to_json(const RankFieldReport& rep);
json to_json(const ConvergenceCurve& curve);

// K0 class data of an almost-projection field: the virtual rank together
// with the per-point rank function.
struct KClassReport {
  int rank_P = 0;
  int rank_Q = 0;
  int class_rank = 0;
  std::vector<int> per_point_ranks;
  double gap_min = 0.0;
  bool locally_constant = false;
};
json to_json(const KClassReport& rep);

/// CSV with header R,dim,eps1,eps2,eps2prime,wall_time ('.' decimal
/// separator, UTF-8).
void write_radius_csv(std::ostream& os, const std::vector<RadiusDefects>& rows);

/// CSV with header R,dim,eps1,eps2,eps2prime,sup_norm_gap,wall_time; the
/// defect rows and the convergence curve must share their radii.
void write_pipeline_csv(std::ostream& os, const std::vector<RadiusDefects>& defects,
                        const ConvergenceCurve& curve);

// Configuration for the batch front-end. Every field has a default; a
// config file overrides selectively.
struct SymbolConfig {
  std::string type = "bott";  // bott | identity | constant
  double support_radius = 10.0;
  int winding = 1;
  int fiber_dim = 2;
};

struct GroupConfig {
  std::string kind = "free_abelian";  // free_abelian | free
  int rank = 2;
};

struct DefectsConfig {
  GroupConfig group;
  SymbolConfig symbols;
  std::vector<int> radii = {4, 6, 8, 12};
  int F_radius = 1;
  int domain_radius = 2;
};

struct ProjectionsConfig {
  int t_grid = 1001;
  int homotopy_samples = 101;
  double perturbation = 1e-3;
  int trials = 100;
};

struct KClassConfig {
  int arcs = 3;
  int R = 12;
  std::vector<std::array<int, 2>> grids = {{24, 24}, {48, 48}};
  SymbolConfig symbols{"bott", 4.0, 1, 2};
  double trunc_tol = 1e-12;
};

struct ExampleConfig {
  SymbolConfig symbols;
  std::vector<int> radii = {4, 6, 8, 12};
  int Rstar = 16;
  std::array<int, 2> grid = {6, 6};
  int arcs = 3;
  int F_radius = 1;
};

struct ExperimentConfig {
  std::uint64_t seed = 20240601;
  std::uint64_t max_dim = 4'000'000;
  std::string out_dir = "out";
  DefectsConfig defects;
  ProjectionsConfig projections;
  KClassConfig kclass;
  ExampleConfig example;
};

/// Parses the JSON config; malformed input raises ConfigError with a
/// line/field diagnostic.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

Group make_group(const GroupConfig& gc);
SymbolPair make_symbols(const SymbolConfig& sc);

}  // namespace kbal
