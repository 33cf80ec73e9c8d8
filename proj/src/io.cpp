#include "kbal/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace kbal {

namespace {

json witness_json(const Group& group, const DefectWitness& w) {
  json j;
  j["g"] = group.to_string(w.g);
  j["h"] = group.to_string(w.h);
  j["gamma"] = group.to_string(w.gamma);
  j["sign"] = w.sign;
  j["value"] = w.value;
  return j;
}

}  // namespace

json to_json(const Group& group, const DefectReport& rep) {
  json j;
  j["F_radius"] = rep.F_radius;
  j["eps1"] = rep.eps_admissible;
  j["eps2"] = rep.eps_balanced_2;
  j["eps2prime"] = rep.eps_balanced_2prime;
  json w = json::object();
  if (rep.witness_admissible) w["eps1"] = witness_json(group, *rep.witness_admissible);
  if (rep.witness_2) w["eps2"] = witness_json(group, *rep.witness_2);
  if (rep.witness_2prime) w["eps2prime"] = witness_json(group, *rep.witness_2prime);
  j["witnesses"] = w;
  return j;
}

json to_json(const AlmostProjection& ap) {
  json j;
  j["deviation"] = ap.deviation;
  j["gap"] = ap.gap;
  j["rank_above_half"] = ap.rank_above_half;
  j["dim"] = ap.dim;
  return j;
}

json to_json(const ChernReport& rep) {
  json j;
  j["chern_input"] = rep.chern_input;
  j["chern_output"] = rep.chern_output;
  j["agree"] = rep.agree;
  return j;
}

json to_json(const RankFieldReport& rep) {
  json j;
  j["ranks"] = rep.ranks;
  j["gap_min"] = rep.gap_min;
  j["locally_constant"] = rep.locally_constant;
  j["jump_points"] = rep.jump_points;
  return j;
}

json to_json(const ConvergenceCurve& curve) {
  json j;
  j["radii"] = curve.radii;
  j["Rstar"] = curve.Rstar;
  j["sup_norm"] = curve.sup_norm;
  return j;
}

json to_json(const KClassReport& rep) {
  json j;
  j["rank_P"] = rep.rank_P;
  j["rank_Q"] = rep.rank_Q;
  j["class_rank"] = rep.class_rank;
  j["per_point_ranks"] = rep.per_point_ranks;
  j["gap_min"] = rep.gap_min;
  j["locally_constant"] = rep.locally_constant;
  return j;
}

void write_radius_csv(std::ostream& os, const std::vector<RadiusDefects>& rows) {
  os << "R,dim,eps1,eps2,eps2prime,wall_time\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line.imbue(std::locale::classic());
    line << r.radius << "," << r.dim << "," << r.eps1 << "," << r.eps2 << ","
         << r.eps2prime << "," << r.seconds;
    os << line.str() << "\n";
  }
}

void write_pipeline_csv(std::ostream& os, const std::vector<RadiusDefects>& defects,
                        const ConvergenceCurve& curve) {
  if (defects.size() != curve.radii.size())
    throw ConfigError("pipeline csv: defect rows and curve radii differ");
  os << "R,dim,eps1,eps2,eps2prime,sup_norm_gap,wall_time\n";
  for (std::size_t i = 0; i < defects.size(); ++i) {
    const auto& r = defects[i];
    std::ostringstream line;
    line.imbue(std::locale::classic());
    line << r.radius << "," << r.dim << "," << r.eps1 << "," << r.eps2 << ","
         << r.eps2prime << "," << curve.sup_norm[i] << ","
         << (r.seconds + curve.seconds[i]);
    os << line.str() << "\n";
  }
}

namespace {

SymbolConfig symbol_config(const json& j, SymbolConfig base) {
  if (j.contains("type")) base.type = j.at("type").get<std::string>();
  if (j.contains("support_radius"))
    base.support_radius = j.at("support_radius").get<double>();
  if (j.contains("winding")) base.winding = j.at("winding").get<int>();
  if (j.contains("fiber_dim")) base.fiber_dim = j.at("fiber_dim").get<int>();
  return base;
}

GroupConfig group_config(const json& j, GroupConfig base) {
  if (j.contains("kind")) base.kind = j.at("kind").get<std::string>();
  if (j.contains("rank")) base.rank = j.at("rank").get<int>();
  return base;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_dim")) cfg.max_dim = j.at("max_dim").get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("defects")) {
      const json& d = j.at("defects");
      if (d.contains("group")) cfg.defects.group = group_config(d.at("group"), {});
      if (d.contains("symbols"))
        cfg.defects.symbols = symbol_config(d.at("symbols"), cfg.defects.symbols);
      if (d.contains("radii")) cfg.defects.radii = d.at("radii").get<std::vector<int>>();
      if (d.contains("F_radius")) cfg.defects.F_radius = d.at("F_radius").get<int>();
      if (d.contains("domain_radius"))
        cfg.defects.domain_radius = d.at("domain_radius").get<int>();
    }
    if (j.contains("projections")) {
      const json& p = j.at("projections");
      if (p.contains("t_grid")) cfg.projections.t_grid = p.at("t_grid").get<int>();
      if (p.contains("homotopy_samples"))
        cfg.projections.homotopy_samples = p.at("homotopy_samples").get<int>();
      if (p.contains("perturbation"))
        cfg.projections.perturbation = p.at("perturbation").get<double>();
      if (p.contains("trials")) cfg.projections.trials = p.at("trials").get<int>();
    }
    if (j.contains("kclass")) {
      const json& k = j.at("kclass");
      if (k.contains("arcs")) cfg.kclass.arcs = k.at("arcs").get<int>();
      if (k.contains("R")) cfg.kclass.R = k.at("R").get<int>();
      if (k.contains("grids"))
        cfg.kclass.grids = k.at("grids").get<std::vector<std::array<int, 2>>>();
      if (k.contains("symbols"))
        cfg.kclass.symbols = symbol_config(k.at("symbols"), cfg.kclass.symbols);
      if (k.contains("trunc_tol")) cfg.kclass.trunc_tol = k.at("trunc_tol").get<double>();
    }
    if (j.contains("example")) {
      const json& e = j.at("example");
      if (e.contains("symbols"))
        cfg.example.symbols = symbol_config(e.at("symbols"), cfg.example.symbols);
      if (e.contains("radii")) cfg.example.radii = e.at("radii").get<std::vector<int>>();
      if (e.contains("Rstar")) cfg.example.Rstar = e.at("Rstar").get<int>();
      if (e.contains("grid")) cfg.example.grid = e.at("grid").get<std::array<int, 2>>();
      if (e.contains("arcs")) cfg.example.arcs = e.at("arcs").get<int>();
      if (e.contains("F_radius")) cfg.example.F_radius = e.at("F_radius").get<int>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  // Validation per the experiment-config invariants.
  auto check_radii = [](const std::vector<int>& radii, const char* where) {
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (radii[i] <= radii[i - 1])
        throw ConfigError(std::string(where) + ": radii must be strictly increasing");
  };
  check_radii(cfg.defects.radii, "defects.radii");
  check_radii(cfg.example.radii, "example.radii");
  if (cfg.projections.perturbation <= 0)
    throw ConfigError("projections.perturbation must be positive");
  if (cfg.kclass.trunc_tol <= 0) throw ConfigError("kclass.trunc_tol must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Group make_group(const GroupConfig& gc) {
  GroupKind kind;
  if (gc.kind == "free_abelian")
    kind = GroupKind::FreeAbelian;
  else if (gc.kind == "free")
    kind = GroupKind::Free;
  else
    throw ConfigError("unknown group kind: " + gc.kind);
  return Group(GroupSpec{kind, gc.rank});
}

SymbolPair make_symbols(const SymbolConfig& sc) {
  if (sc.type == "bott") {
    BottParams bp;
    bp.support_radius = sc.support_radius;
    bp.winding = sc.winding;
    return make_bott_pair(bp);
  }
  if (sc.type == "identity") return make_identity_pair(sc.fiber_dim);
  if (sc.type == "constant") {
    Mat b = Mat::Zero(sc.fiber_dim, sc.fiber_dim);
    b(sc.fiber_dim - 1, sc.fiber_dim - 1) = 1.0;
    return make_constant_pair(b);
  }
  throw ConfigError("unknown symbol type: " + sc.type);
}

}  // namespace kbal
