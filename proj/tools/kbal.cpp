// Batch front-end: configures the experiments, runs the suites, writes
// CSV/JSON reports. Exit codes: 0 success, 1 assertion failure, 2 config
// error, 3 resource cap.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "kbal/acceptance.hpp"
#include "kbal/io.hpp"
#include "kbal/lowrank.hpp"

namespace fs = std::filesystem;
using namespace kbal;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t max_dim = 0;
  bool quiet = false;
};

struct Output {
  fs::path dir;
  bool quiet;
  void write_text(const std::string& name, const std::string& text) const {
    fs::create_directories(dir);
    std::ofstream os(dir / name, std::ios::binary);
    os << text;
  }
  void write_json(const std::string& name, const json& j) const {
    write_text(name, j.dump(2) + "\n");
  }
  void say(const std::string& line) const {
    if (!quiet) std::cout << line << "\n";
  }
};

ExperimentConfig resolve_config(const Options& opt) {
  ExperimentConfig cfg;
  if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
  if (opt.seed) cfg.seed = opt.seed;
  if (opt.max_dim) cfg.max_dim = opt.max_dim;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  return cfg;
}

int run_defects(const ExperimentConfig& cfg, const Output& out) {
  Group grp = make_group(cfg.defects.group);
  SymbolPair symbols = make_symbols(cfg.defects.symbols);
  TruncationFamily fam = truncate_pair(grp, symbols, cfg.defects.radii,
                                       cfg.defects.domain_radius, cfg.max_dim);
  Ball F = grp.ball(cfg.defects.F_radius, cfg.max_dim);
  json all = json::object();
  for (std::size_t i = 0; i < fam.radii.size(); ++i) {
    DefectReport rep = defect_report(fam.pairs[i], F);
    all["R" + std::to_string(fam.radii[i])] = to_json(grp, rep);
    out.say("R=" + std::to_string(fam.radii[i]) +
            " eps1=" + std::to_string(rep.eps_admissible) +
            " eps2=" + std::to_string(rep.eps_balanced_2) +
            " eps2'=" + std::to_string(rep.eps_balanced_2prime));
  }
  out.write_json("defects.json", all);
  std::ostringstream csv;
  write_radius_csv(csv, family_defect_curve(fam, F));
  out.write_text("defects.csv", csv.str());
  return 0;
}

int run_truncate(const ExperimentConfig& cfg, const Output& out) {
  Group grp = make_group(cfg.defects.group);
  SymbolPair symbols = make_symbols(cfg.defects.symbols);
  TruncationFamily fam = truncate_pair(grp, symbols, cfg.defects.radii,
                                       cfg.defects.domain_radius, cfg.max_dim);
  Ball F = grp.ball(cfg.defects.F_radius, cfg.max_dim);
  std::vector<RadiusDefects> curve = family_defect_curve(fam, F);
  std::ostringstream csv;
  write_radius_csv(csv, curve);
  out.write_text("truncate.csv", csv.str());
  json j = json::object();
  for (const auto& row : curve) {
    j["R" + std::to_string(row.radius)] = {{"dim", row.dim},
                                           {"eps1", row.eps1},
                                           {"eps2", row.eps2},
                                           {"eps2prime", row.eps2prime}};
    out.say("R=" + std::to_string(row.radius) + " dim=" + std::to_string(row.dim) +
            " eps1=" + std::to_string(row.eps1));
  }
  out.write_json("truncate.json", j);
  return 0;
}

int run_projections(const ExperimentConfig& cfg, const Output& out) {
  const auto& pc = cfg.projections;
  Rng rng(cfg.seed);
  json j;
  bool ok = true;

  // L3 sweep on the universal generators.
  double worst_l3 = 0.0;
  for (int i = 0; i < pc.t_grid; ++i) {
    double t = -1.0 + 2.0 * i / (pc.t_grid - 1);
    SelfadjointPair g = universal_generators(t);
    worst_l3 = std::max(worst_l3,
                        operator_norm(Mat(build_Pprime(g).P - build_Pdoubleprime(g).P)));
  }
  j["L3_max_diff"] = worst_l3;
  ok = ok && worst_l3 < 1e-10;

  // L2 on conjugated direct sums, exact and perturbed.
  double worst_exact = 0.0, worst_ratio = 0.0;
  for (int trial = 0; trial < pc.trials; ++trial) {
    double t = rng.uniform(-1.0, 1.0);
    SelfadjointPair g = universal_generators(t);
    Mat u = rng.unitary(2);
    SelfadjointPair pair{u.adjoint() * g.a * u, u.adjoint() * g.b * u};
    worst_exact = std::max(worst_exact, build_Pdoubleprime(pair).deviation);
    Mat ha = rng.hermitian(2, 1.0), hb = rng.hermitian(2, 1.0);
    SelfadjointPair noisy{pair.a + pc.perturbation * ha,
                          pair.b + pc.perturbation * hb};
    worst_ratio = std::max(worst_ratio,
                           build_Pdoubleprime(noisy).deviation / pc.perturbation);
  }
  j["L2_exact_worst"] = worst_exact;
  j["L2_perturbed_ratio"] = worst_ratio;
  ok = ok && worst_exact < 1e-10;

  // L4 homotopy sweeps.
  bool l4 = true;
  for (int trial = 0; trial < 10; ++trial) {
    double t = rng.uniform(-1.0, 1.0);
    SelfadjointPair g = universal_generators(t);
    Mat ha = rng.hermitian(2, 1.0), hb = rng.hermitian(2, 1.0);
    SelfadjointPair noisy{g.a + pc.perturbation * ha, g.b + pc.perturbation * hb};
    HomotopyReport rep = homotopy_sweep(noisy, pc.homotopy_samples);
    l4 = l4 && rep.gap_ok && rep.rank_constant;
  }
  j["L4_ok"] = l4;
  ok = ok && l4;

  out.write_json("projections.json", j);
  out.say(std::string("projections: ") + (ok ? "ok" : "FAILED"));
  return ok ? 0 : 1;
}

int run_kclass(const ExperimentConfig& cfg, const Output& out) {
  const auto& kc = cfg.kclass;
  // Optional cache: the only environment variable consulted is
  // KBAL_CACHE_DIR; reports are keyed by the resolved parameters.
  json key = {{"arcs", kc.arcs},
              {"R", kc.R},
              {"grids", kc.grids},
              {"support", kc.symbols.support_radius},
              {"winding", kc.symbols.winding},
              {"trunc_tol", kc.trunc_tol}};
  fs::path cache_file;
  if (const char* cache = std::getenv("KBAL_CACHE_DIR")) {
    std::size_t h = std::hash<std::string>{}(key.dump());
    cache_file = fs::path(cache) / ("kclass-" + std::to_string(h) + ".json");
    if (fs::exists(cache_file)) {
      std::ifstream in(cache_file);
      std::stringstream ss;
      ss << in.rdbuf();
      out.write_text("kclass.json", ss.str());
      json cached = json::parse(ss.str());
      out.say("kclass (cached): " + cached.at("verdict").get<std::string>());
      return cached.at("agree").get<bool>() ? 0 : 1;
    }
  }

  Group grp(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair symbols = make_symbols(kc.symbols);
  const double L = kc.symbols.support_radius + 1.0;
  json j;
  int chern_in = 0, chern_out = 0;
  bool stable = true, first = true;
  json per_grid = json::array();
  for (const auto& g : kc.grids) {
    std::vector<Mat> field;
    for (int ix = 0; ix < g[0]; ++ix)
      for (int iy = 0; iy < g[1]; ++iy)
        field.push_back(symbols.Bplus_plane(-L + 2.0 * L * ix / g[0],
                                            -L + 2.0 * L * iy / g[1]));
    int ci = chern_number_dense(field, g[0], g[1]).chern;
    CoverData cover = make_torus_cover(kc.arcs, g[0], g[1]);
    DeflatedPushforward dp(grp, symbols, cover, kc.R, kc.trunc_tol, cfg.max_dim);
    int co = dp.chern().chern;
    RankFieldReport rk = dp.rank_gap_field();
    KClassReport kr;
    kr.rank_Q = dp.a_dim();
    kr.rank_P = rk.ranks.empty() ? 0 : rk.ranks.front();
    kr.class_rank = kr.rank_P - kr.rank_Q;
    kr.per_point_ranks = rk.ranks;
    kr.gap_min = rk.gap_min;
    kr.locally_constant = rk.locally_constant;
    per_grid.push_back({{"grid", g},
                        {"chern_input", ci},
                        {"chern_output", co},
                        {"kclass", to_json(kr)}});
    if (first) {
      chern_in = ci;
      chern_out = co;
      first = false;
    } else {
      stable = stable && ci == chern_in && co == chern_out;
    }
  }
  ChernReport rep{chern_in, chern_out, stable && chern_in == chern_out};
  j["grids"] = per_grid;
  j["chern"] = to_json(rep);
  j["agree"] = rep.agree;
  j["verdict"] = rep.agree
                     ? "direct image verified: chern " + std::to_string(chern_in)
                     : "MISMATCH: input " + std::to_string(chern_in) + " output " +
                           std::to_string(chern_out);
  out.write_json("kclass.json", j);
  if (!cache_file.empty()) {
    fs::create_directories(cache_file.parent_path());
    std::ofstream cf(cache_file, std::ios::binary);
    cf << j.dump(2) << "\n";
  }
  out.say("kclass: " + j["verdict"].get<std::string>());
  return rep.agree ? 0 : 1;
}

int run_example(const ExperimentConfig& cfg, const Output& out) {
  const auto& ec = cfg.example;
  Group grp(GroupSpec{GroupKind::FreeAbelian, 2});
  SymbolPair symbols = make_symbols(ec.symbols);
  TruncationFamily fam =
      truncate_pair(grp, symbols, ec.radii, 2 * ec.F_radius, cfg.max_dim);
  Ball F = grp.ball(ec.F_radius, cfg.max_dim);
  std::vector<RadiusDefects> defects = family_defect_curve(fam, F);
  CoverData cover = make_torus_cover(ec.arcs, ec.grid[0], ec.grid[1]);
  ConvergenceCurve curve =
      convergence_experiment(grp, symbols, cover, ec.radii, ec.Rstar, cfg.max_dim);
  std::ostringstream csv;
  write_pipeline_csv(csv, defects, curve);
  out.write_text("example.csv", csv.str());
  json j;
  j["convergence"] = to_json(curve);
  j["variation_delta"] = measured_variation(grp, symbols, ec.radii.back());
  json defj = json::array();
  for (const auto& row : defects)
    defj.push_back({{"R", row.radius},
                    {"dim", row.dim},
                    {"eps1", row.eps1},
                    {"eps2", row.eps2},
                    {"eps2prime", row.eps2prime}});
  j["defects"] = defj;
  out.write_json("example.json", j);
  for (std::size_t i = 0; i < curve.radii.size(); ++i)
    out.say("R=" + std::to_string(curve.radii[i]) +
            " sup||P''_R - P''_R*|| = " + std::to_string(curve.sup_norm[i]));
  return 0;
}

int run_verify_all(const ExperimentConfig&, const Output& out) {
  std::ostringstream sink;
  std::ostream& log = out.quiet ? static_cast<std::ostream&>(sink) : std::cout;
  std::vector<acceptance::CriterionResult> results = acceptance::run_all(log);
  json j = json::array();
  for (const auto& r : results)
    j.push_back({{"id", r.id},
                 {"name", r.name},
                 {"pass", r.pass},
                 {"seconds", r.seconds},
                 {"detail", r.detail}});
  out.write_json("verify_all.json", j);
  return acceptance::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kbal: balanced pairs of group maps, almost projections, and "
               "K0 class extraction"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "random seed override");
  app.add_option("--max-dim", opt.max_dim, "resource cap override");
  app.add_flag("--quiet", opt.quiet, "suppress progress lines");

  std::map<std::string, std::function<int(const ExperimentConfig&, const Output&)>>
      commands = {{"defects", run_defects},     {"truncate", run_truncate},
                  {"projections", run_projections}, {"kclass", run_kclass},
                  {"example", run_example},     {"verify-all", run_verify_all}};
  std::map<std::string, std::string> descriptions = {
      {"defects", "Definition-1 defect reports over radii"},
      {"truncate", "Theorem-1 truncation convergence curve"},
      {"projections", "L2/L3/L4 verification sweep"},
      {"kclass", "rank and Chern report for the pushed-forward class"},
      {"example", "full ball-pair pipeline with convergence experiment"},
      {"verify-all", "run the acceptance suite"}};
  for (auto& [name, fn] : commands) app.add_subcommand(name, descriptions[name]);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = resolve_config(opt);
    Output out{fs::path(cfg.out_dir), opt.quiet};
    for (auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(cfg, out);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
