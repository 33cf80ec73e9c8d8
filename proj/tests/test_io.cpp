#include <sstream>

#include "doctest.h"
#include "kbal/io.hpp"

using namespace kbal;

TEST_CASE("config defaults, overrides, and diagnostics") {
  ExperimentConfig def = parse_config("{}");
  CHECK(def.defects.radii == std::vector<int>{4, 6, 8, 12});
  CHECK(def.kclass.R == 12);

  ExperimentConfig cfg = parse_config(R"({
    "seed": 7,
    "defects": {"radii": [2, 3], "F_radius": 1,
                 "symbols": {"type": "bott", "support_radius": 2.0}},
    "example": {"grid": [4, 4], "Rstar": 8}
  })");
  CHECK(cfg.seed == 7);
  CHECK(cfg.defects.radii == std::vector<int>{2, 3});
  CHECK(cfg.example.grid == std::array<int, 2>{4, 4});

  CHECK_THROWS_AS(parse_config("{invalid"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"defects": {"radii": [4, 4]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"defects": {"radii": "x"}})"), ConfigError);
}

TEST_CASE("csv emission format") {
  std::vector<RadiusDefects> rows(2);
  rows[0] = {2, 10, 0.5, 0.25, 0.125, 0.01};
  rows[1] = {4, 20, 0.25, 0.2, 0.1, 0.02};
  std::ostringstream os;
  write_radius_csv(os, rows);
  std::string s = os.str();
  CHECK(s.find("R,dim,eps1,eps2,eps2prime,wall_time\n") == 0);
  CHECK(s.find("2,10,0.5,0.25,0.125,0.01") != std::string::npos);
  CHECK(s.find(',') != std::string::npos);
  CHECK(s.find(';') == std::string::npos);
}

TEST_CASE("json report shapes") {
  AlmostProjection ap;
  ap.deviation = 0.1;
  ap.gap = 0.3;
  ap.rank_above_half = 5;
  ap.dim = 10;
  json j = to_json(ap);
  CHECK(j.at("deviation") == 0.1);
  CHECK(j.at("rank_above_half") == 5);

  Group z(GroupSpec{GroupKind::FreeAbelian, 1});
  DefectReport rep;
  rep.F_radius = 1;
  rep.eps_admissible = 0.25;
  rep.witness_admissible =
      DefectWitness{z.identity(), z.identity(), z.identity(), 1, 0.25};
  json jr = to_json(z, rep);
  CHECK(jr.at("F_radius") == 1);
  CHECK(jr.at("eps1") == 0.25);
  CHECK(jr.at("witnesses").at("eps1").at("g") == "(0)");

  // Deterministic serialization.
  CHECK(to_json(z, rep).dump() == jr.dump());
}
