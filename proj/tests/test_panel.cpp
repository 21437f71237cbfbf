#include <doctest.h>

#include <filesystem>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/evi.hpp"
#include "goldi/flood.hpp"
#include "goldi/panel.hpp"
#include "goldi/scene.hpp"

using namespace goldi;
using namespace goldi::panel;

namespace {

Calendar small_cal() { return Calendar{2008, 8, 4, 8}; }

std::vector<DistrictMeta> two_districts() {
  return {{"d1", "d1", false}, {"d2", "d2", true}};
}

}  // namespace

TEST_CASE("cumulative_seed") {
  const Calendar cal = small_cal();  // 2008..2015
  const auto districts = two_districts();

  SUBCASE("running sum with gaps, zero before the first record") {
    SeedTable seeds;
    seeds.rows.push_back({"d1", 2010, "v1", 0.0, 0.0});
    seeds.rows.push_back({"d1", 2012, "v1", 3.0, 2.0});
    seeds.rows.push_back({"d1", 2015, "v1", 1.0, 2.0});
    const auto cum = cumulative_seed(seeds, cal, districts);
    CHECK(cum(0, cal.year_index(2009)) == 0.0);
    CHECK(cum(0, cal.year_index(2010)) == 0.0);  // zero tons -> no rollout
    CHECK(cum(0, cal.year_index(2012)) == 5.0);
    CHECK(cum(0, cal.year_index(2013)) == 5.0);
    CHECK(cum(0, cal.year_index(2014)) == 5.0);
    CHECK(cum(0, cal.year_index(2015)) == 8.0);
    CHECK(cum.row(1).sum() == 0.0);  // no records -> all zeros
  }

  SUBCASE("multi-variety same year is summed") {
    SeedTable seeds;
    seeds.rows.push_back({"d1", 2010, "v1", 1.0, 0.5});
    seeds.rows.push_back({"d1", 2010, "v2", 2.0, 0.0});
    const auto cum = cumulative_seed(seeds, cal, districts);
    CHECK(cum(0, cal.year_index(2010)) == doctest::Approx(3.5));
  }

  SUBCASE("negative tons error") {
    SeedTable seeds;
    seeds.rows.push_back({"d1", 2010, "v1", -1.0, 0.0});
    CHECK_THROWS_AS(cumulative_seed(seeds, cal, districts), DataError);
  }

  SUBCASE("unknown district and out-of-calendar year error") {
    SeedTable seeds;
    seeds.rows.push_back({"dX", 2010, "v1", 1.0, 0.0});
    CHECK_THROWS_AS(cumulative_seed(seeds, cal, districts), DataError);
    seeds.rows[0] = {"d1", 1999, "v1", 1.0, 0.0};
    CHECK_THROWS_AS(cumulative_seed(seeds, cal, districts), DataError);
  }
}

namespace {

struct PanelFixture {
  Scene scene;
  evi::EviTable evi_table;
  flood::FloodMetricTable flood_table;
  SeedTable seeds;
  DistrictYearCovariates covars;

  explicit PanelFixture(const SynthConfig& cfg) {
    const auto result = synth_scene(cfg);
    scene = result.scene;
    evi_table = evi::build_evi_table(scene);
    flood_table = flood::build_flood_table(scene);
    covars = district_covariates(scene);
    for (int d = 0; d < cfg.n_districts; ++d) {
      for (int y = 0; y < cfg.calendar.n_years; ++y) {
        const double tons = result.truth.seed_tons(d, y);
        if (tons > 0.0)
          seeds.rows.push_back({scene.districts[static_cast<std::size_t>(d)].district_id,
                                cfg.calendar.first_year + y, "v1", tons, 0.0});
      }
    }
  }

  Panel assemble() const {
    return assemble_panel(evi_table, flood_table, seeds, covars,
                          scene.calendar, scene.districts);
  }
};

SynthConfig small_cfg() {
  SynthConfig cfg;
  cfg.n_districts = 10;
  cfg.pixels_per_district = 3;
  cfg.rng_seed = 31;
  return cfg;
}

}  // namespace

TEST_CASE("assemble_panel produces one row per complete district-year") {
  PanelFixture fx(small_cfg());
  const Panel panel = fx.assemble();
  CHECK(panel.rows.size() == 10 * 20);
  CHECK(panel.dropped_rows == 0);

  for (const auto& row : panel.rows) {
    CHECK(panel.districts[static_cast<std::size_t>(row.district)].district_id ==
          fx.scene.districts[static_cast<std::size_t>(row.district)].district_id);
    CHECK(row.post2010 == (row.year >= 2010));
    CHECK(row.rice_area == 3.0);
  }

  SUBCASE("post2010 boundary") {
    for (const auto& row : panel.rows) {
      if (row.year == 2009) CHECK_FALSE(row.post2010);
      if (row.year == 2010) CHECK(row.post2010);
    }
  }

  SUBCASE("event_time is zero in the first seeded year, -1 row exists") {
    for (int d = 0; d < 10; ++d) {
      int first_seed_year = 0;
      for (const auto& row : panel.rows) {
        if (row.district != d) continue;
        if (row.seed_cum > 0.0) {
          first_seed_year = row.year;
          break;
        }
      }
      bool saw_minus1 = false, saw_zero = false;
      for (const auto& row : panel.rows) {
        if (row.district != d) continue;
        REQUIRE(row.event_time.has_value());
        CHECK(*row.event_time == row.year - first_seed_year);
        saw_minus1 |= *row.event_time == -1;
        saw_zero |= *row.event_time == 0;
      }
      CHECK(saw_minus1);
      CHECK(saw_zero);
    }
  }

  SUBCASE("seed_cum is non-decreasing within district") {
    for (int d = 0; d < 10; ++d) {
      double prev = -1.0;
      for (const auto& row : panel.rows) {
        if (row.district != d) continue;
        CHECK(row.seed_cum >= prev);
        prev = row.seed_cum;
      }
    }
  }

  SUBCASE("assembly is idempotent") {
    const Panel twice = fx.assemble();
    REQUIRE(twice.rows.size() == panel.rows.size());
    for (std::size_t i = 0; i < panel.rows.size(); ++i) {
      CHECK(twice.rows[i].district == panel.rows[i].district);
      CHECK(twice.rows[i].year == panel.rows[i].year);
      CHECK(twice.rows[i].evi_cum == panel.rows[i].evi_cum);
      CHECK(twice.rows[i].seed_cum == panel.rows[i].seed_cum);
    }
  }
}

TEST_CASE("one missing district-year drops exactly one row") {
  PanelFixture fx(small_cfg());
  // knock out every rice pixel of district 4 in 2011
  const int y = fx.scene.calendar.year_index(2011);
  for (auto& px : fx.scene.pixels)
    if (px.district_id == "d005") px.rice[static_cast<std::size_t>(y)] = 0;
  fx.evi_table = evi::build_evi_table(fx.scene);
  fx.flood_table = flood::build_flood_table(fx.scene);
  fx.covars = district_covariates(fx.scene);
  const Panel panel = fx.assemble();
  CHECK(panel.rows.size() == 10 * 20 - 1);
  CHECK(panel.dropped_rows == 1);
}

TEST_CASE("filter_coastal") {
  SynthConfig cfg = small_cfg();
  cfg.coastal_fraction = 0.3;  // 3 of 10 districts
  PanelFixture fx(cfg);
  const Panel panel = fx.assemble();
  const Panel filtered = filter_coastal(panel);
  CHECK(filtered.rows.size() == 7 * 20);
  for (const auto& row : filtered.rows)
    CHECK_FALSE(filtered.districts[static_cast<std::size_t>(row.district)].coastal);

  SUBCASE("no coastal flags set is the identity") {
    SynthConfig none = small_cfg();
    none.coastal_fraction = 0.0;
    PanelFixture fx2(none);
    const Panel p2 = fx2.assemble();
    CHECK(filter_coastal(p2).rows.size() == p2.rows.size());
  }

  SUBCASE("all coastal empties the panel with a note") {
    SynthConfig all = small_cfg();
    all.coastal_fraction = 1.0;
    PanelFixture fx3(all);
    const Panel p3 = filter_coastal(fx3.assemble());
    CHECK(p3.rows.empty());
    CHECK_FALSE(p3.notes.empty());
  }
}

TEST_CASE("regroup merges fine units into coarse ones") {
  SynthConfig cfg = small_cfg();
  cfg.pixels_per_district = 2;
  const Scene fine = synth_scene(cfg).scene;

  SUBCASE("identity mapping changes nothing") {
    std::map<std::string, std::string> ident;
    for (const auto& dm : fine.districts) ident[dm.district_id] = dm.district_id;
    const Scene same = regroup(fine, ident);
    CHECK(same.districts.size() == fine.districts.size());
    const auto a = evi::build_evi_table(fine);
    const auto b = evi::build_evi_table(same);
    for (int d = 0; d < a.n_districts; ++d)
      for (int y = 0; y < a.n_years; ++y)
        CHECK(a.at(d, y).cum == doctest::Approx(b.at(d, y).cum));
  }

  SUBCASE("two equal-size children average into the parent series") {
    std::map<std::string, std::string> map;
    for (const auto& dm : fine.districts) map[dm.district_id] = "parent";
    map["d001"] = "pA";
    map["d002"] = "pA";
    const Scene coarse = regroup(fine, map);
    const int pa = coarse.district_index("pA");
    REQUIRE(pa >= 0);
    const auto fine_series = flood::district_flood_series(fine, 2005);
    const auto coarse_series = flood::district_flood_series(coarse, 2005);
    // both children have the same rice pixel count, so the parent series is
    // the plain mean of the child series
    for (int s = 0; s < fine.calendar.steps_per_season; ++s) {
      const double expect = 0.5 * (fine_series[0].frac[s] + fine_series[1].frac[s]);
      CHECK(coarse_series[static_cast<std::size_t>(pa)].frac[s] ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("unmapped unit errors") {
    std::map<std::string, std::string> partial;
    partial["d001"] = "pA";
    CHECK_THROWS_AS(regroup(fine, partial), DataError);
  }

  SUBCASE("coastal flag propagates if any child is coastal") {
    SynthConfig c2 = cfg;
    c2.coastal_fraction = 0.3;
    const Scene f2 = synth_scene(c2).scene;
    std::map<std::string, std::string> map;
    for (const auto& dm : f2.districts) map[dm.district_id] = "everything";
    const Scene merged = regroup(f2, map);
    REQUIRE(merged.districts.size() == 1);
    CHECK(merged.districts[0].coastal);
  }
}

TEST_CASE("broadcast_seed copies parent records to every child") {
  SeedTable parents;
  parents.rows.push_back({"P1", 2010, "v1", 2.0, 1.0});
  parents.rows.push_back({"P2", 2012, "v1", 4.0, 0.0});
  std::map<std::string, std::string> map = {
      {"c1", "P1"}, {"c2", "P1"}, {"c3", "P2"}};
  const SeedTable children = broadcast_seed(parents, map);
  REQUIRE(children.rows.size() == 3);
  double c1 = 0, c2 = 0;
  for (const auto& r : children.rows) {
    CHECK((r.district_id == "c1" || r.district_id == "c2" || r.district_id == "c3"));
    if (r.district_id == "c1") c1 = r.tons_produced + r.tons_distributed;
    if (r.district_id == "c2") c2 = r.tons_produced + r.tons_distributed;
  }
  CHECK(c1 == doctest::Approx(3.0));
  CHECK(c1 == doctest::Approx(c2));  // children inherit the parent value
}

TEST_CASE("panel csv writes a row per district-year with spec columns") {
  PanelFixture fx(small_cfg());
  const Panel panel = fx.assemble();
  const auto dir = std::filesystem::temp_directory_path() / "goldi_test_panelcsv";
  std::filesystem::create_directories(dir);
  write_panel_csv(panel, dir / "panel.csv");
  const auto csv = read_csv(dir / "panel.csv");
  CHECK(csv.rows.size() == panel.rows.size());
  CHECK(csv.header.size() == 11 + 2 * 1254);
}
