#include <doctest.h>

#include <set>

#include "goldi/error.hpp"
#include "goldi/flood.hpp"
#include "goldi/rng.hpp"
#include "goldi/scene.hpp"
#include "oracles.hpp"

using namespace goldi;
using namespace goldi::flood;

TEST_CASE("window enumeration matches the published counts") {
  const auto windows = enumerate_windows();
  CHECK(windows.size() == 66);

  int minimal = 0;
  for (const auto& w : windows)
    if (w.end_day - w.start_day == 5) ++minimal;
  CHECK(minimal == 11);

  const auto has = [&](int s, int e) {
    for (const auto& w : windows)
      if (w.start_day == s && w.end_day == e) return true;
    return false;
  };
  CHECK(has(5, 20));
  CHECK_FALSE(has(5, 21));
  CHECK_FALSE(has(4, 10));

  // deterministic order: start ascending, then end
  for (std::size_t i = 1; i < windows.size(); ++i) {
    const auto& a = windows[i - 1];
    const auto& b = windows[i];
    CHECK((a.start_day < b.start_day ||
           (a.start_day == b.start_day && a.end_day < b.end_day)));
  }

  const auto specs = enumerate_specs();
  CHECK(specs.size() == 1254);
  CHECK(quantile_levels().front() == 5);
  CHECK(quantile_levels().back() == 95);
}

TEST_CASE("spec_index agrees with the canonical enumeration") {
  FloodMetricTable table;
  table.specs = enumerate_specs();
  for (std::size_t i = 0; i < table.specs.size(); ++i)
    CHECK(table.spec_index(table.specs[i]) == static_cast<int>(i));
}

TEST_CASE("quantile thresholds") {
  const auto levels = quantile_levels();

  SUBCASE("constant series") {
    std::vector<double> series(17, 0.3);
    const auto t = quantile_thresholds(series, levels);
    for (int i = 0; i < kNumLevels; ++i) CHECK(t[i] == doctest::Approx(0.3));
  }

  SUBCASE("uniform grid of 21 values has Q50 = 0.5") {
    std::vector<double> series;
    for (int i = 0; i <= 20; ++i) series.push_back(i / 20.0);
    const auto t = quantile_thresholds(series, levels);
    CHECK(t[level_index(50)] == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("40-value fixture matches the sort-and-interpolate oracle") {
    auto rng = Rng::substream(42, "test.quantiles");
    std::vector<double> series;
    for (int i = 0; i < 40; ++i) series.push_back(rng.uniform01());
    const auto t = quantile_thresholds(series, levels);
    for (int i = 0; i < kNumLevels; ++i) {
      const double expect = oracles::quantile_sorted(series, levels[static_cast<std::size_t>(i)]);
      CHECK(std::abs(t[i] - expect) < 1e-12);
    }
    for (int i = 1; i < kNumLevels; ++i) CHECK(t[i] >= t[i - 1]);
  }
}

TEST_CASE("max consecutive run") {
  CHECK(max_consecutive_run({0, 1, 1, 1, 0, 1, 1}, 8) == 24);
  CHECK(max_consecutive_run({0, 0, 0}, 8) == 0);
  CHECK(max_consecutive_run({}, 8) == 0);
  CHECK(max_consecutive_run({1, 1, 1}, 5) == 15);

  // brute-force equivalence on random sequences
  auto rng = Rng::substream(7, "test.runs");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> flags(200);
    for (auto& f : flags) f = rng.bernoulli(0.6) ? 1 : 0;
    CHECK(max_consecutive_run(flags, 8) == oracles::run_days_quadratic(flags, 8));
  }
}

TEST_CASE("window metrics clipping identities") {
  CHECK(window_metrics(8, {5, 18}).in_window);
  CHECK(window_metrics(8, {5, 18}).days_in_window == 4);
  CHECK_FALSE(window_metrics(3, {5, 10}).in_window);
  CHECK(window_metrics(3, {5, 10}).days_in_window == 0);
  CHECK(window_metrics(40, {5, 20}).in_window);
  CHECK(window_metrics(40, {5, 20}).days_in_window == 16);
  CHECK(window_metrics(0, {5, 10}).days_in_window == 0);

  // non-decreasing in run_days; clipped at the window length
  for (const auto& w : enumerate_windows()) {
    int prev = 0;
    for (int run = 0; run <= 40; ++run) {
      const auto m = window_metrics(run, w);
      CHECK(m.days_in_window >= prev);
      CHECK(m.days_in_window <= w.end_day - w.start_day + 1);
      CHECK(m.in_window == (m.days_in_window > 0));
      prev = m.days_in_window;
    }
  }
}

namespace {

// tiny scene builder: per-district step series shared by every rice pixel
Scene make_series_scene(const std::vector<std::vector<double>>& district_steps,
                        int n_years, int steps_per_season) {
  Scene scene;
  scene.calendar = Calendar{2002, n_years, steps_per_season, 8};
  for (std::size_t d = 0; d < district_steps.size(); ++d) {
    DistrictMeta dm;
    dm.district_id = "d" + std::to_string(d + 1);
    dm.name = dm.district_id;
    scene.districts.push_back(dm);
    PixelSeries px;
    px.pixel_id = "p" + std::to_string(d + 1);
    px.district_id = dm.district_id;
    px.flood_frac = Eigen::Map<const Eigen::ArrayXd>(
        district_steps[d].data(),
        static_cast<Eigen::Index>(district_steps[d].size()));
    px.evi = Eigen::ArrayXd::Constant(scene.calendar.steps_total(), 0.5);
    px.evi_missing.assign(static_cast<std::size_t>(scene.calendar.steps_total()), 0);
    px.rice.assign(static_cast<std::size_t>(n_years), 1);
    scene.pixels.push_back(std::move(px));
  }
  return scene;
}

}  // namespace

TEST_CASE("district series averages over rice pixels") {
  Scene scene = make_series_scene({{0.2, 0.4, 0.2, 0.4}}, 2, 2);
  // add a second rice pixel and one non-rice pixel to district 1
  PixelSeries px2 = scene.pixels[0];
  px2.pixel_id = "p2";
  px2.flood_frac << 0.4, 0.2, 0.4, 0.2;
  scene.pixels.push_back(px2);
  PixelSeries px3 = scene.pixels[0];
  px3.pixel_id = "p3";
  px3.flood_frac << 0.9, 0.9, 0.9, 0.9;
  px3.rice.assign(2, 0);
  scene.pixels.push_back(px3);

  const auto series = district_flood_series(scene, 2002);
  REQUIRE(series.size() == 1);
  CHECK_FALSE(series[0].missing);
  CHECK(series[0].frac[0] == doctest::Approx(0.3));
  CHECK(series[0].frac[1] == doctest::Approx(0.3));

  SUBCASE("single rice pixel reproduces its own series") {
    scene.pixels.resize(1);
    const auto single = district_flood_series(scene, 2003);
    CHECK(single[0].frac[0] == doctest::Approx(0.2));
    CHECK(single[0].frac[1] == doctest::Approx(0.4));
  }

  SUBCASE("no rice pixels flags missing") {
    for (auto& px : scene.pixels) px.rice.assign(2, 0);
    const auto none = district_flood_series(scene, 2002);
    CHECK(none[0].missing);
  }
}

TEST_CASE("flood table enumerates all specs and flags constant scenes empty") {
  // constant inundation: binarization never fires, no variation anywhere
  std::vector<double> steps(4 * 3, 0.25);
  Scene scene = make_series_scene({steps, steps}, 4, 3);
  const auto table = build_flood_table(scene);
  CHECK(table.specs.size() == 1254);
  CHECK(table.empty_spec.size() == 1254);
  for (const auto e : table.empty_spec) CHECK(e == 1);
  for (int d = 0; d < 2; ++d)
    for (int y = 0; y < 4; ++y) CHECK(table.is_valid(d, y));
}

TEST_CASE("flood table run_days match the synth ground truth") {
  SynthConfig cfg;
  cfg.n_districts = 8;
  cfg.pixels_per_district = 4;
  cfg.rng_seed = 99;
  const auto result = synth_scene(cfg);
  const auto table = build_flood_table(result.scene);
  const int level = cfg.planted_quantile_level;
  for (int d = 0; d < cfg.n_districts; ++d)
    for (int y = 0; y < cfg.calendar.n_years; ++y)
      CHECK(table.run_days(level, d, y) == result.truth.run_days(d, y));
}

TEST_CASE("binarization is monotone in the quantile level") {
  SynthConfig cfg;
  cfg.n_districts = 6;
  cfg.pixels_per_district = 3;
  cfg.rng_seed = 5;
  const auto scene = synth_scene(cfg).scene;
  const auto table = build_flood_table(scene);
  for (int d = 0; d < table.n_districts; ++d) {
    for (int y = 0; y < table.n_years; ++y) {
      for (int li = 1; li < kNumLevels; ++li)
        CHECK(table.run_days_by_level(li, d * table.n_years + y) <=
              table.run_days_by_level(li - 1, d * table.n_years + y));
    }
  }
  // ... and so are days_in_window and the in-window count, per window
  for (const auto& w : enumerate_windows()) {
    int prev_count = -1;
    for (int level : quantile_levels()) {
      int count = 0;
      for (int d = 0; d < table.n_districts; ++d)
        for (int y = 0; y < table.n_years; ++y)
          if (window_metrics(table.run_days(level, d, y), w).in_window)
            ++count;
      if (prev_count >= 0) CHECK(count <= prev_count);
      prev_count = count;
    }
  }
}

TEST_CASE("binarization is scale-invariant") {
  SynthConfig cfg;
  cfg.n_districts = 4;
  cfg.pixels_per_district = 3;
  cfg.rng_seed = 17;
  auto scene = synth_scene(cfg).scene;
  const auto base = build_flood_table(scene);
  for (auto& px : scene.pixels) px.flood_frac *= 0.37;
  const auto scaled = build_flood_table(scene);
  CHECK(base.run_days_by_level == scaled.run_days_by_level);
  CHECK(base.empty_spec == scaled.empty_spec);
}

TEST_CASE("flood_prone uses strict inequality against the global median") {
  SUBCASE("identical districts are never flood-prone") {
    // one pulse step per year at the same height everywhere
    std::vector<double> steps;
    for (int y = 0; y < 4; ++y) {
      steps.insert(steps.end(), {0.1, 0.8, 0.1, 0.1});
      steps[steps.size() - 4] += 0.01 * y;  // a little variation across years
    }
    Scene scene = make_series_scene({steps, steps, steps}, 4, 4);
    const auto table = build_flood_table(scene);
    const FloodSpec spec{50, {5, 10}};
    if (!table.spec_is_empty(spec)) {
      const auto prone = flood_prone(table, spec);
      for (const auto f : prone) CHECK(f == 0);
    }
  }

  SUBCASE("hand fixture: district medians {0,0,6,10} vs global median 3") {
    // step_days = 2, level 5 (threshold 0.1 everywhere, pulses above it):
    //   d1, d2: run 0 -> days_in_window 0
    //   d3: 5-step run = 10 days -> min(10,14)-5+1 = 6
    //   d4: 7-step run = 14 days -> min(14,14)-5+1 = 10
    // global median over {0,0,0,0,6,6,10,10} = 3; medians {0,0,6,10}
    std::vector<double> d_dry(16, 0.1);
    std::vector<double> d_six = {0.5, 0.6, 0.7, 0.8, 0.9, 0.1, 0.1, 0.1,
                                 0.5, 0.6, 0.7, 0.8, 0.9, 0.1, 0.1, 0.1};
    std::vector<double> d_ten = {0.5, 0.6, 0.7, 0.8, 0.9, 0.8, 0.7, 0.1,
                                 0.5, 0.6, 0.7, 0.8, 0.9, 0.8, 0.7, 0.1};
    Scene scene = make_series_scene({d_dry, d_dry, d_six, d_ten}, 2, 8);
    scene.calendar.step_days = 2;
    for (auto& px : scene.pixels) px.evi = Eigen::ArrayXd::Constant(16, 0.5);
    const auto table = build_flood_table(scene);
    const FloodSpec spec{5, {5, 14}};
    REQUIRE_FALSE(table.spec_is_empty(spec));
    CHECK(table.run_days(5, 2, 0) == 10);
    CHECK(table.run_days(5, 3, 0) == 14);
    const auto prone = flood_prone(table, spec);
    CHECK(prone[0] == 0);
    CHECK(prone[1] == 0);
    CHECK(prone[2] == 1);
    CHECK(prone[3] == 1);
  }

  SUBCASE("one always-flooded district is exactly the flagged one") {
    // wet district: threshold at level 50 is 0.5, two-step runs = 16 days
    std::vector<double> wet = {0.1, 0.9, 0.9, 0.1, 0.1, 0.9, 0.9, 0.1};
    std::vector<double> dry(8, 0.1);
    Scene scene = make_series_scene({wet, dry, dry}, 2, 4);
    const auto table = build_flood_table(scene);
    const FloodSpec spec{50, {5, 10}};
    REQUIRE_FALSE(table.spec_is_empty(spec));
    const auto prone = flood_prone(table, spec);
    CHECK(prone[0] == 1);
    CHECK(prone[1] == 0);
    CHECK(prone[2] == 0);
  }

  SUBCASE("empty spec is an error") {
    std::vector<double> steps(8, 0.2);
    Scene scene = make_series_scene({steps, steps}, 2, 4);
    const auto table = build_flood_table(scene);
    CHECK_THROWS_AS(flood_prone(table, FloodSpec{50, {5, 10}}), DataError);
  }
}
