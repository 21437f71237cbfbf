#include <doctest.h>

#include <algorithm>
#include <random>

#include "goldi/evi.hpp"
#include "goldi/rng.hpp"
#include "goldi/scene.hpp"

using namespace goldi;
using namespace goldi::evi;

TEST_CASE("season_evi basics") {
  SUBCASE("three plain steps") {
    const std::vector<double> steps = {0.2, 0.4, 0.6};
    const std::vector<std::uint8_t> missing = {0, 0, 0};
    const auto m = season_evi(steps, missing);
    CHECK_FALSE(m.missing);
    CHECK(m.cum == doctest::Approx(1.2));
    CHECK(m.max == doctest::Approx(0.6));
    CHECK(m.mean == doctest::Approx(0.4));
    CHECK(m.median == doctest::Approx(0.4));
    CHECK(m.coverage == doctest::Approx(1.0));
  }

  SUBCASE("all missing returns missing") {
    const std::vector<double> steps = {0.2, 0.4};
    const std::vector<std::uint8_t> missing = {1, 1};
    CHECK(season_evi(steps, missing).missing);
  }

  SUBCASE("coverage gate") {
    const std::vector<double> steps = {0.2, 0.4, 0.6, 0.8};
    const std::vector<std::uint8_t> m75 = {1, 1, 1, 0};
    const std::vector<std::uint8_t> m50 = {1, 1, 0, 0};
    CHECK(season_evi(steps, m75).missing);        // 25% < 50%
    CHECK_FALSE(season_evi(steps, m50).missing);  // exactly 50%
  }

  SUBCASE("30-step fixture with 40% missing matches direct recomputation") {
    auto rng = Rng::substream(5, "test.evi30");
    std::vector<double> steps(30);
    std::vector<std::uint8_t> missing(30, 0);
    for (int i = 0; i < 30; ++i) steps[static_cast<std::size_t>(i)] = rng.uniform(-0.2, 0.9);
    for (int i = 0; i < 12; ++i) missing[static_cast<std::size_t>(i * 2)] = 1;  // 12 of 30
    const auto m = season_evi(steps, missing);
    REQUIRE_FALSE(m.missing);
    std::vector<double> present;
    for (int i = 0; i < 30; ++i)
      if (!missing[static_cast<std::size_t>(i)])
        present.push_back(steps[static_cast<std::size_t>(i)]);
    REQUIRE(present.size() == 18);
    double cum = 0.0, mx = present[0];
    for (double v : present) {
      cum += v;
      mx = std::max(mx, v);
    }
    CHECK(m.cum == doctest::Approx(cum).epsilon(1e-14));
    CHECK(m.max == doctest::Approx(mx).epsilon(1e-14));
    CHECK(m.mean == doctest::Approx(cum / 18.0).epsilon(1e-14));
    std::sort(present.begin(), present.end());
    CHECK(m.median == doctest::Approx(0.5 * (present[8] + present[9])).epsilon(1e-14));
  }
}

TEST_CASE("season_evi properties") {
  auto rng = Rng::substream(6, "test.evi.props");
  std::vector<double> steps(16);
  std::vector<std::uint8_t> missing(16, 0);
  for (auto& v : steps) v = rng.uniform(0.0, 0.8);
  const auto base = season_evi(steps, missing);

  SUBCASE("location equivariance") {
    const double c = 0.13;
    std::vector<double> shifted = steps;
    for (auto& v : shifted) v += c;
    const auto m = season_evi(shifted, missing);
    CHECK(m.cum == doctest::Approx(base.cum + 16 * c).epsilon(1e-12));
    CHECK(m.max == doctest::Approx(base.max + c).epsilon(1e-12));
    CHECK(m.mean == doctest::Approx(base.mean + c).epsilon(1e-12));
    CHECK(m.median == doctest::Approx(base.median + c).epsilon(1e-12));
  }

  SUBCASE("permutation invariance, cumulative included") {
    std::vector<double> shuffled = steps;
    std::mt19937 gen(99);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const auto m = season_evi(shuffled, missing);
    CHECK(m.cum == doctest::Approx(base.cum).epsilon(1e-12));
    CHECK(m.max == doctest::Approx(base.max));
    CHECK(m.mean == doctest::Approx(base.mean).epsilon(1e-12));
    CHECK(m.median == doctest::Approx(base.median).epsilon(1e-12));
  }

  SUBCASE("max dominates mean and median") {
    CHECK(base.max >= base.mean);
    CHECK(base.max >= base.median);
  }
}

namespace {

Scene two_pixel_scene(double evi_a, double evi_b, bool b_rice) {
  Scene scene;
  scene.calendar = Calendar{2002, 1, 4, 8};
  scene.districts.push_back({"d1", "d1", false});
  for (int p = 0; p < 2; ++p) {
    PixelSeries px;
    px.pixel_id = "p" + std::to_string(p + 1);
    px.district_id = "d1";
    px.flood_frac = Eigen::ArrayXd::Constant(4, 0.1);
    px.evi = Eigen::ArrayXd::Constant(4, p == 0 ? evi_a : evi_b);
    px.evi_missing.assign(4, 0);
    px.rice.assign(1, p == 0 || b_rice ? 1 : 0);
    scene.pixels.push_back(std::move(px));
  }
  return scene;
}

}  // namespace

TEST_CASE("build_evi_table aggregates then summarizes") {
  SUBCASE("single rice pixel equals its own season_evi") {
    const Scene scene = two_pixel_scene(0.5, 0.9, false);
    const auto table = build_evi_table(scene);
    const auto& m = table.at(0, 0);
    CHECK_FALSE(m.missing);
    CHECK(m.mean == doctest::Approx(0.5));
    CHECK(m.cum == doctest::Approx(2.0));
  }

  SUBCASE("two rice pixels average per step") {
    const Scene scene = two_pixel_scene(0.2, 0.4, true);
    const auto table = build_evi_table(scene);
    const auto& m = table.at(0, 0);
    CHECK(m.mean == doctest::Approx(0.3));
    CHECK(m.median == doctest::Approx(0.3));
    CHECK(m.cum == doctest::Approx(1.2));
  }

  SUBCASE("no rice pixels means missing") {
    Scene scene = two_pixel_scene(0.2, 0.4, false);
    scene.pixels[0].rice.assign(1, 0);
    CHECK(build_evi_table(scene).at(0, 0).missing);
  }
}

TEST_CASE("boosted district-years shift cumulative EVI by effect x steps") {
  SynthConfig base;
  base.n_districts = 6;
  base.pixels_per_district = 3;
  base.rng_seed = 2718;
  base.treatment_effect = 0.0;
  SynthConfig boosted = base;
  boosted.treatment_effect = 0.05;

  const auto a = synth_scene(base);
  const auto b = synth_scene(boosted);
  const auto ta = build_evi_table(a.scene);
  const auto tb = build_evi_table(b.scene);
  const int steps = base.calendar.steps_per_season;

  int boosted_cells = 0;
  for (int d = 0; d < base.n_districts; ++d) {
    for (int y = 0; y < base.calendar.n_years; ++y) {
      const double diff = tb.at(d, y).cum - ta.at(d, y).cum;
      if (b.truth.is_boosted(d, y)) {
        ++boosted_cells;
        CHECK(diff == doctest::Approx(0.05 * steps).epsilon(1e-10));
      } else {
        CHECK(diff == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      }
    }
  }
  CHECK(boosted_cells > 0);
}
