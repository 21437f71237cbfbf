#include "goldi/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include <json.hpp>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/rng.hpp"
#include "goldi/stats.hpp"

namespace goldi {

using nlohmann::json;

void Calendar::validate() const {
  if (step_days < 1) throw DataError("calendar: step_days must be >= 1");
  if (n_years < 1) throw DataError("calendar: n_years must be >= 1");
  if (steps_per_season < 1)
    throw DataError("calendar: steps_per_season must be >= 1");
}

int Scene::district_index(const std::string& district_id) const {
  for (std::size_t i = 0; i < districts.size(); ++i)
    if (districts[i].district_id == district_id) return static_cast<int>(i);
  return -1;
}

std::vector<std::vector<int>> Scene::pixels_by_district() const {
  std::vector<std::vector<int>> by_district(districts.size());
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    const int d = district_index(pixels[p].district_id);
    if (d >= 0) by_district[static_cast<std::size_t>(d)].push_back(static_cast<int>(p));
  }
  return by_district;
}

namespace {

Calendar calendar_from_json(const json& j) {
  Calendar cal;
  cal.first_year = j.at("first_year").get<int>();
  cal.n_years = j.at("n_years").get<int>();
  cal.steps_per_season = j.at("steps_per_season").get<int>();
  cal.step_days = j.at("step_days").get<int>();
  cal.validate();
  return cal;
}

}  // namespace

Scene load_scene(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open scene manifest: " + manifest_path.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("scene manifest is not valid JSON: " + std::string(e.what()));
  }

  Scene scene;
  try {
    scene.calendar = calendar_from_json(manifest.at("calendar"));
  } catch (const json::exception& e) {
    throw DataError("scene manifest calendar block: " + std::string(e.what()));
  }
  const auto base = manifest_path.parent_path();
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  // districts
  const auto dist_csv = read_csv(resolve(manifest.at("districts").get<std::string>()));
  const auto c_did = dist_csv.col("district_id");
  const auto c_name = dist_csv.col("name");
  const auto c_coastal = dist_csv.col("coastal");
  for (const auto& row : dist_csv.rows) {
    DistrictMeta dm;
    dm.district_id = row[c_did];
    dm.name = row[c_name];
    dm.coastal = parse_bool01(row[c_coastal], "coastal, district " + dm.district_id);
    if (scene.district_index(dm.district_id) >= 0)
      throw DataError("duplicate district_id: " + dm.district_id);
    scene.districts.push_back(std::move(dm));
  }

  // pixels, long format: one row per (pixel, year, step)
  const auto px_csv = read_csv(resolve(manifest.at("pixels").get<std::string>()));
  const auto c_pid = px_csv.col("pixel_id");
  const auto c_pd = px_csv.col("district_id");
  const auto c_x = px_csv.col("x");
  const auto c_y = px_csv.col("y");
  const auto c_elev = px_csv.col("elevation");
  const auto c_slope = px_csv.col("slope");
  const auto c_year = px_csv.col("year");
  const auto c_step = px_csv.col("step");
  const auto c_ff = px_csv.col("flood_frac");
  const auto c_evi = px_csv.col("evi");
  const auto c_miss = px_csv.col("evi_missing");
  const auto c_rice = px_csv.find_col("rice");

  const Calendar& cal = scene.calendar;
  std::map<std::string, std::size_t> pixel_index;
  std::vector<std::vector<std::uint8_t>> seen;  // per pixel, per flat step

  for (const auto& row : px_csv.rows) {
    const std::string& pid = row[c_pid];
    const int year = static_cast<int>(parse_int(row[c_year], "year, pixel " + pid));
    const int step = static_cast<int>(parse_int(row[c_step], "step, pixel " + pid));
    const std::string where = "pixel " + pid + ", year " + row[c_year] +
                              ", step " + row[c_step];
    if (!cal.has_year(year)) throw DataError("year outside calendar (" + where + ")");
    if (step < 0 || step >= cal.steps_per_season)
      throw DataError("step outside season (" + where + ")");

    auto it = pixel_index.find(pid);
    if (it == pixel_index.end()) {
      PixelSeries px;
      px.pixel_id = pid;
      px.district_id = row[c_pd];
      if (scene.district_index(px.district_id) < 0)
        throw DataError("pixel " + pid + " references unknown district_id '" +
                        px.district_id + "'");
      px.x = static_cast<int>(parse_int(row[c_x], "x, pixel " + pid));
      px.y = static_cast<int>(parse_int(row[c_y], "y, pixel " + pid));
      px.elevation = parse_double(row[c_elev], "elevation, pixel " + pid);
      px.slope = parse_double(row[c_slope], "slope, pixel " + pid);
      px.flood_frac = Eigen::ArrayXd::Zero(cal.steps_total());
      px.evi = Eigen::ArrayXd::Zero(cal.steps_total());
      px.evi_missing.assign(static_cast<std::size_t>(cal.steps_total()), 0);
      px.rice.assign(static_cast<std::size_t>(cal.n_years), 0);
      it = pixel_index.emplace(pid, scene.pixels.size()).first;
      scene.pixels.push_back(std::move(px));
      seen.emplace_back(static_cast<std::size_t>(cal.steps_total()), 0);
    }
    PixelSeries& px = scene.pixels[it->second];
    if (px.district_id != row[c_pd])
      throw DataError("pixel " + pid + " has inconsistent district_id");

    const int flat = cal.flat_step(cal.year_index(year), step);
    auto& seen_px = seen[it->second];
    if (seen_px[static_cast<std::size_t>(flat)])
      throw DataError("duplicate row (" + where + ")");
    seen_px[static_cast<std::size_t>(flat)] = 1;

    const double ff = parse_double(row[c_ff], "flood_frac, " + where);
    if (ff < 0.0 || ff > 1.0)
      throw DataError("flood_frac " + fmt_double(ff) + " outside [0,1] (" +
                      where + ")");
    const bool missing = parse_bool01(row[c_miss], "evi_missing, " + where);
    const double evi = parse_double(row[c_evi], "evi, " + where);
    if (!missing && (evi < -1.0 || evi > 1.0))
      throw DataError("evi " + fmt_double(evi) + " outside [-1,1] (" + where +
                      ")");
    px.flood_frac[flat] = ff;
    px.evi[flat] = missing ? 0.0 : evi;
    px.evi_missing[static_cast<std::size_t>(flat)] = missing ? 1 : 0;
    if (c_rice) {
      const bool rice = parse_bool01(row[*c_rice], "rice, " + where);
      const auto yi = static_cast<std::size_t>(cal.year_index(year));
      if (step == 0) {
        px.rice[yi] = rice ? 1 : 0;
      } else if (px.rice[yi] != (rice ? 1 : 0)) {
        throw DataError("rice flag varies within a season (" + where + ")");
      }
    }
  }

  // every pixel must cover the whole calendar
  for (std::size_t p = 0; p < scene.pixels.size(); ++p) {
    for (std::size_t f = 0; f < seen[p].size(); ++f) {
      if (!seen[p][f])
        throw DataError("pixel " + scene.pixels[p].pixel_id +
                        " is missing rows (flat step " + std::to_string(f) +
                        ")");
    }
  }
  return scene;
}

ValidationReport validate_scene(const Scene& scene) {
  ValidationReport report;
  const auto hard = [&](std::string msg) {
    report.items.push_back({ValidationItem::Severity::hard, std::move(msg)});
  };
  const auto warn = [&](std::string msg) {
    report.items.push_back({ValidationItem::Severity::warning, std::move(msg)});
  };

  try {
    scene.calendar.validate();
  } catch (const DataError& e) {
    hard(e.what());
    return report;
  }
  const int total = scene.calendar.steps_total();

  for (std::size_t i = 0; i < scene.districts.size(); ++i)
    for (std::size_t j = i + 1; j < scene.districts.size(); ++j)
      if (scene.districts[i].district_id == scene.districts[j].district_id)
        hard("duplicate district_id: " + scene.districts[i].district_id);

  for (const auto& px : scene.pixels) {
    if (scene.district_index(px.district_id) < 0)
      hard("pixel " + px.pixel_id + " references unknown district_id '" +
           px.district_id + "'");
    if (px.flood_frac.size() != total || px.evi.size() != total ||
        static_cast<int>(px.evi_missing.size()) != total) {
      hard("pixel " + px.pixel_id + " has series length " +
           std::to_string(px.flood_frac.size()) + ", expected " +
           std::to_string(total));
      continue;
    }
    if (static_cast<int>(px.rice.size()) != scene.calendar.n_years)
      hard("pixel " + px.pixel_id + " rice flags length " +
           std::to_string(px.rice.size()) + ", expected " +
           std::to_string(scene.calendar.n_years));
    for (int f = 0; f < total; ++f) {
      if (px.flood_frac[f] < 0.0 || px.flood_frac[f] > 1.0) {
        hard("pixel " + px.pixel_id + " flood_frac out of [0,1] at step " +
             std::to_string(f));
        break;
      }
      if (!px.evi_missing[static_cast<std::size_t>(f)] &&
          (px.evi[f] < -1.0 || px.evi[f] > 1.0)) {
        hard("pixel " + px.pixel_id + " evi out of [-1,1] at step " +
             std::to_string(f));
        break;
      }
    }
    for (int y = 0; y < scene.calendar.n_years; ++y) {
      bool all_missing = true;
      for (int s = 0; s < scene.calendar.steps_per_season && all_missing; ++s)
        if (!px.evi_missing[static_cast<std::size_t>(scene.calendar.flat_step(y, s))])
          all_missing = false;
      if (all_missing)
        warn("pixel " + px.pixel_id + " season fully missing (year " +
             std::to_string(scene.calendar.first_year + y) + ")");
    }
  }
  return report;
}

std::filesystem::path write_scene(const Scene& scene,
                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    CsvWriter out(dir / "districts.csv");
    out.write_row({"district_id", "name", "coastal"});
    for (const auto& dm : scene.districts)
      out.write_row({dm.district_id, dm.name, dm.coastal ? "1" : "0"});
    out.close();
  }

  {
    CsvWriter out(dir / "pixels.csv");
    out.write_row({"pixel_id", "district_id", "x", "y", "elevation", "slope",
                   "year", "step", "flood_frac", "evi", "evi_missing",
                   "rice"});
    std::vector<std::size_t> order(scene.pixels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scene.pixels[a].pixel_id < scene.pixels[b].pixel_id;
    });
    const Calendar& cal = scene.calendar;
    for (std::size_t i : order) {
      const auto& px = scene.pixels[i];
      for (int y = 0; y < cal.n_years; ++y) {
        for (int s = 0; s < cal.steps_per_season; ++s) {
          const int flat = cal.flat_step(y, s);
          const bool miss = px.evi_missing[static_cast<std::size_t>(flat)] != 0;
          out.write_row({px.pixel_id, px.district_id, fmt_int(px.x),
                         fmt_int(px.y), fmt_double(px.elevation),
                         fmt_double(px.slope), fmt_int(cal.first_year + y),
                         fmt_int(s), fmt_double(px.flood_frac[flat]),
                         fmt_double(miss ? 0.0 : px.evi[flat]),
                         miss ? "1" : "0",
                         px.rice[static_cast<std::size_t>(y)] ? "1" : "0"});
        }
      }
    }
    out.close();
  }

  const auto manifest_path = dir / "scene.json";
  json manifest;
  manifest["pixels"] = "pixels.csv";
  manifest["districts"] = "districts.csv";
  manifest["calendar"] = {{"first_year", scene.calendar.first_year},
                          {"n_years", scene.calendar.n_years},
                          {"steps_per_season", scene.calendar.steps_per_season},
                          {"step_days", scene.calendar.step_days}};
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw DataError("cannot write " + manifest_path.string());
  out << manifest.dump(2) << "\n";
  return manifest_path;
}

void SynthConfig::validate() const {
  if (n_districts < 1) throw UsageError("synth: n_districts must be >= 1");
  if (pixels_per_district < 1)
    throw UsageError("synth: pixels_per_district must be >= 1");
  flood::level_index(planted_quantile_level);  // throws if off-grid
  planted_window.validate();
  if (treatment_effect < 0.0)
    throw UsageError("synth: treatment_effect must be >= 0");
  if (rollout_first_year > rollout_last_year)
    throw UsageError("synth: rollout year range is reversed");
  if (!calendar.has_year(rollout_first_year) ||
      !calendar.has_year(rollout_last_year))
    throw UsageError("synth: rollout years outside calendar");
  if (noise_sd < 0.0) throw UsageError("synth: noise_sd must be >= 0");
  if (rice_fraction <= 0.0 || rice_fraction > 1.0)
    throw UsageError("synth: rice_fraction must be in (0,1]");
  if (evi_missing_rate < 0.0 || evi_missing_rate >= 1.0)
    throw UsageError("synth: evi_missing_rate must be in [0,1)");
  if (coastal_fraction < 0.0 || coastal_fraction > 1.0)
    throw UsageError("synth: coastal_fraction must be in [0,1]");
  try {
    calendar.validate();
  } catch (const DataError& e) {
    throw UsageError(std::string("synth: ") + e.what());
  }
}

namespace {

std::string zero_pad(int v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// Rice greenness over a season: transplanting, green-up to a mid-season
// peak, senescence toward harvest.
double rice_evi_curve(int step, int steps_per_season) {
  const double u = (step + 0.5) / static_cast<double>(steps_per_season);
  return 0.18 + 0.50 * std::sin(std::numbers::pi * u);
}

double nonrice_evi_curve(int step, int steps_per_season) {
  const double u = (step + 0.5) / static_cast<double>(steps_per_season);
  return 0.26 + 0.05 * std::sin(std::numbers::pi * u);
}

}  // namespace

SynthResult synth_scene(const SynthConfig& cfg) {
  cfg.validate();
  const Calendar& cal = cfg.calendar;
  const int n_d = cfg.n_districts;
  const int n_y = cal.n_years;
  const int steps = cal.steps_per_season;
  const std::uint64_t seed = cfg.rng_seed;

  SynthResult result;
  Scene& scene = result.scene;
  scene.calendar = cal;

  // District metadata and rollout schedule.
  std::vector<double> district_flood_base(static_cast<std::size_t>(n_d));
  GroundTruth& truth = result.truth;
  truth.config = cfg;
  truth.rollout_year.resize(static_cast<std::size_t>(n_d));
  truth.run_days.setConstant(n_d, n_y, -1);
  truth.boosted.assign(static_cast<std::size_t>(n_d) * static_cast<std::size_t>(n_y), 0);
  truth.seed_tons.setZero(n_d, n_y);

  const int n_coastal = static_cast<int>(std::lround(cfg.coastal_fraction * n_d));
  for (int d = 0; d < n_d; ++d) {
    auto rng = Rng::substream(seed, "synth.district", static_cast<std::uint64_t>(d));
    DistrictMeta dm;
    dm.district_id = "d" + zero_pad(d + 1, 3);
    dm.name = "district-" + zero_pad(d + 1, 3);
    dm.coastal = d < n_coastal;
    scene.districts.push_back(std::move(dm));
    truth.rollout_year[static_cast<std::size_t>(d)] =
        rng.uniform_int(cfg.rollout_first_year, cfg.rollout_last_year);
    // location-specific propensity: how strong this district's floods run
    district_flood_base[static_cast<std::size_t>(d)] = rng.uniform(0.3, 0.7);
  }

  // One seasonal hydrograph per district-year: water rises to a peak and
  // recedes, scaled by a year amplitude. Quantile thresholds then cut the
  // curve at different heights, so run lengths shrink smoothly across the
  // 19 levels (season-long runs at low levels, short or no exceedance at
  // high ones) and the run-length distribution is non-degenerate at every
  // level.
  struct Hydrograph {
    double peak = 8.0;       // step position of the crest
    double halfwidth = 7.0;  // steps from crest to zero water
    double amplitude = 0.0;

    double height(int s) const {
      const double u = (s + 0.5 - peak) / halfwidth;
      if (u <= -1.0 || u >= 1.0) return 0.0;
      const double c = std::cos(0.5 * std::numbers::pi * u);
      // crest saturates: severe floods hold a plateau near their maximum,
      // the way fractional inundation pins near full coverage
      return amplitude * std::min(1.0, c * c / 0.55);
    }
  };
  std::vector<Hydrograph> hydro(static_cast<std::size_t>(n_d) * static_cast<std::size_t>(n_y));
  for (int d = 0; d < n_d; ++d) {
    for (int y = 0; y < n_y; ++y) {
      auto rng = Rng::substream(seed, "synth.pulse", static_cast<std::uint64_t>(d),
                                static_cast<std::uint64_t>(y));
      Hydrograph h;
      h.peak = rng.uniform(0.28, 0.66) * steps;
      // year intensity, left-skewed; severe floods crest higher and last
      // longer, so high quantile thresholds isolate few long events
      const double intensity = 0.06 + 1.34 * std::pow(rng.uniform01(), 0.45);
      h.halfwidth = (0.11 + 0.17 * intensity) * steps + rng.uniform(-0.5, 0.5);
      h.amplitude = district_flood_base[static_cast<std::size_t>(d)] * intensity;
      hydro[static_cast<std::size_t>(d * n_y + y)] = h;
    }
  }

  const int rice_per_district = std::max(
      1, static_cast<int>(std::lround(cfg.rice_fraction * cfg.pixels_per_district)));
  const int grid = 64;  // pixels laid out per-district on a coarse grid

  scene.pixels.reserve(static_cast<std::size_t>(n_d) *
                       static_cast<std::size_t>(cfg.pixels_per_district));
  for (int d = 0; d < n_d; ++d) {
    for (int k = 0; k < cfg.pixels_per_district; ++k) {
      const std::uint64_t pixel_uid =
          static_cast<std::uint64_t>(d) * 100000ULL + static_cast<std::uint64_t>(k);
      auto rng = Rng::substream(seed, "synth.pixel", pixel_uid);
      PixelSeries px;
      px.pixel_id = "p" + zero_pad(d + 1, 3) + "_" + zero_pad(k + 1, 4);
      px.district_id = scene.districts[static_cast<std::size_t>(d)].district_id;
      px.x = (d % 8) * grid + k % 8;
      px.y = (d / 8) * grid + k / 8;
      const bool is_rice = k < rice_per_district;
      px.elevation = is_rice ? rng.uniform(2.0, 12.0) : rng.uniform(8.0, 40.0);
      px.slope = is_rice ? rng.uniform(0.0, 1.5) : rng.uniform(0.5, 6.0);
      px.rice.assign(static_cast<std::size_t>(n_y), is_rice ? 1 : 0);

      const double baseflow = rng.uniform(0.02, 0.10);
      const double pulse_gain = rng.uniform(0.9, 1.1);
      const double evi_offset = rng.uniform(-0.03, 0.03);

      px.flood_frac = Eigen::ArrayXd::Zero(cal.steps_total());
      px.evi = Eigen::ArrayXd::Zero(cal.steps_total());
      px.evi_missing.assign(static_cast<std::size_t>(cal.steps_total()), 0);

      for (int y = 0; y < n_y; ++y) {
        const Hydrograph& h = hydro[static_cast<std::size_t>(d * n_y + y)];
        for (int s = 0; s < steps; ++s) {
          const int flat = cal.flat_step(y, s);
          const double water = h.height(s);
          const double frac = baseflow + pulse_gain * water + rng.normal(0.0, 0.01);
          px.flood_frac[flat] = std::clamp(frac, 0.0, 1.0);

          const double base = is_rice ? rice_evi_curve(s, steps)
                                      : nonrice_evi_curve(s, steps);
          // contemporaneous submergence damage to greenness
          const double damage = is_rice ? 0.3 * water : 0.0;
          double evi = base + evi_offset - damage + rng.normal(0.0, cfg.noise_sd);
          px.evi[flat] = std::clamp(evi, -1.0, 1.0);
          if (cfg.evi_missing_rate > 0.0 && rng.bernoulli(cfg.evi_missing_rate)) {
            px.evi_missing[static_cast<std::size_t>(flat)] = 1;
            px.evi[flat] = 0.0;
          }
        }
      }
      scene.pixels.push_back(std::move(px));
    }
  }

  // Planted-effect bookkeeping: run lengths at the planted quantile level,
  // computed from the emitted scene exactly as the flood engine will see it.
  const auto by_district = scene.pixels_by_district();
  const std::array<int, 1> planted_level = {cfg.planted_quantile_level};
  for (int d = 0; d < n_d; ++d) {
    std::vector<double> all_steps;
    std::vector<Eigen::ArrayXd> year_series(static_cast<std::size_t>(n_y));
    for (int y = 0; y < n_y; ++y) {
      Eigen::ArrayXd frac = Eigen::ArrayXd::Zero(steps);
      int n_rice = 0;
      for (int p : by_district[static_cast<std::size_t>(d)]) {
        const auto& px = scene.pixels[static_cast<std::size_t>(p)];
        if (!px.rice[static_cast<std::size_t>(y)]) continue;
        ++n_rice;
        frac += px.flood_frac.segment(cal.flat_step(y, 0), steps);
      }
      if (n_rice > 0) {
        frac /= n_rice;
        for (int s = 0; s < steps; ++s) all_steps.push_back(frac[s]);
      }
      year_series[static_cast<std::size_t>(y)] = frac;
    }
    if (all_steps.empty()) continue;
    const double threshold =
        flood::quantile_thresholds(all_steps, planted_level)[0];
    for (int y = 0; y < n_y; ++y) {
      std::vector<std::uint8_t> flags(static_cast<std::size_t>(steps));
      for (int s = 0; s < steps; ++s)
        flags[static_cast<std::size_t>(s)] =
            year_series[static_cast<std::size_t>(y)][s] > threshold ? 1 : 0;
      const int run = flood::max_consecutive_run(flags, cal.step_days);
      truth.run_days(d, y) = run;
      const bool in_window =
          flood::window_metrics(run, cfg.planted_window).in_window;
      const bool post_rollout =
          cal.first_year + y >= truth.rollout_year[static_cast<std::size_t>(d)];
      if (cfg.treatment_effect > 0.0 && in_window && post_rollout)
        truth.boosted[static_cast<std::size_t>(d * n_y + y)] = 1;
    }
  }

  // Apply the planted boost to rice pixels (exact shift, after noise).
  for (auto& px : scene.pixels) {
    const int d = scene.district_index(px.district_id);
    for (int y = 0; y < n_y; ++y) {
      if (!truth.boosted[static_cast<std::size_t>(d * n_y + y)]) continue;
      if (!px.rice[static_cast<std::size_t>(y)]) continue;
      for (int s = 0; s < steps; ++s)
        px.evi[cal.flat_step(y, s)] += cfg.treatment_effect;
    }
  }

  // Administrative seed: tons first appear in the rollout year and new
  // deliveries accrue every year after.
  for (int d = 0; d < n_d; ++d) {
    auto rng = Rng::substream(seed, "synth.seed", static_cast<std::uint64_t>(d));
    const int r = truth.rollout_year[static_cast<std::size_t>(d)];
    for (int y = 0; y < n_y; ++y) {
      const int year = cal.first_year + y;
      if (year < r) continue;
      truth.seed_tons(d, y) =
          year == r ? rng.uniform(1.0, 4.0) : rng.uniform(0.5, 3.0);
    }
  }

  return result;
}

void write_ground_truth(const GroundTruth& truth,
                        const std::filesystem::path& path) {
  const auto& cfg = truth.config;
  json j;
  j["config"] = {
      {"n_districts", cfg.n_districts},
      {"pixels_per_district", cfg.pixels_per_district},
      {"planted_quantile_level", cfg.planted_quantile_level},
      {"planted_window", {cfg.planted_window.start_day, cfg.planted_window.end_day}},
      {"treatment_effect", cfg.treatment_effect},
      {"rollout_year_range", {cfg.rollout_first_year, cfg.rollout_last_year}},
      {"noise_sd", cfg.noise_sd},
      {"rice_fraction", cfg.rice_fraction},
      {"evi_missing_rate", cfg.evi_missing_rate},
      {"coastal_fraction", cfg.coastal_fraction},
      {"rng_seed", cfg.rng_seed},
      {"calendar",
       {{"first_year", cfg.calendar.first_year},
        {"n_years", cfg.calendar.n_years},
        {"steps_per_season", cfg.calendar.steps_per_season},
        {"step_days", cfg.calendar.step_days}}}};
  j["rollout_year"] = truth.rollout_year;
  json runs = json::array();
  json boosts = json::array();
  json seed_tons = json::array();
  for (int d = 0; d < cfg.n_districts; ++d) {
    json dr = json::array(), db = json::array(), ds = json::array();
    for (int y = 0; y < cfg.calendar.n_years; ++y) {
      dr.push_back(truth.run_days(d, y));
      db.push_back(truth.is_boosted(d, y) ? 1 : 0);
      ds.push_back(truth.seed_tons(d, y));
    }
    runs.push_back(dr);
    boosts.push_back(db);
    seed_tons.push_back(ds);
  }
  j["run_days"] = runs;
  j["boosted"] = boosts;
  j["seed_tons"] = seed_tons;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace goldi
