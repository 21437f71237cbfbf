#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "goldi/flood.hpp"

namespace goldi {

struct Calendar {
  int first_year = 2002;
  int n_years = 20;
  int steps_per_season = 16;
  int step_days = 8;

  int steps_total() const { return steps_per_season * n_years; }
  int last_year() const { return first_year + n_years - 1; }
  bool has_year(int year) const {
    return year >= first_year && year <= last_year();
  }
  int year_index(int year) const { return year - first_year; }
  // flat index of (year index, step within season)
  int flat_step(int year_idx, int step) const {
    return year_idx * steps_per_season + step;
  }
  void validate() const;  // throws DataError

  friend bool operator==(const Calendar&, const Calendar&) = default;
};

struct DistrictMeta {
  std::string district_id;
  std::string name;
  bool coastal = false;
};

struct PixelSeries {
  std::string pixel_id;
  std::string district_id;
  int x = 0;
  int y = 0;
  double elevation = 0.0;  // meters
  double slope = 0.0;      // degrees
  Eigen::ArrayXd flood_frac;            // steps_total, in [0,1]
  Eigen::ArrayXd evi;                   // steps_total, 0 where missing
  std::vector<std::uint8_t> evi_missing;  // steps_total
  std::vector<std::uint8_t> rice;         // n_years
};

// Immutable after construction; shared read-only across workers.
struct Scene {
  Calendar calendar;
  std::vector<DistrictMeta> districts;
  std::vector<PixelSeries> pixels;

  int district_index(const std::string& district_id) const;  // -1 if absent
  // pixel indices per district index
  std::vector<std::vector<int>> pixels_by_district() const;
};

struct ValidationItem {
  enum class Severity { hard, warning };
  Severity severity = Severity::hard;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool ok() const {
    for (const auto& it : items)
      if (it.severity == ValidationItem::Severity::hard) return false;
    return true;
  }
  std::size_t hard_count() const {
    std::size_t n = 0;
    for (const auto& it : items)
      if (it.severity == ValidationItem::Severity::hard) ++n;
    return n;
  }
};

// Scene manifest is JSON: {"pixels": ..., "districts": ..., "calendar":
// {first_year, n_years, steps_per_season, step_days}}; CSV paths are
// resolved relative to the manifest location.
Scene load_scene(const std::filesystem::path& manifest_path);

ValidationReport validate_scene(const Scene& scene);

// Writes districts.csv, pixels.csv (canonical column order, rows sorted by
// pixel_id, year, step) and scene.json into dir; returns the manifest path.
std::filesystem::path write_scene(const Scene& scene,
                                  const std::filesystem::path& dir);

struct SynthConfig {
  int n_districts = 64;
  int pixels_per_district = 8;
  int planted_quantile_level = 70;         // percent, on the 5..95 grid
  flood::FloodWindow planted_window{5, 10};
  double treatment_effect = 0.03;          // EVI units
  int rollout_first_year = 2010;           // seed_rollout_year_range
  int rollout_last_year = 2016;
  double noise_sd = 0.02;                  // per-step EVI noise
  double rice_fraction = 1.0;              // share of pixels that grow rice
  double evi_missing_rate = 0.0;
  double coastal_fraction = 0.25;
  std::uint64_t rng_seed = 1;
  Calendar calendar;

  void validate() const;  // throws UsageError
};

struct GroundTruth {
  std::vector<int> rollout_year;           // per district
  Eigen::MatrixXi run_days;                // district x year, at planted level
  std::vector<std::uint8_t> boosted;       // district*n_years + year
  Eigen::MatrixXd seed_tons;               // district x year, new tons
  SynthConfig config;

  bool is_boosted(int d, int y_idx) const {
    return boosted[static_cast<std::size_t>(d) *
                       static_cast<std::size_t>(config.calendar.n_years) +
                   static_cast<std::size_t>(y_idx)] != 0;
  }
};

struct SynthResult {
  Scene scene;
  GroundTruth truth;
};

// Deterministic in cfg.rng_seed; all internal draws come from named
// substreams so generation order is irrelevant. The EVI boost is applied to
// rice pixels of district-years whose flood run at the planted quantile
// level falls in the planted window and whose year is at or past the
// district's rollout year.
SynthResult synth_scene(const SynthConfig& cfg);

void write_ground_truth(const GroundTruth& truth,
                        const std::filesystem::path& path);

}  // namespace goldi
