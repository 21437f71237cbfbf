#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "goldi/evi.hpp"
#include "goldi/flood.hpp"
#include "goldi/scene.hpp"

namespace goldi::panel {

struct SeedRecord {
  std::string district_id;
  int year = 0;
  std::string variety;
  double tons_produced = 0.0;
  double tons_distributed = 0.0;
};

struct SeedTable {
  std::vector<SeedRecord> rows;
};

SeedTable read_seed_csv(const std::filesystem::path& path);
void write_seed_csv(const SeedTable& table, const std::filesystem::path& path);

// Running sum over years of produced + distributed tons per district; zero
// before the first record. Throws on negative tons, years outside the
// calendar, or unknown districts.
Eigen::MatrixXd cumulative_seed(const SeedTable& seeds, const Calendar& cal,
                                const std::vector<DistrictMeta>& districts);

struct PanelRow {
  int district = 0;  // index into Panel::districts
  int year = 0;
  double evi_cum = 0.0, evi_max = 0.0, evi_mean = 0.0, evi_med = 0.0;
  double seed_cum = 0.0;
  bool post2010 = false;
  std::optional<int> event_time;  // year - rollout year; absent if never
  double flood_control = 0.0;     // share of rice pixels flooded that season
  double rice_area = 0.0;         // rice pixel count
};

struct Panel {
  std::vector<PanelRow> rows;
  std::vector<DistrictMeta> districts;
  Calendar calendar;
  flood::FloodMetricTable flood;  // per-spec regressors looked up here
  int dropped_rows = 0;           // district-years without EVI
  std::vector<std::string> notes;

  double outcome(const PanelRow& r, const std::string& name) const;
  flood::WindowMetrics flood_metrics(const PanelRow& r,
                                     const flood::FloodSpec& spec) const {
    return flood.metrics(spec, r.district, calendar.year_index(r.year));
  }
};

struct DistrictYearCovariates {
  Eigen::MatrixXd flood_control;  // district x year
  Eigen::MatrixXd rice_area;      // district x year
};

// Event-study flood control: the share of a district-year's rice pixels
// whose inundation exceeds their own full-series quantile threshold at
// control_level during the season. rice_area is the rice pixel count.
DistrictYearCovariates district_covariates(const Scene& scene,
                                           int control_level = 50);

// Inner join of EVI and flood district-years with seed and covariates;
// rows with missing EVI are dropped and counted.
Panel assemble_panel(const evi::EviTable& evi_table,
                     const flood::FloodMetricTable& flood_table,
                     const SeedTable& seeds,
                     const DistrictYearCovariates& covars,
                     const Calendar& cal,
                     const std::vector<DistrictMeta>& districts);

// Rows of coastal districts removed.
Panel filter_coastal(const Panel& panel);

// Relabels pixels of a scene onto coarser units via fine->coarse mapping;
// the standard pipeline on the result re-aggregates EVI/flood at the
// coarser unit. Coarse units are coastal when any child is.
Scene regroup(const Scene& scene,
              const std::map<std::string, std::string>& fine_to_coarse);

// Seed recorded at the parent unit inherited by every child unit, for
// analyses run at a finer unit than the seed data's native one.
SeedTable broadcast_seed(const SeedTable& seeds,
                         const std::map<std::string, std::string>& fine_to_coarse);

std::map<std::string, std::string> read_unit_map_csv(
    const std::filesystem::path& path);

void write_panel_csv(const Panel& panel, const std::filesystem::path& path);

}  // namespace goldi::panel
