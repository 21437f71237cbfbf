#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace goldi {

struct Scene;  // scene.hpp

namespace flood {

// A candidate "just right" interval of submergence, in days after flood
// onset. Starts range over 5..15, ends over 10..20, and the gap end-start
// is bounded to 5..15, which yields exactly 66 windows.
struct FloodWindow {
  int start_day = 5;
  int end_day = 10;

  void validate() const;  // throws UsageError on out-of-range bounds
  friend bool operator==(const FloodWindow&, const FloodWindow&) = default;
};

inline constexpr int kNumLevels = 19;
inline constexpr int kNumWindows = 66;
inline constexpr int kNumSpecs = kNumLevels * kNumWindows;  // 1254

// 5, 10, ..., 95.
std::array<int, kNumLevels> quantile_levels();
int level_index(int level);  // throws UsageError if not on the grid

// All 66 windows, ordered by start ascending then end ascending.
std::vector<FloodWindow> enumerate_windows();

struct FloodSpec {
  int quantile_level = 50;
  FloodWindow window;

  friend bool operator==(const FloodSpec&, const FloodSpec&) = default;
};

// Canonical spec order: level-major over quantile_levels(), window order as
// in enumerate_windows(). 1254 entries.
std::vector<FloodSpec> enumerate_specs();

// Thresholds of `series` at the requested percent levels. Threshold at
// level q is the linear-interpolation quantile: the value below which q%
// of the series lies. Non-decreasing in q.
Eigen::ArrayXd quantile_thresholds(std::span<const double> series,
                                   std::span<const int> levels);

// Longest run of consecutive true steps, in days (steps * step_days).
int max_consecutive_run(const std::vector<std::uint8_t>& flags, int step_days);

struct WindowMetrics {
  bool in_window = false;
  int days_in_window = 0;
};

// Intersection of a flood run with a window: runs shorter than start_day
// contribute nothing; longer runs are clipped at end_day.
inline WindowMetrics window_metrics(int run_days, const FloodWindow& w) {
  WindowMetrics m;
  if (run_days >= w.start_day) {
    m.days_in_window = std::min(run_days, w.end_day) - w.start_day + 1;
    m.in_window = m.days_in_window > 0;
  }
  return m;
}

struct DistrictFloodSeries {
  int district = 0;   // index into scene districts
  int year = 0;       // calendar year
  bool missing = false;  // no rice pixels that year
  Eigen::ArrayXd frac;   // steps_per_season, mean over rice pixels
};

// Per-step mean of fractional inundation over the year's rice pixels, one
// series per district. District-years with zero rice pixels are flagged
// missing.
std::vector<DistrictFloodSeries> district_flood_series(const Scene& scene,
                                                       int year);

// All 19x66 metrics for every valid (district, year). Thresholds are
// computed per district from its full multi-year series, so binarization is
// invariant to rescaling the inundation values.
class FloodMetricTable {
 public:
  int n_districts = 0;
  int n_years = 0;
  int first_year = 0;
  int step_days = 8;
  std::vector<std::string> district_ids;

  // run_days_(level, d * n_years + y), -1 where the district-year is missing
  Eigen::MatrixXi run_days_by_level;
  std::vector<std::uint8_t> valid;       // per district-year
  std::vector<std::uint8_t> empty_spec;  // per canonical spec index
  std::vector<FloodSpec> specs;          // canonical order

  bool is_valid(int d, int y) const {
    return valid[static_cast<std::size_t>(d * n_years + y)] != 0;
  }
  int run_days(int level, int d, int y) const;
  WindowMetrics metrics(const FloodSpec& spec, int d, int y) const;
  int spec_index(const FloodSpec& spec) const;  // throws UsageError if unknown
  bool spec_is_empty(const FloodSpec& spec) const {
    return empty_spec[static_cast<std::size_t>(spec_index(spec))] != 0;
  }
};

FloodMetricTable build_flood_table(const Scene& scene);

// Flood-prone classification for a DID treatment group: a district is
// flood-prone iff its across-years median of days_in_window strictly
// exceeds the global median over all district-years.
std::vector<std::uint8_t> flood_prone(const FloodMetricTable& table,
                                      const FloodSpec& spec);

// Full long-format export: one row per (district, year, spec).
void write_flood_csv(const FloodMetricTable& table,
                     const std::filesystem::path& path);

}  // namespace flood
}  // namespace goldi
