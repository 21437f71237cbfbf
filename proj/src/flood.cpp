#include "goldi/flood.hpp"

#include <algorithm>
#include <cmath>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/scene.hpp"
#include "goldi/stats.hpp"

namespace goldi::flood {

void FloodWindow::validate() const {
  if (start_day < 5 || start_day > 15)
    throw UsageError("flood window start_day must be in 5..15, got " +
                     std::to_string(start_day));
  if (end_day < 10 || end_day > 20)
    throw UsageError("flood window end_day must be in 10..20, got " +
                     std::to_string(end_day));
  const int gap = end_day - start_day;
  if (gap < 5 || gap > 15)
    throw UsageError("flood window end-start must be in 5..15, got " +
                     std::to_string(gap));
}

std::array<int, kNumLevels> quantile_levels() {
  std::array<int, kNumLevels> levels{};
  for (int i = 0; i < kNumLevels; ++i) levels[static_cast<std::size_t>(i)] = 5 * (i + 1);
  return levels;
}

int level_index(int level) {
  if (level % 5 != 0 || level < 5 || level > 95)
    throw UsageError("quantile level must be one of 5,10,...,95, got " +
                     std::to_string(level));
  return level / 5 - 1;
}

std::vector<FloodWindow> enumerate_windows() {
  std::vector<FloodWindow> windows;
  for (int start = 5; start <= 15; ++start) {
    for (int end = 10; end <= 20; ++end) {
      const int gap = end - start;
      if (gap < 5 || gap > 15) continue;
      windows.push_back(FloodWindow{start, end});
    }
  }
  return windows;  // 66
}

std::vector<FloodSpec> enumerate_specs() {
  std::vector<FloodSpec> specs;
  specs.reserve(kNumSpecs);
  const auto windows = enumerate_windows();
  for (int level : quantile_levels())
    for (const auto& w : windows) specs.push_back(FloodSpec{level, w});
  return specs;
}

Eigen::ArrayXd quantile_thresholds(std::span<const double> series,
                                   std::span<const int> levels) {
  if (series.empty()) throw DataError("quantile_thresholds: empty series");
  Eigen::ArrayXd thresholds(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i)
    thresholds[static_cast<Eigen::Index>(i)] =
        quantile_linear(series, static_cast<double>(levels[i]));
  return thresholds;
}

int max_consecutive_run(const std::vector<std::uint8_t>& flags,
                        int step_days) {
  int best = 0;
  int cur = 0;
  for (const auto f : flags) {
    if (f) {
      ++cur;
      best = std::max(best, cur);
    } else {
      cur = 0;
    }
  }
  return best * step_days;
}

std::vector<DistrictFloodSeries> district_flood_series(const Scene& scene,
                                                       int year) {
  if (!scene.calendar.has_year(year))
    throw UsageError("year " + std::to_string(year) + " outside calendar");
  const int y = scene.calendar.year_index(year);
  const int steps = scene.calendar.steps_per_season;
  const auto by_district = scene.pixels_by_district();

  std::vector<DistrictFloodSeries> out;
  out.reserve(scene.districts.size());
  for (std::size_t d = 0; d < scene.districts.size(); ++d) {
    DistrictFloodSeries s;
    s.district = static_cast<int>(d);
    s.year = year;
    s.frac = Eigen::ArrayXd::Zero(steps);
    int n_rice = 0;
    for (int p : by_district[d]) {
      const auto& px = scene.pixels[static_cast<std::size_t>(p)];
      if (!px.rice[static_cast<std::size_t>(y)]) continue;
      ++n_rice;
      s.frac += px.flood_frac.segment(scene.calendar.flat_step(y, 0), steps);
    }
    if (n_rice == 0) {
      s.missing = true;
      s.frac.setZero();
    } else {
      s.frac /= static_cast<double>(n_rice);
    }
    out.push_back(std::move(s));
  }
  return out;
}

FloodMetricTable build_flood_table(const Scene& scene) {
  FloodMetricTable table;
  const int n_d = static_cast<int>(scene.districts.size());
  const int n_y = scene.calendar.n_years;
  const int steps = scene.calendar.steps_per_season;
  table.n_districts = n_d;
  table.n_years = n_y;
  table.first_year = scene.calendar.first_year;
  table.step_days = scene.calendar.step_days;
  for (const auto& dm : scene.districts)
    table.district_ids.push_back(dm.district_id);
  table.specs = enumerate_specs();
  table.run_days_by_level.setConstant(kNumLevels, n_d * n_y, -1);
  table.valid.assign(static_cast<std::size_t>(n_d) * static_cast<std::size_t>(n_y), 0);

  // district series for every year, once
  std::vector<std::vector<DistrictFloodSeries>> series_by_year;
  series_by_year.reserve(static_cast<std::size_t>(n_y));
  for (int y = 0; y < n_y; ++y)
    series_by_year.push_back(
        district_flood_series(scene, scene.calendar.first_year + y));

  const auto levels = quantile_levels();
  for (int d = 0; d < n_d; ++d) {
    // thresholds from the district's full multi-year series (valid years)
    std::vector<double> all_steps;
    all_steps.reserve(static_cast<std::size_t>(n_y * steps));
    for (int y = 0; y < n_y; ++y) {
      const auto& s = series_by_year[static_cast<std::size_t>(y)][static_cast<std::size_t>(d)];
      if (s.missing) continue;
      for (int t = 0; t < steps; ++t) all_steps.push_back(s.frac[t]);
    }
    if (all_steps.empty()) continue;  // district never has rice pixels
    const Eigen::ArrayXd thresholds = quantile_thresholds(all_steps, levels);

    for (int y = 0; y < n_y; ++y) {
      const auto& s = series_by_year[static_cast<std::size_t>(y)][static_cast<std::size_t>(d)];
      if (s.missing) continue;
      table.valid[static_cast<std::size_t>(d * n_y + y)] = 1;
      std::vector<std::uint8_t> flags(static_cast<std::size_t>(steps));
      for (int li = 0; li < kNumLevels; ++li) {
        const double thr = thresholds[li];
        for (int t = 0; t < steps; ++t)
          flags[static_cast<std::size_t>(t)] = s.frac[t] > thr ? 1 : 0;
        table.run_days_by_level(li, d * n_y + y) =
            max_consecutive_run(flags, scene.calendar.step_days);
      }
    }
  }

  // a spec is empty when in_window shows no variation across district-years
  table.empty_spec.assign(static_cast<std::size_t>(kNumSpecs), 1);
  for (int si = 0; si < kNumSpecs; ++si) {
    const auto& spec = table.specs[static_cast<std::size_t>(si)];
    const int li = level_index(spec.quantile_level);
    int n_true = 0, n_rows = 0;
    for (int dy = 0; dy < n_d * n_y; ++dy) {
      if (!table.valid[static_cast<std::size_t>(dy)]) continue;
      ++n_rows;
      if (window_metrics(table.run_days_by_level(li, dy), spec.window).in_window)
        ++n_true;
    }
    const bool varies = n_rows > 0 && n_true > 0 && n_true < n_rows;
    table.empty_spec[static_cast<std::size_t>(si)] = varies ? 0 : 1;
  }
  return table;
}

int FloodMetricTable::run_days(int level, int d, int y) const {
  return run_days_by_level(level_index(level), d * n_years + y);
}

WindowMetrics FloodMetricTable::metrics(const FloodSpec& spec, int d,
                                        int y) const {
  const int rd = run_days(spec.quantile_level, d, y);
  if (rd < 0) return WindowMetrics{};  // missing district-year
  return window_metrics(rd, spec.window);
}

int FloodMetricTable::spec_index(const FloodSpec& spec) const {
  spec.window.validate();
  const int li = level_index(spec.quantile_level);
  // window order: start ascending then end ascending, triangular counts
  int wi = 0;
  for (int start = 5; start < spec.window.start_day; ++start) {
    const int lo = std::max(10, start + 5);
    wi += 20 - lo + 1;
  }
  wi += spec.window.end_day - std::max(10, spec.window.start_day + 5);
  return li * kNumWindows + wi;
}

std::vector<std::uint8_t> flood_prone(const FloodMetricTable& table,
                                      const FloodSpec& spec) {
  if (table.spec_is_empty(spec))
    throw DataError("flood_prone: spec has no in-window variation (empty)");
  const int n_d = table.n_districts;
  const int n_y = table.n_years;
  std::vector<double> global;
  std::vector<std::uint8_t> prone(static_cast<std::size_t>(n_d), 0);
  std::vector<double> district_median(static_cast<std::size_t>(n_d), 0.0);
  for (int d = 0; d < n_d; ++d) {
    std::vector<double> days;
    for (int y = 0; y < n_y; ++y) {
      if (!table.is_valid(d, y)) continue;
      const double v = table.metrics(spec, d, y).days_in_window;
      days.push_back(v);
      global.push_back(v);
    }
    district_median[static_cast<std::size_t>(d)] =
        days.empty() ? 0.0 : median_linear(days);
  }
  const double global_median = median_linear(global);
  for (int d = 0; d < n_d; ++d)
    prone[static_cast<std::size_t>(d)] =
        district_median[static_cast<std::size_t>(d)] > global_median ? 1 : 0;
  return prone;
}

void write_flood_csv(const FloodMetricTable& table,
                     const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"district_id", "year", "quantile_level", "start_day",
                 "end_day", "run_days", "in_window", "days_in_window",
                 "empty_spec"});
  for (int d = 0; d < table.n_districts; ++d) {
    for (int y = 0; y < table.n_years; ++y) {
      if (!table.is_valid(d, y)) continue;
      for (int si = 0; si < kNumSpecs; ++si) {
        const auto& spec = table.specs[static_cast<std::size_t>(si)];
        const int rd = table.run_days(spec.quantile_level, d, y);
        const auto m = window_metrics(rd, spec.window);
        out.write_row({table.district_ids[static_cast<std::size_t>(d)],
                       fmt_int(table.first_year + y),
                       fmt_int(spec.quantile_level),
                       fmt_int(spec.window.start_day),
                       fmt_int(spec.window.end_day), fmt_int(rd),
                       m.in_window ? "1" : "0", fmt_int(m.days_in_window),
                       table.empty_spec[static_cast<std::size_t>(si)] ? "1" : "0"});
      }
    }
  }
  out.close();
}

}  // namespace goldi::flood
