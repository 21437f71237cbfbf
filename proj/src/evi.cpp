#include "goldi/evi.hpp"

#include <algorithm>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/scene.hpp"
#include "goldi/stats.hpp"

namespace goldi::evi {

EviMetrics season_evi(std::span<const double> series,
                      std::span<const std::uint8_t> missing,
                      double min_coverage) {
  if (series.size() != missing.size())
    throw DataError("season_evi: series and missing flags differ in length");
  EviMetrics m;
  std::vector<double> present;
  present.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    if (!missing[i]) present.push_back(series[i]);
  if (series.empty()) return m;
  m.coverage = static_cast<double>(present.size()) /
               static_cast<double>(series.size());
  if (present.empty() || m.coverage < min_coverage) return m;
  m.missing = false;
  m.cum = 0.0;
  m.max = present[0];
  for (double v : present) {
    m.cum += v;
    m.max = std::max(m.max, v);
  }
  m.mean = m.cum / static_cast<double>(present.size());
  m.median = median_linear(present);
  return m;
}

EviTable build_evi_table(const Scene& scene, double min_coverage) {
  EviTable table;
  const int n_d = static_cast<int>(scene.districts.size());
  const int n_y = scene.calendar.n_years;
  const int steps = scene.calendar.steps_per_season;
  table.n_districts = n_d;
  table.n_years = n_y;
  table.first_year = scene.calendar.first_year;
  for (const auto& dm : scene.districts)
    table.district_ids.push_back(dm.district_id);
  table.cells.assign(static_cast<std::size_t>(n_d) * static_cast<std::size_t>(n_y),
                     EviMetrics{});

  const auto by_district = scene.pixels_by_district();
  for (int d = 0; d < n_d; ++d) {
    for (int y = 0; y < n_y; ++y) {
      // district-mean series over rice pixels; a step is present when at
      // least one rice pixel observes it
      std::vector<double> series(static_cast<std::size_t>(steps), 0.0);
      std::vector<std::uint8_t> missing(static_cast<std::size_t>(steps), 1);
      std::vector<int> counts(static_cast<std::size_t>(steps), 0);
      bool any_rice = false;
      for (int p : by_district[static_cast<std::size_t>(d)]) {
        const auto& px = scene.pixels[static_cast<std::size_t>(p)];
        if (!px.rice[static_cast<std::size_t>(y)]) continue;
        any_rice = true;
        for (int s = 0; s < steps; ++s) {
          const int flat = scene.calendar.flat_step(y, s);
          if (px.evi_missing[static_cast<std::size_t>(flat)]) continue;
          series[static_cast<std::size_t>(s)] += px.evi[flat];
          ++counts[static_cast<std::size_t>(s)];
        }
      }
      if (!any_rice) continue;  // stays missing
      for (int s = 0; s < steps; ++s) {
        if (counts[static_cast<std::size_t>(s)] > 0) {
          series[static_cast<std::size_t>(s)] /= counts[static_cast<std::size_t>(s)];
          missing[static_cast<std::size_t>(s)] = 0;
        }
      }
      table.cells[static_cast<std::size_t>(d * n_y + y)] =
          season_evi(series, missing, min_coverage);
    }
  }
  return table;
}

void write_evi_csv(const EviTable& table, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"district_id", "year", "evi_cum", "evi_max", "evi_mean",
                 "evi_med", "coverage"});
  for (int d = 0; d < table.n_districts; ++d) {
    for (int y = 0; y < table.n_years; ++y) {
      const auto& m = table.at(d, y);
      if (m.missing) continue;
      out.write_row({table.district_ids[static_cast<std::size_t>(d)],
                     fmt_int(table.first_year + y), fmt_double(m.cum),
                     fmt_double(m.max), fmt_double(m.mean),
                     fmt_double(m.median), fmt_double(m.coverage)});
    }
  }
  out.close();
}

}  // namespace goldi::evi
