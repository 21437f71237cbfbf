#include "goldi/panel.hpp"

#include <algorithm>
#include <set>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/stats.hpp"

namespace goldi::panel {

SeedTable read_seed_csv(const std::filesystem::path& path) {
  const auto csv = read_csv(path);
  const auto c_d = csv.col("district_id");
  const auto c_y = csv.col("year");
  const auto c_v = csv.col("variety");
  const auto c_p = csv.col("tons_produced");
  const auto c_s = csv.col("tons_distributed");
  SeedTable table;
  for (const auto& row : csv.rows) {
    SeedRecord r;
    r.district_id = row[c_d];
    r.year = static_cast<int>(parse_int(row[c_y], "year, seed row"));
    r.variety = row[c_v];
    r.tons_produced = parse_double(row[c_p], "tons_produced, " + r.district_id);
    r.tons_distributed =
        parse_double(row[c_s], "tons_distributed, " + r.district_id);
    table.rows.push_back(std::move(r));
  }
  return table;
}

void write_seed_csv(const SeedTable& table, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"district_id", "year", "variety", "tons_produced",
                 "tons_distributed"});
  for (const auto& r : table.rows)
    out.write_row({r.district_id, fmt_int(r.year), r.variety,
                   fmt_double(r.tons_produced), fmt_double(r.tons_distributed)});
  out.close();
}

Eigen::MatrixXd cumulative_seed(const SeedTable& seeds, const Calendar& cal,
                                const std::vector<DistrictMeta>& districts) {
  const int n_d = static_cast<int>(districts.size());
  Eigen::MatrixXd yearly = Eigen::MatrixXd::Zero(n_d, cal.n_years);
  for (const auto& r : seeds.rows) {
    if (r.tons_produced < 0.0 || r.tons_distributed < 0.0)
      throw DataError("negative seed tons for district " + r.district_id +
                      ", year " + std::to_string(r.year));
    if (!cal.has_year(r.year))
      throw DataError("seed year " + std::to_string(r.year) +
                      " outside calendar");
    int d = -1;
    for (int i = 0; i < n_d; ++i)
      if (districts[static_cast<std::size_t>(i)].district_id == r.district_id) {
        d = i;
        break;
      }
    if (d < 0)
      throw DataError("seed record references unknown district_id '" +
                      r.district_id + "'");
    yearly(d, cal.year_index(r.year)) += r.tons_produced + r.tons_distributed;
  }
  Eigen::MatrixXd cum = yearly;
  for (int y = 1; y < cal.n_years; ++y) cum.col(y) += cum.col(y - 1);
  return cum;
}

double Panel::outcome(const PanelRow& r, const std::string& name) const {
  if (name == "evi_cum") return r.evi_cum;
  if (name == "evi_max") return r.evi_max;
  if (name == "evi_mean") return r.evi_mean;
  if (name == "evi_med") return r.evi_med;
  throw UsageError("unknown outcome '" + name + "'");
}

DistrictYearCovariates district_covariates(const Scene& scene,
                                           int control_level) {
  const int n_d = static_cast<int>(scene.districts.size());
  const int n_y = scene.calendar.n_years;
  const int steps = scene.calendar.steps_per_season;
  DistrictYearCovariates cov;
  cov.flood_control = Eigen::MatrixXd::Zero(n_d, n_y);
  cov.rice_area = Eigen::MatrixXd::Zero(n_d, n_y);

  const std::array<int, 1> levels = {control_level};
  std::vector<double> thresholds(scene.pixels.size());
  for (std::size_t p = 0; p < scene.pixels.size(); ++p) {
    const auto& ff = scene.pixels[p].flood_frac;
    thresholds[p] = flood::quantile_thresholds(
        std::span<const double>(ff.data(), static_cast<std::size_t>(ff.size())),
        levels)[0];
  }

  const auto by_district = scene.pixels_by_district();
  for (int d = 0; d < n_d; ++d) {
    for (int y = 0; y < n_y; ++y) {
      int n_rice = 0, n_flooded = 0;
      for (int p : by_district[static_cast<std::size_t>(d)]) {
        const auto& px = scene.pixels[static_cast<std::size_t>(p)];
        if (!px.rice[static_cast<std::size_t>(y)]) continue;
        ++n_rice;
        bool flooded = false;
        for (int s = 0; s < steps && !flooded; ++s)
          flooded = px.flood_frac[scene.calendar.flat_step(y, s)] >
                    thresholds[static_cast<std::size_t>(p)];
        if (flooded) ++n_flooded;
      }
      cov.rice_area(d, y) = n_rice;
      if (n_rice > 0)
        cov.flood_control(d, y) =
            static_cast<double>(n_flooded) / static_cast<double>(n_rice);
    }
  }
  return cov;
}

Panel assemble_panel(const evi::EviTable& evi_table,
                     const flood::FloodMetricTable& flood_table,
                     const SeedTable& seeds,
                     const DistrictYearCovariates& covars,
                     const Calendar& cal,
                     const std::vector<DistrictMeta>& districts) {
  const int n_d = static_cast<int>(districts.size());
  if (evi_table.n_districts != n_d || flood_table.n_districts != n_d ||
      evi_table.n_years != cal.n_years || flood_table.n_years != cal.n_years)
    throw DataError("assemble_panel: input tables disagree on panel shape");

  Panel panel;
  panel.districts = districts;
  panel.calendar = cal;
  panel.flood = flood_table;

  const Eigen::MatrixXd seed_cum = cumulative_seed(seeds, cal, districts);
  std::vector<std::optional<int>> rollout(static_cast<std::size_t>(n_d));
  for (int d = 0; d < n_d; ++d)
    for (int y = 0; y < cal.n_years; ++y)
      if (seed_cum(d, y) > 0.0) {
        rollout[static_cast<std::size_t>(d)] = cal.first_year + y;
        break;
      }

  for (int d = 0; d < n_d; ++d) {
    for (int y = 0; y < cal.n_years; ++y) {
      const bool has_flood = flood_table.is_valid(d, y);
      const auto& m = evi_table.at(d, y);
      if (m.missing || !has_flood) {
        ++panel.dropped_rows;
        continue;
      }
      PanelRow row;
      row.district = d;
      row.year = cal.first_year + y;
      row.evi_cum = m.cum;
      row.evi_max = m.max;
      row.evi_mean = m.mean;
      row.evi_med = m.median;
      row.seed_cum = seed_cum(d, y);
      row.post2010 = row.year >= 2010;
      if (rollout[static_cast<std::size_t>(d)])
        row.event_time = row.year - *rollout[static_cast<std::size_t>(d)];
      row.flood_control = covars.flood_control(d, y);
      row.rice_area = covars.rice_area(d, y);
      panel.rows.push_back(row);
    }
  }
  return panel;
}

Panel filter_coastal(const Panel& panel) {
  Panel out = panel;
  out.rows.clear();
  bool any_flag = false;
  for (const auto& dm : panel.districts) any_flag |= dm.coastal;
  for (const auto& row : panel.rows) {
    if (panel.districts[static_cast<std::size_t>(row.district)].coastal) continue;
    out.rows.push_back(row);
  }
  if (any_flag && out.rows.empty())
    out.notes.push_back("coastal filter removed every row");
  return out;
}

Scene regroup(const Scene& scene,
              const std::map<std::string, std::string>& fine_to_coarse) {
  Scene out;
  out.calendar = scene.calendar;

  // coarse units in first-appearance order over the fine district list
  std::vector<std::string> coarse_order;
  std::map<std::string, DistrictMeta> coarse_meta;
  for (const auto& dm : scene.districts) {
    const auto it = fine_to_coarse.find(dm.district_id);
    if (it == fine_to_coarse.end())
      throw DataError("regroup: unit '" + dm.district_id +
                      "' missing from the unit map");
    auto [mit, inserted] = coarse_meta.try_emplace(it->second);
    if (inserted) {
      mit->second.district_id = it->second;
      mit->second.name = it->second;
      coarse_order.push_back(it->second);
    }
    mit->second.coastal = mit->second.coastal || dm.coastal;
  }
  for (const auto& id : coarse_order) out.districts.push_back(coarse_meta[id]);

  out.pixels = scene.pixels;
  for (auto& px : out.pixels) {
    const auto it = fine_to_coarse.find(px.district_id);
    if (it == fine_to_coarse.end())
      throw DataError("regroup: unit '" + px.district_id +
                      "' missing from the unit map");
    px.district_id = it->second;
  }
  return out;
}

SeedTable broadcast_seed(const SeedTable& seeds,
                         const std::map<std::string, std::string>& fine_to_coarse) {
  SeedTable out;
  for (const auto& [fine, coarse] : fine_to_coarse) {
    for (const auto& r : seeds.rows) {
      if (r.district_id != coarse) continue;
      SeedRecord child = r;
      child.district_id = fine;
      out.rows.push_back(std::move(child));
    }
  }
  return out;
}

std::map<std::string, std::string> read_unit_map_csv(
    const std::filesystem::path& path) {
  const auto csv = read_csv(path);
  const auto c_f = csv.col("fine_id");
  const auto c_c = csv.col("coarse_id");
  std::map<std::string, std::string> map;
  for (const auto& row : csv.rows) {
    if (!map.emplace(row[c_f], row[c_c]).second)
      throw DataError("duplicate fine_id in unit map: " + row[c_f]);
  }
  return map;
}

void write_panel_csv(const Panel& panel, const std::filesystem::path& path) {
  CsvWriter out(path);
  std::vector<std::string> header = {"district_id", "year",     "evi_cum",
                                     "evi_max",     "evi_mean", "evi_med",
                                     "seed_cum",    "post2010", "event_time",
                                     "flood_control", "rice_area"};
  for (const auto& spec : panel.flood.specs) {
    const std::string tag = "q" + fmt_int(spec.quantile_level) + "_w" +
                            fmt_int(spec.window.start_day) + "_" +
                            fmt_int(spec.window.end_day);
    header.push_back("inw_" + tag);
    header.push_back("diw_" + tag);
  }
  out.write_row(header);
  for (const auto& row : panel.rows) {
    std::vector<std::string> fields = {
        panel.districts[static_cast<std::size_t>(row.district)].district_id,
        fmt_int(row.year),
        fmt_double(row.evi_cum),
        fmt_double(row.evi_max),
        fmt_double(row.evi_mean),
        fmt_double(row.evi_med),
        fmt_double(row.seed_cum),
        row.post2010 ? "1" : "0",
        row.event_time ? fmt_int(*row.event_time) : "",
        fmt_double(row.flood_control),
        fmt_double(row.rice_area)};
    fields.reserve(header.size());
    const int y = panel.calendar.year_index(row.year);
    for (const auto& spec : panel.flood.specs) {
      const auto m = panel.flood.metrics(spec, row.district, y);
      fields.push_back(m.in_window ? "1" : "0");
      fields.push_back(fmt_int(m.days_in_window));
    }
    out.write_row(fields);
  }
  out.close();
}

}  // namespace goldi::panel
