#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace goldi {

struct Scene;

namespace evi {

// Seasonal outcome summaries of a per-step EVI series. All four metrics are
// order-independent over steps; timing within the season is deliberately
// discarded.
struct EviMetrics {
  double cum = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double coverage = 0.0;  // fraction of non-missing steps
  bool missing = true;
};

// Metrics over the non-missing steps; missing result when coverage falls
// below min_coverage.
EviMetrics season_evi(std::span<const double> series,
                      std::span<const std::uint8_t> missing,
                      double min_coverage = 0.5);

struct EviTable {
  int n_districts = 0;
  int n_years = 0;
  int first_year = 0;
  std::vector<std::string> district_ids;
  std::vector<EviMetrics> cells;  // district-major

  const EviMetrics& at(int d, int y) const {
    return cells[static_cast<std::size_t>(d * n_years + y)];
  }
};

// District-year metrics of the district-mean per-step EVI over rice pixels
// (aggregate the series first, then summarize). District-years with no rice
// pixels are missing.
EviTable build_evi_table(const Scene& scene, double min_coverage = 0.5);

void write_evi_csv(const EviTable& table, const std::filesystem::path& path);

}  // namespace evi
}  // namespace goldi
