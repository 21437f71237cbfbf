#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "goldi/econ.hpp"
#include "goldi/flood.hpp"
#include "goldi/panel.hpp"

namespace goldi::sweep {

enum class SigClass { neg_sig, insig, pos_sig };

// Strict p < alpha, signed by the coefficient.
inline SigClass classify_one(double beta, double p, double alpha) {
  if (p < alpha && beta > 0.0) return SigClass::pos_sig;
  if (p < alpha && beta < 0.0) return SigClass::neg_sig;
  return SigClass::insig;
}

std::string class_name(SigClass c);

struct SpecEntry {
  flood::FloodSpec spec;
  double beta = 0.0, ci_lo = 0.0, ci_hi = 0.0, p = 1.0;
  SigClass cls = SigClass::insig;
};

struct SpecResults {
  std::string estimator;   // did | twfe
  std::string outcome;
  std::string flood_form;  // binary | days
  double alpha = 0.05;
  // sorted by beta ascending; ties by (quantile_level, start_day, end_day)
  std::vector<SpecEntry> entries;
  int skipped_empty = 0;
  std::vector<std::pair<flood::FloodSpec, std::string>> failures;
  int n_pos = 0, n_neg = 0, n_insig = 0;
};

// One regression per non-empty candidate spec (19 levels x 66 windows);
// empty specs are skipped and counted, per-spec estimation failures are
// recorded rather than fatal. Work is dispatched across threads and reduced
// in canonical spec order, so the output is scheduling-independent.
SpecResults sweep(const panel::Panel& panel, const std::string& estimator,
                  const std::string& outcome, econ::FloodForm form,
                  double alpha = 0.05, int threads = 1);

// chart CSV (<basename>.csv) plus a two-panel SVG specification chart
// (<basename>.svg): coefficients with CI bars on top, the quantile/window
// marker grid below. Byte-stable across re-runs.
void emit_chart(const SpecResults& results, const std::filesystem::path& out_dir,
                const std::string& basename);

}  // namespace goldi::sweep
