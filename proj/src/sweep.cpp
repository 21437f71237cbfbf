#include "goldi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/parallel.hpp"

namespace goldi::sweep {

std::string class_name(SigClass c) {
  switch (c) {
    case SigClass::neg_sig: return "neg_sig";
    case SigClass::pos_sig: return "pos_sig";
    case SigClass::insig: return "insig";
  }
  return "insig";
}

SpecResults sweep(const panel::Panel& panel, const std::string& estimator,
                  const std::string& outcome, econ::FloodForm form,
                  double alpha, int threads) {
  if (estimator != "did" && estimator != "twfe")
    throw UsageError("sweep estimator must be 'did' or 'twfe', got '" +
                     estimator + "'");
  if (estimator == "did" && form != econ::FloodForm::binary)
    throw UsageError("did sweeps use the binary flood form");
  panel.outcome(panel.rows.empty() ? panel::PanelRow{} : panel.rows.front(),
                outcome);  // validates the outcome name early

  SpecResults results;
  results.estimator = estimator;
  results.outcome = outcome;
  results.flood_form = form == econ::FloodForm::binary ? "binary" : "days";
  results.alpha = alpha;

  const auto& specs = panel.flood.specs;
  struct Slot {
    std::optional<SpecEntry> entry;
    std::string error;
    bool empty = false;
  };
  std::vector<Slot> slots(specs.size());

  parallel_for(static_cast<int>(specs.size()), threads, [&](int si) {
    const auto& spec = specs[static_cast<std::size_t>(si)];
    Slot& slot = slots[static_cast<std::size_t>(si)];
    if (panel.flood.empty_spec[static_cast<std::size_t>(si)]) {
      slot.empty = true;
      return;
    }
    try {
      const econ::RegResult reg =
          estimator == "did" ? econ::run_did(panel, outcome, spec, alpha)
                             : econ::run_twfe(panel, outcome, spec, form, alpha);
      const auto& beta = reg.beta();
      SpecEntry entry;
      entry.spec = spec;
      entry.beta = beta.coef;
      entry.ci_lo = beta.ci_lo;
      entry.ci_hi = beta.ci_hi;
      entry.p = beta.p;
      entry.cls = classify_one(beta.coef, beta.p, alpha);
      slot.entry = entry;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  for (std::size_t si = 0; si < specs.size(); ++si) {
    const Slot& slot = slots[si];
    if (slot.empty) {
      ++results.skipped_empty;
    } else if (slot.entry) {
      results.entries.push_back(*slot.entry);
    } else {
      results.failures.emplace_back(specs[si], slot.error);
    }
  }

  std::stable_sort(results.entries.begin(), results.entries.end(),
                   [](const SpecEntry& a, const SpecEntry& b) {
                     if (a.beta != b.beta) return a.beta < b.beta;
                     if (a.spec.quantile_level != b.spec.quantile_level)
                       return a.spec.quantile_level < b.spec.quantile_level;
                     if (a.spec.window.start_day != b.spec.window.start_day)
                       return a.spec.window.start_day < b.spec.window.start_day;
                     return a.spec.window.end_day < b.spec.window.end_day;
                   });
  for (const auto& e : results.entries) {
    if (e.cls == SigClass::pos_sig) ++results.n_pos;
    else if (e.cls == SigClass::neg_sig) ++results.n_neg;
    else ++results.n_insig;
  }
  return results;
}

namespace {

const char* class_color(SigClass c) {
  switch (c) {
    case SigClass::pos_sig: return "#1f77b4";
    case SigClass::neg_sig: return "#d62728";
    case SigClass::insig: return "#333333";
  }
  return "#333333";
}

std::string svg_num(double v) {
  // fixed precision keeps the SVG compact and byte-stable
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void emit_chart(const SpecResults& results, const std::filesystem::path& out_dir,
                const std::string& basename) {
  if (results.entries.empty())
    throw DataError("emit_chart: no entries to draw");
  std::filesystem::create_directories(out_dir);

  {
    CsvWriter out(out_dir / (basename + ".csv"));
    out.write_row({"rank", "beta", "ci_lo", "ci_hi", "p", "class",
                   "quantile_level", "start_day", "end_day"});
    int rank = 1;
    for (const auto& e : results.entries) {
      out.write_row({fmt_int(rank++), fmt_double(e.beta), fmt_double(e.ci_lo),
                     fmt_double(e.ci_hi), fmt_double(e.p), class_name(e.cls),
                     fmt_int(e.spec.quantile_level),
                     fmt_int(e.spec.window.start_day),
                     fmt_int(e.spec.window.end_day)});
    }
    out.close();
  }

  // ---- SVG: coefficient panel on top, quantile/window marker grid below
  const double width = 1200.0, height = 800.0;
  const double plot_left = 80.0, plot_right = width - 30.0;
  const double coef_top = 50.0, coef_bottom = 470.0;
  const double grid_top = 510.0, grid_bottom = height - 30.0;
  const auto n = static_cast<int>(results.entries.size());

  double lo = 0.0, hi = 0.0;
  for (const auto& e : results.entries) {
    lo = std::min({lo, e.ci_lo, e.beta});
    hi = std::max({hi, e.ci_hi, e.beta});
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto yc = [&](double v) {
    return coef_bottom - (v - lo) / (hi - lo) * (coef_bottom - coef_top);
  };
  const auto xc = [&](int i) {
    return plot_left +
           (i + 0.5) / static_cast<double>(n) * (plot_right - plot_left);
  };

  // marker grid rows: 19 levels, then 11 start days, then 11 end days
  const auto levels = flood::quantile_levels();
  const int grid_rows = flood::kNumLevels + 11 + 11 + 2;  // + group gaps
  const double row_h = (grid_bottom - grid_top) / grid_rows;
  const auto level_row = [&](int level) {
    return grid_top + (flood::level_index(level) + 0.5) * row_h;
  };
  const auto start_row = [&](int s) {
    return grid_top + (flood::kNumLevels + 1 + (s - 5) + 0.5) * row_h;
  };
  const auto end_row = [&](int e) {
    return grid_top + (flood::kNumLevels + 1 + 11 + 1 + (e - 10) + 0.5) * row_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"1200\" height=\"800\" viewBox=\"0 0 1200 800\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"800\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << svg_num(plot_left) << "\" y=\"28\" font-family=\"sans-serif\" "
         "font-size=\"17\">"
      << results.estimator << " (" << results.flood_form << "), outcome "
      << results.outcome << ": " << n << " specifications (" << results.n_pos
      << " pos_sig, " << results.n_neg << " neg_sig, " << results.n_insig
      << " insig; " << results.skipped_empty << " empty skipped)</text>\n";

  // zero line
  if (lo < 0.0 && hi > 0.0)
    svg << "<line x1=\"" << svg_num(plot_left) << "\" x2=\"" << svg_num(plot_right)
        << "\" y1=\"" << svg_num(yc(0.0)) << "\" y2=\"" << svg_num(yc(0.0))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";

  // axis labels for the coefficient panel
  for (double v : {lo + pad, (lo + hi) / 2.0, hi - pad}) {
    svg << "<text x=\"8\" y=\"" << svg_num(yc(v) + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << svg_num(v)
        << "</text>\n";
  }

  for (int i = 0; i < n; ++i) {
    const auto& e = results.entries[static_cast<std::size_t>(i)];
    const char* color = class_color(e.cls);
    const double x = xc(i);
    svg << "<g class=\"ci-bar\">"
        << "<line x1=\"" << svg_num(x) << "\" x2=\"" << svg_num(x) << "\" y1=\""
        << svg_num(yc(e.ci_lo)) << "\" y2=\"" << svg_num(yc(e.ci_hi))
        << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>"
        << "<circle cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(yc(e.beta))
        << "\" r=\"1.8\" fill=\"" << color << "\"/></g>\n";
  }

  // group labels for the marker grid
  svg << "<text x=\"8\" y=\"" << svg_num(level_row(levels[0]))
      << "\" font-family=\"sans-serif\" font-size=\"12\">quantile</text>\n";
  svg << "<text x=\"8\" y=\"" << svg_num(start_row(5))
      << "\" font-family=\"sans-serif\" font-size=\"12\">start</text>\n";
  svg << "<text x=\"8\" y=\"" << svg_num(end_row(10))
      << "\" font-family=\"sans-serif\" font-size=\"12\">end</text>\n";

  for (int i = 0; i < n; ++i) {
    const auto& e = results.entries[static_cast<std::size_t>(i)];
    const double x = xc(i);
    svg << "<g class=\"spec-markers\">"
        << "<circle cx=\"" << svg_num(x) << "\" cy=\""
        << svg_num(level_row(e.spec.quantile_level))
        << "\" r=\"1.6\" fill=\"#888888\"/>"
        << "<circle cx=\"" << svg_num(x) << "\" cy=\""
        << svg_num(start_row(e.spec.window.start_day))
        << "\" r=\"1.6\" fill=\"#888888\"/>"
        << "<circle cx=\"" << svg_num(x) << "\" cy=\""
        << svg_num(end_row(e.spec.window.end_day))
        << "\" r=\"1.6\" fill=\"#888888\"/></g>\n";
  }
  svg << "</svg>\n";

  const auto svg_path = out_dir / (basename + ".svg");
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw DataError("cannot write " + svg_path.string());
  out << svg.str();
}

}  // namespace goldi::sweep
