// goldi: batch pipeline driver. Subcommands cover scene synthesis and
// validation, rice classification, flood/EVI metric tables, panel assembly,
// the three estimators, specification sweeps, and measurement-error Monte
// Carlos. All randomness flows from --seed through named substreams, so
// every subcommand is re-runnable with byte-identical outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goldi/csv.hpp"
#include "goldi/econ.hpp"
#include "goldi/error.hpp"
#include "goldi/evi.hpp"
#include "goldi/flood.hpp"
#include "goldi/hash.hpp"
#include "goldi/mc.hpp"
#include "goldi/panel.hpp"
#include "goldi/parallel.hpp"
#include "goldi/rice_rf.hpp"
#include "goldi/scene.hpp"
#include "goldi/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace goldi;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 0;  // 0 -> hardware
  double alpha = 0.05;
  std::string out = ".";
  std::string config_path;

  int resolved_threads() const {
    return threads <= 0 ? hardware_threads() : threads;
  }
};

void check_alpha(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw UsageError("--alpha must be in (0,1), got " + std::to_string(alpha));
}

flood::FloodWindow parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw UsageError("window must be start:end, e.g. 5:10; got '" + s + "'");
  flood::FloodWindow w;
  w.start_day = static_cast<int>(parse_int(s.substr(0, colon), "window start"));
  w.end_day = static_cast<int>(parse_int(s.substr(colon + 1), "window end"));
  w.validate();
  return w;
}

std::vector<int> parse_year_list(const std::string& s) {
  std::vector<int> years;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) years.push_back(static_cast<int>(parse_int(cur, "year list")));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (years.empty()) throw UsageError("empty year list");
  return years;
}

// run manifest: inputs by hash, seed, version; no timestamps, so re-runs
// reproduce it byte for byte
void write_run_manifest(const GlobalOpts& g, const std::string& subcommand,
                        const std::vector<fs::path>& inputs,
                        const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "goldi";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["seed"] = g.seed;
  j["alpha"] = g.alpha;
  j["threads"] = g.resolved_threads();
  json in = json::object();
  for (const auto& p : inputs) in[p.string()] = file_hash_hex(p);
  j["inputs"] = in;
  j["outputs"] = outputs;
  const fs::path path = fs::path(g.out) / ("run_manifest_" + subcommand + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

struct PanelInputs {
  std::string scene_path;
  std::string seeds_path;
  bool no_coastal = false;
  std::string regroup_map;
  std::string regroup_to = "coarse";
  int control_level = 50;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--scene", scene_path, "scene manifest JSON")->required();
    cmd->add_option("--seeds", seeds_path, "seed CSV")->required();
    cmd->add_flag("--no-coastal", no_coastal, "drop coastal districts");
    cmd->add_option("--regroup-map", regroup_map,
                    "unit map CSV (fine_id,coarse_id)");
    cmd->add_option("--regroup-to", regroup_to,
                    "coarse: merge scene units up; fine: broadcast seed down")
        ->check(CLI::IsMember({"coarse", "fine"}));
    cmd->add_option("--control-level", control_level,
                    "quantile level for the event-study flood control");
  }

  panel::Panel load(std::vector<fs::path>* inputs) const {
    inputs->push_back(scene_path);
    inputs->push_back(seeds_path);
    Scene scene = load_scene(scene_path);
    panel::SeedTable seeds = panel::read_seed_csv(seeds_path);
    if (!regroup_map.empty()) {
      inputs->push_back(regroup_map);
      const auto map = panel::read_unit_map_csv(regroup_map);
      if (regroup_to == "coarse")
        scene = panel::regroup(scene, map);
      else
        seeds = panel::broadcast_seed(seeds, map);
    }
    const auto evi_table = evi::build_evi_table(scene);
    const auto flood_table = flood::build_flood_table(scene);
    const auto covars = panel::district_covariates(scene, control_level);
    panel::Panel p = panel::assemble_panel(evi_table, flood_table, seeds,
                                           covars, scene.calendar,
                                           scene.districts);
    if (p.dropped_rows > 0)
      std::cerr << "note: dropped " << p.dropped_rows
                << " district-years without EVI or flood data\n";
    if (no_coastal) p = panel::filter_coastal(p);
    for (const auto& note : p.notes) std::cerr << "note: " << note << "\n";
    return p;
  }
};

const std::vector<std::string> kOutcomes = {"evi_cum", "evi_max", "evi_mean",
                                            "evi_med"};

int run_app(int argc, char** argv) {
  CLI::App app{"Goldilocks flood-metric pipeline"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--alpha", g.alpha, "significance level");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config_path,
                 "JSON overrides for seed/threads/alpha/out");

  // ---- synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  SynthConfig scfg;
  std::string planted_window_str = "5:10";
  synth->add_option("--districts", scfg.n_districts, "number of districts");
  synth->add_option("--pixels", scfg.pixels_per_district, "pixels per district");
  synth->add_option("--planted-level", scfg.planted_quantile_level,
                    "quantile level carrying the planted effect");
  synth->add_option("--planted-window", planted_window_str,
                    "planted window start:end");
  synth->add_option("--effect", scfg.treatment_effect,
                    "planted EVI boost (0 = placebo)");
  synth->add_option("--rollout-first", scfg.rollout_first_year,
                    "earliest seed rollout year");
  synth->add_option("--rollout-last", scfg.rollout_last_year,
                    "latest seed rollout year");
  synth->add_option("--noise-sd", scfg.noise_sd, "per-step EVI noise");
  synth->add_option("--rice-fraction", scfg.rice_fraction,
                    "share of pixels growing rice");
  synth->add_option("--missing-rate", scfg.evi_missing_rate,
                    "EVI missingness rate");
  synth->add_option("--first-year", scfg.calendar.first_year, "calendar start");
  synth->add_option("--years", scfg.calendar.n_years, "calendar length");
  synth->add_option("--steps", scfg.calendar.steps_per_season,
                    "composite steps per season");
  synth->add_option("--step-days", scfg.calendar.step_days,
                    "days per composite step");

  // ---- validate
  auto* validate = app.add_subcommand("validate", "validate a scene");
  std::string validate_scene_path;
  validate->add_option("--scene", validate_scene_path, "scene manifest JSON")
      ->required();

  // ---- rice
  auto* rice_cmd = app.add_subcommand("rice", "rice classifier train/cv/predict");
  std::string rice_scene_path, rice_mode = "cv", rice_points_path;
  std::vector<std::string> rice_model_paths;
  std::string rice_label_years;
  int rice_test_year = -1, rice_predict_year = -1;
  rice::RfConfig rf_cfg;
  rice_cmd->add_option("--scene", rice_scene_path, "scene manifest JSON")
      ->required();
  rice_cmd->add_option("--mode", rice_mode, "cv | train | predict")
      ->check(CLI::IsMember({"cv", "train", "predict"}));
  rice_cmd->add_option("--points", rice_points_path,
                       "labeled points CSV (pixel_id,year,label)");
  rice_cmd->add_option("--label-years", rice_label_years,
                       "comma list of years to auto-label from the scene "
                       "when --points is absent");
  rice_cmd->add_option("--test-year", rice_test_year,
                       "hold-out year for cv (-1 = none)");
  rice_cmd->add_option("--year", rice_predict_year, "year to predict");
  rice_cmd->add_option("--model", rice_model_paths,
                       "model JSON (repeatable; majority vote)");
  rice_cmd->add_option("--trees", rf_cfg.n_trees, "trees per forest");
  rice_cmd->add_option("--min-leaf", rf_cfg.min_leaf, "minimum leaf size");

  // ---- flood / evi tables
  auto* flood_cmd = app.add_subcommand("flood", "flood metric table");
  std::string flood_scene_path;
  flood_cmd->add_option("--scene", flood_scene_path, "scene manifest JSON")
      ->required();
  auto* evi_cmd = app.add_subcommand("evi", "EVI metric table");
  std::string evi_scene_path;
  evi_cmd->add_option("--scene", evi_scene_path, "scene manifest JSON")
      ->required();

  // ---- panel
  auto* panel_cmd = app.add_subcommand("panel", "assemble the estimation panel");
  PanelInputs panel_in;
  panel_in.add_options(panel_cmd);

  // ---- event study
  auto* event_cmd = app.add_subcommand("event", "event-study estimates");
  PanelInputs event_in;
  event_in.add_options(event_cmd);
  std::string event_outcome = "evi_med";
  int event_leads = 8, event_lags = 10;
  event_cmd->add_option("--outcome", event_outcome, "EVI outcome")
      ->check(CLI::IsMember(kOutcomes));
  event_cmd->add_option("--leads", event_leads, "lead bins");
  event_cmd->add_option("--lags", event_lags, "lag bins");

  // ---- did / twfe
  auto* did_cmd = app.add_subcommand("did", "difference-in-differences at one spec");
  PanelInputs did_in;
  did_in.add_options(did_cmd);
  std::string did_outcome = "evi_cum", did_window_str = "5:10";
  int did_level = 50;
  did_cmd->add_option("--outcome", did_outcome, "EVI outcome")
      ->check(CLI::IsMember(kOutcomes));
  did_cmd->add_option("--level", did_level, "quantile level");
  did_cmd->add_option("--window", did_window_str, "flood window start:end");

  auto* twfe_cmd = app.add_subcommand("twfe", "two-way FE at one spec");
  PanelInputs twfe_in;
  twfe_in.add_options(twfe_cmd);
  std::string twfe_outcome = "evi_cum", twfe_window_str = "5:10";
  std::string twfe_form = "days";
  int twfe_level = 50;
  twfe_cmd->add_option("--outcome", twfe_outcome, "EVI outcome")
      ->check(CLI::IsMember(kOutcomes));
  twfe_cmd->add_option("--level", twfe_level, "quantile level");
  twfe_cmd->add_option("--window", twfe_window_str, "flood window start:end");
  twfe_cmd->add_option("--flood-form", twfe_form, "binary | days")
      ->check(CLI::IsMember({"binary", "days"}));

  // ---- sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "specification sweep + charts");
  PanelInputs sweep_in;
  sweep_in.add_options(sweep_cmd);
  std::string sweep_estimator = "twfe", sweep_outcome = "all";
  std::string sweep_form = "days";
  sweep_cmd->add_option("--estimator", sweep_estimator, "did | twfe")
      ->check(CLI::IsMember({"did", "twfe"}));
  sweep_cmd->add_option("--outcome", sweep_outcome, "EVI outcome or 'all'");
  sweep_cmd->add_option("--flood-form", sweep_form, "binary | days")
      ->check(CLI::IsMember({"binary", "days"}));

  // ---- mc
  auto* mc_cmd = app.add_subcommand("mc", "measurement-error Monte Carlo");
  std::string mc_target = "flood", mc_trial_path;
  int mc_reps = 10000;
  bool mc_hist = false;
  mc_cmd->add_option("--target", mc_target, "flood | yield | adoption")
      ->check(CLI::IsMember({"flood", "yield", "adoption"}));
  mc_cmd->add_option("--reps", mc_reps, "replications per level");
  mc_cmd->add_option("--trial", mc_trial_path,
                     "trial data CSV (default: calibrated synthetic data)");
  mc_cmd->add_flag("--hist", mc_hist, "also write the p-value histogram");

  // --config applies JSON values under the global flags' defaults
  app.parse_complete_callback([&]() {
    if (g.config_path.empty()) return;
    std::ifstream in(g.config_path);
    if (!in) throw DataError("cannot open config: " + g.config_path);
    json cfg;
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw DataError("config is not valid JSON: " + std::string(e.what()));
    }
    if (cfg.contains("seed") && app.count("--seed") == 0)
      g.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("threads") && app.count("--threads") == 0)
      g.threads = cfg["threads"].get<int>();
    if (cfg.contains("alpha") && app.count("--alpha") == 0)
      g.alpha = cfg["alpha"].get<double>();
    if (cfg.contains("out") && app.count("--out") == 0)
      g.out = cfg["out"].get<std::string>();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help("", CLI::AppFormatMode::Normal);
    return 1;
  }

  check_alpha(g.alpha);
  const fs::path out_dir(g.out);
  fs::create_directories(out_dir);
  const int threads = g.resolved_threads();

  if (synth->parsed()) {
    scfg.planted_window = parse_window(planted_window_str);
    scfg.rng_seed = g.seed;
    const SynthResult result = synth_scene(scfg);
    write_scene(result.scene, out_dir);
    write_ground_truth(result.truth, out_dir / "ground_truth.json");
    panel::SeedTable seeds;
    for (int d = 0; d < scfg.n_districts; ++d) {
      for (int y = 0; y < scfg.calendar.n_years; ++y) {
        const double tons = result.truth.seed_tons(d, y);
        if (tons <= 0.0) continue;
        // split across two varieties: one multiplied, one distributed
        seeds.rows.push_back({result.scene.districts[static_cast<std::size_t>(d)].district_id,
                              scfg.calendar.first_year + y, "strv1",
                              0.6 * tons, 0.0});
        seeds.rows.push_back({result.scene.districts[static_cast<std::size_t>(d)].district_id,
                              scfg.calendar.first_year + y, "strv2", 0.0,
                              0.4 * tons});
      }
    }
    panel::write_seed_csv(seeds, out_dir / "seeds.csv");
    write_run_manifest(g, "synth", {},
                       {"scene.json", "pixels.csv", "districts.csv",
                        "seeds.csv", "ground_truth.json"});
    std::cout << "wrote scene with " << result.scene.pixels.size()
              << " pixels, " << scfg.n_districts << " districts to " << g.out
              << "\n";
    return 0;
  }

  if (validate->parsed()) {
    const Scene scene = load_scene(validate_scene_path);
    const ValidationReport report = validate_scene(scene);
    for (const auto& item : report.items)
      std::cout << (item.severity == ValidationItem::Severity::hard
                        ? "violation: "
                        : "warning: ")
                << item.message << "\n";
    std::cout << (report.ok() ? "scene is valid" : "scene is invalid") << " ("
              << report.items.size() << " findings)\n";
    return report.ok() ? 0 : 2;
  }

  if (rice_cmd->parsed()) {
    std::vector<fs::path> inputs = {rice_scene_path};
    const Scene scene = load_scene(rice_scene_path);
    rf_cfg.rng_seed = g.seed;
    rf_cfg.threads = threads;

    std::vector<rice::LabeledPoint> points;
    if (!rice_points_path.empty()) {
      inputs.push_back(rice_points_path);
      points = rice::read_points_csv(rice_points_path);
    } else if (rice_mode != "predict") {
      // label straight from the scene's rice flags
      std::vector<int> years;
      if (!rice_label_years.empty()) {
        years = parse_year_list(rice_label_years);
      } else {
        years = {scene.calendar.first_year,
                 scene.calendar.first_year + scene.calendar.n_years / 2,
                 scene.calendar.last_year()};
      }
      for (const auto& px : scene.pixels)
        for (int year : years)
          points.push_back({px.pixel_id, year,
                            px.rice[static_cast<std::size_t>(
                                scene.calendar.year_index(year))] != 0});
    }

    if (rice_mode == "cv") {
      const auto rows = rice::build_features(scene, points);
      std::vector<std::string> ids;
      for (const auto& dm : scene.districts) ids.push_back(dm.district_id);
      std::optional<int> test_year;
      if (rice_test_year >= 0) test_year = rice_test_year;
      const auto cv = rice::loocv_by_region(rows, rf_cfg, ids, test_year);
      rice::write_accuracy_csv(cv.report, out_dir / "rice_accuracy.csv");
      for (std::size_t i = 0; i < cv.fold_models.size(); ++i)
        rice::save_model_json(
            cv.fold_models[i],
            out_dir / ("rice_model_fold" + std::to_string(i) + ".json"));
      write_run_manifest(g, "rice", inputs, {"rice_accuracy.csv"});
      std::cout << "mean fold accuracy " << cv.report.mean_fold_accuracy;
      if (cv.report.test_year_accuracy >= 0.0)
        std::cout << ", test-year accuracy " << cv.report.test_year_accuracy;
      std::cout << "\n";
    } else if (rice_mode == "train") {
      const auto rows = rice::build_features(scene, points);
      const auto model = rice::train_rf(rows, rf_cfg);
      rice::save_model_json(model, out_dir / "rice_model.json");
      write_run_manifest(g, "rice", inputs, {"rice_model.json"});
      std::cout << "trained " << rf_cfg.n_trees << " trees; OOB accuracy "
                << model.oob_accuracy << "\n";
    } else {  // predict
      if (rice_model_paths.empty())
        throw UsageError("rice --mode predict requires --model");
      if (rice_predict_year < 0)
        throw UsageError("rice --mode predict requires --year");
      std::vector<rice::RfModel> models;
      for (const auto& mp : rice_model_paths) {
        inputs.push_back(mp);
        models.push_back(rice::load_model_json(mp));
      }
      const auto rows = rice::build_features_all(scene, rice_predict_year);
      const auto mask = rice::majority_vote(models, rows);
      CsvWriter out(out_dir / "rice_mask.csv");
      out.write_row({"pixel_id", "year", "rice"});
      for (int i = 0; i < rows.n(); ++i)
        out.write_row({rows.pixel_id[static_cast<std::size_t>(i)],
                       fmt_int(rice_predict_year),
                       mask[static_cast<std::size_t>(i)] ? "1" : "0"});
      out.close();
      write_run_manifest(g, "rice", inputs, {"rice_mask.csv"});
    }
    return 0;
  }

  if (flood_cmd->parsed()) {
    const Scene scene = load_scene(flood_scene_path);
    const auto table = flood::build_flood_table(scene);
    flood::write_flood_csv(table, out_dir / "flood_metrics.csv");
    int empty = 0;
    for (auto e : table.empty_spec) empty += e;
    write_run_manifest(g, "flood", {flood_scene_path}, {"flood_metrics.csv"});
    std::cout << flood::kNumSpecs << " candidate specs, " << empty
              << " empty\n";
    return 0;
  }

  if (evi_cmd->parsed()) {
    const Scene scene = load_scene(evi_scene_path);
    const auto table = evi::build_evi_table(scene);
    evi::write_evi_csv(table, out_dir / "evi_metrics.csv");
    write_run_manifest(g, "evi", {evi_scene_path}, {"evi_metrics.csv"});
    return 0;
  }

  if (panel_cmd->parsed()) {
    std::vector<fs::path> inputs;
    const auto p = panel_in.load(&inputs);
    panel::write_panel_csv(p, out_dir / "panel.csv");
    write_run_manifest(g, "panel", inputs, {"panel.csv"});
    std::cout << p.rows.size() << " panel rows (" << p.dropped_rows
              << " dropped)\n";
    return 0;
  }

  if (event_cmd->parsed()) {
    std::vector<fs::path> inputs;
    const auto p = event_in.load(&inputs);
    const auto result = econ::run_event_study(p, event_outcome, event_leads,
                                              event_lags, g.alpha);
    econ::write_event_study_csv(result, out_dir / "event_study.csv");
    write_run_manifest(g, "event", inputs, {"event_study.csv"});
    return 0;
  }

  if (did_cmd->parsed()) {
    std::vector<fs::path> inputs;
    const auto p = did_in.load(&inputs);
    const flood::FloodSpec spec{did_level, parse_window(did_window_str)};
    const auto result = econ::run_did(p, did_outcome, spec, g.alpha);
    econ::write_regresult_csv(result, out_dir / "did.csv");
    econ::write_regresult_json(result, out_dir / "did.json");
    write_run_manifest(g, "did", inputs, {"did.csv", "did.json"});
    std::cout << "beta " << result.beta().coef << " (p " << result.beta().p
              << ")\n";
    return 0;
  }

  if (twfe_cmd->parsed()) {
    std::vector<fs::path> inputs;
    const auto p = twfe_in.load(&inputs);
    const flood::FloodSpec spec{twfe_level, parse_window(twfe_window_str)};
    const auto result = econ::run_twfe(p, twfe_outcome, spec,
                                       econ::parse_flood_form(twfe_form),
                                       g.alpha);
    econ::write_regresult_csv(result, out_dir / "twfe.csv");
    econ::write_regresult_json(result, out_dir / "twfe.json");
    write_run_manifest(g, "twfe", inputs, {"twfe.csv", "twfe.json"});
    std::cout << "beta " << result.beta().coef << " (p " << result.beta().p
              << ")\n";
    return 0;
  }

  if (sweep_cmd->parsed()) {
    std::vector<fs::path> inputs;
    const auto p = sweep_in.load(&inputs);
    const auto form = econ::parse_flood_form(
        sweep_estimator == "did" ? "binary" : sweep_form);
    std::vector<std::string> outcomes;
    if (sweep_outcome == "all")
      outcomes = kOutcomes;
    else if (std::find(kOutcomes.begin(), kOutcomes.end(), sweep_outcome) !=
             kOutcomes.end())
      outcomes = {sweep_outcome};
    else
      throw UsageError("unknown outcome '" + sweep_outcome + "'");

    std::vector<std::string> outputs;
    for (const auto& outcome : outcomes) {
      const auto results =
          sweep::sweep(p, sweep_estimator, outcome, form, g.alpha, threads);
      const std::string base = "sweep_" + sweep_estimator + "_" +
                               results.flood_form + "_" + outcome;
      sweep::emit_chart(results, out_dir, base);
      outputs.push_back(base + ".csv");
      outputs.push_back(base + ".svg");
      std::cout << outcome << ": " << results.entries.size() << " specs ("
                << results.n_pos << " pos_sig, " << results.n_neg
                << " neg_sig), " << results.skipped_empty << " empty, "
                << results.failures.size() << " failed\n";
    }
    write_run_manifest(g, "sweep", inputs, outputs);
    return 0;
  }

  if (mc_cmd->parsed()) {
    std::vector<fs::path> inputs;
    mc::TrialData data;
    if (!mc_trial_path.empty()) {
      inputs.push_back(mc_trial_path);
      data = mc::read_trial_csv(mc_trial_path);
    } else {
      mc::TrialGenConfig gen;
      gen.rng_seed = g.seed;
      data = mc::synth_trial_data(gen);
      mc::write_trial_csv(data, out_dir / "trial_data.csv");
    }
    mc::McConfig cfg;
    cfg.target = mc::parse_target(mc_target);
    cfg.reps = mc_reps;
    cfg.alpha = g.alpha;
    cfg.rng_seed = g.seed;
    cfg.threads = threads;
    const auto result = cfg.target == mc::McTarget::adoption
                            ? mc::mc_misclassify(data, cfg)
                            : mc::mc_noise(data, cfg);
    const std::string base = "mc_" + mc_target;
    mc::write_mc_csv(result, out_dir / (base + ".csv"));
    std::vector<std::string> outputs = {base + ".csv"};
    if (mc_hist) {
      mc::write_mc_hist_csv(result, out_dir / (base + "_hist.csv"));
      outputs.push_back(base + "_hist.csv");
    }
    write_run_manifest(g, "mc", inputs, outputs);
    std::cout << "share significant at level 0: "
              << result.share_significant[0] << ", at top level: "
              << result.share_significant[result.share_significant.size() - 1]
              << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
