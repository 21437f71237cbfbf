#include "goldi/econ.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/stats.hpp"

namespace goldi::econ {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

OlsFit ols(const Eigen::Ref<const Eigen::MatrixXd>& X,
           const Eigen::Ref<const Eigen::VectorXd>& y, double col_tol) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) throw DataError("ols: X and y row counts differ");

  OlsFit fit;
  fit.kept.assign(static_cast<std::size_t>(k), 0);
  fit.coef = Eigen::VectorXd::Zero(k);

  Eigen::MatrixXd Q(n, k);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k, k);
  int r = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd v = X.col(j);
    const double orig_norm = v.norm();
    Eigen::VectorXd rj = Eigen::VectorXd::Zero(r);
    for (int pass = 0; pass < 2; ++pass) {  // MGS twice for stability
      for (int i = 0; i < r; ++i) {
        const double cij = Q.col(i).dot(v);
        rj[i] += cij;
        v -= cij * Q.col(i);
      }
    }
    const double norm = v.norm();
    if (orig_norm == 0.0 || norm <= col_tol * orig_norm) continue;  // dropped
    R.block(0, r, r, 1) = rj;
    R(r, r) = norm;
    Q.col(r) = v / norm;
    fit.kept[static_cast<std::size_t>(j)] = 1;
    fit.kept_index.push_back(static_cast<int>(j));
    ++r;
  }
  fit.rank = r;
  if (r == 0) throw DataError("ols: zero usable columns");
  if (n < r) throw DataError("ols: fewer rows than retained columns");

  const Eigen::MatrixXd Rk = R.topLeftCorner(r, r);
  const Eigen::VectorXd qty = Q.leftCols(r).transpose() * y;
  const Eigen::VectorXd beta =
      Rk.triangularView<Eigen::Upper>().solve(qty);
  for (int i = 0; i < r; ++i)
    fit.coef[fit.kept_index[static_cast<std::size_t>(i)]] = beta[i];

  Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < r; ++i)
    fitted += beta[i] * X.col(fit.kept_index[static_cast<std::size_t>(i)]);
  fit.residuals = y - fitted;

  const Eigen::MatrixXd Rinv = Rk.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(r, r));
  fit.xtx_inv = Rinv * Rinv.transpose();
  return fit;
}

Eigen::MatrixXd within_transform(const Eigen::VectorXi& unit,
                                 const Eigen::VectorXi& time,
                                 const Eigen::Ref<const Eigen::MatrixXd>& cols,
                                 double tol, int max_sweeps) {
  const Eigen::Index n = cols.rows();
  if (unit.size() != n || time.size() != n)
    throw DataError("within_transform: index lengths differ from data");
  const int n_units = n > 0 ? unit.maxCoeff() + 1 : 0;
  const int n_times = n > 0 ? time.maxCoeff() + 1 : 0;

  Eigen::MatrixXd out = cols;
  Eigen::VectorXd ucount = Eigen::VectorXd::Zero(n_units);
  Eigen::VectorXd tcount = Eigen::VectorXd::Zero(n_times);
  for (Eigen::Index i = 0; i < n; ++i) {
    ucount[unit[i]] += 1.0;
    tcount[time[i]] += 1.0;
  }

  Eigen::MatrixXd umean(n_units, cols.cols());
  Eigen::MatrixXd tmean(n_times, cols.cols());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_adjust = 0.0;

    umean.setZero();
    for (Eigen::Index i = 0; i < n; ++i) umean.row(unit[i]) += out.row(i);
    umean.array().colwise() /= ucount.array();
    for (Eigen::Index i = 0; i < n; ++i) out.row(i) -= umean.row(unit[i]);
    max_adjust = std::max(max_adjust, umean.cwiseAbs().maxCoeff());

    tmean.setZero();
    for (Eigen::Index i = 0; i < n; ++i) tmean.row(time[i]) += out.row(i);
    tmean.array().colwise() /= tcount.array();
    for (Eigen::Index i = 0; i < n; ++i) out.row(i) -= tmean.row(time[i]);
    max_adjust = std::max(max_adjust, tmean.cwiseAbs().maxCoeff());

    if (max_adjust < tol) break;
  }
  return out;
}

Eigen::MatrixXd cluster_vcov(const Eigen::Ref<const Eigen::MatrixXd>& X_kept,
                             const Eigen::Ref<const Eigen::VectorXd>& residuals,
                             const Eigen::VectorXi& cluster,
                             const Eigen::Ref<const Eigen::MatrixXd>& xtx_inv,
                             int k_params) {
  const Eigen::Index n = X_kept.rows();
  const Eigen::Index k = X_kept.cols();
  if (cluster.size() != n || residuals.size() != n)
    throw DataError("cluster_vcov: size mismatch");
  const int n_clusters = n > 0 ? cluster.maxCoeff() + 1 : 0;
  if (n_clusters < 2) throw DataError("cluster_vcov: need at least 2 clusters");

  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(n_clusters, k);
  for (Eigen::Index i = 0; i < n; ++i)
    scores.row(cluster[i]) += residuals[i] * X_kept.row(i);
  const Eigen::MatrixXd meat = scores.transpose() * scores;

  const double G = static_cast<double>(n_clusters);
  const double N = static_cast<double>(n);
  const double factor = (G / (G - 1.0)) * ((N - 1.0) / (N - k_params));
  return factor * (xtx_inv * meat * xtx_inv);
}

namespace {

// dense 0-based codes in first-appearance order
Eigen::VectorXi compact_codes(const std::vector<int>& raw, int* n_codes) {
  Eigen::VectorXi codes(static_cast<Eigen::Index>(raw.size()));
  std::map<int, int> index;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = index.emplace(raw[i], static_cast<int>(index.size()));
    codes[static_cast<Eigen::Index>(i)] = it->second;
  }
  *n_codes = static_cast<int>(index.size());
  return codes;
}

}  // namespace

RegResult fe_regression(const Eigen::VectorXi& unit,
                        const Eigen::VectorXi& time,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const std::vector<std::string>& names,
                        const Eigen::VectorXi& cluster, double alpha,
                        int beta_index) {
  const Eigen::Index n = y.size();
  const Eigen::Index k = X.cols();
  const int n_units = n > 0 ? unit.maxCoeff() + 1 : 0;
  const int n_times = n > 0 ? time.maxCoeff() + 1 : 0;

  Eigen::MatrixXd all(n, k + 1);
  all.col(0) = y;
  all.rightCols(k) = X;
  const Eigen::MatrixXd demeaned = within_transform(unit, time, all);

  const OlsFit fit = ols(demeaned.rightCols(k), demeaned.col(0));

  // parameter count of the equivalent dummy regression: intercept + unit
  // and time dummies + retained regressors
  const int k_params = fit.rank + (n_units - 1) + (n_times - 1) + 1;

  Eigen::MatrixXd X_kept(n, fit.rank);
  for (int i = 0; i < fit.rank; ++i)
    X_kept.col(i) = demeaned.col(1 + fit.kept_index[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd vcov =
      cluster_vcov(X_kept, fit.residuals, cluster, fit.xtx_inv, k_params);

  const int n_clusters = cluster.maxCoeff() + 1;
  const double df = static_cast<double>(n_clusters - 1);
  const double t_crit = student_t_quantile(1.0 - alpha / 2.0, df);

  RegResult result;
  result.alpha = alpha;
  result.n_obs = static_cast<int>(n);
  result.n_clusters = n_clusters;
  result.beta_index = beta_index;
  result.coefs.resize(static_cast<std::size_t>(k));
  int kept_pos = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    CoefStat& c = result.coefs[static_cast<std::size_t>(j)];
    c.name = names[static_cast<std::size_t>(j)];
    if (!fit.kept[static_cast<std::size_t>(j)]) {
      c.dropped = true;
      c.coef = 0.0;
      c.se = c.t = c.ci_lo = c.ci_hi = kNaN;
      c.p = kNaN;
      continue;
    }
    c.coef = fit.coef[j];
    c.se = std::sqrt(std::max(0.0, vcov(kept_pos, kept_pos)));
    c.t = c.se > 0.0 ? c.coef / c.se : kNaN;
    c.p = c.se > 0.0 ? student_t_two_sided_p(c.t, df) : kNaN;
    c.ci_lo = c.coef - t_crit * c.se;
    c.ci_hi = c.coef + t_crit * c.se;
    ++kept_pos;
  }
  return result;
}

namespace {

struct PanelIndex {
  Eigen::VectorXi unit, time, cluster;
  int n_units = 0, n_times = 0;
};

PanelIndex index_panel(const panel::Panel& p) {
  std::vector<int> u, t;
  u.reserve(p.rows.size());
  t.reserve(p.rows.size());
  for (const auto& row : p.rows) {
    u.push_back(row.district);
    t.push_back(row.year);
  }
  PanelIndex idx;
  idx.unit = compact_codes(u, &idx.n_units);
  idx.time = compact_codes(t, &idx.n_times);
  idx.cluster = idx.unit;  // district-level clustering
  return idx;
}

}  // namespace

EventStudyResult run_event_study(const panel::Panel& panel,
                                 const std::string& outcome, int j_lead,
                                 int j_lag, double alpha) {
  if (j_lead < 1 || j_lag < 1)
    throw UsageError("event study: leads/lags must be >= 1");
  const auto& rows = panel.rows;
  if (rows.empty()) throw DataError("event study: empty panel");

  bool any_treated = false;
  for (const auto& r : rows) any_treated |= r.event_time.has_value();
  if (!any_treated) throw DataError("event study: no treated units");

  // columns: event-time bins (j = -1 omitted) then the flood control
  std::vector<int> js;
  for (int j = -j_lead; j <= j_lag; ++j)
    if (j != -1) js.push_back(j);
  const int k = static_cast<int>(js.size()) + 1;

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    y[i] = panel.outcome(r, outcome);
    if (r.event_time) {
      const int binned = std::clamp(*r.event_time, -j_lead, j_lag);
      if (binned != -1) {
        const auto it = std::find(js.begin(), js.end(), binned);
        X(i, it - js.begin()) = 1.0;
      }
    }
    X(i, k - 1) = r.flood_control;
  }

  std::vector<std::string> names;
  for (int j : js) names.push_back("alpha[" + std::to_string(j) + "]");
  names.push_back("flood_control");

  const auto idx = index_panel(panel);
  const RegResult reg =
      fe_regression(idx.unit, idx.time, y, X, names, idx.cluster, alpha, 0);

  EventStudyResult out;
  out.alpha = alpha;
  out.n_obs = reg.n_obs;
  out.n_clusters = reg.n_clusters;
  const int span = j_lead + j_lag + 1;
  out.event_time.resize(static_cast<std::size_t>(span));
  out.coef = Eigen::VectorXd::Zero(span);
  out.se = Eigen::VectorXd::Zero(span);
  out.ci_lo = Eigen::VectorXd::Zero(span);
  out.ci_hi = Eigen::VectorXd::Zero(span);
  out.p = Eigen::VectorXd::Ones(span);
  out.estimated.assign(static_cast<std::size_t>(span), 0);
  for (int pos = 0; pos < span; ++pos) {
    const int j = -j_lead + pos;
    out.event_time[static_cast<std::size_t>(pos)] = j;
    if (j == -1) continue;  // benchmark year, identically zero
    const auto it = std::find(js.begin(), js.end(), j);
    const auto& c = reg.coefs[static_cast<std::size_t>(it - js.begin())];
    if (c.dropped) continue;
    out.coef[pos] = c.coef;
    out.se[pos] = c.se;
    out.ci_lo[pos] = c.ci_lo;
    out.ci_hi[pos] = c.ci_hi;
    out.p[pos] = c.p;
    out.estimated[static_cast<std::size_t>(pos)] = 1;
  }
  out.flood_control = reg.coefs.back();
  return out;
}

RegResult run_did(const panel::Panel& panel, const std::string& outcome,
                  const flood::FloodSpec& spec, double alpha) {
  const auto& rows = panel.rows;
  if (rows.empty()) throw DataError("did: empty panel");

  // flood-prone over the districts actually present: district median of
  // days_in_window vs the global median over the panel's district-years
  std::map<int, std::vector<double>> per_district;
  std::vector<double> global;
  for (const auto& r : rows) {
    const double d =
        panel.flood_metrics(r, spec).days_in_window;
    per_district[r.district].push_back(d);
    global.push_back(d);
  }
  const double global_median = median_linear(global);
  std::map<int, bool> prone;
  bool any_prone = false, all_prone = true;
  for (auto& [d, days] : per_district) {
    const bool flag = median_linear(days) > global_median;
    prone[d] = flag;
    any_prone |= flag;
    all_prone &= flag;
  }
  if (!any_prone || all_prone)
    throw DataError("did: flood_prone has no variation across districts");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd X(n, 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    y[i] = panel.outcome(r, outcome);
    X(i, 0) = (r.post2010 ? 1.0 : 0.0) * (prone[r.district] ? 1.0 : 0.0);
  }

  const auto idx = index_panel(panel);
  RegResult reg = fe_regression(idx.unit, idx.time, y, X,
                                {"post2010 x flood_prone"}, idx.cluster,
                                alpha, 0);
  reg.estimator = "did";
  reg.outcome = outcome;
  reg.spec = spec;
  reg.flood_form = "binary";

  CoefStat rho;  // main effects live inside the fixed effects
  rho.name = "post2010";
  rho.absorbed = true;
  rho.coef = rho.se = rho.t = rho.p = rho.ci_lo = rho.ci_hi = kNaN;
  CoefStat gamma = rho;
  gamma.name = "flood_prone";
  reg.coefs.push_back(rho);
  reg.coefs.push_back(gamma);
  return reg;
}

FloodForm parse_flood_form(const std::string& s) {
  if (s == "binary") return FloodForm::binary;
  if (s == "days") return FloodForm::days;
  throw UsageError("flood form must be 'binary' or 'days', got '" + s + "'");
}

RegResult run_twfe(const panel::Panel& panel, const std::string& outcome,
                   const flood::FloodSpec& spec, FloodForm form,
                   double alpha) {
  const auto& rows = panel.rows;
  if (rows.empty()) throw DataError("twfe: empty panel");

  bool seed_varies = false;
  {
    std::map<int, double> first;
    for (const auto& r : rows) {
      auto [it, inserted] = first.emplace(r.district, r.seed_cum);
      if (!inserted && it->second != r.seed_cum) seed_varies = true;
    }
  }
  if (!seed_varies)
    throw DataError("twfe: seed_cum does not vary within any unit");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd X(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    y[i] = panel.outcome(r, outcome);
    const auto m = panel.flood_metrics(r, spec);
    const double fl = form == FloodForm::binary
                          ? (m.in_window ? 1.0 : 0.0)
                          : static_cast<double>(m.days_in_window);
    X(i, 0) = r.seed_cum * fl;
    X(i, 1) = r.seed_cum;
    X(i, 2) = fl;
    X(i, 3) = r.rice_area;
  }

  const auto idx = index_panel(panel);
  RegResult reg = fe_regression(
      idx.unit, idx.time, y, X,
      {"seed x flood", "seed_cum", "flood", "rice_area"}, idx.cluster, alpha,
      0);
  if (reg.beta().dropped)
    throw DataError("twfe: degenerate variation, interaction dropped");
  reg.estimator = "twfe";
  reg.outcome = outcome;
  reg.spec = spec;
  reg.flood_form = form == FloodForm::binary ? "binary" : "days";
  return reg;
}

namespace {

std::string coef_field(double v) {
  return std::isnan(v) ? "" : fmt_double(v);
}

}  // namespace

void write_regresult_csv(const RegResult& r, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"estimator", "outcome", "quantile_level", "start_day",
                 "end_day", "flood_form", "term", "coef", "se", "t", "p",
                 "ci_lo", "ci_hi", "dropped", "absorbed", "n_obs",
                 "n_clusters"});
  for (const auto& c : r.coefs) {
    out.write_row({r.estimator, r.outcome, fmt_int(r.spec.quantile_level),
                   fmt_int(r.spec.window.start_day),
                   fmt_int(r.spec.window.end_day), r.flood_form, c.name,
                   coef_field(c.coef), coef_field(c.se), coef_field(c.t),
                   coef_field(c.p), coef_field(c.ci_lo), coef_field(c.ci_hi),
                   c.dropped ? "1" : "0", c.absorbed ? "1" : "0",
                   fmt_int(r.n_obs), fmt_int(r.n_clusters)});
  }
  out.close();
}

void write_regresult_json(const RegResult& r, const std::filesystem::path& path) {
  nlohmann::json j;
  j["estimator"] = r.estimator;
  j["outcome"] = r.outcome;
  j["flood_spec"] = {{"quantile_level", r.spec.quantile_level},
                     {"start_day", r.spec.window.start_day},
                     {"end_day", r.spec.window.end_day}};
  j["flood_form"] = r.flood_form;
  j["unit_dim"] = r.unit_dim;
  j["cluster_dim"] = r.cluster_dim;
  j["n_obs"] = r.n_obs;
  j["n_clusters"] = r.n_clusters;
  j["alpha"] = r.alpha;
  nlohmann::json coefs = nlohmann::json::array();
  for (const auto& c : r.coefs) {
    nlohmann::json jc;
    jc["term"] = c.name;
    jc["dropped"] = c.dropped;
    jc["absorbed"] = c.absorbed;
    if (!c.dropped && !c.absorbed) {
      jc["coef"] = c.coef;
      jc["se"] = c.se;
      jc["t"] = c.t;
      jc["p"] = c.p;
      jc["ci_lo"] = c.ci_lo;
      jc["ci_hi"] = c.ci_hi;
    }
    coefs.push_back(jc);
  }
  j["coefficients"] = coefs;
  j["beta_index"] = r.beta_index;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_event_study_csv(const EventStudyResult& r,
                           const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"event_time", "coef", "se", "ci_lo", "ci_hi", "p",
                 "estimated"});
  for (std::size_t i = 0; i < r.event_time.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    out.write_row({fmt_int(r.event_time[i]), fmt_double(r.coef[idx]),
                   fmt_double(r.se[idx]), fmt_double(r.ci_lo[idx]),
                   fmt_double(r.ci_hi[idx]), fmt_double(r.p[idx]),
                   r.estimated[i] ? "1" : "0"});
  }
  out.close();
}

}  // namespace goldi::econ
