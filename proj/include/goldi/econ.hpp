#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "goldi/flood.hpp"
#include "goldi/panel.hpp"

namespace goldi::econ {

// Least squares via incremental modified Gram-Schmidt with
// reorthogonalization. Columns whose residual norm after projection onto
// the kept columns falls below col_tol times their original norm are
// exactly collinear for our purposes and are dropped, later columns first.
struct OlsFit {
  Eigen::VectorXd coef;              // per input column; dropped columns get 0
  std::vector<std::uint8_t> kept;    // per input column
  std::vector<int> kept_index;       // kept order -> input column
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inv;           // (X'X)^-1 over kept columns
  int rank = 0;
};

OlsFit ols(const Eigen::Ref<const Eigen::MatrixXd>& X,
           const Eigen::Ref<const Eigen::VectorXd>& y,
           double col_tol = 1e-9);

// Two-way demeaning: alternately subtract unit and time group means until
// the largest adjustment falls below tol (one sweep suffices for balanced
// panels, unbalanced ones iterate).
Eigen::MatrixXd within_transform(const Eigen::VectorXi& unit,
                                 const Eigen::VectorXi& time,
                                 const Eigen::Ref<const Eigen::MatrixXd>& cols,
                                 double tol = 1e-10, int max_sweeps = 10000);

// Cluster-robust sandwich: factor * (X'X)^-1 [sum_g (X_g'e_g)(X_g'e_g)']
// (X'X)^-1 with factor G/(G-1) * (N-1)/(N-K). K counts absorbed fixed
// effects as estimated parameters. With singleton clusters this reduces to
// HC1.
Eigen::MatrixXd cluster_vcov(const Eigen::Ref<const Eigen::MatrixXd>& X_kept,
                             const Eigen::Ref<const Eigen::VectorXd>& residuals,
                             const Eigen::VectorXi& cluster,
                             const Eigen::Ref<const Eigen::MatrixXd>& xtx_inv,
                             int k_params);

struct CoefStat {
  std::string name;
  double coef = 0.0, se = 0.0, t = 0.0, p = 1.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  bool dropped = false;   // exactly collinear, removed from the design
  bool absorbed = false;  // main effect soaked up by the fixed effects
};

struct RegResult {
  std::string estimator;       // event_study | did | twfe
  std::string outcome;
  flood::FloodSpec spec;
  std::string flood_form;      // binary | days | ""
  std::string unit_dim = "district";
  std::string cluster_dim = "district";
  std::vector<CoefStat> coefs;
  int beta_index = 0;          // the highlighted interaction
  int n_obs = 0;
  int n_clusters = 0;
  double alpha = 0.05;

  const CoefStat& beta() const {
    return coefs[static_cast<std::size_t>(beta_index)];
  }
};

// Two-way FE regression with clustered inference, generic over the unit
// dimension (district, upazila, household). unit/time/cluster are dense
// 0-based codes. Inference uses t with (#clusters - 1) df; K counts the
// absorbed unit and time effects.
RegResult fe_regression(const Eigen::VectorXi& unit,
                        const Eigen::VectorXi& time,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const std::vector<std::string>& names,
                        const Eigen::VectorXi& cluster, double alpha,
                        int beta_index);

struct EventStudyResult {
  std::vector<int> event_time;  // -j_lead .. +j_lag, endpoints binned
  Eigen::VectorXd coef, se, ci_lo, ci_hi, p;  // alpha_{-1} fixed at 0
  std::vector<std::uint8_t> estimated;  // 0 for the omitted/dropped entries
  CoefStat flood_control;               // phi
  int n_obs = 0, n_clusters = 0;
  double alpha = 0.05;
};

// Eq.-style event study: event-time indicators around each district's first
// seed year (tau), j = -1 omitted as the benchmark, endpoints binned, with
// a contemporaneous flood-share control and two-way FEs.
EventStudyResult run_event_study(const panel::Panel& panel,
                                 const std::string& outcome, int j_lead = 8,
                                 int j_lag = 10, double alpha = 0.05);

// post-2010 x flood-prone interaction with two-way FEs; the main effects
// are absorbed and reported as such.
RegResult run_did(const panel::Panel& panel, const std::string& outcome,
                  const flood::FloodSpec& spec, double alpha = 0.05);

enum class FloodForm { binary, days };
FloodForm parse_flood_form(const std::string& s);

// seed x flood interaction plus seed, flood, and rice-area controls with
// two-way FEs.
RegResult run_twfe(const panel::Panel& panel, const std::string& outcome,
                   const flood::FloodSpec& spec, FloodForm form,
                   double alpha = 0.05);

void write_regresult_csv(const RegResult& r, const std::filesystem::path& path);
void write_regresult_json(const RegResult& r, const std::filesystem::path& path);
void write_event_study_csv(const EventStudyResult& r,
                           const std::filesystem::path& path);

}  // namespace goldi::econ
