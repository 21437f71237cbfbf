#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace goldi::mc {

// Field-trial style units: adoption flag, measured flood duration, yield.
struct TrialData {
  std::vector<int> unit_id;
  std::vector<std::uint8_t> adopted;
  Eigen::VectorXd flood_duration;  // days
  Eigen::VectorXd yield;           // kg/ha

  int n() const { return static_cast<int>(unit_id.size()); }
  void validate() const;  // throws DataError
};

// Generator calibrated to the trial moments (flood mean 6.03, sd 4.99,
// adopter share 0.42) with a planted positive interaction. The default
// coefficient scale makes the level-0 interaction test significant with
// power >= 0.99 at n = 800 while small flood noise destroys it, so the
// sensitivity curves have room to fall.
struct TrialGenConfig {
  int n = 800;
  double adopter_share = 0.42;
  double flood_mu = 6.03;
  double flood_sd = 4.99;
  double intercept = 10000.0;     // kg/ha
  double adoption_effect = 0.0;   // no yield effect absent flooding
  double flood_effect = -330.0;   // kg/ha per day of submergence
  double interaction = 2.9;       // recovery per day for adopters
  double resid_sd = 25.0;
  std::uint64_t rng_seed = 1;
};

TrialData synth_trial_data(const TrialGenConfig& cfg);

struct BaseReg {
  Eigen::VectorXd coef, se, t, p;  // intercept, adopted, flood, interaction
  int interaction_index = 3;
  int n = 0;
  double interaction_beta() const { return coef[interaction_index]; }
  double interaction_p() const { return p[interaction_index]; }
};

// OLS of yield on adoption, flood duration, and their interaction, with
// HC1 heteroskedasticity-robust standard errors.
BaseReg base_regression(const TrialData& data);

enum class McTarget { flood, yield, adoption };
McTarget parse_target(const std::string& s);

struct McConfig {
  McTarget target = McTarget::flood;
  std::vector<double> levels;  // percent; empty -> default grid per target
  int reps = 10000;
  double alpha = 0.05;
  std::uint64_t rng_seed = 1;
  int threads = 1;
  int hist_bins = 20;
};

// noise targets: 0..20% of the column's sd, step 1. adoption: 0..50% flips.
std::vector<double> default_levels(McTarget target);

struct McResult {
  McTarget target = McTarget::flood;
  std::vector<double> levels;
  Eigen::VectorXd share_significant;  // per level
  Eigen::MatrixXd p_hist;             // level x hist_bins, counts
  int reps = 0;
  double alpha = 0.05;
};

// At level x the replication adds Normal(0, (x/100)*sd(target column))
// draws to the pristine data and re-runs the base regression. Draws are the
// per-replicate standard normal substream scaled by the level, so curves
// share randomness across levels and the share decays without resampling
// chatter.
McResult mc_noise(const TrialData& data, const McConfig& cfg);

// At level x the replication flips the adoption flag of round(x% * n)
// distinct units; the flipped sets are nested across levels within a
// replicate (a uniformly drawn permutation prefix).
McResult mc_misclassify(const TrialData& data, const McConfig& cfg);

TrialData read_trial_csv(const std::filesystem::path& path);
void write_trial_csv(const TrialData& data, const std::filesystem::path& path);
void write_mc_csv(const McResult& result, const std::filesystem::path& path);
void write_mc_hist_csv(const McResult& result,
                       const std::filesystem::path& path);

}  // namespace goldi::mc
