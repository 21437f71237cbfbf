#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace goldi {

struct Scene;

namespace rice {

struct LabeledPoint {
  std::string pixel_id;
  int year = 0;
  bool rice = false;
};

std::vector<LabeledPoint> read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::vector<LabeledPoint>& points,
                      const std::filesystem::path& path);

// Per-point features for one season: the two seasonal band medians that
// feed the PCA (median EVI and median inundation fraction over the growth
// period), the EVI quantiles, and the static terrain values. PCA scores are
// attached by build_features (fit over all rows) and re-derived per fold in
// cross-validation.
struct FeatureTable {
  std::vector<std::string> pixel_id;
  std::vector<int> year;
  std::vector<int> district;        // index into the scene's district list
  Eigen::MatrixXd band_medians;     // n x 2
  Eigen::MatrixXd base;             // n x 5: evi_med evi_q05 evi_q95 elev slope
  Eigen::MatrixXd pc_scores;        // n x 2, from build_features' global fit
  std::vector<std::uint8_t> label;  // empty when unlabeled
  std::vector<std::string> base_names =  //
      {"evi_med", "evi_q05", "evi_q95", "elevation", "slope"};

  int n() const { return static_cast<int>(pixel_id.size()); }
  bool labeled() const { return !label.empty(); }
};

struct Pca2 {
  Eigen::Matrix2d components;  // columns = principal axes
  Eigen::Vector2d eigenvalues;
  Eigen::RowVector2d means;
  bool degenerate = false;  // zero covariance; identity axes
};

// Eigenvectors of the column-centered covariance, ordered by descending
// eigenvalue; each axis is signed so its largest-magnitude entry is
// positive (first such entry on a tie). Equal eigenvalues fall back to the
// input axis order.
Pca2 pca2_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows);
Eigen::MatrixXd pca2_scores(const Pca2& pca,
                            const Eigen::Ref<const Eigen::MatrixXd>& rows);

// One feature row per point; band medians over the growth period of the
// point's year, EVI quantiles over non-missing steps. Errors when a point
// has an all-missing EVI season or is not in the scene.
FeatureTable build_features(const Scene& scene,
                            const std::vector<LabeledPoint>& points);
// Unlabeled rows for every pixel of one year (for whole-scene inference).
FeatureTable build_features_all(const Scene& scene, int year);

struct RfConfig {
  int n_trees = 1000;
  int min_leaf = 5;
  int features_per_split = 0;  // 0 -> ceil(sqrt(p))
  bool bootstrap = true;
  std::uint64_t rng_seed = 1;
  int threads = 1;

  void validate() const;
};

struct TreeNode {
  int feature = -1;       // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::uint8_t leaf_label = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  bool predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct RfModel {
  Pca2 pca;  // fitted on the training rows
  std::vector<Tree> trees;
  std::vector<std::string> feature_names;  // pc1 pc2 + base names
  RfConfig config;
  std::vector<std::string> training_districts;
  std::vector<int> training_years;
  double oob_accuracy = -1.0;  // -1 when bootstrap off

  // strict majority of trees votes rice; exact ties go to non-rice
  std::vector<std::uint8_t> predict(const FeatureTable& rows) const;
  Eigen::MatrixXd design(const FeatureTable& rows) const;
};

// Gini-impurity CART trees on bootstrap samples; candidate thresholds at
// midpoints of sorted distinct values. Rows are canonically ordered by
// (pixel_id, year) before any randomness is consumed, so permuting the
// input leaves the model unchanged.
RfModel train_rf(const FeatureTable& rows, const RfConfig& cfg);

struct AccuracyReport {
  std::vector<std::pair<std::string, double>> fold_accuracy;  // held-out district
  double mean_fold_accuracy = 0.0;
  double test_year_accuracy = -1.0;  // -1 when no test year requested
  // confusion counts: {true rice & voted rice, true rice & voted non, ...}
  long long fold_tp = 0, fold_fn = 0, fold_fp = 0, fold_tn = 0;
  long long test_tp = 0, test_fn = 0, test_fp = 0, test_tn = 0;
};

struct LoocvResult {
  AccuracyReport report;
  std::vector<RfModel> fold_models;  // one per held-out district
};

// Rotates the held-out district; each fold refits the PCA on its own
// training rows. When test_year is given those rows are excluded from every
// fold and scored by majority vote across the fold models.
LoocvResult loocv_by_region(const FeatureTable& rows, const RfConfig& cfg,
                            const std::vector<std::string>& district_ids,
                            std::optional<int> test_year = std::nullopt);

std::vector<std::uint8_t> majority_vote(const std::vector<RfModel>& models,
                                        const FeatureTable& rows);

void write_accuracy_csv(const AccuracyReport& report,
                        const std::filesystem::path& path);
void save_model_json(const RfModel& model, const std::filesystem::path& path);
RfModel load_model_json(const std::filesystem::path& path);

}  // namespace rice
}  // namespace goldi
