#include "goldi/rice_rf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "goldi/csv.hpp"
#include "goldi/error.hpp"
#include "goldi/parallel.hpp"
#include "goldi/rng.hpp"
#include "goldi/scene.hpp"
#include "goldi/stats.hpp"

namespace goldi::rice {

using nlohmann::json;

std::vector<LabeledPoint> read_points_csv(const std::filesystem::path& path) {
  const auto csv = read_csv(path);
  const auto c_p = csv.col("pixel_id");
  const auto c_y = csv.col("year");
  const auto c_l = csv.col("label");
  std::vector<LabeledPoint> points;
  for (const auto& row : csv.rows) {
    LabeledPoint pt;
    pt.pixel_id = row[c_p];
    pt.year = static_cast<int>(parse_int(row[c_y], "year, point " + pt.pixel_id));
    if (row[c_l] == "rice")
      pt.rice = true;
    else if (row[c_l] == "nonrice")
      pt.rice = false;
    else
      throw DataError("label must be rice/nonrice, got '" + row[c_l] +
                      "' (point " + pt.pixel_id + ")");
    points.push_back(std::move(pt));
  }
  return points;
}

void write_points_csv(const std::vector<LabeledPoint>& points,
                      const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"pixel_id", "year", "label"});
  for (const auto& pt : points)
    out.write_row({pt.pixel_id, fmt_int(pt.year), pt.rice ? "rice" : "nonrice"});
  out.close();
}

Pca2 pca2_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.rows() < 2) throw DataError("pca2: need at least 2 rows");
  if (rows.cols() != 2) throw DataError("pca2: expected 2 columns");
  Pca2 pca;
  pca.means = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - pca.means;
  const Eigen::Matrix2d cov =
      centered.transpose() * centered / static_cast<double>(rows.rows() - 1);

  if (cov.cwiseAbs().maxCoeff() == 0.0) {
    pca.degenerate = true;
    pca.components = Eigen::Matrix2d::Identity();
    pca.eigenvalues.setZero();
    return pca;
  }

  // closed-form symmetric 2x2 eigendecomposition
  const double a = cov(0, 0), b = cov(0, 1), c = cov(1, 1);
  const double tr = a + c;
  const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  const double l1 = (tr + disc) / 2.0;
  const double l2 = (tr - disc) / 2.0;
  pca.eigenvalues << l1, l2;

  Eigen::Matrix2d comp;
  if (disc == 0.0) {
    comp.setIdentity();  // equal eigenvalues: keep the input axis order
  } else {
    Eigen::Vector2d v1;
    if (std::fabs(b) > 0.0)
      v1 << l1 - c, b;
    else if (a >= c)
      v1 << 1.0, 0.0;
    else
      v1 << 0.0, 1.0;
    v1.normalize();
    comp.col(0) = v1;
    comp.col(1) = Eigen::Vector2d(-v1[1], v1[0]);
  }
  // sign convention: the largest-magnitude entry of each axis is positive
  for (int j = 0; j < 2; ++j) {
    const int imax = std::fabs(comp(0, j)) >= std::fabs(comp(1, j)) ? 0 : 1;
    if (comp(imax, j) < 0.0) comp.col(j) = -comp.col(j);
  }
  pca.components = comp;
  return pca;
}

Eigen::MatrixXd pca2_scores(const Pca2& pca,
                            const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  return (rows.rowwise() - pca.means) * pca.components;
}

namespace {

struct SeasonStats {
  double evi_med = 0.0, evi_q05 = 0.0, evi_q95 = 0.0;
  double band_evi = 0.0, band_flood = 0.0;
};

SeasonStats season_stats(const Scene& scene, const PixelSeries& px, int year) {
  const Calendar& cal = scene.calendar;
  const int y = cal.year_index(year);
  const int steps = cal.steps_per_season;
  std::vector<double> evi, flood;
  evi.reserve(static_cast<std::size_t>(steps));
  flood.reserve(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const int flat = cal.flat_step(y, s);
    flood.push_back(px.flood_frac[flat]);
    if (!px.evi_missing[static_cast<std::size_t>(flat)])
      evi.push_back(px.evi[flat]);
  }
  if (evi.empty())
    throw DataError("pixel " + px.pixel_id + " has an all-missing EVI season (year " +
                    std::to_string(year) + ")");
  SeasonStats st;
  st.evi_med = median_linear(evi);
  st.evi_q05 = quantile_linear(evi, 5.0);
  st.evi_q95 = quantile_linear(evi, 95.0);
  st.band_evi = st.evi_med;
  st.band_flood = median_linear(flood);
  return st;
}

FeatureTable features_for(const Scene& scene,
                          const std::vector<const PixelSeries*>& pixels,
                          const std::vector<int>& years,
                          const std::vector<std::uint8_t>& labels) {
  FeatureTable table;
  const int n = static_cast<int>(pixels.size());
  table.band_medians.resize(n, 2);
  table.base.resize(n, 5);
  table.pixel_id.reserve(static_cast<std::size_t>(n));
  table.year = years;
  table.label = labels;
  for (int i = 0; i < n; ++i) {
    const auto& px = *pixels[static_cast<std::size_t>(i)];
    table.pixel_id.push_back(px.pixel_id);
    table.district.push_back(scene.district_index(px.district_id));
    const auto st = season_stats(scene, px, years[static_cast<std::size_t>(i)]);
    table.band_medians(i, 0) = st.band_evi;
    table.band_medians(i, 1) = st.band_flood;
    table.base(i, 0) = st.evi_med;
    table.base(i, 1) = st.evi_q05;
    table.base(i, 2) = st.evi_q95;
    table.base(i, 3) = px.elevation;
    table.base(i, 4) = px.slope;
  }
  if (n >= 2) {
    const Pca2 pca = pca2_fit(table.band_medians);
    table.pc_scores = pca2_scores(pca, table.band_medians);
  } else {
    table.pc_scores = Eigen::MatrixXd::Zero(n, 2);
  }
  return table;
}

}  // namespace

FeatureTable build_features(const Scene& scene,
                            const std::vector<LabeledPoint>& points) {
  std::map<std::string, const PixelSeries*> by_id;
  for (const auto& px : scene.pixels) by_id[px.pixel_id] = &px;
  std::vector<const PixelSeries*> pixels;
  std::vector<int> years;
  std::vector<std::uint8_t> labels;
  for (const auto& pt : points) {
    const auto it = by_id.find(pt.pixel_id);
    if (it == by_id.end())
      throw DataError("labeled point references unknown pixel_id '" +
                      pt.pixel_id + "'");
    if (!scene.calendar.has_year(pt.year))
      throw DataError("labeled point year " + std::to_string(pt.year) +
                      " outside calendar (pixel " + pt.pixel_id + ")");
    pixels.push_back(it->second);
    years.push_back(pt.year);
    labels.push_back(pt.rice ? 1 : 0);
  }
  return features_for(scene, pixels, years, labels);
}

FeatureTable build_features_all(const Scene& scene, int year) {
  if (!scene.calendar.has_year(year))
    throw DataError("year " + std::to_string(year) + " outside calendar");
  std::vector<const PixelSeries*> pixels;
  std::vector<int> years;
  for (const auto& px : scene.pixels) {
    pixels.push_back(&px);
    years.push_back(year);
  }
  return features_for(scene, pixels, years, {});
}

void RfConfig::validate() const {
  if (n_trees < 1) throw UsageError("rf: n_trees must be >= 1");
  if (min_leaf < 1) throw UsageError("rf: min_leaf must be >= 1");
  if (features_per_split < 0)
    throw UsageError("rf: features_per_split must be >= 0");
}

bool Tree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& nd = nodes[static_cast<std::size_t>(node)];
    node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes[static_cast<std::size_t>(node)].leaf_label != 0;
}

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const std::vector<std::uint8_t>& y;
  int mtry;
  int min_leaf;
  Rng& rng;
  Tree tree;

  int build(std::vector<int>& idx, int lo, int hi) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    int n_pos = 0;
    for (int i = lo; i < hi; ++i) n_pos += y[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    const int n = hi - lo;
    // ties at a leaf go to the negative class
    const std::uint8_t majority = 2 * n_pos > n ? 1 : 0;
    if (n_pos == 0 || n_pos == n || n < 2 * min_leaf) {
      tree.nodes[static_cast<std::size_t>(node_id)].leaf_label = majority;
      return node_id;
    }

    // sample features without replacement, then search in index order so
    // ties break deterministically toward the lowest feature
    const int p = static_cast<int>(X.cols());
    std::vector<int> pool(static_cast<std::size_t>(p));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < mtry; ++i) {
      const int j = i + static_cast<int>(rng.uniform_int(
                            static_cast<std::uint64_t>(p - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> candidates(pool.begin(), pool.begin() + mtry);
    std::sort(candidates.begin(), candidates.end());

    double best_gini = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, std::uint8_t>> vals(static_cast<std::size_t>(n));
    for (int f : candidates) {
      for (int i = 0; i < n; ++i) {
        const int row = idx[static_cast<std::size_t>(lo + i)];
        vals[static_cast<std::size_t>(i)] = {X(row, f), y[static_cast<std::size_t>(row)]};
      }
      std::sort(vals.begin(), vals.end());
      int left_n = 0, left_pos = 0;
      for (int i = 0; i < n - 1; ++i) {
        ++left_n;
        left_pos += vals[static_cast<std::size_t>(i)].second;
        if (vals[static_cast<std::size_t>(i)].first ==
            vals[static_cast<std::size_t>(i + 1)].first)
          continue;  // threshold must separate distinct values
        const int right_n = n - left_n;
        if (left_n < min_leaf || right_n < min_leaf) continue;
        const int right_pos = n_pos - left_pos;
        const double pl = static_cast<double>(left_pos) / left_n;
        const double pr = static_cast<double>(right_pos) / right_n;
        const double gini = left_n * 2.0 * pl * (1.0 - pl) +
                            right_n * 2.0 * pr * (1.0 - pr);
        if (gini < best_gini - 1e-12) {
          best_gini = gini;
          best_feature = f;
          best_threshold = 0.5 * (vals[static_cast<std::size_t>(i)].first +
                                  vals[static_cast<std::size_t>(i + 1)].first);
        }
      }
    }
    if (best_feature < 0) {
      tree.nodes[static_cast<std::size_t>(node_id)].leaf_label = majority;
      return node_id;
    }

    const auto mid_it = std::partition(
        idx.begin() + lo, idx.begin() + hi, [&](int row) {
          return X(row, best_feature) <= best_threshold;
        });
    const int mid = static_cast<int>(mid_it - idx.begin());
    // partition cannot be empty: the threshold separates distinct values
    const int left = build(idx, lo, mid);
    const int right = build(idx, mid, hi);
    auto& nd = tree.nodes[static_cast<std::size_t>(node_id)];
    nd.feature = best_feature;
    nd.threshold = best_threshold;
    nd.left = left;
    nd.right = right;
    return node_id;
  }
};

}  // namespace

Eigen::MatrixXd RfModel::design(const FeatureTable& rows) const {
  if (rows.base_names != std::vector<std::string>(feature_names.begin() + 2,
                                                  feature_names.end()))
    throw DataError("feature schema mismatch between model and rows");
  Eigen::MatrixXd X(rows.n(), 2 + rows.base.cols());
  X.leftCols(2) = pca2_scores(pca, rows.band_medians);
  X.rightCols(rows.base.cols()) = rows.base;
  return X;
}

std::vector<std::uint8_t> RfModel::predict(const FeatureTable& rows) const {
  const Eigen::MatrixXd X = design(rows);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(rows.n()), 0);
  for (int i = 0; i < rows.n(); ++i) {
    int votes = 0;
    for (const auto& tree : trees) votes += tree.predict_row(X.row(i)) ? 1 : 0;
    out[static_cast<std::size_t>(i)] =
        2 * votes > static_cast<int>(trees.size()) ? 1 : 0;
  }
  return out;
}

RfModel train_rf(const FeatureTable& rows, const RfConfig& cfg) {
  cfg.validate();
  if (!rows.labeled()) throw DataError("train_rf: rows are unlabeled");
  const int n = rows.n();
  if (n < 2 * cfg.min_leaf)
    throw DataError("train_rf: need at least 2*min_leaf rows");
  {
    bool any0 = false, any1 = false;
    for (auto l : rows.label) (l ? any1 : any0) = true;
    if (!any0 || !any1)
      throw DataError("train_rf: single-class training set");
  }

  // canonical row order, so bootstrap draws are keyed to row identity
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto sa = static_cast<std::size_t>(a), sb = static_cast<std::size_t>(b);
    if (rows.pixel_id[sa] != rows.pixel_id[sb])
      return rows.pixel_id[sa] < rows.pixel_id[sb];
    return rows.year[sa] < rows.year[sb];
  });

  RfModel model;
  model.config = cfg;
  model.pca = pca2_fit(rows.band_medians);
  model.feature_names = {"pc1", "pc2"};
  for (const auto& nm : rows.base_names) model.feature_names.push_back(nm);
  {
    std::set<std::string> dset;
    std::set<int> yset;
    for (int i = 0; i < n; ++i) yset.insert(rows.year[static_cast<std::size_t>(i)]);
    for (int d : rows.district) dset.insert(std::to_string(d));
    model.training_districts.assign(dset.begin(), dset.end());
    model.training_years.assign(yset.begin(), yset.end());
  }

  Eigen::MatrixXd X_unsorted(n, 2 + rows.base.cols());
  X_unsorted.leftCols(2) = pca2_scores(model.pca, rows.band_medians);
  X_unsorted.rightCols(rows.base.cols()) = rows.base;
  Eigen::MatrixXd X(n, X_unsorted.cols());
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    X.row(i) = X_unsorted.row(order[static_cast<std::size_t>(i)]);
    y[static_cast<std::size_t>(i)] = rows.label[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }

  const int p = static_cast<int>(X.cols());
  const int mtry = cfg.features_per_split > 0
                       ? std::min(cfg.features_per_split, p)
                       : static_cast<int>(std::ceil(std::sqrt(p)));

  model.trees.resize(static_cast<std::size_t>(cfg.n_trees));
  std::vector<std::vector<std::uint8_t>> in_bag(
      static_cast<std::size_t>(cfg.n_trees));
  parallel_for(cfg.n_trees, cfg.threads, [&](int t) {
    auto rng = Rng::substream(cfg.rng_seed, "rf.tree",
                              static_cast<std::uint64_t>(t));
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n));
    auto& bag = in_bag[static_cast<std::size_t>(t)];
    bag.assign(static_cast<std::size_t>(n), 0);
    if (cfg.bootstrap) {
      for (int i = 0; i < n; ++i) {
        const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        idx.push_back(j);
        bag[static_cast<std::size_t>(j)] = 1;
      }
    } else {
      for (int i = 0; i < n; ++i) idx.push_back(i);
      std::fill(bag.begin(), bag.end(), 1);
    }
    // degenerate bootstrap (single class) falls back to a majority leaf
    TreeBuilder builder{X, y, mtry, cfg.min_leaf, rng, {}};
    builder.build(idx, 0, static_cast<int>(idx.size()));
    model.trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
  });

  if (cfg.bootstrap) {
    long long correct = 0, counted = 0;
    for (int i = 0; i < n; ++i) {
      int votes = 0, voters = 0;
      for (int t = 0; t < cfg.n_trees; ++t) {
        if (in_bag[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
        ++voters;
        votes += model.trees[static_cast<std::size_t>(t)].predict_row(X.row(i)) ? 1 : 0;
      }
      if (voters == 0) continue;
      const std::uint8_t pred = 2 * votes > voters ? 1 : 0;
      ++counted;
      if (pred == y[static_cast<std::size_t>(i)]) ++correct;
    }
    if (counted > 0)
      model.oob_accuracy =
          static_cast<double>(correct) / static_cast<double>(counted);
  }
  return model;
}

std::vector<std::uint8_t> majority_vote(const std::vector<RfModel>& models,
                                        const FeatureTable& rows) {
  if (models.empty()) throw UsageError("majority_vote: need at least 1 model");
  std::vector<int> votes(static_cast<std::size_t>(rows.n()), 0);
  for (const auto& model : models) {
    const auto pred = model.predict(rows);
    for (int i = 0; i < rows.n(); ++i)
      votes[static_cast<std::size_t>(i)] += pred[static_cast<std::size_t>(i)];
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(rows.n()), 0);
  const int m = static_cast<int>(models.size());
  for (int i = 0; i < rows.n(); ++i)
    out[static_cast<std::size_t>(i)] =
        2 * votes[static_cast<std::size_t>(i)] > m ? 1 : 0;  // ties -> non-rice
  return out;
}

namespace {

FeatureTable subset(const FeatureTable& rows, const std::vector<int>& keep) {
  FeatureTable out;
  out.base_names = rows.base_names;
  const int m = static_cast<int>(keep.size());
  out.band_medians.resize(m, rows.band_medians.cols());
  out.base.resize(m, rows.base.cols());
  out.pc_scores.setZero(m, 2);
  for (int i = 0; i < m; ++i) {
    const int r = keep[static_cast<std::size_t>(i)];
    out.pixel_id.push_back(rows.pixel_id[static_cast<std::size_t>(r)]);
    out.year.push_back(rows.year[static_cast<std::size_t>(r)]);
    out.district.push_back(rows.district[static_cast<std::size_t>(r)]);
    out.band_medians.row(i) = rows.band_medians.row(r);
    out.base.row(i) = rows.base.row(r);
    if (rows.pc_scores.rows() == rows.n())
      out.pc_scores.row(i) = rows.pc_scores.row(r);
    if (rows.labeled())
      out.label.push_back(rows.label[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace

LoocvResult loocv_by_region(const FeatureTable& rows, const RfConfig& cfg,
                            const std::vector<std::string>& district_ids,
                            std::optional<int> test_year) {
  if (!rows.labeled()) throw DataError("loocv: rows are unlabeled");
  std::set<int> districts(rows.district.begin(), rows.district.end());
  if (districts.size() < 2)
    throw DataError("loocv: need at least 2 districts");

  LoocvResult result;
  for (int held_out : districts) {
    std::vector<int> train_idx, eval_idx;
    for (int i = 0; i < rows.n(); ++i) {
      const bool is_test_year =
          test_year && rows.year[static_cast<std::size_t>(i)] == *test_year;
      if (is_test_year) continue;
      if (rows.district[static_cast<std::size_t>(i)] == held_out)
        eval_idx.push_back(i);
      else
        train_idx.push_back(i);
    }
    const std::string held_id =
        held_out >= 0 && held_out < static_cast<int>(district_ids.size())
            ? district_ids[static_cast<std::size_t>(held_out)]
            : std::to_string(held_out);
    if (eval_idx.empty())
      throw DataError("loocv: district " + held_id + " has no rows");

    const RfModel model = train_rf(subset(rows, train_idx), cfg);
    const FeatureTable eval_rows = subset(rows, eval_idx);
    const auto pred = model.predict(eval_rows);
    long long correct = 0;
    for (int i = 0; i < eval_rows.n(); ++i) {
      const bool truth = eval_rows.label[static_cast<std::size_t>(i)] != 0;
      const bool voted = pred[static_cast<std::size_t>(i)] != 0;
      if (truth == voted) ++correct;
      if (truth && voted) ++result.report.fold_tp;
      if (truth && !voted) ++result.report.fold_fn;
      if (!truth && voted) ++result.report.fold_fp;
      if (!truth && !voted) ++result.report.fold_tn;
    }
    result.report.fold_accuracy.emplace_back(
        held_id, static_cast<double>(correct) / eval_rows.n());
    result.fold_models.push_back(model);
  }

  double sum = 0.0;
  for (const auto& [id, acc] : result.report.fold_accuracy) sum += acc;
  result.report.mean_fold_accuracy =
      sum / static_cast<double>(result.report.fold_accuracy.size());

  if (test_year) {
    std::vector<int> test_idx;
    for (int i = 0; i < rows.n(); ++i)
      if (rows.year[static_cast<std::size_t>(i)] == *test_year)
        test_idx.push_back(i);
    if (!test_idx.empty()) {
      const FeatureTable test_rows = subset(rows, test_idx);
      const auto voted = majority_vote(result.fold_models, test_rows);
      long long correct = 0;
      for (int i = 0; i < test_rows.n(); ++i) {
        const bool truth = test_rows.label[static_cast<std::size_t>(i)] != 0;
        const bool v = voted[static_cast<std::size_t>(i)] != 0;
        if (truth == v) ++correct;
        if (truth && v) ++result.report.test_tp;
        if (truth && !v) ++result.report.test_fn;
        if (!truth && v) ++result.report.test_fp;
        if (!truth && !v) ++result.report.test_tn;
      }
      result.report.test_year_accuracy =
          static_cast<double>(correct) / test_rows.n();
    }
  }
  return result;
}

void write_accuracy_csv(const AccuracyReport& report,
                        const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"fold", "accuracy", "tp", "fn", "fp", "tn"});
  for (const auto& [id, acc] : report.fold_accuracy)
    out.write_row({id, fmt_double(acc), "", "", "", ""});
  out.write_row({"mean_fold", fmt_double(report.mean_fold_accuracy),
                 fmt_int(report.fold_tp), fmt_int(report.fold_fn),
                 fmt_int(report.fold_fp), fmt_int(report.fold_tn)});
  if (report.test_year_accuracy >= 0.0)
    out.write_row({"test_year", fmt_double(report.test_year_accuracy),
                   fmt_int(report.test_tp), fmt_int(report.test_fn),
                   fmt_int(report.test_fp), fmt_int(report.test_tn)});
  out.close();
}

namespace {

json pca_to_json(const Pca2& pca) {
  return json{{"components",
               {{pca.components(0, 0), pca.components(0, 1)},
                {pca.components(1, 0), pca.components(1, 1)}}},
              {"eigenvalues", {pca.eigenvalues[0], pca.eigenvalues[1]}},
              {"means", {pca.means[0], pca.means[1]}},
              {"degenerate", pca.degenerate}};
}

Pca2 pca_from_json(const json& j) {
  Pca2 pca;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      pca.components(r, c) = j.at("components")[r][c].get<double>();
  pca.eigenvalues << j.at("eigenvalues")[0].get<double>(),
      j.at("eigenvalues")[1].get<double>();
  pca.means << j.at("means")[0].get<double>(), j.at("means")[1].get<double>();
  pca.degenerate = j.at("degenerate").get<bool>();
  return pca;
}

}  // namespace

void save_model_json(const RfModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "goldilocks-rf";
  j["version"] = 1;
  j["feature_names"] = model.feature_names;
  j["pca"] = pca_to_json(model.pca);
  j["config"] = {{"n_trees", model.config.n_trees},
                 {"min_leaf", model.config.min_leaf},
                 {"features_per_split", model.config.features_per_split},
                 {"bootstrap", model.config.bootstrap},
                 {"rng_seed", model.config.rng_seed}};
  j["training_districts"] = model.training_districts;
  j["training_years"] = model.training_years;
  j["oob_accuracy"] = model.oob_accuracy;
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& nd : tree.nodes)
      nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right,
                       static_cast<int>(nd.leaf_label)});
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump() << "\n";
}

RfModel load_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model file is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "goldilocks-rf")
    throw DataError("not a goldilocks-rf model: " + path.string());
  RfModel model;
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  model.pca = pca_from_json(j.at("pca"));
  const auto& jc = j.at("config");
  model.config.n_trees = jc.at("n_trees").get<int>();
  model.config.min_leaf = jc.at("min_leaf").get<int>();
  model.config.features_per_split = jc.at("features_per_split").get<int>();
  model.config.bootstrap = jc.at("bootstrap").get<bool>();
  model.config.rng_seed = jc.at("rng_seed").get<std::uint64_t>();
  model.training_districts =
      j.at("training_districts").get<std::vector<std::string>>();
  model.training_years = j.at("training_years").get<std::vector<int>>();
  model.oob_accuracy = j.at("oob_accuracy").get<double>();
  for (const auto& jt : j.at("trees")) {
    Tree tree;
    for (const auto& jn : jt) {
      TreeNode nd;
      nd.feature = jn[0].get<int>();
      nd.threshold = jn[1].get<double>();
      nd.left = jn[2].get<int>();
      nd.right = jn[3].get<int>();
      nd.leaf_label = static_cast<std::uint8_t>(jn[4].get<int>());
      tree.nodes.push_back(nd);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace goldi::rice
