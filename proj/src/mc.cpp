#include "goldi/mc.hpp"

#include <algorithm>
#include <cmath>

#include "goldi/csv.hpp"
#include "goldi/econ.hpp"
#include "goldi/error.hpp"
#include "goldi/parallel.hpp"
#include "goldi/rng.hpp"
#include "goldi/stats.hpp"

namespace goldi::mc {

void TrialData::validate() const {
  const auto m = unit_id.size();
  if (adopted.size() != m ||
      static_cast<std::size_t>(flood_duration.size()) != m ||
      static_cast<std::size_t>(yield.size()) != m)
    throw DataError("trial data: column lengths differ");
  for (std::size_t i = 0; i < m; ++i) {
    if (flood_duration[static_cast<Eigen::Index>(i)] < 0.0)
      throw DataError("trial data: negative flood_duration at unit " +
                      std::to_string(unit_id[i]));
    if (yield[static_cast<Eigen::Index>(i)] < 0.0)
      throw DataError("trial data: negative yield at unit " +
                      std::to_string(unit_id[i]));
  }
}

TrialData synth_trial_data(const TrialGenConfig& cfg) {
  if (cfg.n < 4) throw UsageError("trial data: n must be >= 4");
  TrialData data;
  data.unit_id.resize(static_cast<std::size_t>(cfg.n));
  data.adopted.resize(static_cast<std::size_t>(cfg.n));
  data.flood_duration.resize(cfg.n);
  data.yield.resize(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    auto rng = Rng::substream(cfg.rng_seed, "trial.unit",
                              static_cast<std::uint64_t>(i));
    data.unit_id[static_cast<std::size_t>(i)] = i + 1;
    const bool adopt = rng.bernoulli(cfg.adopter_share);
    data.adopted[static_cast<std::size_t>(i)] = adopt ? 1 : 0;
    const double flood = std::max(0.0, rng.normal(cfg.flood_mu, cfg.flood_sd));
    data.flood_duration[i] = flood;
    const double a = adopt ? 1.0 : 0.0;
    const double mean = cfg.intercept + cfg.adoption_effect * a +
                        cfg.flood_effect * flood +
                        cfg.interaction * a * flood;
    data.yield[i] = std::max(0.0, mean + rng.normal(0.0, cfg.resid_sd));
  }
  data.validate();
  return data;
}

namespace {

// regression on possibly perturbed columns; HC1 via singleton clusters,
// t with n-k degrees of freedom
BaseReg regress(const std::vector<std::uint8_t>& adopted,
                const Eigen::VectorXd& flood, const Eigen::VectorXd& yield) {
  const Eigen::Index n = flood.size();
  bool any_a = false, any_n = false;
  for (auto a : adopted) (a ? any_a : any_n) = true;
  if (!any_a || !any_n)
    throw DataError("base_regression: need both adopters and non-adopters");

  Eigen::MatrixXd X(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = adopted[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    X(i, 0) = 1.0;
    X(i, 1) = a;
    X(i, 2) = flood[i];
    X(i, 3) = a * flood[i];
  }
  const econ::OlsFit fit = econ::ols(X, yield);
  if (fit.rank != 4) throw DataError("base_regression: degenerate design");

  Eigen::VectorXi singleton(n);
  for (Eigen::Index i = 0; i < n; ++i) singleton[i] = static_cast<int>(i);
  const Eigen::MatrixXd vcov =
      econ::cluster_vcov(X, fit.residuals, singleton, fit.xtx_inv, 4);

  BaseReg out;
  out.n = static_cast<int>(n);
  out.coef = fit.coef;
  out.se.resize(4);
  out.t.resize(4);
  out.p.resize(4);
  const double df = static_cast<double>(n - 4);
  for (int j = 0; j < 4; ++j) {
    out.se[j] = std::sqrt(std::max(0.0, vcov(j, j)));
    out.t[j] = out.coef[j] / out.se[j];
    out.p[j] = student_t_two_sided_p(out.t[j], df);
  }
  return out;
}

double column_sd(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() /
                   static_cast<double>(v.size() - 1));
}

}  // namespace

BaseReg base_regression(const TrialData& data) {
  data.validate();
  return regress(data.adopted, data.flood_duration, data.yield);
}

McTarget parse_target(const std::string& s) {
  if (s == "flood") return McTarget::flood;
  if (s == "yield") return McTarget::yield;
  if (s == "adoption") return McTarget::adoption;
  throw UsageError("mc target must be flood, yield, or adoption; got '" + s +
                   "'");
}

std::vector<double> default_levels(McTarget target) {
  std::vector<double> levels;
  const int top = target == McTarget::adoption ? 50 : 20;
  for (int i = 0; i <= top; ++i) levels.push_back(static_cast<double>(i));
  return levels;
}

namespace {

void check_config(const McConfig& cfg) {
  if (cfg.reps < 1) throw UsageError("mc: reps must be >= 1");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
    throw UsageError("mc: alpha must be in (0,1)");
  if (cfg.hist_bins < 1) throw UsageError("mc: hist_bins must be >= 1");
  for (std::size_t i = 1; i < cfg.levels.size(); ++i)
    if (cfg.levels[i] <= cfg.levels[i - 1])
      throw UsageError("mc: levels must be sorted ascending");
}

McResult reduce(const McConfig& cfg, McTarget target,
                const std::vector<double>& levels,
                const Eigen::MatrixXd& pvals) {
  McResult result;
  result.target = target;
  result.levels = levels;
  result.reps = cfg.reps;
  result.alpha = cfg.alpha;
  const auto n_levels = static_cast<Eigen::Index>(levels.size());
  result.share_significant.resize(n_levels);
  result.p_hist = Eigen::MatrixXd::Zero(n_levels, cfg.hist_bins);
  for (Eigen::Index l = 0; l < n_levels; ++l) {
    int sig = 0;
    for (int r = 0; r < cfg.reps; ++r) {
      const double p = pvals(l, r);
      if (p < cfg.alpha) ++sig;
      int bin = static_cast<int>(p * cfg.hist_bins);
      bin = std::clamp(bin, 0, cfg.hist_bins - 1);
      result.p_hist(l, bin) += 1.0;
    }
    result.share_significant[l] =
        static_cast<double>(sig) / static_cast<double>(cfg.reps);
  }
  return result;
}

}  // namespace

McResult mc_noise(const TrialData& data, const McConfig& cfg) {
  data.validate();
  check_config(cfg);
  if (cfg.target == McTarget::adoption)
    throw UsageError("mc_noise: target must be flood or yield");
  const auto levels =
      cfg.levels.empty() ? default_levels(cfg.target) : cfg.levels;
  const bool on_flood = cfg.target == McTarget::flood;
  const double sd = column_sd(on_flood ? data.flood_duration : data.yield);
  const Eigen::Index n = data.flood_duration.size();

  const auto n_levels = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXd pvals(n_levels, cfg.reps);
  const char* stream = on_flood ? "mc.noise.flood" : "mc.noise.yield";
  parallel_for(cfg.reps, cfg.threads, [&](int rep) {
    // one standard normal vector per replicate, scaled by each level
    auto rng = Rng::substream(cfg.rng_seed, stream,
                              static_cast<std::uint64_t>(rep));
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    Eigen::VectorXd flood = data.flood_duration;
    Eigen::VectorXd yield = data.yield;
    for (Eigen::Index l = 0; l < n_levels; ++l) {
      const double tau = levels[static_cast<std::size_t>(l)] / 100.0 * sd;
      if (on_flood)
        flood = data.flood_duration + tau * z;
      else
        yield = data.yield + tau * z;
      pvals(l, rep) = regress(data.adopted, flood, yield).interaction_p();
    }
  });
  return reduce(cfg, cfg.target, levels, pvals);
}

McResult mc_misclassify(const TrialData& data, const McConfig& cfg) {
  data.validate();
  check_config(cfg);
  if (cfg.target != McTarget::adoption)
    throw UsageError("mc_misclassify: target must be adoption");
  const auto levels =
      cfg.levels.empty() ? default_levels(McTarget::adoption) : cfg.levels;
  const int n = data.n();

  const auto n_levels = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXd pvals(n_levels, cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](int rep) {
    auto rng = Rng::substream(cfg.rng_seed, "mc.flip",
                              static_cast<std::uint64_t>(rep));
    const std::vector<int> perm = rng.permutation(n);
    std::vector<std::uint8_t> adopted = data.adopted;
    int flipped = 0;
    for (Eigen::Index l = 0; l < n_levels; ++l) {
      const int k = static_cast<int>(
          std::lround(levels[static_cast<std::size_t>(l)] / 100.0 * n));
      while (flipped < k) {  // nested flip sets across levels
        const auto u = static_cast<std::size_t>(perm[static_cast<std::size_t>(flipped)]);
        adopted[u] ^= 1;
        ++flipped;
      }
      pvals(l, rep) =
          regress(adopted, data.flood_duration, data.yield).interaction_p();
    }
  });
  return reduce(cfg, McTarget::adoption, levels, pvals);
}

TrialData read_trial_csv(const std::filesystem::path& path) {
  const auto csv = read_csv(path);
  const auto c_u = csv.col("unit_id");
  const auto c_a = csv.col("adopted");
  const auto c_f = csv.col("flood_duration");
  const auto c_y = csv.col("yield");
  TrialData data;
  const auto m = csv.rows.size();
  data.unit_id.reserve(m);
  data.adopted.reserve(m);
  data.flood_duration.resize(static_cast<Eigen::Index>(m));
  data.yield.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = csv.rows[i];
    data.unit_id.push_back(
        static_cast<int>(parse_int(row[c_u], "unit_id, trial row")));
    data.adopted.push_back(
        parse_bool01(row[c_a], "adopted, unit " + row[c_u]) ? 1 : 0);
    data.flood_duration[static_cast<Eigen::Index>(i)] =
        parse_double(row[c_f], "flood_duration, unit " + row[c_u]);
    data.yield[static_cast<Eigen::Index>(i)] =
        parse_double(row[c_y], "yield, unit " + row[c_u]);
  }
  data.validate();
  return data;
}

void write_trial_csv(const TrialData& data, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"unit_id", "adopted", "flood_duration", "yield"});
  for (int i = 0; i < data.n(); ++i)
    out.write_row({fmt_int(data.unit_id[static_cast<std::size_t>(i)]),
                   data.adopted[static_cast<std::size_t>(i)] ? "1" : "0",
                   fmt_double(data.flood_duration[i]),
                   fmt_double(data.yield[i])});
  out.close();
}

void write_mc_csv(const McResult& result, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"level", "share_significant", "reps"});
  for (std::size_t l = 0; l < result.levels.size(); ++l)
    out.write_row({fmt_double(result.levels[l]),
                   fmt_double(result.share_significant[static_cast<Eigen::Index>(l)]),
                   fmt_int(result.reps)});
  out.close();
}

void write_mc_hist_csv(const McResult& result,
                       const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"level", "bin_lo", "bin_hi", "count"});
  const int bins = static_cast<int>(result.p_hist.cols());
  for (std::size_t l = 0; l < result.levels.size(); ++l) {
    for (int b = 0; b < bins; ++b) {
      out.write_row({fmt_double(result.levels[l]),
                     fmt_double(static_cast<double>(b) / bins),
                     fmt_double(static_cast<double>(b + 1) / bins),
                     fmt_double(result.p_hist(static_cast<Eigen::Index>(l), b))});
    }
  }
  out.close();
}

}  // namespace goldi::mc
