#include "robsvm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "robsvm/rng.hpp"

namespace robsvm {

namespace {

// sub-stream seed offsets; documented in docs/formats.md
constexpr std::uint64_t kContaminationSeedOffset = 0x100000000ULL;
constexpr std::uint64_t kCvSeedOffset = 0x200000000ULL;
constexpr std::uint64_t kAwgnSeedOffset = 0x300000000ULL;

}  // namespace

Dataset gen_synthetic(const SyntheticSpec& spec) {
  require(spec.n >= 2, ErrorCode::InvalidArgument, "need n >= 2");
  require(spec.sigma_diag.minCoeff() > 0.0, ErrorCode::InvalidArgument,
          "variances must be positive");
  SplitMix64 rng(spec.seed);
  Dataset ds;
  ds.features.resize(spec.n, 2);
  ds.labels.resize(spec.n);
  const Eigen::Vector2d sd = spec.sigma_diag.cwiseSqrt();
  // per instance: one label bit, then one normal per coordinate
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const double y = rng.next_bit() ? 1.0 : -1.0;
    ds.labels[i] = y;
    for (int j = 0; j < 2; ++j)
      ds.features(i, j) = y * spec.mu[j] + sd[j] * rng.next_normal();
  }
  return ds;
}

Dataset contaminate_synthetic(const Dataset& ds, const ContaminationSpec& spec) {
  ds.validate();
  require(ds.dim() == 2, ErrorCode::DimensionMismatch,
          "contamination model is bivariate");
  require(spec.ratio >= 0.0 && spec.ratio <= 1.0, ErrorCode::InvalidArgument,
          "ratio must be in [0,1]");
  const Eigen::Index n = ds.n();
  const Eigen::Index count = ceil_count(spec.ratio * static_cast<double>(n));
  Dataset out = ds;
  if (count == 0) return out;

  const Eigen::Matrix2d chol = spec.sigma_c.llt().matrixL();
  const int dof = spec.family == ContaminationFamily::T5   ? 5
                  : spec.family == ContaminationFamily::T1 ? 1
                                                           : 0;

  SplitMix64 rng(spec.seed);
  // partial Fisher-Yates selects `count` distinct rows
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::Index j =
        i + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }

  // per replaced row: two feature normals, dof chi-square normals (Student
  // families), then the label bit
  for (Eigen::Index t = 0; t < count; ++t) {
    const Eigen::Index row = order[static_cast<size_t>(t)];
    Eigen::Vector2d z(rng.next_normal(), rng.next_normal());
    double scale = 1.0;
    if (dof > 0) {
      double chi2 = 0.0;
      for (int s = 0; s < dof; ++s) {
        const double w = rng.next_normal();
        chi2 += w * w;
      }
      scale = std::sqrt(static_cast<double>(dof) / chi2);
    }
    out.features.row(row) = (chol * z * scale).transpose();
    out.labels[row] = rng.next_bit() ? 1.0 : -1.0;
  }
  return out;
}

Dataset awgn(const Dataset& ds, double snr_db, std::uint64_t seed) {
  ds.validate();
  require(std::isfinite(snr_db), ErrorCode::InvalidArgument,
          "snr_db must be finite");
  SplitMix64 rng(seed);
  Dataset out = ds;
  // column by column; zero-power columns consume no draws
  for (Eigen::Index j = 0; j < ds.dim(); ++j) {
    const double power = ds.features.col(j).squaredNorm() /
                         static_cast<double>(ds.n());
    if (power <= 0.0) continue;
    const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      out.features(i, j) += sigma * rng.next_normal();
  }
  return out;
}

BoundaryEstimate extract_linear_boundary(const TrainedModel& model) {
  require(model.support_data.cols() == 2, ErrorCode::DimensionMismatch,
          "boundary extraction needs 2-d data");
  const Eigen::VectorXd w = linear_weights(model);
  require(std::fabs(w[1]) >= 1e-12, ErrorCode::VerticalBoundary,
          "boundary is vertical (w2 ~ 0)");
  return {-w[0] / w[1], -model.bias / w[1]};
}

double bayes_distance(const std::vector<BoundaryEstimate>& estimates, double m0,
                      double q0) {
  require(estimates.size() >= 2, ErrorCode::EmptyInput,
          "need at least two boundary estimates");
  const double n = static_cast<double>(estimates.size());
  double mean_m = 0.0, mean_q = 0.0;
  for (const auto& e : estimates) {
    mean_m += e.m;
    mean_q += e.q;
  }
  mean_m /= n;
  mean_q /= n;
  double ss_m = 0.0, ss_q = 0.0;
  for (const auto& e : estimates) {
    ss_m += (e.m - mean_m) * (e.m - mean_m);
    ss_q += (e.q - mean_q) * (e.q - mean_q);
  }
  const double sd_m = std::sqrt(ss_m / (n - 1.0));
  const double sd_q = std::sqrt(ss_q / (n - 1.0));
  return std::fabs(mean_m - m0) * sd_m + std::fabs(mean_q - q0) * sd_q;
}

TrainedModel fit(const Dataset& ds, const TrainSettings& s,
                 const RescaleParams& rescale) {
  switch (s.variant) {
    case SvmVariant::CSvm:
      return train_csvm(ds, s.C, s.kernel, rescale);
    case SvmVariant::SpSvm:
      return train_spsvm(ds, s.C, s.kernel, NoiseSpec{s.noise, s.dof, s.alpha},
                         s.feature_index, rescale);
    case SvmVariant::EelSvm:
      return train_eelsvm(ds, s.d_over_n * static_cast<double>(ds.n()), s.kernel,
                          s.alpha, rescale);
  }
  fail(ErrorCode::InvalidArgument, "unknown variant");
}

size_t TuningGrid::combinations() const {
  size_t total = 1;
  for (const auto& [name, values] : axes) total *= values.size();
  return total;
}

namespace {

void apply_axis(TrainSettings& s, const std::string& name, double value) {
  if (name == "C")
    s.C = value;
  else if (name == "gamma")
    s.kernel.gamma = value;
  else if (name == "alpha")
    s.alpha = value;
  else if (name == "d_over_n")
    s.d_over_n = value;
  else if (name == "dof")
    s.dof = value;
  else
    fail(ErrorCode::InvalidArgument, "unknown grid axis '" + name + "'");
}

double majority_label(const Dataset& ds) {
  return ds.labels.sum() >= 0.0 ? 1.0 : -1.0;
}

Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  out.feature_names = ds.feature_names;
  for (size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = ds.labels[rows[i]];
  }
  return out;
}

}  // namespace

CvResult cross_validate(const Dataset& ds, const TrainSettings& base,
                        const TuningGrid& grid, int folds, std::uint64_t seed) {
  ds.validate();
  require(!grid.empty(), ErrorCode::EmptyInput, "tuning grid is empty");
  for (const auto& [name, values] : grid.axes)
    require(!values.empty(), ErrorCode::EmptyInput,
            "grid axis '" + name + "' has no values");
  require(folds >= 2, ErrorCode::InvalidArgument, "need at least 2 folds");
  require(ds.n() >= folds, ErrorCode::InvalidArgument, "more folds than rows");

  // stratified fold assignment: shuffle each class, deal round-robin
  SplitMix64 rng(seed);
  auto shuffled = [&](double label) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      if (ds.labels[i] == label) idx.push_back(i);
    for (size_t i = 0; i + 1 < idx.size(); ++i) {
      const size_t j = i + static_cast<size_t>(rng.next_below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    return idx;
  };
  std::vector<Eigen::Index> neg = shuffled(-1.0), pos = shuffled(1.0);

  std::vector<int> fold_of(static_cast<size_t>(ds.n()));
  const bool stratified = static_cast<int>(std::min(neg.size(), pos.size())) >=
                              folds ||
                          neg.empty() || pos.empty();
  if (stratified) {
    for (size_t t = 0; t < neg.size(); ++t)
      fold_of[static_cast<size_t>(neg[t])] = static_cast<int>(t % static_cast<size_t>(folds));
    for (size_t t = 0; t < pos.size(); ++t)
      fold_of[static_cast<size_t>(pos[t])] = static_cast<int>(t % static_cast<size_t>(folds));
  } else {
    std::fprintf(stderr,
                 "robsvm: warning: a class is smaller than the fold count; "
                 "using plain (non-stratified) folds\n");
    std::vector<Eigen::Index> all = neg;
    all.insert(all.end(), pos.begin(), pos.end());
    for (size_t i = 0; i + 1 < all.size(); ++i) {
      const size_t j = i + static_cast<size_t>(rng.next_below(all.size() - i));
      std::swap(all[i], all[j]);
    }
    for (size_t t = 0; t < all.size(); ++t)
      fold_of[static_cast<size_t>(all[t])] = static_cast<int>(t % static_cast<size_t>(folds));
  }

  std::vector<std::vector<Eigen::Index>> train_rows(static_cast<size_t>(folds)),
      test_rows(static_cast<size_t>(folds));
  for (Eigen::Index i = 0; i < ds.n(); ++i)
    for (int f = 0; f < folds; ++f)
      (f == fold_of[static_cast<size_t>(i)] ? test_rows : train_rows)[static_cast<size_t>(f)]
          .push_back(i);

  // enumerate combinations, first axis outermost
  std::vector<std::map<std::string, double>> combos;
  std::map<std::string, double> current;
  auto enumerate = [&](auto&& self, size_t axis) -> void {
    if (axis == grid.axes.size()) {
      combos.push_back(current);
      return;
    }
    for (double v : grid.axes[axis].second) {
      current[grid.axes[axis].first] = v;
      self(self, axis + 1);
    }
  };
  enumerate(enumerate, 0);

  CvResult result;
  result.best_accuracy = -1.0;
  for (const auto& combo : combos) {
    TrainSettings settings = base;
    for (const auto& [name, value] : combo) apply_axis(settings, name, value);

    double acc_sum = 0.0;
    for (int f = 0; f < folds; ++f) {
      const Dataset train = take_rows(ds, train_rows[static_cast<size_t>(f)]);
      const Dataset test = take_rows(ds, test_rows[static_cast<size_t>(f)]);
      double acc;
      if (!train.has_both_classes()) {
        // degenerate fold (e.g. leave-one-out on tiny data): constant
        // majority-class predictor
        const double lab = majority_label(train);
        Eigen::Index hits = 0;
        for (Eigen::Index i = 0; i < test.n(); ++i)
          if (test.labels[i] == lab) ++hits;
        acc = static_cast<double>(hits) / static_cast<double>(test.n());
      } else {
        const TrainedModel model = fit(train, settings);
        acc = accuracy(model, test);
      }
      acc_sum += acc;
    }
    const double mean_acc = acc_sum / static_cast<double>(folds);
    result.table.push_back({combo, mean_acc});
    if (mean_acc > result.best_accuracy) {  // strict: ties keep first combo
      result.best_accuracy = mean_acc;
      result.best = combo;
    }
  }
  return result;
}

double accuracy(const TrainedModel& model, const Dataset& test) {
  require(test.n() >= 1, ErrorCode::EmptyInput, "empty test set");
  const Predictions pred = predict(model, test.features);
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < test.n(); ++i)
    if (pred.labels[i] == test.labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(test.n());
}

const char* method_name(SvmVariant v) {
  switch (v) {
    case SvmVariant::CSvm: return "csvm";
    case SvmVariant::SpSvm: return "spsvm";
    case SvmVariant::EelSvm: return "eelsvm";
  }
  return "csvm";
}

SvmVariant method_from_name(const std::string& name) {
  if (name == "csvm" || name == "c-svm") return SvmVariant::CSvm;
  if (name == "spsvm" || name == "sp-svm") return SvmVariant::SpSvm;
  if (name == "eelsvm" || name == "eel-svm") return SvmVariant::EelSvm;
  fail(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

namespace {

TuningGrid default_sp_grid() {
  TuningGrid g;
  std::vector<double> alphas;
  for (int i = 50; i <= 60; ++i) alphas.push_back(static_cast<double>(i) / 100.0);
  g.axes.emplace_back("alpha", std::move(alphas));
  return g;
}

// EEL grid widens with the contamination ratio: {0,0.01,...,max(0.02,r)}
TuningGrid eel_grid_for_ratio(double r) {
  TuningGrid g;
  const long top = std::lround(std::max(0.02, r) * 100.0);
  std::vector<double> alphas;
  for (long i = 0; i <= top; ++i) alphas.push_back(static_cast<double>(i) / 100.0);
  g.axes.emplace_back("alpha", std::move(alphas));
  return g;
}

struct RepOutcome {
  bool ok = false;
  BoundaryEstimate boundary;
  double fit_seconds = 0.0;
};

}  // namespace

ExperimentConfig default_synthetic_config() {
  ExperimentConfig cfg;
  cfg.sp_grid = default_sp_grid();
  return cfg;
}

std::vector<BenchRow> run_synthetic_benchmark(const ExperimentConfig& cfg) {
  require(cfg.reps >= 1, ErrorCode::InvalidArgument, "need reps >= 1");
  require(!cfg.methods.empty(), ErrorCode::InvalidArgument, "no methods listed");
  const TuningGrid sp_grid =
      cfg.sp_grid.empty() ? default_sp_grid() : cfg.sp_grid;
  const TuningGrid eel_grid =
      cfg.eel_grid ? *cfg.eel_grid : eel_grid_for_ratio(cfg.r);

  const size_t n_methods = cfg.methods.size();
  std::vector<std::vector<RepOutcome>> results(
      n_methods, std::vector<RepOutcome>(static_cast<size_t>(cfg.reps)));

  auto run_rep = [&](int rep) {
    const std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(rep);
    Dataset ds = gen_synthetic({cfg.n, rep_seed, {0.5, -3.0}, {0.2, 3.0}});
    if (cfg.r > 0.0) {
      ContaminationSpec cs;
      cs.ratio = cfg.r;
      cs.family = cfg.family;
      cs.seed = rep_seed + kContaminationSeedOffset;
      ds = contaminate_synthetic(ds, cs);
    }
    if (cfg.snr_db) ds = awgn(ds, *cfg.snr_db, rep_seed + kAwgnSeedOffset);

    for (size_t mi = 0; mi < n_methods; ++mi) {
      const SvmVariant method = cfg.methods[mi];
      RepOutcome& out = results[mi][static_cast<size_t>(rep)];
      try {
        TrainSettings settings = cfg.base;
        settings.variant = method;
        const TuningGrid* grid = nullptr;
        if (method == SvmVariant::SpSvm) grid = &sp_grid;
        if (method == SvmVariant::EelSvm) grid = &eel_grid;

        if (grid && grid->combinations() > 1) {
          const CvResult cv = cross_validate(ds, settings, *grid, cfg.folds,
                                             rep_seed + kCvSeedOffset);
          for (const auto& [name, value] : cv.best)
            apply_axis(settings, name, value);
        } else if (grid && !grid->empty()) {
          for (const auto& [name, values] : grid->axes)
            apply_axis(settings, name, values.front());
        }

        const auto t0 = std::chrono::steady_clock::now();
        const TrainedModel model = fit(ds, settings);
        const auto t1 = std::chrono::steady_clock::now();
        out.boundary = extract_linear_boundary(model);
        out.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
        out.ok = true;
      } catch (const Error& e) {
        std::fprintf(stderr, "robsvm: rep %d, %s failed: %s\n", rep,
                     method_name(method), e.what());
      }
    }
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads,
                                            static_cast<unsigned>(cfg.reps)));
  if (threads == 1) {
    for (int rep = 0; rep < cfg.reps; ++rep) run_rep(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (int rep = next.fetch_add(1); rep < cfg.reps;
             rep = next.fetch_add(1))
          run_rep(rep);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<BenchRow> rows;
  for (size_t mi = 0; mi < n_methods; ++mi) {
    BenchRow row;
    row.method = method_name(cfg.methods[mi]);
    row.n = cfg.n;
    row.r = cfg.r;
    row.family = cfg.family == ContaminationFamily::Normal ? "normal"
                 : cfg.family == ContaminationFamily::T5   ? "t5"
                                                           : "t1";
    std::vector<BoundaryEstimate> estimates;
    double time_sum = 0.0;
    for (const RepOutcome& out : results[mi]) {
      if (out.ok) {
        estimates.push_back(out.boundary);
        time_sum += out.fit_seconds;
      } else {
        ++row.failed_reps;
      }
    }
    row.mean_fit_seconds =
        estimates.empty() ? 0.0 : time_sum / static_cast<double>(estimates.size());
    row.distance = estimates.size() >= 2
                       ? bayes_distance(estimates)
                       : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool report_timing) {
  std::ostringstream out;
  out << "method,n,r,family,distance,mean_fit_seconds,failed_reps\n";
  char buf[64];
  for (const BenchRow& row : rows) {
    out << row.method << ',' << row.n << ',';
    std::snprintf(buf, sizeof(buf), "%g", row.r);
    out << buf << ',' << row.family << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.distance);
    out << buf << ',';
    if (report_timing) {
      std::snprintf(buf, sizeof(buf), "%.6f", row.mean_fit_seconds);
      out << buf;
    } else {
      out << "NA";  // wall-clock is excluded from the determinism contract
    }
    out << ',' << row.failed_reps << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> parse_value_list(const std::string& raw) {
  // either "a,b,c" or "start:step:stop" (inclusive)
  if (raw.find(':') != std::string::npos) {
    double start, step, stop;
    if (std::sscanf(raw.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 ||
        step <= 0.0)
      fail(ErrorCode::MalformedCell, "bad range '" + raw + "'");
    std::vector<double> values;
    const long count = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i)
      values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  std::vector<double> values;
  std::istringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ','))
    values.push_back(std::stod(tok));
  if (values.empty()) fail(ErrorCode::MalformedCell, "empty value list");
  return values;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open '" + path + "'");

  ExperimentConfig cfg = default_synthetic_config();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      // blank or comment-only line
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        fail(ErrorCode::MalformedCell,
             "config line " + std::to_string(lineno) + " is not key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "reps")
        cfg.reps = std::stoi(value);
      else if (key == "n")
        cfg.n = std::stoll(value);
      else if (key == "r")
        cfg.r = std::stod(value);
      else if (key == "family") {
        if (value == "normal")
          cfg.family = ContaminationFamily::Normal;
        else if (value == "t5")
          cfg.family = ContaminationFamily::T5;
        else if (value == "t1")
          cfg.family = ContaminationFamily::T1;
        else
          fail(ErrorCode::MalformedCell, "unknown family '" + value + "'");
      } else if (key == "methods") {
        cfg.methods.clear();
        std::istringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ','))
          cfg.methods.push_back(method_from_name(trim(tok)));
      } else if (key == "seed")
        cfg.seed = std::stoull(value);
      else if (key == "folds")
        cfg.folds = std::stoi(value);
      else if (key == "c")
        cfg.base.C = std::stod(value);
      else if (key == "d_over_n")
        cfg.base.d_over_n = std::stod(value);
      else if (key == "kernel") {
        if (value == "linear")
          cfg.base.kernel = KernelSpec::linear();
        else if (value == "rbf")
          cfg.base.kernel = KernelSpec::rbf(cfg.base.kernel.gamma);
        else
          fail(ErrorCode::MalformedCell, "unknown kernel '" + value + "'");
      } else if (key == "gamma") {
        cfg.base.kernel.gamma = std::stod(value);
      } else if (key == "noise") {
        if (value == "gaussian")
          cfg.base.noise = NoiseFamily::Gaussian;
        else if (value == "t")
          cfg.base.noise = NoiseFamily::StudentT;
        else
          fail(ErrorCode::MalformedCell, "unknown noise family '" + value + "'");
      } else if (key == "dof")
        cfg.base.dof = std::stod(value);
      else if (key == "feature_index") {
        if (value == "auto")
          cfg.base.feature_index.reset();
        else
          cfg.base.feature_index = std::stoll(value);
      } else if (key == "sp_alpha_grid") {
        cfg.sp_grid.axes = {{"alpha", parse_value_list(value)}};
      } else if (key == "eel_alpha_grid") {
        if (value == "auto")
          cfg.eel_grid.reset();
        else
          cfg.eel_grid = TuningGrid{{{"alpha", parse_value_list(value)}}};
      } else if (key == "snr_db")
        cfg.snr_db = std::stod(value);
      else if (key == "timing")
        cfg.report_timing = value == "on" || value == "true" || value == "1";
      else if (key == "threads")
        cfg.threads = std::stoi(value);
      else
        fail(ErrorCode::MalformedCell, "unknown config key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::MalformedCell,
           "bad value for '" + key + "' on line " + std::to_string(lineno));
    }
  }
  return cfg;
}

}  // namespace robsvm
