#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robsvm/dataset.hpp"
#include "robsvm/svm.hpp"

namespace robsvm {

// Two-class Gaussian mixture with a known linear Bayes boundary
// x2 = 2.5 x1 (for the default mu/sigma).
struct SyntheticSpec {
  Eigen::Index n = 100;
  std::uint64_t seed = 0;
  Eigen::Vector2d mu{0.5, -3.0};
  Eigen::Vector2d sigma_diag{0.2, 3.0};
};

Dataset gen_synthetic(const SyntheticSpec& spec);

enum class ContaminationFamily { Normal, T5, T1 };

struct ContaminationSpec {
  double ratio = 0.0;  // fraction of rows replaced
  ContaminationFamily family = ContaminationFamily::Normal;
  Eigen::Matrix2d sigma_c{{1.0, -0.8}, {-0.8, 1.0}};
  std::uint64_t seed = 0;
};

// Replaces ceil(ratio*N) rows (chosen without replacement) by elliptical
// draws centered at the origin with scatter sigma_c; their labels are
// redrawn with equal chance.  All other rows stay bit-identical.
Dataset contaminate_synthetic(const Dataset& ds, const ContaminationSpec& spec);

// Additive white Gaussian noise per feature column, calibrated so that
// signal power / noise power = 10^(snr_db/10); zero-power columns get none.
Dataset awgn(const Dataset& ds, double snr_db, std::uint64_t seed);

// Decision boundary x2 = m x1 + q of a linear-kernel model on 2-d data.
struct BoundaryEstimate {
  double m = 0.0;
  double q = 0.0;
};

BoundaryEstimate extract_linear_boundary(const TrainedModel& model);

// d = |mean(m) - m0| * std(m) + |mean(q) - q0| * std(q), sample stds.
double bayes_distance(const std::vector<BoundaryEstimate>& estimates,
                      double m0 = 2.5, double q0 = 0.0);

// Everything needed to fit one model; grid axes override fields by name.
struct TrainSettings {
  SvmVariant variant = SvmVariant::CSvm;
  KernelSpec kernel = KernelSpec::linear();
  double C = 100.0;
  double d_over_n = 100.0;  // EEL penalty: D = d_over_n * N_train
  double alpha = 0.0;       // SP noise level / EEL level
  NoiseFamily noise = NoiseFamily::Gaussian;
  double dof = 5.0;
  std::optional<Eigen::Index> feature_index;  // SP; absent = auto-select
};

TrainedModel fit(const Dataset& ds, const TrainSettings& settings,
                 const RescaleParams& rescale = {});

// Named hyperparameter axes, tried in listed order (first axis outermost).
// Recognized names: C, gamma, alpha, d_over_n, dof.
struct TuningGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;

  bool empty() const { return axes.empty(); }
  size_t combinations() const;
};

struct CvEntry {
  std::map<std::string, double> params;
  double mean_accuracy = 0.0;
};

struct CvResult {
  std::map<std::string, double> best;
  double best_accuracy = 0.0;
  std::vector<CvEntry> table;  // in enumeration order
};

// Stratified k-fold grid search; ties keep the first-listed combination.
// Folds are deterministic in the seed.  A fold whose training part loses a
// class scores with the constant majority-class predictor.
CvResult cross_validate(const Dataset& ds, const TrainSettings& base,
                        const TuningGrid& grid, int folds, std::uint64_t seed);

double accuracy(const TrainedModel& model, const Dataset& test);

struct ExperimentConfig {
  int reps = 100;
  Eigen::Index n = 100;
  double r = 0.0;
  ContaminationFamily family = ContaminationFamily::Normal;
  std::vector<SvmVariant> methods{SvmVariant::CSvm, SvmVariant::SpSvm,
                                  SvmVariant::EelSvm};
  std::uint64_t seed = 42;
  int folds = 10;
  TrainSettings base;
  TuningGrid sp_grid;                  // default alpha in {0.50,...,0.60}
  std::optional<TuningGrid> eel_grid;  // default: alpha 0..max(0.02, r) step 0.01
  std::optional<double> snr_db;        // extra awgn pass when set
  bool report_timing = false;          // timings go in the CSV only when on
  int threads = 0;                     // 0 = all hardware threads
};

ExperimentConfig default_synthetic_config();

// Key-value config file (docs/formats.md); unknown keys are rejected.
ExperimentConfig parse_config_file(const std::string& path);

struct BenchRow {
  std::string method;
  Eigen::Index n = 0;
  double r = 0.0;
  std::string family;
  double distance = 0.0;
  double mean_fit_seconds = 0.0;
  int failed_reps = 0;
};

// One row per method: repeated generate/contaminate/tune/fit/boundary runs
// reduced to the Bayes-boundary distance.  Output is a pure function of the
// config (timing column excluded unless report_timing).
std::vector<BenchRow> run_synthetic_benchmark(const ExperimentConfig& cfg);

std::string bench_csv(const std::vector<BenchRow>& rows, bool report_timing);

const char* method_name(SvmVariant v);
SvmVariant method_from_name(const std::string& name);

}  // namespace robsvm
