#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robsvm/error.hpp"

namespace robsvm {

// Binary-classification sample: N x d feature matrix plus +/-1 labels.
struct Dataset {
  Eigen::MatrixXd features;               // N x d
  Eigen::VectorXd labels;                 // entries exactly -1 or +1
  std::vector<std::string> feature_names; // empty or size d

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }

  // enforces label domain, finiteness, and N >= 1, d >= 1
  void validate() const;

  bool has_both_classes() const;
};

struct SplitSpec {
  double train_fraction = 0.7;  // in (0,1)
  std::uint64_t seed = 0;
};

// Per-feature affine map fitted on training data: [min,max] -> [-1,1].
// Empty vectors mean the identity map.
struct RescaleParams {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  bool is_identity() const { return min.size() == 0; }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

// Raw CSV table (header + string cells); shared by ingestion and the
// fairness report which needs non-numeric columns.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Eigen::Index column(const std::string& name) const;  // throws if absent
};

CsvTable read_csv_table(const std::string& path);

// Label mapping rule: {-1,+1} kept, {0,1} -> {-1,+1}, otherwise the
// lexicographically larger raw value becomes +1.
Dataset load_csv(const std::string& path, const std::string& label_column);

// LIBSVM text format: `<label> <idx>:<value> ...`, 1-based strictly
// increasing indices; absent indices are zero.
Dataset load_libsvm(const std::string& path,
                    std::optional<Eigen::Index> dimension = std::nullopt);

void save_libsvm(const Dataset& ds, const std::string& path);

// Fits on ds (train data only by convention); constant features map to 0.
std::pair<Dataset, RescaleParams> rescale_to_unit_range(const Dataset& ds);

// Deterministic shuffle-split: ceil(f*N) training rows, rest test.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

// ceil(x) robust to the FP noise of products like 0.7*10; used for split
// sizes and contamination counts
Eigen::Index ceil_count(double x);

}  // namespace robsvm
