#pragma once

#include <Eigen/Dense>
#include <utility>

#include "robsvm/error.hpp"

namespace robsvm {

enum class KernelKind { Linear, Rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 1.0;  // Rbf only, must be > 0

  static KernelSpec linear() { return {KernelKind::Linear, 1.0}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::Rbf, gamma}; }

  void validate() const {
    if (kind == KernelKind::Rbf)
      require(gamma > 0.0, ErrorCode::InvalidArgument, "RBF gamma must be > 0");
  }
};

// Linear: x.y   Rbf: exp(-gamma * |x-y|^2)
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

// Entry (i,j) = k(A_i, B_j).  Single-threaded with a fixed per-entry
// summation order, so results are bit-identical run to run.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& A,
                     const Eigen::MatrixXd& B);

// Rows of X shifted by -/+ magnitudes[i] along coordinate k; the input-space
// realization of the single-feature perturbation used by SP-SVM.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> perturbed_points(
    const Eigen::MatrixXd& X, Eigen::Index k, const Eigen::VectorXd& magnitudes);

}  // namespace robsvm
