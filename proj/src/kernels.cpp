#include "robsvm/kernels.hpp"

#include <cmath>

namespace robsvm {

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  spec.validate();
  require(x.size() == y.size(), ErrorCode::DimensionMismatch,
          "kernel arguments differ in dimension");
  if (spec.kind == KernelKind::Linear) return x.dot(y);
  return std::exp(-spec.gamma * (x - y).squaredNorm());
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& A,
                     const Eigen::MatrixXd& B) {
  spec.validate();
  require(A.cols() == B.cols(), ErrorCode::DimensionMismatch,
          "gram arguments differ in dimension");
  if (spec.kind == KernelKind::Linear) return A * B.transpose();

  Eigen::MatrixXd G(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      G(i, j) = std::exp(-spec.gamma * (A.row(i) - B.row(j)).squaredNorm());
  return G;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> perturbed_points(
    const Eigen::MatrixXd& X, Eigen::Index k,
    const Eigen::VectorXd& magnitudes) {
  require(k >= 0 && k < X.cols(), ErrorCode::IndexOutOfRange,
          "feature index out of range");
  require(magnitudes.size() == X.rows(), ErrorCode::DimensionMismatch,
          "one magnitude per row required");
  require(magnitudes.allFinite(), ErrorCode::InvalidArgument,
          "perturbation magnitudes must be finite");
  Eigen::MatrixXd minus = X, plus = X;
  minus.col(k) -= magnitudes;
  plus.col(k) += magnitudes;
  return {std::move(minus), std::move(plus)};
}

}  // namespace robsvm
