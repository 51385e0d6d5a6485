#pragma once

#include <Eigen/Dense>

#include "robsvm/dataset.hpp"
#include "robsvm/error.hpp"

namespace robsvm {

enum class NoiseFamily { Gaussian, StudentT };

// Symmetric zero-centered perturbation model for the chance constraint.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Gaussian;
  double dof = 5.0;          // StudentT only
  double alpha_level = 0.5;  // in [0.5, 1): DU is assumed present

  void validate() const {
    require(alpha_level >= 0.5 && alpha_level < 1.0, ErrorCode::InvalidArgument,
            "alpha level must be in [0.5, 1)");
    if (family == NoiseFamily::StudentT)
      require(dof > 0.0, ErrorCode::InvalidArgument, "dof must be > 0");
  }
};

// Per-instance perturbation magnitudes a_ik for one feature.  The recipe in
// compute_perturbation produces equal (homoscedastic) magnitudes;
// heteroscedastic vectors are accepted everywhere downstream.
struct PerturbationVector {
  Eigen::Index feature_index = 0;
  Eigen::VectorXd magnitudes;

  bool is_zero() const {
    return magnitudes.size() == 0 || magnitudes.isZero(0.0);
  }
};

// Inverse CDF, absolute accuracy ~1e-10 over the usual range.  Gaussian uses
// a rational approximation refined by Newton steps on the erfc-based CDF;
// Student-t uses closed forms for dof 1 and 2 and otherwise bisection on the
// incomplete-beta CDF with a final Newton polish.  p in (0,1).
double quantile(NoiseFamily family, double dof, double p);

double student_t_cdf(double x, double dof);
double gaussian_cdf(double x);

// Assumption: F^{-1}(alpha) + F^{-1+}(1-alpha) = 0.  True for the symmetric
// continuous families implemented here; checked numerically within 1e-9.
bool assumption1_check(NoiseFamily family, double dof, double alpha_level);

// a_k = quantile(alpha) * sample std (N-1 denominator) of feature k,
// replicated over all rows.  Zero-variance features give a zero vector.
PerturbationVector compute_perturbation(const Dataset& ds, Eigen::Index k,
                                        const NoiseSpec& spec);

// Feature with the largest sample standard deviation; ties go to the lowest
// index.
Eigen::Index select_noisy_feature(const Dataset& ds);

}  // namespace robsvm
