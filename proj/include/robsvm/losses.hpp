#pragma once

#include <Eigen/Dense>

#include "robsvm/error.hpp"

namespace robsvm {

// Classification loss catalog.  These are evaluation-only: the trainers in
// this library are all Hinge-based, but the catalog supports loss studies
// and the Fisher-consistency check.
struct LossSpec {
  enum class Kind {
    Hinge,            // max{0,u}
    TruncatedHinge,   // min{max{0,u}, a},            a >= 1
    Pinball,          // max{a*u, u},                 a <= 0
    PinballEpsZone,   // max{0, u-eps, a*u+b},        eps >= 0, a,b <= 0
    TruncatedPinball, // max{u, min{a*u, b}},         a <= 0, b >= 0
    LeastSquare,      // u^2
  };

  Kind kind = Kind::Hinge;
  double a = 0.0;
  double b = 0.0;
  double epsilon = 0.0;

  static LossSpec hinge() { return {Kind::Hinge, 0, 0, 0}; }
  static LossSpec truncated_hinge(double a) { return {Kind::TruncatedHinge, a, 0, 0}; }
  static LossSpec pinball(double a) { return {Kind::Pinball, a, 0, 0}; }
  static LossSpec pinball_eps_zone(double eps, double a, double b) {
    return {Kind::PinballEpsZone, a, b, eps};
  }
  static LossSpec truncated_pinball(double a, double b) {
    return {Kind::TruncatedPinball, a, b, 0};
  }
  static LossSpec least_square() { return {Kind::LeastSquare, 0, 0, 0}; }

  void validate() const;
};

double loss_eval(const LossSpec& spec, double u);

// Extreme empirical loss of a nonnegative sample: the exact minimum over z
// of  z + (1/(N(1-alpha))) * sum_i max{v_i - z, 0},  i.e. the empirical CVaR
// at level alpha.  Computed in closed form through order statistics; when
// N(1-alpha) is the integer r this is the mean of the r largest values.
// alpha in [0,1).
double eel(const Eigen::VectorXd& values, double alpha);

// Grid argmin over z of  p*L(1-z) + q*L(1+z)  (p+q=1, p!=q); ties break
// toward the z nearest sign(p-q).  A Fisher-consistent loss returns the
// Bayes response sign(p-q) at grid resolution.
double fisher_argmin(const LossSpec& spec, double p, double q,
                     double z_min = -3.0, double z_max = 3.0,
                     double step = 1e-3);

}  // namespace robsvm
