#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "robsvm/dataset.hpp"
#include "robsvm/kernels.hpp"
#include "robsvm/noise.hpp"

namespace robsvm {

enum class SvmVariant { CSvm, SpSvm, EelSvm };

// Immutable training result.  alpha/beta/gamma_coef are the dual
// coefficients; beta and gamma_coef are empty for C-SVM.  support_data keeps
// the training rows (in the rescaled space the model was fitted in).
struct TrainedModel {
  SvmVariant variant = SvmVariant::CSvm;
  KernelSpec kernel;
  Eigen::MatrixXd support_data;
  Eigen::VectorXd support_labels;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma_coef;
  double bias = 0.0;
  double z_star = 0.0;              // EEL-SVM; fixed to 0 by construction
  PerturbationVector perturbation;  // SP-SVM only
  RescaleParams rescale;            // applied to inputs before prediction
  double penalty = 0.0;             // C (C-SVM, SP-SVM) or D (EEL-SVM)
  double level = 0.0;               // SP noise level / EEL alpha
  NoiseFamily noise_family = NoiseFamily::Gaussian;
  double noise_dof = 0.0;
  double dual_objective = 0.0;

  Eigen::Index n_support() const { return support_data.rows(); }
};

struct Predictions {
  Eigen::VectorXd labels;           // sign of the decision value; sign(0) = +1
  Eigen::VectorXd decision_values;
};

// Classical soft-margin SVM via the dual
//   min 0.5 a'Ta - 1'a   s.t.  y'a = 0,  0 <= a <= C,
// T_ij = y_i k(x_i,x_j) y_j, solved by SMO.
TrainedModel train_csvm(const Dataset& ds, double C, const KernelSpec& kernel,
                        const RescaleParams& rescale = {});

// Single-perturbation SVM: the chance constraint on one feature reduces to
// three constraint families evaluated at x, x -/+ a e_k; trained via the
// 3N-variable dual with block matrix T over the perturbed point sets.
TrainedModel train_spsvm(const Dataset& ds, double C, const KernelSpec& kernel,
                         const NoiseSpec& noise,
                         std::optional<Eigen::Index> feature = std::nullopt,
                         const RescaleParams& rescale = {});

// Same, with explicit per-instance perturbation magnitudes.
TrainedModel train_spsvm(const Dataset& ds, double C, const KernelSpec& kernel,
                         const PerturbationVector& perturbation,
                         const RescaleParams& rescale = {});

// Extreme-empirical-loss SVM: the hinge penalty is replaced by the empirical
// CVaR at level alpha; trained via the full 3N-variable dual with
// a + b + g = D1*1, y'a = 0, 1'a + 1'b = D, D1 = D/(N(1-alpha)).
TrainedModel train_eelsvm(const Dataset& ds, double D, const KernelSpec& kernel,
                          double alpha, const RescaleParams& rescale = {});

Eigen::VectorXd decision_function(const TrainedModel& model,
                                  const Eigen::MatrixXd& X);
Predictions predict(const TrainedModel& model, const Eigen::MatrixXd& X);

// Optimal objective of the algebraically reduced N-variable EEL dual
// (0 <= a <= D1, y'a = 0, 1'a <= D); cross-check against the full form.
double eelsvm_reduced_dual_objective(const Dataset& ds, double D,
                                     const KernelSpec& kernel, double alpha);

// Primal weight vector; linear kernel only (includes the perturbed copies
// for SP-SVM).
Eigen::VectorXd linear_weights(const TrainedModel& model);

// Throws SolverFailure if the dual feasibility invariants of the variant do
// not hold within tol; trainers run this before returning.
void check_dual_feasibility(const TrainedModel& model, double tol = 1e-6);

// Versioned JSON model format; coefficient round-trips are exact.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace robsvm
