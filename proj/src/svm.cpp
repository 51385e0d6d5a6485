#include "robsvm/svm.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "robsvm/qp.hpp"

namespace robsvm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_trainable(const Dataset& ds, double penalty, const KernelSpec& kernel) {
  ds.validate();
  kernel.validate();
  require(penalty > 0.0, ErrorCode::InvalidArgument, "penalty must be > 0");
  require(ds.has_both_classes(), ErrorCode::SingleClass,
          "training data must contain both classes");
}

Eigen::MatrixXd label_scaled(const Eigen::MatrixXd& G, const Eigen::VectorXd& y) {
  return (y * y.transpose()).cwiseProduct(G);
}

// IPM settings used by the robust trainers; their duals are structurally
// feasible so phase one is skipped
SolveOptions trainer_options() {
  SolveOptions opts;
  opts.tol_kkt = 1e-9;
  opts.tol_feas = 1e-10;
  opts.max_iter = 300;
  opts.assume_feasible = true;
  return opts;
}

void require_optimal(const QPSolution& sol, const char* what) {
  if (sol.status == SolveStatus::Optimal) return;
  fail(ErrorCode::SolverFailure,
       std::string(what) + " dual solve did not reach optimality (kkt=" +
           std::to_string(sol.kkt_residual) +
           ", feas=" + std::to_string(sol.feasibility_residual) + ")");
}

double interval_mid(double lo, double hi) {
  if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(hi)) return hi;
  return 0.0;
}

// least-squares projection onto the equality constraints, then clamp to the
// nonnegative orthant; tightens IPM iterates to the invariant tolerances
void polish_equalities(Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b) {
  Eigen::MatrixXd AAt = A * A.transpose();
  AAt.diagonal().array() += 1e-12 * (1.0 + AAt.diagonal().cwiseAbs().mean());
  x += A.transpose() * AAt.ldlt().solve(b - A * x);
  x = x.cwiseMax(0.0);
}

}  // namespace

TrainedModel train_csvm(const Dataset& ds, double C, const KernelSpec& kernel,
                        const RescaleParams& rescale) {
  check_trainable(ds, C, kernel);
  const Eigen::Index n = ds.n();
  const Eigen::VectorXd& y = ds.labels;

  const Eigen::MatrixXd T = label_scaled(gram(kernel, ds.features, ds.features), y);
  const QPSolution sol = solve_box_single_equality(
      T, Eigen::VectorXd::Constant(n, -1.0), y,
      Eigen::VectorXd::Constant(n, C), 1e-9, 20000000);
  require_optimal(sol, "C-SVM");

  TrainedModel model;
  model.variant = SvmVariant::CSvm;
  model.kernel = kernel;
  model.support_data = ds.features;
  model.support_labels = y;
  model.alpha = sol.x;
  model.rescale = rescale;
  model.penalty = C;
  model.dual_objective = sol.objective;

  // bias from margin support vectors {0 < a_j < C}; v_j = y_j * w'phi(x_j)
  const Eigen::VectorXd v = T * model.alpha;
  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (model.alpha[j] > 1e-8 && model.alpha[j] < C - 1e-8) {
      sum += y[j] * (1.0 - v[j]);
      ++count;
    }
  }
  // the SMO equality multiplier is exactly the midpoint of the feasible
  // bias interval given by the KKT bound conditions
  model.bias = count > 0 ? sum / static_cast<double>(count)
                         : sol.eq_multipliers[0];

  check_dual_feasibility(model);
  return model;
}

TrainedModel train_spsvm(const Dataset& ds, double C, const KernelSpec& kernel,
                         const NoiseSpec& noise,
                         std::optional<Eigen::Index> feature,
                         const RescaleParams& rescale) {
  noise.validate();
  const Eigen::Index k = feature ? *feature : select_noisy_feature(ds);
  const PerturbationVector pv = compute_perturbation(ds, k, noise);
  if (pv.is_zero() && noise.alpha_level > 0.5)
    std::fprintf(stderr,
                 "robsvm: warning: feature %lld has zero variance; "
                 "SP-SVM coincides with C-SVM\n",
                 static_cast<long long>(k));
  TrainedModel model = train_spsvm(ds, C, kernel, pv, rescale);
  model.level = noise.alpha_level;
  model.noise_family = noise.family;
  model.noise_dof = noise.dof;
  return model;
}

TrainedModel train_spsvm(const Dataset& ds, double C, const KernelSpec& kernel,
                         const PerturbationVector& perturbation,
                         const RescaleParams& rescale) {
  check_trainable(ds, C, kernel);
  const Eigen::Index n = ds.n();
  const Eigen::VectorXd& y = ds.labels;
  require(perturbation.magnitudes.size() == n, ErrorCode::DimensionMismatch,
          "one perturbation magnitude per training row required");

  auto [x_minus, x_plus] = perturbed_points(
      ds.features, perturbation.feature_index, perturbation.magnitudes);
  const std::array<const Eigen::MatrixXd*, 3> pts = {&ds.features, &x_minus,
                                                     &x_plus};

  // block matrix T over the three point sets, label-scaled
  Eigen::MatrixXd T(3 * n, 3 * n);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      const Eigen::MatrixXd block = label_scaled(gram(kernel, *pts[a], *pts[b]), y);
      T.block(a * n, b * n, n, n) = block;
      if (a != b) T.block(b * n, a * n, n, n) = block.transpose();
    }
  T = ((T + T.transpose()) * 0.5).eval();  // exact symmetry for the solver

  QuadraticProgram qp;
  qp.Q = std::move(T);
  qp.c = Eigen::VectorXd::Constant(3 * n, -1.0);
  qp.A_eq.resize(1, 3 * n);
  qp.A_eq << y.transpose(), y.transpose(), y.transpose();
  qp.b_eq = Eigen::VectorXd::Zero(1);
  qp.A_in.resize(n, 3 * n);
  qp.A_in << Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n),
      Eigen::MatrixXd::Identity(n, n);
  qp.b_in = Eigen::VectorXd::Constant(n, C);
  qp.lower = Eigen::VectorXd::Zero(3 * n);
  qp.upper = Eigen::VectorXd::Constant(3 * n, kInf);

  const QPSolution sol = solve(qp, trainer_options());
  require_optimal(sol, "SP-SVM");

  TrainedModel model;
  model.variant = SvmVariant::SpSvm;
  model.kernel = kernel;
  model.support_data = ds.features;
  model.support_labels = y;
  model.alpha = sol.x.segment(0, n);
  model.beta = sol.x.segment(n, n);
  model.gamma_coef = sol.x.segment(2 * n, n);
  model.perturbation = perturbation;
  model.rescale = rescale;
  model.penalty = C;
  model.dual_objective = sol.objective;

  // Bias via complementary slackness.  v restricted to block l gives
  // y_j * w'phi_l(x_j), so each stratum averages the equation of its own
  // constraint family (phi_0 = identity, phi_1/phi_2 the shifted copies).
  const Eigen::VectorXd v = qp.Q * sol.x;
  const Eigen::VectorXd total = model.alpha + model.beta + model.gamma_coef;
  const double tau = 1e-8 * std::max(1.0, C);
  const std::array<const Eigen::VectorXd*, 3> theta = {&model.alpha, &model.beta,
                                                       &model.gamma_coef};

  std::array<std::vector<Eigen::Index>, 3> strata;
  for (int l = 0; l < 3; ++l)
    for (Eigen::Index j = 0; j < n; ++j)
      if ((*theta[static_cast<size_t>(l)])[j] > tau && C - total[j] > tau)
        strata[static_cast<size_t>(l)].push_back(j);

  int best_l = 0;
  for (int l = 1; l < 3; ++l)
    if (strata[static_cast<size_t>(l)].size() >
        strata[static_cast<size_t>(best_l)].size())
      best_l = l;

  if (!strata[static_cast<size_t>(best_l)].empty()) {
    double sum = 0.0;
    for (Eigen::Index j : strata[static_cast<size_t>(best_l)])
      sum += y[j] * (1.0 - v[best_l * n + j]);
    model.bias = sum / static_cast<double>(strata[static_cast<size_t>(best_l)].size());
  } else {
    // no stratum is cleanly active: bracket the bias by the KKT conditions
    double lo = -kInf, hi = kInf;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (C - total[j] > tau) {
        // xi_j = 0, all three families must hold
        for (int l = 0; l < 3; ++l) {
          const double val = y[j] * (1.0 - v[l * n + j]);
          if (y[j] > 0)
            lo = std::max(lo, val);
          else
            hi = std::min(hi, val);
        }
      } else {
        // xi_j possibly positive: active families bound from the other side
        for (int l = 0; l < 3; ++l) {
          if ((*theta[static_cast<size_t>(l)])[j] <= tau) continue;
          const double val = y[j] * (1.0 - v[l * n + j]);
          if (y[j] > 0)
            hi = std::min(hi, val);
          else
            lo = std::max(lo, val);
        }
      }
    }
    model.bias = interval_mid(lo, hi);
  }

  check_dual_feasibility(model);
  return model;
}

TrainedModel train_eelsvm(const Dataset& ds, double D, const KernelSpec& kernel,
                          double alpha, const RescaleParams& rescale) {
  check_trainable(ds, D, kernel);
  require(alpha >= 0.0 && alpha < 1.0, ErrorCode::InvalidArgument,
          "EEL level must be in [0,1)");
  const Eigen::Index n = ds.n();
  const Eigen::VectorXd& y = ds.labels;
  const double D1 = D / (static_cast<double>(n) * (1.0 - alpha));

  const Eigen::MatrixXd T = label_scaled(gram(kernel, ds.features, ds.features), y);

  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  qp.Q.topLeftCorner(n, n) = ((T + T.transpose()) * 0.5).eval();
  qp.c = Eigen::VectorXd::Zero(3 * n);
  qp.c.head(n).setConstant(-1.0);
  qp.A_eq = Eigen::MatrixXd::Zero(n + 2, 3 * n);
  qp.b_eq.resize(n + 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    qp.A_eq(i, i) = qp.A_eq(i, n + i) = qp.A_eq(i, 2 * n + i) = 1.0;
    qp.b_eq[i] = D1;
  }
  qp.A_eq.row(n).head(n) = y.transpose();
  qp.b_eq[n] = 0.0;
  qp.A_eq.row(n + 1).head(2 * n).setOnes();
  qp.b_eq[n + 1] = D;
  qp.A_in.resize(0, 3 * n);
  qp.b_in.resize(0);
  qp.lower = Eigen::VectorXd::Zero(3 * n);
  qp.upper = Eigen::VectorXd::Constant(3 * n, kInf);

  QPSolution sol = solve(qp, trainer_options());
  require_optimal(sol, "EEL-SVM");
  polish_equalities(sol.x, qp.A_eq, qp.b_eq);

  TrainedModel model;
  model.variant = SvmVariant::EelSvm;
  model.kernel = kernel;
  model.support_data = ds.features;
  model.support_labels = y;
  model.alpha = sol.x.segment(0, n);
  model.beta = sol.x.segment(n, n);
  model.gamma_coef = sol.x.segment(2 * n, n);
  model.z_star = 0.0;  // fixed by the bias recovery rule
  model.rescale = rescale;
  model.penalty = D;
  model.level = alpha;
  model.dual_objective = qp.objective(sol.x);

  // bias strata: S3 = {a,b,g all active}, S4 = {a,b active, g at zero};
  // with z* = 0 both average the same equation  b = y_j - w'phi(x_j)
  const double tau = 1e-8 * std::max(1.0, D1);
  std::vector<Eigen::Index> s3, s4;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = model.alpha[j], b = model.beta[j], g = model.gamma_coef[j];
    if (a * b * g > tau * tau * tau) s3.push_back(j);
    if (a * b > tau * tau && g <= tau) s4.push_back(j);
  }

  const Eigen::VectorXd v = qp.Q.topLeftCorner(n, n) * model.alpha;
  auto average_over = [&](const std::vector<Eigen::Index>& set) {
    double sum = 0.0;
    for (Eigen::Index j : set) sum += y[j] * (1.0 - v[j]);
    return sum / static_cast<double>(set.size());
  };

  if (!s3.empty() || !s4.empty()) {
    model.bias = average_over(s4.size() <= s3.size() ? s3 : s4);
  } else {
    // no doubly-active point: try the plain margin rule on alpha
    std::vector<Eigen::Index> margin;
    for (Eigen::Index j = 0; j < n; ++j)
      if (model.alpha[j] > tau && model.alpha[j] < D1 - tau) margin.push_back(j);
    if (!margin.empty()) {
      model.bias = average_over(margin);
    } else {
      double lo = -kInf, hi = kInf;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double val = y[j] * (1.0 - v[j]);
        if (model.alpha[j] <= tau && model.gamma_coef[j] > tau) {
          // xi_j = 0 and the margin constraint is slack at z* = 0
          if (y[j] > 0)
            lo = std::max(lo, val);
          else
            hi = std::min(hi, val);
        } else if (model.alpha[j] >= D1 - tau) {
          if (y[j] > 0)
            hi = std::min(hi, val);
          else
            lo = std::max(lo, val);
        }
      }
      model.bias = interval_mid(lo, hi);
    }
  }

  check_dual_feasibility(model);
  return model;
}

namespace {

Eigen::VectorXd raw_decision(const TrainedModel& m, const Eigen::MatrixXd& X) {
  const Eigen::VectorXd ay = m.alpha.cwiseProduct(m.support_labels);
  Eigen::VectorXd f = gram(m.kernel, X, m.support_data) * ay;
  if (m.variant == SvmVariant::SpSvm) {
    auto [x_minus, x_plus] = perturbed_points(
        m.support_data, m.perturbation.feature_index, m.perturbation.magnitudes);
    f += gram(m.kernel, X, x_minus) * m.beta.cwiseProduct(m.support_labels);
    f += gram(m.kernel, X, x_plus) * m.gamma_coef.cwiseProduct(m.support_labels);
  }
  return f.array() + m.bias;
}

}  // namespace

Eigen::VectorXd decision_function(const TrainedModel& model,
                                  const Eigen::MatrixXd& X) {
  require(X.cols() == model.support_data.cols(), ErrorCode::DimensionMismatch,
          "query dimension does not match the model");
  return raw_decision(model, model.rescale.apply(X));
}

Predictions predict(const TrainedModel& model, const Eigen::MatrixXd& X) {
  Predictions out;
  out.decision_values = decision_function(model, X);
  out.labels.resize(out.decision_values.size());
  for (Eigen::Index i = 0; i < out.labels.size(); ++i)
    out.labels[i] = out.decision_values[i] >= 0.0 ? 1.0 : -1.0;  // sign(0) = +1
  return out;
}

double eelsvm_reduced_dual_objective(const Dataset& ds, double D,
                                     const KernelSpec& kernel, double alpha) {
  check_trainable(ds, D, kernel);
  require(alpha >= 0.0 && alpha < 1.0, ErrorCode::InvalidArgument,
          "EEL level must be in [0,1)");
  const Eigen::Index n = ds.n();
  const Eigen::VectorXd& y = ds.labels;
  const double D1 = D / (static_cast<double>(n) * (1.0 - alpha));

  QuadraticProgram qp;
  const Eigen::MatrixXd T = label_scaled(gram(kernel, ds.features, ds.features), y);
  qp.Q = ((T + T.transpose()) * 0.5).eval();
  qp.c = Eigen::VectorXd::Constant(n, -1.0);
  qp.A_eq = y.transpose();
  qp.b_eq = Eigen::VectorXd::Zero(1);
  qp.A_in = Eigen::MatrixXd::Ones(1, n);
  qp.b_in = Eigen::VectorXd::Constant(1, D);
  qp.lower = Eigen::VectorXd::Zero(n);
  qp.upper = Eigen::VectorXd::Constant(n, D1);

  const QPSolution sol = solve(qp, trainer_options());
  require_optimal(sol, "EEL-SVM (reduced)");
  return sol.objective;
}

Eigen::VectorXd linear_weights(const TrainedModel& model) {
  require(model.kernel.kind == KernelKind::Linear, ErrorCode::InvalidArgument,
          "weights are only defined for the linear kernel");
  Eigen::VectorXd w =
      model.support_data.transpose() *
      model.alpha.cwiseProduct(model.support_labels);
  if (model.variant == SvmVariant::SpSvm) {
    auto [x_minus, x_plus] = perturbed_points(
        model.support_data, model.perturbation.feature_index,
        model.perturbation.magnitudes);
    w += x_minus.transpose() * model.beta.cwiseProduct(model.support_labels);
    w += x_plus.transpose() * model.gamma_coef.cwiseProduct(model.support_labels);
  }
  return w;
}

void check_dual_feasibility(const TrainedModel& model, double tol) {
  const Eigen::Index n = model.n_support();
  const Eigen::VectorXd& y = model.support_labels;
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::SolverFailure,
                  std::string("dual feasibility violated: ") + what);
  };

  check(model.alpha.size() == n, "alpha length");
  check(model.alpha.minCoeff() >= -1e-8, "alpha >= 0");

  switch (model.variant) {
    case SvmVariant::CSvm: {
      check(model.alpha.maxCoeff() <= model.penalty + 1e-8, "alpha <= C");
      check(std::fabs(y.dot(model.alpha)) <= tol, "y'alpha = 0");
      break;
    }
    case SvmVariant::SpSvm: {
      check(model.beta.minCoeff() >= -1e-8 && model.gamma_coef.minCoeff() >= -1e-8,
            "beta,gamma >= 0");
      const Eigen::VectorXd total = model.alpha + model.beta + model.gamma_coef;
      check(total.maxCoeff() <= model.penalty + tol, "alpha+beta+gamma <= C");
      check(std::fabs(y.dot(total)) <= tol, "y'(alpha+beta+gamma) = 0");
      break;
    }
    case SvmVariant::EelSvm: {
      check(model.beta.minCoeff() >= -1e-8 && model.gamma_coef.minCoeff() >= -1e-8,
            "beta,gamma >= 0");
      const double D1 =
          model.penalty / (static_cast<double>(n) * (1.0 - model.level));
      const Eigen::VectorXd total = model.alpha + model.beta + model.gamma_coef;
      check((total.array() - D1).abs().maxCoeff() <= tol,
            "alpha+beta+gamma = D1");
      check(std::fabs(y.dot(model.alpha)) <= tol, "y'alpha = 0");
      check(std::fabs(model.alpha.sum() + model.beta.sum() - model.penalty) <= tol,
            "1'alpha + 1'beta = D");
      break;
    }
  }
}

}  // namespace robsvm
