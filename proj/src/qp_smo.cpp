#include <algorithm>
#include <cmath>
#include <limits>

#include "robsvm/qp.hpp"

namespace robsvm {

namespace {
constexpr double kTau = 1e-12;  // floor for non-positive pair curvature
}

// Two-variable decomposition for  min 0.5 x'Qx + c'x,  y'x = 0,
// 0 <= x <= U.  Working pairs are chosen by maximal violation (first
// variable) and second-order gain (second variable); convergence is the
// maximal-violating-pair gap, measured relative to the gradient scale.
QPSolution solve_box_single_equality(const Eigen::MatrixXd& Q,
                                     const Eigen::VectorXd& c,
                                     const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& C_upper,
                                     double tol_kkt, int max_iter) {
  const Eigen::Index n = c.size();
  require(Q.rows() == n && Q.cols() == n && y.size() == n && C_upper.size() == n,
          ErrorCode::DimensionMismatch, "inconsistent SMO problem shapes");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(y[i] == 1.0 || y[i] == -1.0, ErrorCode::InvalidArgument,
            "y entries must be -1 or +1");
    require(C_upper[i] >= 0.0, ErrorCode::InvalidArgument,
            "upper bounds must be nonnegative");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);  // feasible: y'0 = 0
  Eigen::VectorXd g = c;                         // gradient Qx + c

  // in I_up the variable can move along +y, in I_low along -y
  auto in_up = [&](Eigen::Index t) {
    return y[t] > 0 ? x[t] < C_upper[t] : x[t] > 0.0;
  };
  auto in_low = [&](Eigen::Index t) {
    return y[t] > 0 ? x[t] > 0.0 : x[t] < C_upper[t];
  };

  // violating-pair scan; returns (i, j, gap, g_scale)
  struct Pair {
    Eigen::Index i = -1, j = -1;
    double gap = 0.0, g_max = 0.0, g_scale = 1.0;
  };
  auto select_pair = [&]() {
    Pair w;
    double g_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      w.g_scale = std::max(w.g_scale, std::fabs(g[t]));
      if (in_up(t) && -y[t] * g[t] > g_max) {
        g_max = -y[t] * g[t];
        w.i = t;
      }
    }
    double g_min = std::numeric_limits<double>::infinity();
    double best_gain = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * g[t];
      g_min = std::min(g_min, v);
      if (w.i < 0) continue;
      const double grad_diff = g_max - v;
      if (grad_diff <= 0.0) continue;
      double quad = Q(w.i, w.i) + Q(t, t) - 2.0 * y[w.i] * y[t] * Q(w.i, t);
      if (quad <= 0.0) quad = kTau;
      const double gain = grad_diff * grad_diff / quad;
      if (gain > best_gain) {
        best_gain = gain;
        w.j = t;
      }
    }
    w.g_max = g_max;
    w.gap = (w.i >= 0 && std::isfinite(g_min)) ? std::max(0.0, g_max - g_min) : 0.0;
    if (w.j < 0) w.gap = 0.0;  // no improving pair left
    return w;
  };

  int iter = 0;
  Pair w;

  for (; iter < max_iter; ++iter) {
    w = select_pair();
    if (w.i < 0 || w.j < 0 || w.gap <= tol_kkt * w.g_scale) break;
    const Eigen::Index i = w.i, j = w.j;

    // step along (+y_i, -y_j), clipped to the box
    double quad = Q(i, i) + Q(j, j) - 2.0 * y[i] * y[j] * Q(i, j);
    if (quad <= 0.0) quad = kTau;
    const double grad_diff = w.g_max - (-y[j] * g[j]);
    const double step = grad_diff / quad;
    const double room_i = y[i] > 0 ? C_upper[i] - x[i] : x[i];
    const double room_j = y[j] > 0 ? x[j] : C_upper[j] - x[j];

    // land exactly on the clipping bound and move the partner by the exact
    // same amount, so y'x = 0 is preserved to the last bit
    const double xi_old = x[i], xj_old = x[j];
    if (room_i <= room_j && step >= room_i) {
      x[i] = y[i] > 0 ? C_upper[i] : 0.0;
      x[j] = xj_old - y[j] * y[i] * (x[i] - xi_old);
    } else if (step >= room_j) {
      x[j] = y[j] > 0 ? 0.0 : C_upper[j];
      x[i] = xi_old - y[i] * y[j] * (x[j] - xj_old);
    } else {
      x[i] = xi_old + y[i] * step;
      x[j] = xj_old - y[j] * step;
    }
    x[i] = std::clamp(x[i], 0.0, C_upper[i]);
    x[j] = std::clamp(x[j], 0.0, C_upper[j]);

    const double dxi = x[i] - xi_old, dxj = x[j] - xj_old;
    g += Q.col(i) * dxi + Q.col(j) * dxj;
  }

  if (iter == max_iter) w = select_pair();  // honest residual at the cap

  QPSolution out;
  out.x = x;
  out.objective = 0.5 * x.dot(Q * x) + c.dot(x);
  out.iterations = iter;
  out.kkt_residual = w.gap / w.g_scale;
  out.feasibility_residual = std::fabs(y.dot(x));
  out.status = iter < max_iter ? SolveStatus::Optimal : SolveStatus::MaxIterations;

  // multiplier recovery: rho for y'x = 0, then bound multipliers from
  // stationarity  g + rho y - lambda_lo + lambda_up = 0
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (in_up(t)) lo = std::max(lo, -y[t] * g[t]);
    if (in_low(t)) hi = std::min(hi, -y[t] * g[t]);
  }
  double rho;
  if (std::isfinite(lo) && std::isfinite(hi))
    rho = 0.5 * (lo + hi);
  else if (std::isfinite(lo))
    rho = lo;
  else if (std::isfinite(hi))
    rho = hi;
  else
    rho = 0.0;
  out.eq_multipliers = Eigen::VectorXd::Constant(1, rho);
  out.lower_multipliers.resize(n);
  out.upper_multipliers.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double r = g[t] + rho * y[t];
    out.lower_multipliers[t] = std::max(0.0, r);
    out.upper_multipliers[t] = std::max(0.0, -r);
  }
  out.in_multipliers.resize(0);
  return out;
}

}  // namespace robsvm
