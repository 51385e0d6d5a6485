#include "robsvm/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace robsvm {

void LossSpec::validate() const {
  switch (kind) {
    case Kind::Hinge:
    case Kind::LeastSquare:
      break;
    case Kind::TruncatedHinge:
      require(a >= 1.0, ErrorCode::InvalidArgument, "truncated hinge needs a >= 1");
      break;
    case Kind::Pinball:
      require(a <= 0.0, ErrorCode::InvalidArgument, "pinball needs a <= 0");
      break;
    case Kind::PinballEpsZone:
      require(epsilon >= 0.0 && a <= 0.0 && b <= 0.0, ErrorCode::InvalidArgument,
              "pinball eps-zone needs eps >= 0 and a,b <= 0");
      break;
    case Kind::TruncatedPinball:
      require(a <= 0.0 && b >= 0.0, ErrorCode::InvalidArgument,
              "truncated pinball needs a <= 0 and b >= 0");
      break;
  }
}

double loss_eval(const LossSpec& spec, double u) {
  spec.validate();
  switch (spec.kind) {
    case LossSpec::Kind::Hinge:
      return std::max(0.0, u);
    case LossSpec::Kind::TruncatedHinge:
      return std::min(std::max(0.0, u), spec.a);
    case LossSpec::Kind::Pinball:
      return std::max(spec.a * u, u);
    case LossSpec::Kind::PinballEpsZone:
      return std::max({0.0, u - spec.epsilon, spec.a * u + spec.b});
    case LossSpec::Kind::TruncatedPinball:
      return std::max(u, std::min(spec.a * u, spec.b));
    case LossSpec::Kind::LeastSquare:
      return u * u;
  }
  return 0.0;  // unreachable
}

double eel(const Eigen::VectorXd& values, double alpha) {
  require(values.size() > 0, ErrorCode::EmptyInput, "eel of an empty sample");
  require(alpha >= 0.0 && alpha < 1.0, ErrorCode::InvalidArgument,
          "eel level must be in [0,1)");

  const Eigen::Index n = values.size();
  double m = static_cast<double>(n) * (1.0 - alpha);
  // snap to integer when alpha was given as 1 - r/N, so the top-r identity
  // holds exactly
  const double r = std::round(m);
  if (r >= 1.0 && std::fabs(m - r) <= 1e-9 * static_cast<double>(n)) m = r;

  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  const auto whole = static_cast<Eigen::Index>(std::floor(m));
  const double frac = m - static_cast<double>(whole);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < whole; ++i) sum += sorted[static_cast<size_t>(i)];
  if (frac > 0.0 && whole < n) sum += frac * sorted[static_cast<size_t>(whole)];
  return sum / m;
}

double fisher_argmin(const LossSpec& spec, double p, double q, double z_min,
                     double z_max, double step) {
  spec.validate();
  require(p >= 0.0 && q >= 0.0, ErrorCode::InvalidArgument,
          "probabilities must be nonnegative");
  require(std::fabs(p + q - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "p + q must equal 1");
  require(p != q, ErrorCode::InvalidArgument, "p == q has no unique Bayes response");
  require(step > 0.0 && z_max > z_min, ErrorCode::InvalidArgument, "bad grid");

  const double target = p > q ? 1.0 : -1.0;
  const auto steps = static_cast<Eigen::Index>(std::floor((z_max - z_min) / step + 1e-9));
  double best_z = z_min;
  double best_f = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i <= steps; ++i) {
    const double z = z_min + static_cast<double>(i) * step;
    const double f = p * loss_eval(spec, 1.0 - z) + q * loss_eval(spec, 1.0 + z);
    if (f < best_f ||
        (f == best_f && std::fabs(z - target) < std::fabs(best_z - target))) {
      best_f = f;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace robsvm
