#include "robsvm/noise.hpp"

#include <cmath>
#include <limits>

namespace robsvm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Regularized incomplete beta I_x(a,b) via the standard continued fraction
// (modified Lentz), switching arguments for x past the convergence boundary.
double beta_cf(double a, double b, double x) {
  constexpr int max_iter = 300;
  constexpr double eps = 1e-15, tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_pdf(double x, double dof) {
  const double ln =
      std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0) -
      0.5 * std::log(dof * kPi) -
      (dof + 1.0) / 2.0 * std::log1p(x * x / dof);
  return std::exp(ln);
}

// Acklam's rational approximation to the standard normal quantile; a couple
// of Newton refinements below push it to full double accuracy.
double gaussian_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double gaussian_quantile(double p) {
  double z = gaussian_quantile_approx(p);
  for (int it = 0; it < 3; ++it) {
    const double err = gaussian_cdf(z) - p;
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
    if (pdf <= 0.0) break;
    z -= err / pdf;
  }
  return z;
}

// dof 1 and 2 have closed forms; they double as oracles in the tests
double student_quantile_upper(double dof, double p) {
  // p >= 0.5 guaranteed by caller
  if (dof == 1.0) return std::tan(kPi * (p - 0.5));
  if (dof == 2.0) return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p));

  double lo = 0.0, hi = 1.0;
  while (student_t_cdf(hi, dof) < p) {
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(1.0, std::fabs(mid))) break;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 2; ++it) {
    const double pdf = student_t_pdf(z, dof);
    if (pdf <= 0.0) break;
    z -= (student_t_cdf(z, dof) - p) / pdf;
  }
  return z;
}

}  // namespace

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double student_t_cdf(double x, double dof) {
  if (x == 0.0) return 0.5;
  const double ib = incomplete_beta(dof / 2.0, 0.5, dof / (dof + x * x));
  return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double quantile(NoiseFamily family, double dof, double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::InvalidArgument,
          "quantile level must be in (0,1)");
  if (p == 0.5) return 0.0;
  // evaluate in the upper tail and mirror, so quantile(p) == -quantile(1-p)
  // holds exactly
  const bool lower = p < 0.5;
  const double pu = lower ? 1.0 - p : p;
  double z;
  if (family == NoiseFamily::Gaussian) {
    z = gaussian_quantile(pu);
  } else {
    require(dof > 0.0, ErrorCode::InvalidArgument, "dof must be > 0");
    z = student_quantile_upper(dof, pu);
  }
  return lower ? -z : z;
}

bool assumption1_check(NoiseFamily family, double dof, double alpha_level) {
  if (alpha_level <= 0.0 || alpha_level >= 1.0) return false;
  if (alpha_level == 0.5) return true;
  const double s =
      quantile(family, dof, alpha_level) + quantile(family, dof, 1.0 - alpha_level);
  return std::fabs(s) <= 1e-9;
}

PerturbationVector compute_perturbation(const Dataset& ds, Eigen::Index k,
                                        const NoiseSpec& spec) {
  ds.validate();
  spec.validate();
  require(k >= 0 && k < ds.dim(), ErrorCode::IndexOutOfRange,
          "feature index out of range");
  require(ds.n() >= 2, ErrorCode::InvalidArgument,
          "sample standard deviation needs N >= 2");

  const auto col = ds.features.col(k);
  const double mean = col.mean();
  const double ss = (col.array() - mean).square().sum();
  const double sd = std::sqrt(ss / static_cast<double>(ds.n() - 1));

  PerturbationVector pv;
  pv.feature_index = k;
  const double a = sd > 0.0 ? quantile(spec.family, spec.dof, spec.alpha_level) * sd : 0.0;
  pv.magnitudes = Eigen::VectorXd::Constant(ds.n(), a);
  return pv;
}

Eigen::Index select_noisy_feature(const Dataset& ds) {
  ds.validate();
  require(ds.n() >= 2, ErrorCode::InvalidArgument,
          "sample standard deviation needs N >= 2");
  Eigen::Index best = 0;
  double best_ss = -1.0;
  for (Eigen::Index j = 0; j < ds.dim(); ++j) {
    const auto col = ds.features.col(j);
    const double ss = (col.array() - col.mean()).square().sum();
    if (ss > best_ss) {  // strict: ties keep the lowest index
      best_ss = ss;
      best = j;
    }
  }
  return best;
}

}  // namespace robsvm
