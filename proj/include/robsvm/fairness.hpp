#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "robsvm/error.hpp"

namespace robsvm {

// Outcome (+/-1) per observation, tagged with a stratum identifier.
struct StratifiedOutcome {
  std::vector<std::string> strata;
  Eigen::VectorXd outcomes;  // entries in {-1, +1}; -1 is the unfavorable one

  void validate() const;
  std::vector<std::string> stratum_names() const;  // sorted, unique
};

// Exact two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|,
// computed by merging the sorted samples.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct DenialRates {
  double overall = 0.0;                        // Pr(Y = -1)
  std::map<std::string, double> by_stratum;    // Pr(Y = -1 | S = l)
};

DenialRates denial_rates(const StratifiedOutcome& s);

// DD_l = Pr(S=l | Y=-1) - Pr(S=l | Y=+1); requires both outcome classes.
double demographic_disparity(const StratifiedOutcome& s, const std::string& l);

// CDD = sum_l Pr(S=l) * DD_l.  Computed over a common integer-count
// numerator so structural zeros come out exactly 0.
double cdd(const StratifiedOutcome& s);

}  // namespace robsvm
