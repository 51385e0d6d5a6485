#include "robsvm/fairness.hpp"

#include <algorithm>
#include <cmath>

namespace robsvm {

void StratifiedOutcome::validate() const {
  require(static_cast<Eigen::Index>(strata.size()) == outcomes.size(),
          ErrorCode::DimensionMismatch, "one stratum per outcome required");
  require(!strata.empty(), ErrorCode::EmptyInput, "no observations");
  for (Eigen::Index i = 0; i < outcomes.size(); ++i)
    require(outcomes[i] == 1.0 || outcomes[i] == -1.0, ErrorCode::BadLabel,
            "outcomes must be -1 or +1");
}

std::vector<std::string> StratifiedOutcome::stratum_names() const {
  std::vector<std::string> names = strata;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::EmptyInput,
          "ks_distance needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  double sup = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    // next jump point of either empirical CDF
    double x;
    if (i < a.size() && j < b.size())
      x = std::min(a[i], b[j]);
    else
      x = i < a.size() ? a[i] : b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    sup = std::max(sup, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
  }
  return sup;
}

namespace {

struct Counts {
  std::map<std::string, long long> total, neg, pos;
  long long m = 0, m_neg = 0, m_pos = 0;
};

Counts tabulate(const StratifiedOutcome& s) {
  Counts c;
  for (size_t i = 0; i < s.strata.size(); ++i) {
    const std::string& l = s.strata[i];
    ++c.total[l];
    ++c.m;
    if (s.outcomes[static_cast<Eigen::Index>(i)] < 0) {
      ++c.neg[l];
      ++c.m_neg;
    } else {
      ++c.pos[l];
      ++c.m_pos;
    }
  }
  return c;
}

}  // namespace

DenialRates denial_rates(const StratifiedOutcome& s) {
  s.validate();
  const Counts c = tabulate(s);
  DenialRates out;
  out.overall = static_cast<double>(c.m_neg) / static_cast<double>(c.m);
  for (const auto& [name, total] : c.total) {
    const auto it = c.neg.find(name);
    const long long neg = it == c.neg.end() ? 0 : it->second;
    out.by_stratum[name] = static_cast<double>(neg) / static_cast<double>(total);
  }
  return out;
}

double demographic_disparity(const StratifiedOutcome& s, const std::string& l) {
  s.validate();
  const Counts c = tabulate(s);
  require(c.m_neg > 0 && c.m_pos > 0, ErrorCode::UndefinedDisparity,
          "both outcome classes must be present");
  const auto get = [](const std::map<std::string, long long>& m,
                      const std::string& key) {
    const auto it = m.find(key);
    return it == m.end() ? 0LL : it->second;
  };
  // single division keeps a zero numerator exactly zero
  const long long num = get(c.neg, l) * c.m_pos - get(c.pos, l) * c.m_neg;
  return static_cast<double>(num) /
         (static_cast<double>(c.m_neg) * static_cast<double>(c.m_pos));
}

double cdd(const StratifiedOutcome& s) {
  s.validate();
  const Counts c = tabulate(s);
  require(c.m_neg > 0 && c.m_pos > 0, ErrorCode::UndefinedDisparity,
          "both outcome classes must be present");
  // CDD = sum_l (n_l/M) * (n_l-/M- - n_l+/M+); common numerator in integer
  // arithmetic, one division at the end, so cancellation is exact
  long long num = 0;
  for (const auto& [name, n_l] : c.total) {
    const auto it_neg = c.neg.find(name);
    const auto it_pos = c.pos.find(name);
    const long long n_neg = it_neg == c.neg.end() ? 0 : it_neg->second;
    const long long n_pos = it_pos == c.pos.end() ? 0 : it_pos->second;
    num += n_l * (n_neg * c.m_pos - n_pos * c.m_neg);
  }
  return static_cast<double>(num) /
         (static_cast<double>(c.m) * static_cast<double>(c.m_neg) *
          static_cast<double>(c.m_pos));
}

}  // namespace robsvm
