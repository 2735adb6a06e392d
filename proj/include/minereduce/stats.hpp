#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "minereduce/model.hpp"

namespace minereduce {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Average percentage difference of `candidate` against `baseline`, in percent.
inline double apd(std::span<const double> baseline, std::span<const double> candidate) {
  if (baseline.size() != candidate.size()) throw UsageError("apd: lists differ in length");
  if (baseline.empty()) throw UsageError("apd: empty lists");
  double total = 0;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (!(baseline[i] > 0)) throw UsageError("apd: baseline values must be positive");
    total += 100.0 * (candidate[i] - baseline[i]) / baseline[i];
  }
  return total / static_cast<double>(baseline.size());
}

// One-tailed upper critical values t_{0.95, df}, df = 1..40.
inline constexpr std::array<double, 40> kStudentT95 = {
    6.313752, 2.919986, 2.353363, 2.131847, 2.015048, 1.943180, 1.894579, 1.859548, 1.833113, 1.812461,
    1.795885, 1.782288, 1.770933, 1.761310, 1.753050, 1.745884, 1.739607, 1.734064, 1.729133, 1.724718,
    1.720743, 1.717144, 1.713872, 1.710882, 1.708141, 1.705618, 1.703288, 1.701131, 1.699127, 1.697261,
    1.695519, 1.693889, 1.692360, 1.690924, 1.689572, 1.688298, 1.687094, 1.685954, 1.684875, 1.683851};

inline double t_critical_one_tailed(std::size_t df, double alpha) {
  if (df == 0) throw UsageError("t critical value needs df >= 1");
  if (!(alpha > 0 && alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  if (alpha == 0.05 && df <= kStudentT95.size()) return kStudentT95[df - 1];
  return boost::math::quantile(boost::math::complement(boost::math::students_t(static_cast<double>(df)), alpha));
}

struct TTestResult {
  double t = 0;
  bool significant = false;
  // Differences had zero spread: either all zero (t undefined, never
  // significant) or constant nonzero (t infinite).
  bool degenerate = false;
  std::size_t df = 0;
  double critical = 0;
};

// Paired one-tailed test of H1: mean(a - b) > 0. Pass a = baseline costs and
// b = candidate costs to ask whether the candidate is significantly cheaper.
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05) {
  if (a.size() != b.size()) throw UsageError("paired t-test: samples differ in length");
  if (a.size() < 2) throw UsageError("paired t-test: need at least two pairs");
  const std::size_t n = a.size();
  double mean_d = 0;
  for (std::size_t i = 0; i < n; ++i) mean_d += a[i] - b[i];
  mean_d /= static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (a[i] - b[i]) - mean_d;
    ss += e * e;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult r;
  r.df = n - 1;
  r.critical = t_critical_one_tailed(r.df, alpha);
  if (sd == 0) {
    r.degenerate = true;
    if (mean_d == 0) {
      r.t = std::numeric_limits<double>::quiet_NaN();
      r.significant = false;
    } else {
      r.t = mean_d > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.significant = mean_d > 0;
    }
    return r;
  }
  r.t = mean_d / (sd / std::sqrt(static_cast<double>(n)));
  r.significant = r.t > r.critical;
  return r;
}

}  // namespace minereduce
