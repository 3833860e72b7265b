#include "gonsel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gonsel/errors.hpp"

namespace gonsel {

namespace {

double interp_quantile(const std::vector<double>& sorted, double p) {
  const double h = (double(sorted.size()) - 1.0) * p;
  const std::size_t lo = std::size_t(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

DistributionSummary summarize(std::span<const double> values) {
  if (values.empty()) throw DomainError("summarize requires at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  DistributionSummary s;
  s.n = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = interp_quantile(sorted, 0.25);
  s.median = interp_quantile(sorted, 0.5);
  s.q3 = interp_quantile(sorted, 0.75);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           double(sorted.size());
  return s;
}

namespace {

// Mid-ranks of |d|, plus W+ (rank sum of positive differences).
struct RankedDiffs {
  std::vector<double> ranks;
  double w_plus = 0.0;
};

RankedDiffs rank_differences(const std::vector<double>& diffs) {
  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(diffs[a]) < std::fabs(diffs[b]);
  });
  RankedDiffs out;
  out.ranks.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]]))
      ++j;
    const double mid = (double(i + 1) + double(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) out.ranks[order[t]] = mid;
    i = j + 1;
  }
  for (std::size_t t = 0; t < n; ++t)
    if (diffs[t] > 0) out.w_plus += out.ranks[t];
  return out;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double wilcoxon_exact_p(std::span<const double> ranks, double w_plus) {
  // Null distribution of W+ by convolution over the scaled integer ranks;
  // identical to enumerating all 2^n sign assignments. Counts stay exact in
  // doubles for n <= 53.
  const std::size_t n = ranks.size();
  long long total = 0;
  std::vector<long long> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = std::llround(ranks[i] * 2.0);  // mid-ranks are half-integers
    total += scaled[i];
  }
  std::vector<double> dp(std::size_t(total) + 1, 0.0);
  dp[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reach += scaled[i];
    for (long long s = reach; s >= scaled[i]; --s)
      dp[std::size_t(s)] += dp[std::size_t(s - scaled[i])];
  }
  const long long w2 = std::llround(w_plus * 2.0);
  double le = 0.0, ge = 0.0;
  for (long long s = 0; s <= total; ++s) {
    if (s <= w2) le += dp[std::size_t(s)];
    if (s >= w2) ge += dp[std::size_t(s)];
  }
  const double denom = std::ldexp(1.0, int(n));  // 2^n
  const double p = 2.0 * std::min(le, ge) / denom;
  return std::min(1.0, p);
}

double wilcoxon_approx_p(std::span<const double> ranks, double w_plus) {
  const double n = double(ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
  std::vector<double> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = double(j - i + 1);
    var -= (t * t * t - t) / 48.0;
    i = j + 1;
  }
  if (var <= 0.0) return 1.0;  // every rank tied at one value
  const double d = w_plus - mean;
  // Continuity correction: shift half a rank step toward the mean.
  const double cc = d > 0 ? 0.5 : (d < 0 ? -0.5 : 0.0);
  const double z = (d - cc) / std::sqrt(var);
  return std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                    std::span<const double> y,
                                    std::size_t exact_threshold) {
  if (x.size() != y.size())
    throw DomainError("wilcoxon_signed_rank requires paired samples");
  if (x.empty()) throw DomainError("wilcoxon_signed_rank on empty samples");
  std::vector<double> diffs;
  diffs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult result;
  result.n = diffs.size();
  if (diffs.empty()) {
    result.degenerate = true;
    result.p_value = 1.0;
    return result;
  }
  if (diffs.size() < 5)
    throw DomainError(
        "wilcoxon_signed_rank needs >= 5 nonzero differences, got " +
        std::to_string(diffs.size()));
  const RankedDiffs ranked = rank_differences(diffs);
  result.statistic = ranked.w_plus;
  result.exact = diffs.size() <= std::min<std::size_t>(exact_threshold, 53);
  result.p_value = result.exact
                       ? wilcoxon_exact_p(ranked.ranks, ranked.w_plus)
                       : wilcoxon_approx_p(ranked.ranks, ranked.w_plus);
  return result;
}

}  // namespace gonsel
