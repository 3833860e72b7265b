#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gonsel {

/// Five-number summary plus mean, as drawn in the paper-style boxplots.
struct DistributionSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
  std::size_t n = 0;
};

/// Linear-interpolation quantiles over a copy of `values`; n must be >= 1.
DistributionSummary summarize(std::span<const double> values);

struct WilcoxonResult {
  double p_value = 1.0;   // two-sided
  double statistic = 0.0; // W+, sum of positive-difference mid-ranks
  std::size_t n = 0;      // pairs remaining after dropping zero differences
  bool exact = false;
  bool degenerate = false;  // all differences zero
};

/// Wilcoxon signed-rank test on paired samples. Zero differences drop out;
/// |differences| receive mid-ranks. n <= threshold uses the exact null
/// distribution of W+ (equivalent to enumerating all 2^n sign assignments),
/// larger n the normal approximation with tie and continuity corrections.
/// Requires >= 5 nonzero pairs unless every difference is zero (p = 1,
/// flagged degenerate).
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                    std::span<const double> y,
                                    std::size_t exact_threshold = 25);

/// Internals exposed so the two branches can be compared directly.
double wilcoxon_exact_p(std::span<const double> ranks, double w_plus);
double wilcoxon_approx_p(std::span<const double> ranks, double w_plus);

}  // namespace gonsel
