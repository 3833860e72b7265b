#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gonsel/annotations.hpp"
#include "gonsel/selection.hpp"
#include "gonsel/similarity.hpp"
#include "gonsel/stats.hpp"

namespace gonsel {

/// False negatives: selected negatives the newer release annotates to k.
/// Closed by default; the direct flag is a sensitivity switch.
std::size_t false_negatives(const SelectionResult& result,
                            const AnnotationRelease& selection_release,
                            const AnnotationRelease& newer, TermIndex k,
                            NoveltyMode mode = NoveltyMode::Closed);

/// Terms of `branch` with at least one novel protein between the releases,
/// in closed mode (matching the false-negative definition).
std::vector<TermIndex> eligible_terms(const AnnotationRelease& older,
                                      const AnnotationRelease& newer,
                                      Branch branch);

struct BenchmarkConfig {
  std::vector<SelectionMethod> methods{
      SelectionMethod::NsfsJaccard, SelectionMethod::NsfsLin,
      SelectionMethod::Sibling,     SelectionMethod::NoAncDesc,
      SelectionMethod::Snob,        SelectionMethod::Random};
  std::vector<std::size_t> budgets{500, 750, 1000, 1250, 1500};
  std::uint64_t seed = 0;
  std::size_t repeats = 10;  // random components averaged over repeat seeds
  /// Fixed K per NSFS variant; entries absent -> tuned internally.
  std::map<SelectionMethod, double> fixed_k;
  std::vector<double> k_grid{0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  double mask_fraction = 0.1;   // tune_k internal holdout
  std::size_t tune_repeats = 1;
  std::size_t tune_budget = 0;  // 0 -> first benchmark budget
  NoveltyMode fn_mode = NoveltyMode::Closed;
  TermUniverse universe = TermUniverse::AllBranchTerms;
  unsigned threads = 1;
};

struct MethodCell {
  SelectionMethod method;
  std::size_t budget = 0;
  std::vector<double> fn_per_term;  // repeat-averaged, aligned with terms
  double mean_fn = 0.0;
};

struct PairwiseTest {
  SelectionMethod a;
  SelectionMethod b;
  double p_value = 1.0;
  bool degenerate = false;  // all per-term differences zero
  bool computed = false;    // false when too few nonzero pairs
};

struct BranchReport {
  Branch branch;
  std::vector<TermIndex> terms;  // eligible, accession order
  std::vector<MethodCell> cells;
  /// Keyed by budget; every unordered method pair once per budget.
  std::map<std::size_t, std::vector<PairwiseTest>> wilcoxon;
};

struct EvaluationReport {
  std::vector<BranchReport> branches;
  std::map<SelectionMethod, std::map<Branch, double>> k_used;  // NSFS only
  std::string older_label, newer_label;
  std::uint64_t seed = 0;
  std::size_t repeats = 0;
};

/// Temporal-holdout benchmark over the given branches: select on the older
/// release, score against the newer, Wilcoxon on per-term FN pairings.
EvaluationReport run_benchmark(const AnnotationRelease& older,
                               const AnnotationRelease& newer,
                               const std::vector<Branch>& branches,
                               const BenchmarkConfig& config);

/// Learns K on the older release alone: mask a fraction of its direct
/// annotations in the matrix branch, TPR-close what is left, and count
/// selections of masked positives per grid point as pseudo false negatives.
/// Smallest mean pseudo-FN wins, ties to the larger K.
double tune_k(const AnnotationRelease& older, const SimilarityMatrix& matrix,
              const std::vector<double>& grid, std::size_t budget,
              std::uint64_t seed, double mask_fraction = 0.1,
              std::size_t repeats = 1, unsigned threads = 1);

}  // namespace gonsel
