#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gonsel/annotations.hpp"
#include "gonsel/ontology.hpp"
#include "gonsel/similarity.hpp"

namespace gonsel {

enum class SelectionMethod : std::uint8_t {
  NsfsJaccard,
  NsfsLin,
  Sibling,
  NoAncDesc,
  Snob,
  Random,
};

std::string_view to_string(SelectionMethod method);
std::optional<SelectionMethod> method_from_tag(std::string_view tag);
bool is_nsfs(SelectionMethod method);

struct SelectionConfig {
  SelectionMethod method = SelectionMethod::Random;
  std::size_t budget = 1;
  double k_quantile = 0.0;  // NSFS only, in (0,1)
  std::uint64_t seed = 0;
};

/// Negatives for one term. `negatives` is ordered so that any smaller budget
/// is a prefix of a larger one under the same seed; the first `n_heuristic`
/// entries come from the method's own pool, the rest are the uniform fill.
struct SelectionResult {
  TermIndex term = kNoTerm;
  std::vector<ProteinIndex> negatives;
  std::size_t n_heuristic = 0;
  std::size_t n_filled = 0;
};

/// Full preference order over every candidate (closed Y_ik = 0), before the
/// budget cut. Slicing one order per term serves all budgets consistently.
struct SelectionOrder {
  TermIndex term = kNoTerm;
  std::vector<ProteinIndex> ordered;  // heuristic picks first, then fill
  std::size_t pool_size = 0;          // heuristic pool (== ordered for SNOB/Random)
};

SelectionResult take_budget(const SelectionOrder& order, std::size_t budget);

/// Heuristic pools, before sampling. Exposed for the oracle suite.
std::vector<ProteinIndex> nsfs_pool(TermIndex k, const AnnotationRelease& release,
                                    const SimilarityMatrix& matrix,
                                    double k_quantile);
std::vector<ProteinIndex> sibling_pool(TermIndex k,
                                       const AnnotationRelease& release);
std::vector<ProteinIndex> noancdesc_pool(TermIndex k,
                                         const AnnotationRelease& release);
/// SNOB scores for every candidate, averaged conditional probabilities
/// p(k | s) over the protein's closed annotations; 0 for blank proteins.
std::vector<std::pair<ProteinIndex, double>> snob_scores(
    TermIndex k, const AnnotationRelease& release);

SelectionOrder nsfs_order(TermIndex k, const AnnotationRelease& release,
                          const SimilarityMatrix& matrix, double k_quantile,
                          std::uint64_t seed);
SelectionOrder sibling_order(TermIndex k, const AnnotationRelease& release,
                             std::uint64_t seed);
SelectionOrder noancdesc_order(TermIndex k, const AnnotationRelease& release,
                               std::uint64_t seed);
SelectionOrder snob_order(TermIndex k, const AnnotationRelease& release,
                          std::uint64_t seed);
SelectionOrder random_order(TermIndex k, const AnnotationRelease& release,
                            std::uint64_t seed);

/// Spec-level entry points: order + budget cut in one call.
SelectionResult select_nsfs(TermIndex k, const AnnotationRelease& release,
                            const SimilarityMatrix& matrix, double k_quantile,
                            std::size_t budget, std::uint64_t seed);
SelectionResult select_sibling(TermIndex k, const AnnotationRelease& release,
                               std::size_t budget, std::uint64_t seed);
SelectionResult select_noancdesc(TermIndex k, const AnnotationRelease& release,
                                 std::size_t budget, std::uint64_t seed);
SelectionResult select_snob(TermIndex k, const AnnotationRelease& release,
                            std::size_t budget, std::uint64_t seed);
SelectionResult select_random(TermIndex k, const AnnotationRelease& release,
                              std::size_t budget, std::uint64_t seed);

/// Dispatch on config.method; NSFS variants require a matrix of the matching
/// measure covering k's branch.
SelectionOrder build_order(const SelectionConfig& config, TermIndex k,
                           const AnnotationRelease& release,
                           const SimilarityMatrix* matrix);
SelectionResult select(const SelectionConfig& config, TermIndex k,
                       const AnnotationRelease& release,
                       const SimilarityMatrix* matrix);

}  // namespace gonsel
