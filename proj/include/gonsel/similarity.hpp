#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gonsel/annotations.hpp"
#include "gonsel/ontology.hpp"

namespace gonsel {

enum class Measure : std::uint8_t { Lin, Jaccard };

std::string_view to_string(Measure measure);
std::optional<Measure> measure_from_tag(std::string_view tag);

/// Which terms a branch matrix covers. Annotated-only keeps full-GO runs
/// tractable; the rank normalisation divides by whichever m results.
enum class TermUniverse : std::uint8_t { AllBranchTerms, AnnotatedOnly };

/// Symmetric m x m term similarity matrix for one branch and measure.
/// Values are doubles in [0,1]; rows follow accession order.
class SimilarityMatrix {
 public:
  SimilarityMatrix(Measure measure, Branch branch,
                   std::vector<TermIndex> terms, std::size_t dag_term_count);

  Measure measure() const { return measure_; }
  Branch branch() const { return branch_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<TermIndex>& terms() const { return terms_; }

  /// Row position of a dag term; throws DomainError if not covered.
  std::size_t position_of(TermIndex k) const;
  bool covers(TermIndex k) const {
    return k < positions_.size() && positions_[k] != kNoTerm;
  }

  double at(std::size_t row, std::size_t col) const {
    return values_[row * terms_.size() + col];
  }
  double& at(std::size_t row, std::size_t col) {
    return values_[row * terms_.size() + col];
  }
  double value(TermIndex k, TermIndex s) const {
    return at(position_of(k), position_of(s));
  }
  std::span<const double> row(std::size_t row_pos) const {
    return {values_.data() + row_pos * terms_.size(), terms_.size()};
  }
  std::span<const double> row_of(TermIndex k) const {
    return row(position_of(k));
  }

 private:
  Measure measure_;
  Branch branch_;
  std::vector<TermIndex> terms_;
  std::vector<std::uint32_t> positions_;  // dag index -> row, kNoTerm if absent
  std::vector<double> values_;
};

/// Lin similarity on the release's closed annotation frequencies. The
/// most-informative common ancestor ranges over common ancestors including k
/// (or r) itself when one is an ancestor of the other. Degenerate cases:
/// unannotated operand -> 0; k == r annotated -> 1; distinct terms whose
/// frequencies are all 1 -> 0.
double lin_similarity(TermIndex k, TermIndex r, const AnnotationRelease& release);

/// |V+(k) & V+(r)| / |V+(k) | V+(r)| over closed positives; 0 on empty union.
double jaccard_similarity(TermIndex k, TermIndex r,
                          const AnnotationRelease& release);

SimilarityMatrix build_similarity_matrix(Measure measure,
                                         const AnnotationRelease& release,
                                         Branch branch,
                                         TermUniverse universe =
                                             TermUniverse::AllBranchTerms,
                                         unsigned threads = 1);

/// Mid-rank of row[target] within the row, divided by the row length.
/// Ties take the mean of their 1-based position range; higher = more similar.
double normalized_rank(std::span<const double> row, std::size_t target);
double normalized_rank(const SimilarityMatrix& matrix, TermIndex k, TermIndex s);

/// Value at 1-based index ceil(K * m) of the increasingly sorted row (lower
/// empirical quantile, so the threshold is an attained value). K in (0,1).
double quantile_threshold(std::span<const double> row, double k_quantile);

/// Binary cache: magic, measure tag, branch, m, accessions, row-major f32.
void write_matrix_cache(std::ostream& out, const SimilarityMatrix& matrix);
SimilarityMatrix read_matrix_cache(std::istream& in, const OntologyDag& dag);

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix,
                      const OntologyDag& dag);

}  // namespace gonsel
