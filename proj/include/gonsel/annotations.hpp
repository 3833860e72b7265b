#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gonsel/ontology.hpp"

namespace gonsel {

using ProteinIndex = std::uint32_t;

inline const std::set<std::string>& experimental_evidence_codes() {
  static const std::set<std::string> codes{"EXP", "IDA", "IPI",
                                           "IMP", "IGI", "IEP"};
  return codes;
}

/// Sparse boolean proteins x terms matrix, stored as sorted rows plus a
/// sorted inverted index over terms.
struct LabelMatrix {
  std::vector<std::vector<TermIndex>> rows;      // per protein
  std::vector<std::vector<ProteinIndex>> cols;   // per term, sized term_count

  bool contains(ProteinIndex i, TermIndex k) const {
    const auto& row = rows[i];
    return std::binary_search(row.begin(), row.end(), k);
  }
  std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& row : rows) n += row.size();
    return n;
  }
};

struct GafStats {
  std::size_t rows_total = 0;        // data rows, comments excluded
  std::size_t rows_kept = 0;         // surviving pairs before dedup
  std::size_t skipped_not = 0;
  std::size_t skipped_evidence = 0;
  std::size_t skipped_unknown_term = 0;  // unknown or obsolete accession
  std::size_t duplicates = 0;
};

/// One temporal release of direct annotations, indexed against a fixed
/// OntologyDag. Immutable after construction; the TPR closure is computed
/// lazily and cached (thread-safe).
class AnnotationRelease {
 public:
  AnnotationRelease(std::string label, std::shared_ptr<const OntologyDag> dag,
                    std::vector<std::string> protein_accessions,
                    std::vector<std::pair<ProteinIndex, TermIndex>> direct_pairs,
                    GafStats stats = {});

  /// Convenience for tests and generators: accession-keyed pairs.
  static AnnotationRelease from_pairs(
      std::string label, std::shared_ptr<const OntologyDag> dag,
      const std::vector<std::pair<std::string, std::string>>& pairs);

  const std::string& label() const { return label_; }
  const OntologyDag& dag() const { return *dag_; }
  std::shared_ptr<const OntologyDag> dag_ptr() const { return dag_; }

  std::size_t protein_count() const { return proteins_.size(); }
  const std::vector<std::string>& proteins() const { return proteins_; }
  const std::string& protein(ProteinIndex i) const { return proteins_.at(i); }
  std::optional<ProteinIndex> find_protein(std::string_view accession) const;

  const LabelMatrix& direct() const { return direct_; }
  const LabelMatrix& closed() const;  // lazy TPR closure

  std::span<const TermIndex> direct_terms(ProteinIndex i) const {
    return direct_.rows.at(i);
  }
  std::span<const TermIndex> closed_terms(ProteinIndex i) const {
    return closed().rows.at(i);
  }

  const GafStats& stats() const { return stats_; }
  bool empty() const { return direct_.pair_count() == 0; }

 private:
  struct LazyClosure {
    std::once_flag once;
    LabelMatrix matrix;
  };

  std::string label_;
  std::shared_ptr<const OntologyDag> dag_;
  std::vector<std::string> proteins_;
  std::unordered_map<std::string, ProteinIndex> protein_index_;
  LabelMatrix direct_;
  mutable std::unique_ptr<LazyClosure> closure_ = std::make_unique<LazyClosure>();
  GafStats stats_;
};

struct GafConfig {
  std::set<std::string> evidence_filter = experimental_evidence_codes();
  bool accept_all_evidence = false;  // bypasses the filter entirely
  /// Optional object-ID normalization (e.g. secondary UniProt accessions to
  /// primary ones), applied to column 2 before deduplication.
  std::map<std::string, std::string> protein_synonyms;
  std::string label = "release";
};

/// Two-column whitespace-separated synonym file: <from> <to> per line,
/// '!' or '#' comments allowed.
std::map<std::string, std::string> parse_protein_synonyms(std::istream& in);

/// Parses GAF 2.x rows against `dag`. NOT-qualified rows, filtered evidence
/// codes and unknown/obsolete terms are skipped (the latter counted);
/// duplicate (protein, term) pairs collapse to one.
AnnotationRelease parse_gaf(std::istream& in,
                            std::shared_ptr<const OntologyDag> dag,
                            const GafConfig& config = {});

AnnotationRelease load_gaf(const std::string& path,
                           std::shared_ptr<const OntologyDag> dag,
                           GafConfig config = {});

/// Spec-named view of the closure.
inline const LabelMatrix& tpr_close(const AnnotationRelease& release) {
  return release.closed();
}

enum class NoveltyMode { Direct, Closed };

/// Proteins newly annotated to one term between two releases. Proteins are
/// identified by accession so the two releases may index different universes.
struct NoveltySet {
  TermIndex term;
  std::vector<std::string> proteins;  // sorted accessions
};

/// Terms gaining at least one protein between `older` and `newer`; a protein
/// absent from the old release counts as unannotated there. Both releases
/// must share the same dag.
std::vector<NoveltySet> novelty(const AnnotationRelease& older,
                                const AnnotationRelease& newer,
                                NoveltyMode mode);

/// Fraction of the release's proteins annotated (after closure) with k.
double term_frequency(const AnnotationRelease& release, TermIndex k);

}  // namespace gonsel
