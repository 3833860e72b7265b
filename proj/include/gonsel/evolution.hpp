#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gonsel/annotations.hpp"
#include "gonsel/ontology.hpp"
#include "gonsel/similarity.hpp"
#include "gonsel/stats.hpp"

namespace gonsel {

enum class Category : std::uint8_t { First, Anc, Desc, Sib, Other };
inline constexpr std::size_t kCategoryCount = 5;

std::string_view to_string(Category category);

struct CategoryRecord {
  std::string protein;
  TermIndex new_term;                 // k
  std::optional<TermIndex> old_term;  // s; empty iff First
  Category category;
};

/// Classifies one novel annotation (i, k) against each term the protein
/// already carried. Precedence when several relations hold for one pair:
/// Desc > Anc > Sib > Other. Empty history -> a single First record.
std::vector<CategoryRecord> categorize(const std::string& protein, TermIndex k,
                                       std::span<const TermIndex> old_terms,
                                       const OntologyDag& dag);

/// Direct-mode novelty between the releases, categorized. Old-release
/// history spans all three branches.
std::vector<CategoryRecord> categorize_novelty(const AnnotationRelease& older,
                                               const AnnotationRelease& newer);

struct BranchCategoryStats {
  /// Per-(i,s)-pair proportions averaged across terms (First = one pair).
  std::array<double, kCategoryCount> pair_proportions{};
  /// Distinct (protein, term) incidences per category, one per category a
  /// protein exhibits; the raw counts behind the protein-level reading.
  std::array<std::size_t, kCategoryCount> protein_counts{};
  std::size_t terms = 0;
};

/// Keyed by the branch of the novel term k. Throws on an empty record set.
std::map<Branch, BranchCategoryStats> category_proportions(
    const std::vector<CategoryRecord>& records, const OntologyDag& dag);

struct RankRecord {
  Branch branch;
  TermIndex new_term;
  std::string protein;
  TermIndex old_term;
  double rank;  // normalized, (0,1]
};

struct RankAnalysis {
  std::vector<RankRecord> records;
  /// Summary of per-term mean ranks, per branch.
  std::map<Branch, DistributionSummary> summaries;
};

/// Pools normalized similarity ranks of (k, s) over novel pairs whose old
/// term s shares k's branch, then summarizes per-term means. `matrices`
/// must hold at most one matrix per branch, all built on the older release.
RankAnalysis rank_analysis(const std::vector<CategoryRecord>& records,
                           std::span<const SimilarityMatrix> matrices,
                           const OntologyDag& dag);

struct ForkRecord {
  Branch branch;  // of the novel term k
  TermIndex new_term;
  std::string protein;
  TermIndex old_term;
  ForkAncestor fork;
  int distance;
  Category category;  // Sib or Other
};

struct ForkAnalysis {
  std::vector<ForkRecord> records;
  std::map<Branch, DistributionSummary> sib;
  std::map<Branch, DistributionSummary> other;
  std::map<Branch, DistributionSummary> all;
};

/// Distance from the fork term q up which the old path diverged: Sib pairs
/// fork at the deepest shared parent, Other pairs at the deepest common
/// ancestor (dummy root for cross-branch pairs). Anc/Desc pairs create no
/// fork and are skipped.
ForkAnalysis fork_analysis(const std::vector<CategoryRecord>& records,
                           const OntologyDag& dag);

void write_categories_csv(std::ostream& out,
                          const std::vector<CategoryRecord>& records,
                          const OntologyDag& dag);
void write_ranks_csv(std::ostream& out, const RankAnalysis& analysis,
                     const OntologyDag& dag);
void write_forks_csv(std::ostream& out, const ForkAnalysis& analysis,
                     const OntologyDag& dag);

}  // namespace gonsel
