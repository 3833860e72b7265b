#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gonsel/errors.hpp"

namespace gonsel {

enum class Branch : std::uint8_t { BP, MF, CC };

std::string_view to_string(Branch branch);
std::optional<Branch> branch_from_tag(std::string_view tag);  // "BP" | "MF" | "CC"
std::optional<Branch> branch_from_namespace(std::string_view obo_namespace);
std::optional<Branch> branch_from_aspect(char aspect);  // GAF column 9: P, F, C

using TermIndex = std::uint32_t;
inline constexpr TermIndex kNoTerm = std::numeric_limits<TermIndex>::max();

/// Accession reserved for the synthetic root above the three branch roots.
/// Real GO accessions start at GO:0000001, so it cannot collide.
inline constexpr std::string_view kDummyRootAccession = "GO:0000000";
inline constexpr int kDummyRootLevel = -1;

bool is_valid_accession(std::string_view accession);

struct TermRecord {
  std::string accession;
  std::string name;
  Branch branch;
};

/// Result of deepest_fork_ancestor: either a real term or the dummy root.
struct ForkAncestor {
  TermIndex term = kNoTerm;  // kNoTerm means the dummy root
  bool is_dummy() const { return term == kNoTerm; }
};

/// Immutable child->parent DAG over GO terms. Terms are indexed densely in
/// accession order; the dummy root is implicit and never occupies an index.
/// Safe for concurrent reads after construction.
class OntologyDag {
 public:
  /// `parent_pairs` holds (child, parent) positions into `terms`. Validates
  /// acyclicity and branch containment, then computes levels.
  OntologyDag(std::vector<TermRecord> terms,
              std::vector<std::pair<std::uint32_t, std::uint32_t>> parent_pairs,
              std::unordered_map<std::string, std::string> alt_ids = {});

  std::size_t term_count() const { return terms_.size(); }
  const TermRecord& term(TermIndex k) const { return terms_.at(k); }
  Branch branch_of(TermIndex k) const { return terms_.at(k).branch; }
  const std::string& accession(TermIndex k) const { return terms_.at(k).accession; }
  std::string_view accession_or_dummy(const ForkAncestor& q) const {
    return q.is_dummy() ? kDummyRootAccession : std::string_view(accession(q.term));
  }

  /// Resolves canonical and alternate accessions. Unknown -> nullopt.
  std::optional<TermIndex> find(std::string_view accession) const;
  /// Same, but throws LookupError on unknown accessions.
  TermIndex index_of(std::string_view accession) const;

  std::span<const TermIndex> parents(TermIndex k) const;   // branch-internal
  std::span<const TermIndex> children(TermIndex k) const;
  bool is_branch_root(TermIndex k) const { return parents(k).empty(); }

  std::vector<TermIndex> terms_in_branch(Branch branch) const;  // accession order
  std::size_t branch_size(Branch branch) const;

  /// Longest child->parent path from k to a branch root. Root terms are 0.
  int level(TermIndex k) const { return levels_.at(k); }
  int max_level() const { return max_level_; }

  /// All terms reachable via child->parent edges, excluding k and the dummy
  /// root. Sorted by index (= accession order).
  std::vector<TermIndex> ancestors(TermIndex k) const;
  std::vector<TermIndex> descendants(TermIndex k) const;
  /// Terms sharing at least one parent with k. Dummy-root parenthood does not
  /// make the branch roots siblings of each other.
  std::vector<TermIndex> siblings(TermIndex k) const;

  bool is_ancestor_of(TermIndex candidate, TermIndex k) const;

  /// Deepest common ancestor of k and s (highest level, ties to the smallest
  /// accession); the dummy root when they share no term. Requires k != s and
  /// neither being an ancestor of the other.
  ForkAncestor deepest_fork_ancestor(TermIndex k, TermIndex s) const;

  /// Edge count of the longest directed path s -> q; 0 when q == s.
  /// Requires q in ancestors(s) or q == s.
  int longest_path_distance(TermIndex q, TermIndex s) const;
  /// Dummy-root overload: level(s) + 1 by construction.
  int longest_path_distance(const ForkAncestor& q, TermIndex s) const;

  /// Indices in topological order, parents before children.
  const std::vector<TermIndex>& topological_order() const { return topo_; }

  /// (alternate, canonical) accession pairs, sorted; for serialization.
  std::vector<std::pair<std::string, std::string>> alternate_accessions() const;

 private:
  void check_term(TermIndex k) const;
  std::vector<TermIndex> reachable(TermIndex start, bool upward) const;

  std::vector<TermRecord> terms_;
  std::unordered_map<std::string, TermIndex> by_accession_;  // incl. alt_ids
  std::vector<TermIndex> parent_flat_, child_flat_;
  std::vector<std::uint32_t> parent_off_, child_off_;  // CSR offsets
  std::vector<int> levels_;
  std::vector<TermIndex> topo_;
  int max_level_ = 0;
};

}  // namespace gonsel
