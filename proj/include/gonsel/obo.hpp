#pragma once

#include <iosfwd>
#include <memory>
#include <set>
#include <string>

#include "gonsel/ontology.hpp"

namespace gonsel {

struct OboConfig {
  /// Relations treated as child->parent edges. is_a is the plain OBO tag;
  /// anything else matches "relationship: <name> GO:XXXXXXX".
  std::set<std::string> edge_relations{"is_a", "part_of"};
};

struct OboStats {
  std::size_t terms_kept = 0;
  std::size_t terms_obsolete = 0;
  std::size_t edges_kept = 0;
  std::size_t edges_to_obsolete = 0;
  std::size_t edges_cross_branch = 0;
  std::size_t alt_ids = 0;
};

struct OboResult {
  std::shared_ptr<const OntologyDag> dag;
  OboStats stats;
};

/// Parses OBO 1.2/1.4 term stanzas into an OntologyDag. Obsolete terms and
/// their edges are dropped; cross-branch edges are dropped and counted;
/// edges to undeclared accessions are structural errors.
OboResult parse_obo(std::istream& in, const OboConfig& config = {});

/// Reads `path` (gzip accepted) and parses it.
OboResult load_obo(const std::string& path, const OboConfig& config = {});

}  // namespace gonsel
