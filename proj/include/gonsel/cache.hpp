#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "gonsel/ontology.hpp"

namespace gonsel {

/// Binary round-trip of a parsed dag, used by the CLI cache. Levels and the
/// topological order are recomputed on load, so the file only stores what
/// the OBO contributed.
void write_dag_cache(std::ostream& out, const OntologyDag& dag);
std::shared_ptr<const OntologyDag> read_dag_cache(std::istream& in);

}  // namespace gonsel
