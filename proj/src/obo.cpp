#include "gonsel/obo.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "gonsel/io.hpp"

namespace gonsel {

namespace {

struct Stanza {
  std::string id;
  std::string name;
  std::string ns;
  bool obsolete = false;
  std::vector<std::string> parents;  // raw accessions
  std::vector<std::string> alt_ids;
  std::size_t line = 0;  // of the [Term] header
};

std::string_view trim_comment(std::string_view value) {
  // "GO:0000001 {qualifier=...} ! comment" -> "GO:0000001"
  const std::size_t bang = value.find(" ! ");
  if (bang != std::string_view::npos) value = value.substr(0, bang);
  const std::size_t modifier = value.find(" {");
  if (modifier != std::string_view::npos) value = value.substr(0, modifier);
  while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
  return value;
}

std::string accession_or_throw(std::string_view raw, std::size_t line) {
  const std::string_view acc = trim_comment(raw);
  if (!is_valid_accession(acc))
    throw ParseError("malformed GO accession '" + std::string(acc) + "'", line);
  return std::string(acc);
}

}  // namespace

OboResult parse_obo(std::istream& in, const OboConfig& config) {
  std::vector<Stanza> stanzas;
  Stanza current;
  bool in_term = false;
  std::string default_ns;
  std::string line;
  std::size_t lineno = 0;

  auto flush = [&] {
    if (!in_term) return;
    if (current.id.empty())
      throw ParseError("term stanza without id", current.line);
    stanzas.push_back(std::move(current));
    current = Stanza{};
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = chomp(line);
    if (sv.empty()) continue;
    if (sv.front() == '[') {
      flush();
      in_term = (sv == "[Term]");
      current.line = lineno;
      continue;
    }
    const std::size_t colon = sv.find(": ");
    if (colon == std::string_view::npos) {
      if (in_term) throw ParseError("malformed tag line", lineno);
      continue;  // header free text
    }
    const std::string_view tag = sv.substr(0, colon);
    const std::string_view value = sv.substr(colon + 2);
    if (!in_term) {
      if (tag == "default-namespace") default_ns = std::string(value);
      continue;
    }
    if (tag == "id") {
      current.id = accession_or_throw(value, lineno);
    } else if (tag == "name") {
      current.name = std::string(value);
    } else if (tag == "namespace") {
      current.ns = std::string(value);
    } else if (tag == "is_obsolete") {
      current.obsolete = (trim_comment(value) == "true");
    } else if (tag == "alt_id") {
      current.alt_ids.push_back(accession_or_throw(value, lineno));
    } else if (tag == "is_a") {
      if (config.edge_relations.count("is_a"))
        current.parents.push_back(accession_or_throw(value, lineno));
    } else if (tag == "relationship") {
      const std::string_view rel = trim_comment(value);
      const std::size_t space = rel.find(' ');
      if (space == std::string_view::npos)
        throw ParseError("malformed relationship line", lineno);
      const std::string rel_name(rel.substr(0, space));
      if (config.edge_relations.count(rel_name))
        current.parents.push_back(
            accession_or_throw(rel.substr(space + 1), lineno));
    }
  }
  flush();

  OboStats stats;
  std::unordered_map<std::string, std::size_t> declared;  // incl. obsolete
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    auto [it, fresh] = declared.emplace(stanzas[i].id, i);
    if (!fresh)
      throw ParseError("duplicate term " + stanzas[i].id, stanzas[i].line);
  }

  std::vector<TermRecord> records;
  std::vector<const Stanza*> kept;
  for (const Stanza& st : stanzas) {
    if (st.obsolete) {
      ++stats.terms_obsolete;
      continue;
    }
    const std::string& ns = st.ns.empty() ? default_ns : st.ns;
    const auto branch = branch_from_namespace(ns);
    if (!branch)
      throw ParseError("term " + st.id + " has unknown namespace '" + ns + "'",
                       st.line);
    records.push_back(TermRecord{st.id, st.name, *branch});
    kept.push_back(&st);
  }
  stats.terms_kept = records.size();

  // Index in accession order so term indices are reproducible.
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].accession < records[b].accession;
  });
  std::vector<TermRecord> sorted;
  sorted.reserve(records.size());
  std::unordered_map<std::string, std::uint32_t> position;
  std::vector<const Stanza*> sorted_stanzas;
  for (const std::size_t i : order) {
    position.emplace(records[i].accession, std::uint32_t(sorted.size()));
    sorted.push_back(std::move(records[i]));
    sorted_stanzas.push_back(kept[i]);
  }

  std::unordered_map<std::string, std::string> alt_map;
  for (const Stanza* st : sorted_stanzas) {
    for (const std::string& alt : st->alt_ids) {
      alt_map.emplace(alt, st->id);
      ++stats.alt_ids;
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Stanza* st : sorted_stanzas) {
    const std::uint32_t child = position.at(st->id);
    for (const std::string& parent_acc : st->parents) {
      auto pos = position.find(parent_acc);
      if (pos == position.end()) {
        const auto alt = alt_map.find(parent_acc);
        if (alt != alt_map.end()) pos = position.find(alt->second);
      }
      if (pos == position.end()) {
        const auto decl = declared.find(parent_acc);
        if (decl != declared.end() && stanzas[decl->second].obsolete) {
          ++stats.edges_to_obsolete;
          continue;
        }
        throw StructuralError("term " + st->id +
                              " references undeclared term " + parent_acc);
      }
      if (sorted[child].branch != sorted[pos->second].branch) {
        ++stats.edges_cross_branch;
        continue;
      }
      edges.emplace_back(child, pos->second);
    }
  }
  stats.edges_kept = edges.size();

  OboResult result;
  result.dag = std::make_shared<OntologyDag>(std::move(sorted),
                                             std::move(edges),
                                             std::move(alt_map));
  result.stats = stats;
  return result;
}

OboResult load_obo(const std::string& path, const OboConfig& config) {
  std::istringstream in(read_file(path));
  return parse_obo(in, config);
}

}  // namespace gonsel
