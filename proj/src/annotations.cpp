#include "gonsel/annotations.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

#include "gonsel/io.hpp"

namespace gonsel {

namespace {

LabelMatrix build_matrix(std::size_t protein_count, std::size_t term_count,
                         std::vector<std::pair<ProteinIndex, TermIndex>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  LabelMatrix m;
  m.rows.resize(protein_count);
  m.cols.resize(term_count);
  for (const auto& [i, k] : pairs) {
    m.rows[i].push_back(k);
    m.cols[k].push_back(i);
  }
  return m;  // rows/cols sorted because pairs were
}

}  // namespace

AnnotationRelease::AnnotationRelease(
    std::string label, std::shared_ptr<const OntologyDag> dag,
    std::vector<std::string> protein_accessions,
    std::vector<std::pair<ProteinIndex, TermIndex>> direct_pairs,
    GafStats stats)
    : label_(std::move(label)),
      dag_(std::move(dag)),
      proteins_(std::move(protein_accessions)),
      stats_(stats) {
  protein_index_.reserve(proteins_.size());
  for (std::size_t i = 0; i < proteins_.size(); ++i) {
    if (!protein_index_.emplace(proteins_[i], ProteinIndex(i)).second)
      throw StructuralError("duplicate protein " + proteins_[i]);
  }
  for (const auto& [i, k] : direct_pairs) {
    if (i >= proteins_.size())
      throw StructuralError("annotation references unknown protein index");
    if (k >= dag_->term_count())
      throw StructuralError("annotation references unknown term index");
  }
  direct_ = build_matrix(proteins_.size(), dag_->term_count(),
                         std::move(direct_pairs));
}

AnnotationRelease AnnotationRelease::from_pairs(
    std::string label, std::shared_ptr<const OntologyDag> dag,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> proteins;
  for (const auto& [p, _] : pairs) proteins.push_back(p);
  std::sort(proteins.begin(), proteins.end());
  proteins.erase(std::unique(proteins.begin(), proteins.end()), proteins.end());
  std::unordered_map<std::string, ProteinIndex> index;
  for (std::size_t i = 0; i < proteins.size(); ++i)
    index.emplace(proteins[i], ProteinIndex(i));
  std::vector<std::pair<ProteinIndex, TermIndex>> indexed;
  indexed.reserve(pairs.size());
  for (const auto& [p, acc] : pairs)
    indexed.emplace_back(index.at(p), dag->index_of(acc));
  return AnnotationRelease(std::move(label), std::move(dag),
                           std::move(proteins), std::move(indexed));
}

std::optional<ProteinIndex> AnnotationRelease::find_protein(
    std::string_view accession) const {
  const auto it = protein_index_.find(std::string(accession));
  if (it == protein_index_.end()) return std::nullopt;
  return it->second;
}

const LabelMatrix& AnnotationRelease::closed() const {
  std::call_once(closure_->once, [this] {
    std::vector<std::pair<ProteinIndex, TermIndex>> pairs;
    std::vector<bool> seen(dag_->term_count(), false);
    std::vector<TermIndex> stack, touched;
    for (ProteinIndex i = 0; i < proteins_.size(); ++i) {
      touched.clear();
      for (const TermIndex k : direct_.rows[i]) {
        if (!seen[k]) {
          seen[k] = true;
          touched.push_back(k);
          stack.push_back(k);
        }
        while (!stack.empty()) {
          const TermIndex t = stack.back();
          stack.pop_back();
          for (const TermIndex p : dag_->parents(t)) {
            if (!seen[p]) {
              seen[p] = true;
              touched.push_back(p);
              stack.push_back(p);
            }
          }
        }
      }
      for (const TermIndex k : touched) {
        pairs.emplace_back(i, k);
        seen[k] = false;
      }
    }
    closure_->matrix =
        build_matrix(proteins_.size(), dag_->term_count(), std::move(pairs));
  });
  return closure_->matrix;
}

AnnotationRelease parse_gaf(std::istream& in,
                            std::shared_ptr<const OntologyDag> dag,
                            const GafConfig& config) {
  if (config.evidence_filter.empty() && !config.accept_all_evidence)
    throw DomainError("evidence filter must not be empty");
  GafStats stats;
  std::vector<std::pair<std::string, TermIndex>> raw_pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = chomp(line);
    if (sv.empty() || sv.front() == '!') continue;
    ++stats.rows_total;
    const auto fields = split(sv, '\t');
    // GAF 1.0 rows carry 15 columns, GAF 2.x adds two optional ones.
    if (fields.size() < 15 || fields.size() > 17)
      throw ParseError("expected 15-17 tab-separated columns, got " +
                           std::to_string(fields.size()),
                       lineno);
    const std::string_view object_id = fields[1];
    const std::string_view qualifier = fields[3];
    const std::string_view go_id = fields[4];
    const std::string_view evidence = fields[6];
    if (object_id.empty())
      throw ParseError("empty DB object ID", lineno);
    bool negated = false;
    for (const auto part : split(qualifier, '|'))
      if (part == "NOT") negated = true;
    if (negated) {
      ++stats.skipped_not;
      continue;
    }
    if (!config.accept_all_evidence &&
        !config.evidence_filter.count(std::string(evidence))) {
      ++stats.skipped_evidence;
      continue;
    }
    const auto term = dag->find(go_id);
    if (!term) {
      ++stats.skipped_unknown_term;
      continue;
    }
    std::string protein(object_id);
    if (!config.protein_synonyms.empty()) {
      const auto synonym = config.protein_synonyms.find(protein);
      if (synonym != config.protein_synonyms.end()) protein = synonym->second;
    }
    raw_pairs.emplace_back(std::move(protein), *term);
    ++stats.rows_kept;
  }

  std::vector<std::string> proteins;
  proteins.reserve(raw_pairs.size());
  for (const auto& [p, _] : raw_pairs) proteins.push_back(p);
  std::sort(proteins.begin(), proteins.end());
  proteins.erase(std::unique(proteins.begin(), proteins.end()),
                 proteins.end());
  std::unordered_map<std::string, ProteinIndex> index;
  index.reserve(proteins.size());
  for (std::size_t i = 0; i < proteins.size(); ++i)
    index.emplace(proteins[i], ProteinIndex(i));

  std::vector<std::pair<ProteinIndex, TermIndex>> pairs;
  pairs.reserve(raw_pairs.size());
  for (const auto& [p, k] : raw_pairs) pairs.emplace_back(index.at(p), k);
  std::sort(pairs.begin(), pairs.end());
  const std::size_t before = pairs.size();
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  stats.duplicates = before - pairs.size();

  return AnnotationRelease(config.label, std::move(dag), std::move(proteins),
                           std::move(pairs), stats);
}

AnnotationRelease load_gaf(const std::string& path,
                           std::shared_ptr<const OntologyDag> dag,
                           GafConfig config) {
  std::istringstream in(read_file(path));
  return parse_gaf(in, std::move(dag), config);
}

std::map<std::string, std::string> parse_protein_synonyms(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = chomp(line);
    if (sv.empty() || sv.front() == '!' || sv.front() == '#') continue;
    std::istringstream fields{std::string(sv)};
    std::string from, to, extra;
    fields >> from >> to;
    if (to.empty() || (fields >> extra && !extra.empty()))
      throw ParseError("expected two whitespace-separated columns", lineno);
    out[from] = to;
  }
  return out;
}

std::vector<NoveltySet> novelty(const AnnotationRelease& older,
                                const AnnotationRelease& newer,
                                NoveltyMode mode) {
  if (&older.dag() != &newer.dag())
    throw DomainError("novelty requires releases indexed against one dag");
  const LabelMatrix& old_m =
      mode == NoveltyMode::Direct ? older.direct() : older.closed();
  const LabelMatrix& new_m =
      mode == NoveltyMode::Direct ? newer.direct() : newer.closed();

  std::vector<NoveltySet> out;
  for (TermIndex k = 0; k < older.dag().term_count(); ++k) {
    const auto& new_proteins = new_m.cols[k];
    if (new_proteins.empty()) continue;
    NoveltySet set{k, {}};
    for (const ProteinIndex i : new_proteins) {
      const std::string& acc = newer.protein(i);
      const auto old_i = older.find_protein(acc);
      const bool already = old_i && std::binary_search(old_m.rows[*old_i].begin(),
                                                       old_m.rows[*old_i].end(), k);
      if (!already) set.proteins.push_back(acc);
    }
    if (!set.proteins.empty()) {
      std::sort(set.proteins.begin(), set.proteins.end());
      out.push_back(std::move(set));
    }
  }
  return out;
}

double term_frequency(const AnnotationRelease& release, TermIndex k) {
  if (k >= release.dag().term_count())
    throw LookupError("unknown term index " + std::to_string(k));
  if (release.protein_count() == 0)
    throw DomainError("term_frequency on a release with no proteins");
  return double(release.closed().cols[k].size()) /
         double(release.protein_count());
}

}  // namespace gonsel
