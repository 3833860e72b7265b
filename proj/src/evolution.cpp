#include "gonsel/evolution.hpp"

#include <algorithm>
#include <ostream>

#include "gonsel/io.hpp"

namespace gonsel {

std::string_view to_string(Category category) {
  switch (category) {
    case Category::First: return "First";
    case Category::Anc: return "Anc";
    case Category::Desc: return "Desc";
    case Category::Sib: return "Sib";
    case Category::Other: return "Other";
  }
  return "??";
}

namespace {

bool share_parent(const OntologyDag& dag, TermIndex a, TermIndex b) {
  const auto pa = dag.parents(a);
  const auto pb = dag.parents(b);
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i] < pb[j]) ++i;
    else if (pb[j] < pa[i]) ++j;
    else return true;
  }
  return false;
}

Category classify_pair(const OntologyDag& dag, TermIndex k, TermIndex s) {
  if (dag.is_ancestor_of(s, k)) return Category::Desc;  // k below s
  if (dag.is_ancestor_of(k, s)) return Category::Anc;   // k above s
  if (share_parent(dag, k, s)) return Category::Sib;
  return Category::Other;
}

}  // namespace

std::vector<CategoryRecord> categorize(const std::string& protein, TermIndex k,
                                       std::span<const TermIndex> old_terms,
                                       const OntologyDag& dag) {
  std::vector<CategoryRecord> out;
  if (old_terms.empty()) {
    out.push_back({protein, k, std::nullopt, Category::First});
    return out;
  }
  out.reserve(old_terms.size());
  for (const TermIndex s : old_terms)
    out.push_back({protein, k, s, classify_pair(dag, k, s)});
  return out;
}

std::vector<CategoryRecord> categorize_novelty(const AnnotationRelease& older,
                                               const AnnotationRelease& newer) {
  const OntologyDag& dag = older.dag();
  std::vector<CategoryRecord> out;
  for (const NoveltySet& set : novelty(older, newer, NoveltyMode::Direct)) {
    for (const std::string& protein : set.proteins) {
      const auto old_i = older.find_protein(protein);
      std::span<const TermIndex> history;
      if (old_i) history = older.direct_terms(*old_i);
      auto records = categorize(protein, set.term, history, dag);
      out.insert(out.end(), std::make_move_iterator(records.begin()),
                 std::make_move_iterator(records.end()));
    }
  }
  return out;
}

std::map<Branch, BranchCategoryStats> category_proportions(
    const std::vector<CategoryRecord>& records, const OntologyDag& dag) {
  if (records.empty())
    throw DomainError("category_proportions on an empty record set");

  // Per-term pair counts; records for one (protein, term) stay contiguous.
  std::map<TermIndex, std::array<std::size_t, kCategoryCount>> per_term;
  std::map<TermIndex, std::map<std::string, std::array<bool, kCategoryCount>>>
      exhibited;
  for (const CategoryRecord& r : records) {
    per_term[r.new_term][std::size_t(r.category)] += 1;
    exhibited[r.new_term][r.protein][std::size_t(r.category)] = true;
  }

  std::map<Branch, BranchCategoryStats> out;
  for (const auto& [term, counts] : per_term) {
    const Branch branch = dag.branch_of(term);
    BranchCategoryStats& stats = out[branch];
    std::size_t total = 0;
    for (const std::size_t c : counts) total += c;
    for (std::size_t c = 0; c < kCategoryCount; ++c)
      stats.pair_proportions[c] += double(counts[c]) / double(total);
    stats.terms += 1;
    for (const auto& [protein, flags] : exhibited[term])
      for (std::size_t c = 0; c < kCategoryCount; ++c)
        if (flags[c]) stats.protein_counts[c] += 1;
  }
  for (auto& [branch, stats] : out)
    for (double& p : stats.pair_proportions) p /= double(stats.terms);
  return out;
}

RankAnalysis rank_analysis(const std::vector<CategoryRecord>& records,
                           std::span<const SimilarityMatrix> matrices,
                           const OntologyDag& dag) {
  RankAnalysis out;
  std::map<Branch, std::map<TermIndex, std::vector<double>>> per_term;
  for (const CategoryRecord& r : records) {
    if (!r.old_term) continue;
    const Branch branch = dag.branch_of(r.new_term);
    if (dag.branch_of(*r.old_term) != branch) continue;
    const SimilarityMatrix* matrix = nullptr;
    for (const SimilarityMatrix& m : matrices)
      if (m.branch() == branch) matrix = &m;
    if (!matrix || !matrix->covers(r.new_term) || !matrix->covers(*r.old_term))
      continue;
    const double rank = normalized_rank(*matrix, r.new_term, *r.old_term);
    out.records.push_back({branch, r.new_term, r.protein, *r.old_term, rank});
    per_term[branch][r.new_term].push_back(rank);
  }
  if (out.records.empty())
    throw DomainError("rank analysis found no same-branch novel pairs");
  for (const auto& [branch, terms] : per_term) {
    std::vector<double> term_means;
    term_means.reserve(terms.size());
    for (const auto& [term, ranks] : terms) {
      double sum = 0;
      for (const double r : ranks) sum += r;
      term_means.push_back(sum / double(ranks.size()));
    }
    out.summaries.emplace(branch, summarize(term_means));
  }
  return out;
}

ForkAnalysis fork_analysis(const std::vector<CategoryRecord>& records,
                           const OntologyDag& dag) {
  ForkAnalysis out;
  std::map<Branch, std::vector<double>> sib, other, all;
  for (const CategoryRecord& r : records) {
    if (r.category != Category::Sib && r.category != Category::Other) continue;
    const TermIndex k = r.new_term;
    const TermIndex s = *r.old_term;
    ForkAncestor fork;
    if (r.category == Category::Sib) {
      // Deepest shared parent; ties resolve to the smallest accession,
      // which is the smallest index.
      const auto pk = dag.parents(k);
      for (const TermIndex p : pk) {
        const auto ps = dag.parents(s);
        if (!std::binary_search(ps.begin(), ps.end(), p)) continue;
        if (fork.is_dummy() || dag.level(p) > dag.level(fork.term))
          fork.term = p;
      }
    } else {
      fork = dag.deepest_fork_ancestor(k, s);
    }
    const int distance = dag.longest_path_distance(fork, s);
    const Branch branch = dag.branch_of(k);
    out.records.push_back({branch, k, r.protein, s, fork, distance, r.category});
    (r.category == Category::Sib ? sib : other)[branch].push_back(distance);
    all[branch].push_back(distance);
  }
  for (const auto& [b, v] : sib) out.sib.emplace(b, summarize(v));
  for (const auto& [b, v] : other) out.other.emplace(b, summarize(v));
  for (const auto& [b, v] : all) out.all.emplace(b, summarize(v));
  return out;
}

void write_categories_csv(std::ostream& out,
                          const std::vector<CategoryRecord>& records,
                          const OntologyDag& dag) {
  out << "term,protein,old_term,category\n";
  for (const CategoryRecord& r : records) {
    out << dag.accession(r.new_term) << ',' << r.protein << ','
        << (r.old_term ? dag.accession(*r.old_term) : std::string())
        << ',' << to_string(r.category) << '\n';
  }
}

void write_ranks_csv(std::ostream& out, const RankAnalysis& analysis,
                     const OntologyDag& dag) {
  out << "branch,term,protein,old_term,rank\n";
  for (const RankRecord& r : analysis.records) {
    out << to_string(r.branch) << ',' << dag.accession(r.new_term) << ','
        << r.protein << ',' << dag.accession(r.old_term) << ','
        << format_double(r.rank) << '\n';
  }
}

void write_forks_csv(std::ostream& out, const ForkAnalysis& analysis,
                     const OntologyDag& dag) {
  out << "branch,term,old_term,fork_term,distance\n";
  for (const ForkRecord& r : analysis.records) {
    out << to_string(r.branch) << ',' << dag.accession(r.new_term) << ','
        << dag.accession(r.old_term) << ',' << dag.accession_or_dummy(r.fork)
        << ',' << r.distance << '\n';
  }
}

}  // namespace gonsel
