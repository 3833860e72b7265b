#include "gonsel/selection.hpp"

#include <algorithm>

#include "gonsel/rng.hpp"

namespace gonsel {

std::string_view to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::NsfsJaccard: return "nsfs-j";
    case SelectionMethod::NsfsLin: return "nsfs-l";
    case SelectionMethod::Sibling: return "sibling";
    case SelectionMethod::NoAncDesc: return "noancdesc";
    case SelectionMethod::Snob: return "snob";
    case SelectionMethod::Random: return "random";
  }
  return "??";
}

std::optional<SelectionMethod> method_from_tag(std::string_view tag) {
  for (const auto m :
       {SelectionMethod::NsfsJaccard, SelectionMethod::NsfsLin,
        SelectionMethod::Sibling, SelectionMethod::NoAncDesc,
        SelectionMethod::Snob, SelectionMethod::Random})
    if (tag == to_string(m)) return m;
  return std::nullopt;
}

bool is_nsfs(SelectionMethod method) {
  return method == SelectionMethod::NsfsJaccard ||
         method == SelectionMethod::NsfsLin;
}

namespace {

std::vector<ProteinIndex> candidates(TermIndex k,
                                     const AnnotationRelease& release) {
  const auto& positives = release.closed().cols.at(k);
  std::vector<ProteinIndex> out;
  out.reserve(release.protein_count() - positives.size());
  std::size_t next_positive = 0;
  for (ProteinIndex i = 0; i < release.protein_count(); ++i) {
    if (next_positive < positives.size() && positives[next_positive] == i)
      ++next_positive;
    else
      out.push_back(i);
  }
  return out;
}

Rng term_rng(std::uint64_t seed, const AnnotationRelease& release,
             TermIndex k, std::uint64_t lane = 0) {
  return derive_rng(seed, release.dag().accession(k), lane);
}

/// Shuffled pool followed by shuffled remainder: the budget-fill protocol.
SelectionOrder pooled_order(TermIndex k, std::vector<ProteinIndex> pool,
                            const AnnotationRelease& release, Rng rng) {
  SelectionOrder order;
  order.term = k;
  order.pool_size = pool.size();
  std::vector<bool> in_pool(release.protein_count(), false);
  for (const ProteinIndex i : pool) in_pool[i] = true;
  std::vector<ProteinIndex> fill;
  for (const ProteinIndex i : candidates(k, release))
    if (!in_pool[i]) fill.push_back(i);
  shuffle(pool, rng);
  shuffle(fill, rng);
  order.ordered = std::move(pool);
  order.ordered.insert(order.ordered.end(), fill.begin(), fill.end());
  return order;
}

}  // namespace

SelectionResult take_budget(const SelectionOrder& order, std::size_t budget) {
  SelectionResult result;
  result.term = order.term;
  const std::size_t n = std::min(budget, order.ordered.size());
  result.negatives.assign(order.ordered.begin(), order.ordered.begin() + n);
  result.n_heuristic = std::min(n, order.pool_size);
  result.n_filled = n - result.n_heuristic;
  return result;
}

std::vector<ProteinIndex> nsfs_pool(TermIndex k,
                                    const AnnotationRelease& release,
                                    const SimilarityMatrix& matrix,
                                    double k_quantile) {
  const auto row = matrix.row_of(k);
  const double threshold = quantile_threshold(row, k_quantile);
  // Terms more similar to k than the K-th quantile of its row.
  std::vector<TermIndex> hot;
  for (std::size_t pos = 0; pos < row.size(); ++pos)
    if (row[pos] > threshold) hot.push_back(matrix.terms()[pos]);
  std::sort(hot.begin(), hot.end());
  std::vector<ProteinIndex> pool;
  for (const ProteinIndex i : candidates(k, release)) {
    bool blocked = false;
    for (const TermIndex s : release.closed_terms(i)) {
      if (std::binary_search(hot.begin(), hot.end(), s)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) pool.push_back(i);
  }
  return pool;
}

std::vector<ProteinIndex> sibling_pool(TermIndex k,
                                       const AnnotationRelease& release) {
  const auto sibs = release.dag().siblings(k);
  std::vector<ProteinIndex> pool;
  for (const ProteinIndex i : candidates(k, release)) {
    for (const TermIndex s : release.closed_terms(i)) {
      if (std::binary_search(sibs.begin(), sibs.end(), s)) {
        pool.push_back(i);
        break;
      }
    }
  }
  return pool;
}

std::vector<ProteinIndex> noancdesc_pool(TermIndex k,
                                         const AnnotationRelease& release) {
  const OntologyDag& dag = release.dag();
  auto related = dag.ancestors(k);
  const auto desc = dag.descendants(k);
  related.insert(related.end(), desc.begin(), desc.end());
  std::sort(related.begin(), related.end());
  std::vector<ProteinIndex> pool;
  for (const ProteinIndex i : candidates(k, release)) {
    bool blocked = false;
    // The hierarchy test is on direct annotations, pre-TPR.
    for (const TermIndex s : release.direct_terms(i)) {
      if (std::binary_search(related.begin(), related.end(), s)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) pool.push_back(i);
  }
  return pool;
}

std::vector<std::pair<ProteinIndex, double>> snob_scores(
    TermIndex k, const AnnotationRelease& release) {
  const LabelMatrix& closed = release.closed();
  const auto& positives = closed.cols.at(k);
  // p(k|s) = |positives(k) & positives(s)| / |positives(s)|, all branches.
  std::vector<double> p_given(release.dag().term_count(), 0.0);
  std::vector<bool> is_positive(release.protein_count(), false);
  for (const ProteinIndex i : positives) is_positive[i] = true;
  for (TermIndex s = 0; s < release.dag().term_count(); ++s) {
    const auto& col = closed.cols[s];
    if (col.empty()) continue;
    std::size_t joint = 0;
    for (const ProteinIndex i : col) joint += is_positive[i] ? 1 : 0;
    p_given[s] = double(joint) / double(col.size());
  }
  std::vector<std::pair<ProteinIndex, double>> scores;
  for (const ProteinIndex i : candidates(k, release)) {
    const auto terms = release.closed_terms(i);
    double sigma = 0.0;
    if (!terms.empty()) {
      for (const TermIndex s : terms) sigma += p_given[s];
      sigma /= double(terms.size());
    }
    scores.emplace_back(i, sigma);
  }
  return scores;
}

SelectionOrder nsfs_order(TermIndex k, const AnnotationRelease& release,
                          const SimilarityMatrix& matrix, double k_quantile,
                          std::uint64_t seed) {
  return pooled_order(k, nsfs_pool(k, release, matrix, k_quantile), release,
                      term_rng(seed, release, k));
}

SelectionOrder sibling_order(TermIndex k, const AnnotationRelease& release,
                             std::uint64_t seed) {
  return pooled_order(k, sibling_pool(k, release), release,
                      term_rng(seed, release, k));
}

SelectionOrder noancdesc_order(TermIndex k, const AnnotationRelease& release,
                               std::uint64_t seed) {
  return pooled_order(k, noancdesc_pool(k, release), release,
                      term_rng(seed, release, k));
}

SelectionOrder snob_order(TermIndex k, const AnnotationRelease& release,
                          std::uint64_t seed) {
  auto scores = snob_scores(k, release);
  // Seeded shuffle, then a stable sort on the score: unbiased tie-breaking.
  Rng rng = term_rng(seed, release, k);
  shuffle(scores, rng);
  std::stable_sort(scores.begin(), scores.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  SelectionOrder order;
  order.term = k;
  order.pool_size = scores.size();
  order.ordered.reserve(scores.size());
  for (const auto& [i, sigma] : scores) order.ordered.push_back(i);
  return order;
}

SelectionOrder random_order(TermIndex k, const AnnotationRelease& release,
                            std::uint64_t seed) {
  SelectionOrder order;
  order.term = k;
  order.ordered = candidates(k, release);
  order.pool_size = order.ordered.size();
  Rng rng = term_rng(seed, release, k);
  shuffle(order.ordered, rng);
  return order;
}

SelectionResult select_nsfs(TermIndex k, const AnnotationRelease& release,
                            const SimilarityMatrix& matrix, double k_quantile,
                            std::size_t budget, std::uint64_t seed) {
  return take_budget(nsfs_order(k, release, matrix, k_quantile, seed), budget);
}

SelectionResult select_sibling(TermIndex k, const AnnotationRelease& release,
                               std::size_t budget, std::uint64_t seed) {
  return take_budget(sibling_order(k, release, seed), budget);
}

SelectionResult select_noancdesc(TermIndex k, const AnnotationRelease& release,
                                 std::size_t budget, std::uint64_t seed) {
  return take_budget(noancdesc_order(k, release, seed), budget);
}

SelectionResult select_snob(TermIndex k, const AnnotationRelease& release,
                            std::size_t budget, std::uint64_t seed) {
  return take_budget(snob_order(k, release, seed), budget);
}

SelectionResult select_random(TermIndex k, const AnnotationRelease& release,
                              std::size_t budget, std::uint64_t seed) {
  return take_budget(random_order(k, release, seed), budget);
}

SelectionOrder build_order(const SelectionConfig& config, TermIndex k,
                           const AnnotationRelease& release,
                           const SimilarityMatrix* matrix) {
  if (is_nsfs(config.method)) {
    if (!matrix)
      throw DomainError("NSFS needs a similarity matrix");
    const Measure want = config.method == SelectionMethod::NsfsJaccard
                             ? Measure::Jaccard
                             : Measure::Lin;
    if (matrix->measure() != want)
      throw DomainError(std::string("NSFS variant expects a ") +
                        std::string(to_string(want)) + " matrix");
    return nsfs_order(k, release, *matrix, config.k_quantile, config.seed);
  }
  switch (config.method) {
    case SelectionMethod::Sibling: return sibling_order(k, release, config.seed);
    case SelectionMethod::NoAncDesc:
      return noancdesc_order(k, release, config.seed);
    case SelectionMethod::Snob: return snob_order(k, release, config.seed);
    default: return random_order(k, release, config.seed);
  }
}

SelectionResult select(const SelectionConfig& config, TermIndex k,
                       const AnnotationRelease& release,
                       const SimilarityMatrix* matrix) {
  return take_budget(build_order(config, k, release, matrix), config.budget);
}

}  // namespace gonsel
