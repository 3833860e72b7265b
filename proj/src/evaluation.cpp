#include "gonsel/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "gonsel/parallel.hpp"
#include "gonsel/rng.hpp"

namespace gonsel {

std::size_t false_negatives(const SelectionResult& result,
                            const AnnotationRelease& selection_release,
                            const AnnotationRelease& newer, TermIndex k,
                            NoveltyMode mode) {
  const LabelMatrix& labels =
      mode == NoveltyMode::Direct ? newer.direct() : newer.closed();
  std::size_t fn = 0;
  for (const ProteinIndex i : result.negatives) {
    const auto new_i = newer.find_protein(selection_release.protein(i));
    if (new_i && std::binary_search(labels.rows[*new_i].begin(),
                                    labels.rows[*new_i].end(), k))
      ++fn;
  }
  return fn;
}

std::vector<TermIndex> eligible_terms(const AnnotationRelease& older,
                                      const AnnotationRelease& newer,
                                      Branch branch) {
  std::vector<TermIndex> out;
  for (const NoveltySet& set : novelty(older, newer, NoveltyMode::Closed))
    if (older.dag().branch_of(set.term) == branch) out.push_back(set.term);
  return out;
}

namespace {

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (repeat + 1));
  return splitmix64(s);
}

}  // namespace

EvaluationReport run_benchmark(const AnnotationRelease& older,
                               const AnnotationRelease& newer,
                               const std::vector<Branch>& branches,
                               const BenchmarkConfig& config) {
  if (config.methods.empty()) throw DomainError("no selection methods given");
  if (config.budgets.empty()) throw DomainError("no budgets given");
  if (config.repeats == 0) throw DomainError("repeats must be >= 1");

  EvaluationReport report;
  report.older_label = older.label();
  report.newer_label = newer.label();
  report.seed = config.seed;
  report.repeats = config.repeats;

  std::vector<std::size_t> budgets = config.budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  const bool wants_jaccard =
      std::count(config.methods.begin(), config.methods.end(),
                 SelectionMethod::NsfsJaccard) > 0;
  const bool wants_lin = std::count(config.methods.begin(),
                                    config.methods.end(),
                                    SelectionMethod::NsfsLin) > 0;

  older.closed();  // force both closures before the worker pools start
  newer.closed();

  for (const Branch branch : branches) {
    auto terms = eligible_terms(older, newer, branch);
    if (terms.empty()) continue;

    std::optional<SimilarityMatrix> jaccard, lin;
    if (wants_jaccard)
      jaccard = build_similarity_matrix(Measure::Jaccard, older, branch,
                                        config.universe, config.threads);
    if (wants_lin)
      lin = build_similarity_matrix(Measure::Lin, older, branch,
                                    config.universe, config.threads);

    std::map<SelectionMethod, double> k_by_method;
    for (const SelectionMethod method : config.methods) {
      if (!is_nsfs(method)) continue;
      const auto fixed = config.fixed_k.find(method);
      const SimilarityMatrix& matrix =
          method == SelectionMethod::NsfsJaccard ? *jaccard : *lin;
      const std::size_t tune_budget =
          config.tune_budget > 0 ? config.tune_budget : budgets.front();
      const double k_value =
          fixed != config.fixed_k.end()
              ? fixed->second
              : tune_k(older, matrix, config.k_grid, tune_budget, config.seed,
                       config.mask_fraction, config.tune_repeats,
                       config.threads);
      k_by_method[method] = k_value;
      report.k_used[method][branch] = k_value;
    }

    BranchReport branch_report;
    branch_report.branch = branch;
    branch_report.terms = terms;

    // fn[method][budget][term], repeat-averaged.
    std::vector<std::vector<std::vector<double>>> fn(
        config.methods.size(),
        std::vector<std::vector<double>>(budgets.size(),
                                         std::vector<double>(terms.size())));

    parallel_for(terms.size(), config.threads, [&](std::size_t ti) {
      const TermIndex k = terms[ti];
      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        const SelectionMethod method = config.methods[mi];
        const SimilarityMatrix* matrix = nullptr;
        if (method == SelectionMethod::NsfsJaccard) matrix = &*jaccard;
        if (method == SelectionMethod::NsfsLin) matrix = &*lin;
        std::vector<double> sums(budgets.size(), 0.0);
        for (std::size_t r = 0; r < config.repeats; ++r) {
          SelectionConfig sel;
          sel.method = method;
          sel.seed = repeat_seed(config.seed, r);
          if (is_nsfs(method)) sel.k_quantile = k_by_method.at(method);
          const SelectionOrder order = build_order(sel, k, older, matrix);
          // One pass over the order serves every budget cut.
          std::size_t cursor = 0, fn_count = 0;
          for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
            const std::size_t upto = std::min(budgets[bi], order.ordered.size());
            for (; cursor < upto; ++cursor) {
              const auto new_i =
                  newer.find_protein(older.protein(order.ordered[cursor]));
              if (!new_i) continue;
              const LabelMatrix& labels = config.fn_mode == NoveltyMode::Direct
                                              ? newer.direct()
                                              : newer.closed();
              if (std::binary_search(labels.rows[*new_i].begin(),
                                     labels.rows[*new_i].end(), k))
                ++fn_count;
            }
            sums[bi] += double(fn_count);
          }
        }
        for (std::size_t bi = 0; bi < budgets.size(); ++bi)
          fn[mi][bi][ti] = sums[bi] / double(config.repeats);
      }
    });

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        MethodCell cell;
        cell.method = config.methods[mi];
        cell.budget = budgets[bi];
        cell.fn_per_term = fn[mi][bi];
        double sum = 0;
        for (const double v : cell.fn_per_term) sum += v;
        cell.mean_fn = sum / double(cell.fn_per_term.size());
        branch_report.cells.push_back(std::move(cell));
      }
    }

    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
      auto& tests = branch_report.wilcoxon[budgets[bi]];
      for (std::size_t a = 0; a < config.methods.size(); ++a) {
        for (std::size_t b = a + 1; b < config.methods.size(); ++b) {
          PairwiseTest test;
          test.a = config.methods[a];
          test.b = config.methods[b];
          try {
            const WilcoxonResult w = wilcoxon_signed_rank(fn[a][bi], fn[b][bi]);
            test.p_value = w.p_value;
            test.degenerate = w.degenerate;
            test.computed = true;
          } catch (const DomainError&) {
            test.computed = false;  // fewer than 5 nonzero differences
          }
          tests.push_back(test);
        }
      }
    }
    report.branches.push_back(std::move(branch_report));
  }

  if (report.branches.empty())
    throw EmptyResultError("no eligible terms between " + older.label() +
                           " and " + newer.label());
  return report;
}

double tune_k(const AnnotationRelease& older, const SimilarityMatrix& matrix,
              const std::vector<double>& grid, std::size_t budget,
              std::uint64_t seed, double mask_fraction, std::size_t repeats,
              unsigned threads) {
  if (grid.empty()) throw DomainError("tune_k requires a non-empty K grid");
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0))
    throw DomainError("tune_k mask fraction must lie in (0,1)");
  if (repeats == 0) throw DomainError("tune_k repeats must be >= 1");
  const OntologyDag& dag = older.dag();
  const Branch branch = matrix.branch();

  std::vector<double> sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  for (const double k : sorted_grid)
    if (!(k > 0.0 && k < 1.0)) throw DomainError("grid K values must lie in (0,1)");

  // Direct pairs in the matrix branch; these are the maskable positives.
  std::vector<std::pair<ProteinIndex, TermIndex>> branch_pairs;
  std::vector<std::pair<ProteinIndex, TermIndex>> other_pairs;
  for (ProteinIndex i = 0; i < older.protein_count(); ++i) {
    for (const TermIndex k : older.direct_terms(i)) {
      if (dag.branch_of(k) == branch) branch_pairs.emplace_back(i, k);
      else other_pairs.emplace_back(i, k);
    }
  }
  if (branch_pairs.empty())
    throw DomainError("tune_k: no direct annotations in the matrix branch");

  std::vector<double> grid_pseudo_fn(sorted_grid.size(), 0.0);
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    Rng rng = derive_rng(seed, "tune_k", rep);
    const std::size_t mask_count = std::max<std::size_t>(
        1, std::size_t(std::llround(mask_fraction * double(branch_pairs.size()))));
    std::vector<std::pair<ProteinIndex, TermIndex>> pool = branch_pairs;
    shuffle(pool, rng);
    std::vector<std::pair<ProteinIndex, TermIndex>> kept(
        pool.begin() + std::min(mask_count, pool.size()), pool.end());
    kept.insert(kept.end(), other_pairs.begin(), other_pairs.end());

    AnnotationRelease masked(older.label() + "-masked", older.dag_ptr(),
                             older.proteins(), std::move(kept));

    // Pseudo-novel proteins per term: closed in the full release, not closed
    // in the masked one.
    std::vector<std::vector<ProteinIndex>> pseudo(dag.term_count());
    std::vector<TermIndex> eligible;
    for (const TermIndex k : matrix.terms()) {
      for (const ProteinIndex i : older.closed().cols[k])
        if (!masked.closed().contains(i, k)) pseudo[k].push_back(i);
      if (!pseudo[k].empty()) eligible.push_back(k);
    }
    if (eligible.empty())
      throw DomainError("tune_k: masking produced no pseudo-novel terms");

    std::vector<std::vector<double>> cell(
        sorted_grid.size(), std::vector<double>(eligible.size(), 0.0));
    parallel_for(eligible.size(), threads, [&](std::size_t ti) {
      const TermIndex k = eligible[ti];
      for (std::size_t gi = 0; gi < sorted_grid.size(); ++gi) {
        const SelectionResult result = select_nsfs(
            k, masked, matrix, sorted_grid[gi], budget, repeat_seed(seed, rep));
        std::size_t hits = 0;
        for (const ProteinIndex i : result.negatives)
          if (std::binary_search(pseudo[k].begin(), pseudo[k].end(), i)) ++hits;
        cell[gi][ti] = double(hits);
      }
    });
    for (std::size_t gi = 0; gi < sorted_grid.size(); ++gi) {
      double sum = 0;
      for (const double v : cell[gi]) sum += v;
      grid_pseudo_fn[gi] += sum / double(eligible.size());
    }
  }

  // Ascending grid, non-strict improvement: ties resolve to the larger K.
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < sorted_grid.size(); ++gi)
    if (grid_pseudo_fn[gi] <= grid_pseudo_fn[best]) best = gi;
  return sorted_grid[best];
}

}  // namespace gonsel
