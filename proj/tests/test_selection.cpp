#include <doctest.h>

#include <map>
#include <set>

#include "gonsel/selection.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace gonsel;
using namespace gonsel::test;

namespace {

std::set<std::string> to_names(const AnnotationRelease& release,
                               const std::vector<ProteinIndex>& indices) {
  std::set<std::string> out;
  for (const ProteinIndex i : indices) out.insert(release.protein(i));
  return out;
}

struct Instance {
  GraphSpec graph;
  std::shared_ptr<const OntologyDag> dag;
  int proteins = 0;
  std::vector<std::pair<std::string, std::string>> pairs;
};

Instance random_instance(Rng& rng, int max_terms = 25, int max_proteins = 40) {
  Instance inst;
  inst.graph = random_graph(rng, max_terms);
  inst.dag = build_dag(inst.graph);
  inst.proteins = 4 + int(rng.uniform_below(std::uint64_t(max_proteins - 3)));
  inst.pairs = random_annotations(inst.graph, rng, inst.proteins);
  return inst;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("sibling pool basics") {
  GraphSpec g;  // a <- b, a <- c
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003"};
  g.branches = {0, 0, 0};
  g.edges = {{1, 0}, {2, 0}};
  const auto dag = build_dag(g);
  const auto release = build_release_n(dag, 3, {{"P00000", "GO:0000003"}});
  const TermIndex b = dag->index_of("GO:0000002");

  const auto pool = sibling_pool(b, release);
  CHECK(to_names(release, pool) == std::set<std::string>{"P00000"});

  // Term with no siblings: pure random fill.
  const TermIndex a = dag->index_of("GO:0000001");
  const auto result = select_sibling(a, release, 2, 7);
  CHECK(result.n_heuristic == 0);
  CHECK(result.n_filled == 2);
}

TEST_CASE("noancdesc uses direct labels for the hierarchy test") {
  GraphSpec g;  // BP: a <- k <- child; MF: f
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003", "GO:0000010"};
  g.branches = {0, 0, 0, 1};
  g.edges = {{1, 0}, {2, 1}};
  const auto dag = build_dag(g);
  const TermIndex k = dag->index_of("GO:0000002");
  const auto release = build_release_n(
      dag, 3, {{"P00000", "GO:0000003"}, {"P00001", "GO:0000010"}});
  const auto pool = noancdesc_pool(k, release);
  // P00000 is directly annotated to a descendant -> excluded (it is also a
  // closed positive). P00001 only touches another branch -> included.
  CHECK(to_names(release, pool) ==
        std::set<std::string>{"P00001", "P00002"});
}

TEST_CASE("nsfs eligibility") {
  GraphSpec g;  // one branch: root <- {t1, t2, t3}
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003", "GO:0000004"};
  g.branches = {0, 0, 0, 0};
  g.edges = {{1, 0}, {2, 0}, {3, 0}};
  const auto dag = build_dag(g);
  const TermIndex k = dag->index_of("GO:0000002");
  const auto terms = dag->terms_in_branch(Branch::BP);
  SimilarityMatrix matrix(Measure::Jaccard, Branch::BP, terms,
                          dag->term_count());
  // Row of k: distinct values; GO:0000003 is the most similar term.
  const std::size_t kp = matrix.position_of(k);
  matrix.at(kp, matrix.position_of(dag->index_of("GO:0000001"))) = 0.1;
  matrix.at(kp, kp) = 1.0;
  matrix.at(kp, matrix.position_of(dag->index_of("GO:0000003"))) = 0.9;
  matrix.at(kp, matrix.position_of(dag->index_of("GO:0000004"))) = 0.2;

  const auto release = build_release_n(
      dag, 3, {{"P00000", "GO:0000003"}, {"P00001", "GO:0000004"}});
  const auto pool = nsfs_pool(k, release, matrix, 0.5);
  // Threshold = 0.2 (ceil(0.5*4) = 2nd of {0.1,0.2,0.9,1.0}).
  // P00000 is annotated to the hottest term -> blocked. P00001 closes onto
  // the root (0.1 <= threshold) and GO:0000004 (0.2 <= threshold) -> fine.
  // P00002 has no annotations -> vacuously eligible.
  CHECK(to_names(release, pool) ==
        std::set<std::string>{"P00001", "P00002"});
}

TEST_CASE("snob scores") {
  GraphSpec g;
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003"};
  g.branches = {0, 0, 0};
  g.edges = {{1, 0}, {2, 0}};
  const auto dag = build_dag(g);
  const TermIndex k = dag->index_of("GO:0000002");
  // Every s-annotated protein is also k-annotated; P00002 has only s.
  const auto release = build_release_n(
      dag, 4,
      {{"P00000", "GO:0000002"}, {"P00000", "GO:0000003"},
       {"P00001", "GO:0000002"}, {"P00001", "GO:0000003"},
       {"P00002", "GO:0000003"}});
  const auto scores = snob_scores(k, release);
  std::map<std::string, double> by_name;
  for (const auto& [i, sigma] : scores) by_name[release.protein(i)] = sigma;
  REQUIRE(by_name.size() == 2);  // P00000/P00001 are positives for k
  CHECK(by_name.at("P00003") == 0.0);  // blank history
  // P00002: history {root, s}; p(k|root) = 2/3, p(k|s) = 2/3.
  CHECK(by_name.at("P00002") == doctest::Approx(2.0 / 3.0));

  // Blank protein is picked first, the sigma=1 protein last.
  const auto order = snob_order(k, release, 11);
  CHECK(release.protein(order.ordered.front()) == "P00003");
  CHECK(release.protein(order.ordered.back()) == "P00002");
}

TEST_CASE("random selection basics") {
  GraphSpec g;
  g.accessions = {"GO:0000001"};
  g.branches = {0};
  const auto dag = build_dag(g);
  const auto release = build_release_n(dag, 4, {});
  const TermIndex k = 0;

  SUBCASE("budget covering the pool returns the whole pool") {
    const auto result = select_random(k, release, 10, 3);
    CHECK(result.negatives.size() == 4);
    CHECK(result.n_heuristic == 4);
  }
  SUBCASE("same seed, same result") {
    const auto a = select_random(k, release, 2, 42);
    const auto b = select_random(k, release, 2, 42);
    CHECK(a.negatives == b.negatives);
  }
  SUBCASE("draws are close to uniform") {
    std::map<ProteinIndex, int> hits;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
      const auto result = select_random(k, release, 1, std::uint64_t(d));
      ++hits[result.negatives.at(0)];
    }
    for (const auto& [i, count] : hits)
      CHECK(std::fabs(double(count) / draws - 0.25) < 0.02);
  }
}

TEST_CASE("pools match the brute-force comprehensions") {
  Rng rng(0x5eed0051);
  for (int instance = 0; instance < 12; ++instance) {
    const Instance inst = random_instance(rng);
    const auto release = build_release_n(inst.dag, inst.proteins, inst.pairs);
    std::vector<std::string> universe;
    for (int i = 0; i < inst.proteins; ++i) universe.push_back(protein_name(i));
    const auto annotations = oracle::collect(inst.graph, universe, inst.pairs);
    const auto reach = oracle::closure_by_powering(inst.graph);
    const auto closed = oracle::tpr_close(inst.graph, reach, annotations);
    std::map<std::string, int> node_of;
    for (std::size_t i = 0; i < inst.graph.accessions.size(); ++i)
      node_of[inst.graph.accessions[i]] = int(i);

    const Branch branch = inst.dag->branch_of(0);
    const auto matrix =
        build_similarity_matrix(Measure::Jaccard, release, branch);
    std::vector<int> matrix_nodes;
    for (const TermIndex t : matrix.terms())
      matrix_nodes.push_back(node_of.at(inst.dag->accession(t)));

    for (TermIndex k = 0; k < inst.dag->term_count(); ++k) {
      const int node = node_of.at(inst.dag->accession(k));
      CHECK(to_names(release, sibling_pool(k, release)) ==
            oracle::sibling_pool(inst.graph, annotations, closed, node));
      CHECK(to_names(release, noancdesc_pool(k, release)) ==
            oracle::noancdesc_pool(inst.graph, reach, annotations, closed,
                                   node));
      const auto sigma = oracle::snob_sigma(inst.graph, annotations, closed,
                                            node);
      const auto scores = snob_scores(k, release);
      REQUIRE(scores.size() == sigma.size());
      for (const auto& [i, value] : scores)
        CHECK(value ==
              doctest::Approx(sigma.at(release.protein(i))).epsilon(1e-12));

      if (inst.dag->branch_of(k) == branch) {
        std::vector<double> row(matrix.row_of(k).begin(),
                                matrix.row_of(k).end());
        for (const double q : {0.3, 0.5, 0.8}) {
          CHECK(to_names(release, nsfs_pool(k, release, matrix, q)) ==
                oracle::nsfs_pool(annotations, closed, node, matrix_nodes,
                                  row, q));
        }
      }
    }
  }
}

TEST_CASE("selection invariants hold for every method") {
  Rng rng(0x5eed0052);
  for (int instance = 0; instance < 8; ++instance) {
    const Instance inst = random_instance(rng);
    const auto release = build_release_n(inst.dag, inst.proteins, inst.pairs);
    const Branch branch = inst.dag->branch_of(0);
    const auto matrix =
        build_similarity_matrix(Measure::Jaccard, release, branch);
    const auto terms = inst.dag->terms_in_branch(branch);

    for (const SelectionMethod method :
         {SelectionMethod::NsfsJaccard, SelectionMethod::Sibling,
          SelectionMethod::NoAncDesc, SelectionMethod::Snob,
          SelectionMethod::Random}) {
      SelectionConfig config;
      config.method = method;
      config.k_quantile = 0.6;
      config.seed = 17 + instance;
      for (const TermIndex k : terms) {
        const std::size_t candidates =
            release.protein_count() - release.closed().cols[k].size();
        for (const std::size_t budget : {std::size_t(1), std::size_t(5),
                                         std::size_t(1000)}) {
          config.budget = budget;
          const auto result = select(config, k, release, &matrix);
          CHECK(result.negatives.size() == std::min(budget, candidates));
          CHECK(result.n_heuristic + result.n_filled ==
                result.negatives.size());
          for (const ProteinIndex i : result.negatives)
            CHECK_FALSE(release.closed().contains(i, k));
          // Determinism.
          const auto again = select(config, k, release, &matrix);
          CHECK(result.negatives == again.negatives);
        }
        // Nested budgets: smaller is a prefix of larger.
        config.budget = 3;
        const auto small = select(config, k, release, &matrix);
        config.budget = 9;
        const auto large = select(config, k, release, &matrix);
        for (std::size_t i = 0; i < small.negatives.size(); ++i)
          CHECK(small.negatives[i] == large.negatives[i]);
      }
    }
  }
}

TEST_CASE("raising K never shrinks the NSFS pool") {
  Rng rng(0x5eed0053);
  for (int instance = 0; instance < 8; ++instance) {
    const Instance inst = random_instance(rng);
    const auto release = build_release_n(inst.dag, inst.proteins, inst.pairs);
    const Branch branch = inst.dag->branch_of(0);
    const auto matrix =
        build_similarity_matrix(Measure::Jaccard, release, branch);
    for (const TermIndex k : inst.dag->terms_in_branch(branch)) {
      std::size_t previous = 0;
      for (const double q : {0.2, 0.4, 0.6, 0.8, 0.95}) {
        const std::size_t size = nsfs_pool(k, release, matrix, q).size();
        CHECK(size >= previous);
        previous = size;
      }
    }
  }
}

TEST_CASE("nsfs variant checks the matrix measure") {
  GraphSpec g;
  g.accessions = {"GO:0000001"};
  g.branches = {0};
  const auto dag = build_dag(g);
  const auto release = build_release_n(dag, 2, {{"P00000", "GO:0000001"}});
  const auto jaccard =
      build_similarity_matrix(Measure::Jaccard, release, Branch::BP);
  SelectionConfig config;
  config.method = SelectionMethod::NsfsLin;
  config.budget = 1;
  config.k_quantile = 0.5;
  CHECK_THROWS_AS(select(config, 0, release, &jaccard), DomainError);
  CHECK_THROWS_AS(select(config, 0, release, nullptr), DomainError);
}

}  // TEST_SUITE
