#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "gonsel/cache.hpp"
#include "gonsel/obo.hpp"
#include "gonsel/ontology.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace gonsel;
using namespace gonsel::test;

namespace {

std::set<std::string> accessions_of(const OntologyDag& dag,
                                    const std::vector<TermIndex>& terms) {
  std::set<std::string> out;
  for (const TermIndex k : terms) out.insert(dag.accession(k));
  return out;
}

std::set<std::string> accessions_of(const GraphSpec& spec,
                                    const std::set<int>& nodes) {
  std::set<std::string> out;
  for (const int n : nodes) out.insert(spec.accessions[n]);
  return out;
}

// a <- b <- c chain plus two stray branch roots in MF/CC.
GraphSpec chain_spec() {
  GraphSpec g;
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003"};
  g.branches = {0, 0, 0};
  g.edges = {{1, 0}, {2, 1}};
  return g;
}

// a <- b, a <- c, b <- d, c <- d.
GraphSpec diamond_spec() {
  GraphSpec g;
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003", "GO:0000004"};
  g.branches = {0, 0, 0, 0};
  g.edges = {{1, 0}, {2, 0}, {3, 1}, {3, 2}};
  return g;
}

}  // namespace

TEST_SUITE("ontology") {

TEST_CASE("chain parses with expected levels") {
  const auto g = chain_spec();
  const auto dag = build_dag(g);
  REQUIRE(dag->term_count() == 3);
  CHECK(dag->level(dag->index_of("GO:0000001")) == 0);
  CHECK(dag->level(dag->index_of("GO:0000002")) == 1);
  CHECK(dag->level(dag->index_of("GO:0000003")) == 2);
  CHECK(dag->max_level() == 2);
}

TEST_CASE("obsolete terms are dropped") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: root\nnamespace: biological_process\n\n"
      "[Term]\nid: GO:0000002\nname: gone\nnamespace: biological_process\n"
      "is_a: GO:0000001\nis_obsolete: true\n\n");
  const auto result = parse_obo(in);
  CHECK(result.dag->term_count() == 1);
  CHECK(result.stats.terms_obsolete == 1);
  CHECK_FALSE(result.dag->find("GO:0000002").has_value());
}

TEST_CASE("edge to an undeclared term is a structural error") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n"
      "is_a: GO:9999999\n\n");
  CHECK_THROWS_AS(parse_obo(in), StructuralError);
}

TEST_CASE("edge to an obsolete term is dropped, not an error") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: root\nnamespace: biological_process\n\n"
      "[Term]\nid: GO:0000009\nname: dead\nnamespace: biological_process\n"
      "is_obsolete: true\n\n"
      "[Term]\nid: GO:0000002\nname: b\nnamespace: biological_process\n"
      "is_a: GO:0000001\nis_a: GO:0000009\n\n");
  const auto result = parse_obo(in);
  CHECK(result.stats.edges_to_obsolete == 1);
  CHECK(result.dag->parents(result.dag->index_of("GO:0000002")).size() == 1);
}

TEST_CASE("cycles are rejected with a member named") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n"
      "is_a: GO:0000002\n\n"
      "[Term]\nid: GO:0000002\nname: b\nnamespace: biological_process\n"
      "is_a: GO:0000001\n\n");
  CHECK_THROWS_WITH_AS(parse_obo(in),
                       doctest::Contains("cycle detected at GO:000000"),
                       StructuralError);
}

TEST_CASE("malformed stanza reports the line number") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n"
      "is_a: GO:12\n\n");
  try {
    parse_obo(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("alt_id resolves to the canonical term") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n"
      "alt_id: GO:0000091\n\n");
  const auto result = parse_obo(in);
  CHECK(result.dag->index_of("GO:0000091") ==
        result.dag->index_of("GO:0000001"));
  CHECK(result.stats.alt_ids == 1);
}

TEST_CASE("cross-branch edges are dropped and counted") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n\n"
      "[Term]\nid: GO:0000002\nname: b\nnamespace: molecular_function\n"
      "is_a: GO:0000001\n\n");
  const auto result = parse_obo(in);
  CHECK(result.stats.edges_cross_branch == 1);
  CHECK(result.dag->parents(result.dag->index_of("GO:0000002")).empty());
}

TEST_CASE("relationship relations honor the config") {
  const std::string text =
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n\n"
      "[Term]\nid: GO:0000002\nname: b\nnamespace: biological_process\n"
      "relationship: part_of GO:0000001\n\n";
  {
    std::istringstream in(text);
    const auto dag = parse_obo(in).dag;
    CHECK(dag->parents(dag->index_of("GO:0000002")).size() == 1);
  }
  {
    std::istringstream in(text);
    OboConfig config;
    config.edge_relations = {"is_a"};
    const auto dag = parse_obo(in, config).dag;
    CHECK(dag->parents(dag->index_of("GO:0000002")).empty());
  }
}

TEST_CASE("trailing modifiers and comments are stripped from values") {
  std::istringstream in(
      "[Term]\nid: GO:0000001\nname: a\nnamespace: biological_process\n\n"
      "[Term]\nid: GO:0000002\nname: b\nnamespace: biological_process\n"
      "is_a: GO:0000001 {is_inferred=\"true\"} ! a\n\n");
  const auto dag = parse_obo(in).dag;
  CHECK(dag->parents(dag->index_of("GO:0000002")).size() == 1);
}

TEST_CASE("the dummy-root accession is reserved") {
  std::istringstream in(
      "[Term]\nid: GO:0000000\nname: zero\nnamespace: biological_process\n\n");
  CHECK_THROWS_AS(parse_obo(in), StructuralError);
}

TEST_CASE("ancestors and descendants on chain and diamond") {
  const auto chain = chain_spec();
  const auto dag = build_dag(chain);
  const TermIndex a = dag->index_of("GO:0000001");
  const TermIndex c = dag->index_of("GO:0000003");
  CHECK(accessions_of(*dag, dag->ancestors(c)) ==
        std::set<std::string>{"GO:0000001", "GO:0000002"});
  CHECK(dag->ancestors(a).empty());
  CHECK(accessions_of(*dag, dag->descendants(a)) ==
        std::set<std::string>{"GO:0000002", "GO:0000003"});
  CHECK(dag->descendants(c).empty());

  const auto diamond = diamond_spec();
  const auto dag2 = build_dag(diamond);
  CHECK(accessions_of(*dag2, dag2->ancestors(dag2->index_of("GO:0000004"))) ==
        std::set<std::string>{"GO:0000001", "GO:0000002", "GO:0000003"});
  CHECK(accessions_of(*dag2, dag2->descendants(dag2->index_of("GO:0000001"))) ==
        std::set<std::string>{"GO:0000002", "GO:0000003", "GO:0000004"});
  CHECK_THROWS_AS(dag2->ancestors(TermIndex(99)), LookupError);
}

TEST_CASE("siblings share a parent; branch roots have none") {
  GraphSpec g;
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003",  // BP a<-b, a<-c
                  "GO:0000010",                              // MF root
                  "GO:0000020"};                             // CC root
  g.branches = {0, 0, 0, 1, 2};
  g.edges = {{1, 0}, {2, 0}};
  const auto dag = build_dag(g);
  CHECK(accessions_of(*dag, dag->siblings(dag->index_of("GO:0000002"))) ==
        std::set<std::string>{"GO:0000003"});
  // Dummy-root parenthood induces no siblinghood across branch roots.
  CHECK(dag->siblings(dag->index_of("GO:0000001")).empty());
  CHECK(dag->siblings(dag->index_of("GO:0000010")).empty());
  CHECK(dag->siblings(dag->index_of("GO:0000020")).empty());
}

TEST_CASE("level takes the longest path") {
  GraphSpec g;  // a <- b <- d plus a <- d directly
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000004"};
  g.branches = {0, 0, 0};
  g.edges = {{1, 0}, {2, 1}, {2, 0}};
  const auto dag = build_dag(g);
  CHECK(dag->level(dag->index_of("GO:0000004")) == 2);
}

TEST_CASE("deepest_fork_ancestor basics") {
  const auto dag = build_dag(diamond_spec());
  const TermIndex b = dag->index_of("GO:0000002");
  const TermIndex c = dag->index_of("GO:0000003");
  const auto fork = dag->deepest_fork_ancestor(b, c);
  REQUIRE_FALSE(fork.is_dummy());
  CHECK(dag->accession(fork.term) == "GO:0000001");

  // Unrelated branches fall back to the dummy root.
  GraphSpec two;
  two.accessions = {"GO:0000001", "GO:0000010"};
  two.branches = {0, 1};
  const auto dag2 = build_dag(two);
  CHECK(dag2->deepest_fork_ancestor(dag2->index_of("GO:0000001"),
                                    dag2->index_of("GO:0000010"))
            .is_dummy());

  const TermIndex d = dag->index_of("GO:0000004");
  CHECK_THROWS_AS(dag->deepest_fork_ancestor(d, d), DomainError);
  CHECK_THROWS_AS(dag->deepest_fork_ancestor(d, b), DomainError);  // related
}

TEST_CASE("deepest_fork_ancestor picks the highest level") {
  // Chain r <- x1 <- x2 <- x3 <- x4; k and s both attach to x2 and x4.
  GraphSpec g;
  g.accessions = {"GO:0000001", "GO:0000002", "GO:0000003",
                  "GO:0000004", "GO:0000005", "GO:0000006", "GO:0000007"};
  g.branches = std::vector<int>(7, 0);
  g.edges = {{1, 0}, {2, 1}, {3, 2}, {4, 3},          // chain, levels 0..4
             {5, 2}, {5, 4}, {6, 2}, {6, 4}};         // k and s
  const auto dag = build_dag(g);
  const auto fork = dag->deepest_fork_ancestor(dag->index_of("GO:0000006"),
                                               dag->index_of("GO:0000007"));
  REQUIRE_FALSE(fork.is_dummy());
  CHECK(dag->accession(fork.term) == "GO:0000005");  // level 4 beats level 2
}

TEST_CASE("longest_path_distance") {
  const auto dag = build_dag(diamond_spec());
  const TermIndex a = dag->index_of("GO:0000001");
  const TermIndex b = dag->index_of("GO:0000002");
  const TermIndex d = dag->index_of("GO:0000004");
  CHECK(dag->longest_path_distance(b, d) == 1);   // direct edge only
  CHECK(dag->longest_path_distance(a, d) == 2);   // paths of length 1 and 2
  CHECK(dag->longest_path_distance(d, d) == 0);
  CHECK_THROWS_AS(dag->longest_path_distance(d, a), DomainError);
  // Dummy-root distance is level + 1.
  CHECK(dag->longest_path_distance(ForkAncestor{}, d) == dag->level(d) + 1);
}

TEST_CASE("dag cache round-trips structure, levels and alt ids") {
  Rng rng(0x5eed0004);
  const GraphSpec g = random_graph(rng, 30);
  std::string text = obo_text(g);
  text +=
      "[Term]\nid: GO:0000999\nname: extra\nnamespace: biological_process\n"
      "alt_id: GO:0000998\n\n";
  std::istringstream in(text);
  const auto dag = parse_obo(in).dag;
  std::stringstream buffer;
  write_dag_cache(buffer, *dag);
  const auto loaded = read_dag_cache(buffer);
  REQUIRE(loaded->term_count() == dag->term_count());
  for (TermIndex k = 0; k < dag->term_count(); ++k) {
    CHECK(loaded->accession(k) == dag->accession(k));
    CHECK(loaded->term(k).name == dag->term(k).name);
    CHECK(loaded->branch_of(k) == dag->branch_of(k));
    CHECK(loaded->level(k) == dag->level(k));
    CHECK(loaded->ancestors(k) == dag->ancestors(k));
  }
  CHECK(loaded->index_of("GO:0000998") == loaded->index_of("GO:0000999"));
}

TEST_CASE("random DAGs match the brute-force oracle") {
  Rng rng(0x5eed0001);
  for (int instance = 0; instance < 30; ++instance) {
    const GraphSpec g = random_graph(rng);
    const auto dag = build_dag(g);
    REQUIRE(dag->term_count() == g.accessions.size());
    const auto reach = oracle::closure_by_powering(g);

    for (std::size_t node = 0; node < g.accessions.size(); ++node) {
      const TermIndex k = dag->index_of(g.accessions[node]);
      CHECK(accessions_of(*dag, dag->ancestors(k)) ==
            accessions_of(g, oracle::ancestors(g, reach, int(node))));
      CHECK(accessions_of(*dag, dag->descendants(k)) ==
            accessions_of(g, oracle::descendants(g, reach, int(node))));
      CHECK(accessions_of(*dag, dag->siblings(k)) ==
            accessions_of(g, oracle::siblings(g, int(node))));
      CHECK(dag->level(k) == oracle::level_by_paths(g, int(node)));
    }

    // Duality + sibling symmetry/irreflexivity over all pairs.
    for (std::size_t x = 0; x < g.accessions.size(); ++x) {
      const TermIndex kx = dag->index_of(g.accessions[x]);
      const auto desc = dag->descendants(kx);
      const auto sibs = dag->siblings(kx);
      CHECK(!std::binary_search(sibs.begin(), sibs.end(), kx));
      for (const TermIndex ky : desc) {
        const auto anc = dag->ancestors(ky);
        CHECK(std::binary_search(anc.begin(), anc.end(), kx));
      }
      for (const TermIndex ky : sibs) {
        const auto back = dag->siblings(ky);
        CHECK(std::binary_search(back.begin(), back.end(), kx));
      }
      // level(k) = 1 + max parent level, roots at 0.
      const auto parents = dag->parents(kx);
      if (parents.empty()) {
        CHECK(dag->level(kx) == 0);
      } else {
        int expect = 0;
        for (const TermIndex p : parents)
          expect = std::max(expect, dag->level(p) + 1);
        CHECK(dag->level(kx) == expect);
      }
    }
  }
}

TEST_CASE("longest path dominates shortest; ties on trees") {
  Rng rng(0x5eed0002);
  for (int instance = 0; instance < 10; ++instance) {
    GraphSpec g = random_graph(rng, 30);
    const auto dag = build_dag(g);
    const auto reach = oracle::closure_by_powering(g);
    auto shortest = [&](int q, int s) {
      // BFS upward.
      std::vector<int> dist(g.accessions.size(), -1);
      std::vector<std::vector<int>> parents(g.accessions.size());
      for (const auto& [c, p] : g.edges) parents[c].push_back(p);
      std::vector<int> frontier{s};
      dist[s] = 0;
      while (!frontier.empty()) {
        std::vector<int> next;
        for (const int node : frontier)
          for (const int p : parents[node])
            if (dist[p] < 0) {
              dist[p] = dist[node] + 1;
              next.push_back(p);
            }
        frontier = std::move(next);
      }
      return dist[q];
    };
    for (std::size_t s = 0; s < g.accessions.size(); ++s) {
      for (std::size_t q = 0; q < g.accessions.size(); ++q) {
        if (!reach[s][q]) continue;
        const int longest = dag->longest_path_distance(
            dag->index_of(g.accessions[q]), dag->index_of(g.accessions[s]));
        CHECK(longest == oracle::longest_path(g, int(q), int(s)));
        CHECK(longest >= shortest(int(q), int(s)));
      }
    }

    // Tree shape: keep only the first parent of every node.
    GraphSpec tree = g;
    tree.edges.clear();
    std::set<int> seen;
    for (const auto& [c, p] : g.edges)
      if (seen.insert(c).second) tree.edges.emplace_back(c, p);
    const auto tree_dag = build_dag(tree);
    const auto tree_reach = oracle::closure_by_powering(tree);
    for (std::size_t s = 0; s < tree.accessions.size(); ++s)
      for (std::size_t q = 0; q < tree.accessions.size(); ++q)
        if (tree_reach[s][q])
          CHECK(tree_dag->longest_path_distance(
                    tree_dag->index_of(tree.accessions[q]),
                    tree_dag->index_of(tree.accessions[s])) ==
                oracle::longest_path(tree, int(q), int(s)));
  }
}

TEST_CASE("deepest fork matches brute force on random DAGs") {
  Rng rng(0x5eed0003);
  for (int instance = 0; instance < 20; ++instance) {
    const GraphSpec g = random_graph(rng, 40);
    const auto dag = build_dag(g);
    const auto reach = oracle::closure_by_powering(g);
    for (std::size_t x = 0; x < g.accessions.size(); ++x) {
      for (std::size_t y = 0; y < g.accessions.size(); ++y) {
        if (x == y || reach[x][y] || reach[y][x]) continue;
        const auto fork = dag->deepest_fork_ancestor(
            dag->index_of(g.accessions[x]), dag->index_of(g.accessions[y]));
        const int expect = oracle::deepest_fork(g, reach, int(x), int(y));
        if (expect < 0) {
          CHECK(fork.is_dummy());
        } else {
          REQUIRE_FALSE(fork.is_dummy());
          CHECK(dag->accession(fork.term) == g.accessions[expect]);
        }
      }
    }
  }
}

}  // TEST_SUITE
